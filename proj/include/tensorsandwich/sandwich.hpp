#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tensorsandwich/cp_model.hpp"
#include "tensorsandwich/errors.hpp"
#include "tensorsandwich/jennrich.hpp"
#include "tensorsandwich/sampling_oracle.hpp"
#include "tensorsandwich/slice_completion.hpp"

namespace ts {

/// Everything the three-phase pipeline needs. The completion rank is
/// slice_cfg.rank_cap. All randomness is derived from `seed`:
///   slice selection        derive_seed(seed, {1})
///   slice k completion     derive_seed(derive_seed(seed, {2}), {0x51, k})
///   sphere draw t          derive_seed(seed, {3, t})
struct SandwichConfig {
    int s = 2;                        ///< slices to complete (>= 2)
    std::vector<int> explicit_slices; ///< nonempty overrides the uniform draw
    SliceCompletionConfig slice_cfg;
    int gamma = 4;
    double delta = 0.1;
    std::uint64_t seed = 0;
    int als_iters = 0;                ///< masked-ALS refinement sweeps, 0 = off
    JennrichOptions jennrich;
    int max_jennrich_redraws = 10;
};

struct CompletionReport {
    std::int64_t omega1_count = 0;
    std::int64_t omega2_count = 0;
    std::int64_t total_count = 0;     ///< <= omega1_count + omega2_count
    double fraction = 0.0;
    std::map<std::string, double> phase_ms;
    double rel_error = std::numeric_limits<double>::quiet_NaN();  ///< filled when truth is known
    int jennrich_redraws = 0;
    std::vector<int> fully_sampled_columns;  ///< per completed slice
    RunStatus status = RunStatus::success;
    std::string message;

    bool ok() const { return status == RunStatus::success; }
};

/// Runs the full pipeline against the oracle: complete s slices, recover
/// A_hat/B_hat by simultaneous diagonalization of two random slice
/// aggregates (redrawing the sphere vectors on degeneracy, at no sampling
/// cost), then recover C from QR-pivot-selected fibers by censored least
/// squares. With als_iters > 0 the estimate is refined by masked ALS on the
/// observed entries.
///
/// Phase failures land in report.status/message with a zero model of the
/// right shape; structural misuse throws.
std::pair<CPModel, CompletionReport> tensor_sandwich(SamplingOracle& oracle,
                                                     const SandwichConfig& cfg);

struct AlsInfo {
    std::vector<double> observed_residuals;  ///< ||P_Omega(T - est)||_F after each sweep
    int skipped_row_updates = 0;             ///< rank-deficient row systems left unchanged
};

/// Alternating least squares restricted to the oracle's already observed
/// entries; never reveals anything new (reads go through observed_value).
/// Each sweep updates A, B, C row-by-row; the observed-entry residual is
/// non-increasing across sweeps.
std::pair<CPModel, AlsInfo> masked_als(const SamplingOracle& oracle, CPModel init, int iters);

}  // namespace ts
