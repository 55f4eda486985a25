#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tensorsandwich/sampling_oracle.hpp"

namespace ts {

/// Knobs for adaptive completion of one frontal slice.
struct SliceCompletionConfig {
    int rank_cap = 1;            ///< r: max admissible column-space dimension
    int per_column_samples = 1;  ///< d: probe entries per column (clamped to n1 at run time)
    double residual_tol = 1e-8;  ///< relative residual-energy threshold; exact data would use 0
    std::int64_t budget = 0;     ///< max distinct entries revealed in the slice
    std::uint64_t seed = 0;

    /// d = min(n_rows, ceil(2 mu0 r log^2(r^2/delta))), budget = d n + r n.
    /// The leading constant 2 is empirical; the theory's constant is not
    /// pinned down anywhere usable.
    static SliceCompletionConfig from_theory(int rank, int n_rows, double mu0, double delta);

    /// Fit d to a hard per-slice budget: d = clamp(floor(budget / n) - 2r, 1, n).
    /// The 2r columns of slack absorb full-column fallbacks (r genuine
    /// directions plus as many spurious ones again before the budget check
    /// trips).
    static SliceCompletionConfig from_budget(int rank, int n_rows, std::int64_t budget);
};

struct SliceCompletion {
    Eigen::MatrixXd completed;        ///< n1 x n2 estimate of the slice
    Eigen::MatrixXd basis;            ///< orthonormal basis of the estimated column space
    int fully_sampled_columns = 0;    ///< columns revealed in full
    std::int64_t distinct_queries = 0;  ///< distinct (i, j) revealed in this slice
};

/// Adaptive subspace-tracking completion of slice k.
///
/// Maintains an orthonormal basis U of the estimated column space. For each
/// column: probe d entries at uniformly random rows; if the probe's residual
/// energy after projecting onto the corresponding rows of U exceeds
/// residual_tol * ||probe||^2 (or U is empty, or the restricted basis is
/// column-rank-deficient), reveal the whole column and grow U by the
/// component orthogonal to it; otherwise reconstruct the column as
/// U (U_rows)^+ probe without further queries.
///
/// Throws CompletionError(budget_exceeded) when the next step would push the
/// slice past cfg.budget, and CompletionError(rank_cap_exceeded) when a
/// revealed column carries a significant new direction but U already has
/// rank_cap columns.
SliceCompletion complete_slice(SamplingOracle& oracle, int slice_index,
                               const SliceCompletionConfig& cfg);

/// Runs complete_slice for every k in slice_indices (distinct, >= 2 of them)
/// with per-slice seeds derived from cfg.seed. Failures rethrow with the
/// slice index prepended to the message.
std::vector<SliceCompletion> complete_slices(SamplingOracle& oracle,
                                             const std::vector<int>& slice_indices,
                                             const SliceCompletionConfig& cfg);

}  // namespace ts
