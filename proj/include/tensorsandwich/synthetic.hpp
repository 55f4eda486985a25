#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tensorsandwich/cp_model.hpp"
#include "tensorsandwich/dense_tensor.hpp"

namespace ts {

/// Quadratically decaying component weights: w_i = 1 / i^2, i = 1..r.
std::vector<double> quadratic_weights(int r);

/// Random n x n x n CP model: A, B, C have i.i.d. standard normal entries,
/// every column normalized to unit 2-norm, then column i of C scaled by
/// weights[i] (default quadratic_weights). Deterministic given seed.
/// Requires 1 <= r <= n.
std::pair<CPModel, DenseTensor3> generate_synthetic(int n, int r, std::uint64_t seed,
                                                    const std::vector<double>& weights = {});

/// Adds i.i.d. Gaussian noise N scaled so that 10 log10(||t||_F / ||N||_F)
/// equals snr_db exactly (the scale is fitted to the realized noise norm, not
/// set in expectation). snr_db = +infinity returns t unchanged. Requires a
/// nonzero tensor.
DenseTensor3 add_noise_snr(const DenseTensor3& t, double snr_db, std::uint64_t seed);

/// Frobenius relative error ||est - truth||_F / ||truth||_F.
double relative_error(const DenseTensor3& est, const DenseTensor3& truth);

}  // namespace ts
