#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "tensorsandwich/sampling_oracle.hpp"

namespace ts {

/// Recovers the third factor from the sampled fibers: for every k in [n3],
/// queries the oracle at (i, j, k) for each fiber (i, j) and solves
///
///     (A_hat (.) B_hat)_K c = t_K,   c = row k of the result,
///
/// where K is the fixed row set the fibers select. The restricted Khatri-Rao
/// matrix is factored once and shared across all n3 right-hand sides; with
/// more than r fibers the system is solved in the least-squares sense. Any
/// diagonal rescaling carried by B_hat is absorbed into the returned factor,
/// so the reconstructed tensor (not the factors) is what matches the truth.
///
/// Throws CompletionError(ill_conditioned_fibers) when sigma_min of the
/// restricted matrix falls below 1e-10 * sigma_max; raising gamma is the
/// caller's remedy.
Eigen::MatrixXd solve_c_factor(const Eigen::MatrixXd& A_hat, const Eigen::MatrixXd& B_hat,
                               SamplingOracle& oracle,
                               const std::vector<std::pair<int, int>>& pairs, int n3);

}  // namespace ts
