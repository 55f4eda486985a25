#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "tensorsandwich/sampling_oracle.hpp"

namespace ts {

/// Picks gamma * r distinct fiber locations (i, j) whose Khatri-Rao rows make
/// the censored least-squares system uniquely solvable.
///
/// Runs column-pivoted QR on (A_hat (.) B_hat)^T, greedily selecting the
/// column of largest residual norm (ties broken toward the lowest column
/// index). The first r pivots span the row space, so the r x r submatrix of
/// (A (.) B)^T they select is invertible; once the row space is exhausted the
/// remaining gamma*r - r selections fall back to the largest original column
/// norms, which only adds rows to the least-squares system. Pivot column q
/// maps to the fiber (i, j) = (q / n2, q mod n2), matching the flattening
/// convention of khatri_rao/unfold3.
///
/// Throws std::invalid_argument when gamma * r exceeds n1 * n2, and
/// CompletionError(rank_deficient) when fewer than r independent columns
/// exist (only possible for rank-deficient inputs).
std::vector<std::pair<int, int>> select_fibers(const Eigen::MatrixXd& A_hat,
                                               const Eigen::MatrixXd& B_hat, int gamma);

/// Expands fiber locations into the sample set Omega_2 = {(i, j, k) : k in [n3]}.
SampleSet fibers_to_omega2(const std::vector<std::pair<int, int>>& pairs, int n3);

}  // namespace ts
