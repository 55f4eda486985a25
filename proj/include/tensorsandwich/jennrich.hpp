#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tensorsandwich/rng.hpp"

namespace ts {

struct JennrichOptions {
    double pinv_tol = 1e-10;     ///< singular values below pinv_tol * sigma_1 are truncated
    double eigengap_tol = 1e-6;  ///< min gap between consecutive |lambda|, relative to |lambda_1|
    double imag_tol = 1e-6;      ///< max tolerated imaginary part, relative to |lambda_1|
};

/// Output of the simultaneous-diagonalization step: index-matched estimates
/// of the first two factor matrices. B_hat absorbs the random aggregation
/// scaling; the censored least-squares step pushes it into the third factor.
struct JennrichResult {
    Eigen::MatrixXd A_hat;       ///< n x r, unit columns, sign-normalized
    Eigen::MatrixXd B_hat;       ///< n x r, rescaled columns of B
    Eigen::VectorXd eigenvalues; ///< r ratios, sorted by decreasing magnitude
    double min_eigengap = 0.0;   ///< min |lambda_i| - |lambda_{i+1}| (|lambda_1| for r = 1)
    double condition_diag = 0.0; ///< sigma_r of the pseudoinverted aggregate
};

/// Uniform draw from the unit sphere S^{s-1} (normalized Gaussian).
Eigen::VectorXd draw_sphere(int s, Rng& rng);

/// Weighted sum of slices: sum_k w_k slices[k].
Eigen::MatrixXd aggregate(const std::vector<Eigen::MatrixXd>& slices, const Eigen::VectorXd& w);

/// Factor recovery from two random slice aggregates.
///
/// Computes M = T_u pinv_r(T_v) with a rank-r truncated-SVD pseudoinverse,
/// takes the r largest-magnitude eigenpairs of M (sorted by |lambda|
/// descending, ties by real part), and reads B_hat off as
/// (A_hat^+ T_u)^T. Throws CompletionError with status
///   - rank_deficient          when T_v has fewer than r usable singular
///                             values or the eigenvectors are dependent,
///   - degenerate_eigenvalues  when consecutive |lambda| are closer than
///                             eigengap_tol * |lambda_1| (the caller redraws
///                             u, v),
///   - non_real_spectrum       when a kept eigenpair has an imaginary part
///                             beyond imag_tol (also redraw).
JennrichResult jennrich_factors(const Eigen::MatrixXd& T_u, const Eigen::MatrixXd& T_v, int rank,
                                const JennrichOptions& opts = {});

}  // namespace ts
