#pragma once

#include <Eigen/Dense>

#include "tensorsandwich/dense_tensor.hpp"

namespace ts {

/// Columnwise Kronecker (Khatri-Rao) product. Column i is a_i (x) b_i, so for
/// A in R^{n1 x r}, B in R^{n2 x r} the result is (n1*n2) x r with
///
///     (A (.) B)(i * n2 + j, l) = A(i, l) * B(j, l).
///
/// The row index i * n2 + j is the same flattening used by unfold3 for the
/// slice entry (i, j); that pairing is what makes unfold3(T) = C (A (.) B)^T
/// hold for CP tensors.
Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Mode-3 unfolding: row k is the flattening of slice T[:,:,k], with slice
/// entry (i, j) at column i * n2 + j. Result is n3 x (n1*n2).
Eigen::MatrixXd unfold3(const DenseTensor3& t);

/// Coherence of the span of an orthonormal basis U in R^{n x r}:
/// (n/r) * max_i ||row i of U||^2, always in [1, n/r]. Columns must be
/// orthonormal within 1e-10 or std::invalid_argument is thrown.
double coherence(const Eigen::MatrixXd& basis);

/// Orthonormal basis of the column space of M (thin SVD, singular values
/// above rel_tol * sigma_1 kept).
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& M, double rel_tol = 1e-12);

/// Coherence of col-span(M) for a general (not necessarily orthonormal) M.
double subspace_coherence(const Eigen::MatrixXd& M);

/// True iff M has Kruskal rank >= 2: no zero column and no two columns
/// parallel. Only the pairwise test is needed (and run); general k-rank is
/// not computed.
bool kruskal_rank_at_least_2(const Eigen::MatrixXd& M, double tol = 1e-12);

}  // namespace ts
