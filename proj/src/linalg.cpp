#include "tensorsandwich/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace ts {

Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.cols() != B.cols())
        throw std::invalid_argument("khatri_rao: factors must have equal column counts");
    const Eigen::Index n1 = A.rows(), n2 = B.rows(), r = A.cols();
    Eigen::MatrixXd out(n1 * n2, r);
    for (Eigen::Index l = 0; l < r; ++l)
        for (Eigen::Index i = 0; i < n1; ++i)
            out.col(l).segment(i * n2, n2) = A(i, l) * B.col(l);
    return out;
}

Eigen::MatrixXd unfold3(const DenseTensor3& t) {
    const int n1 = t.n1(), n2 = t.n2(), n3 = t.n3();
    Eigen::MatrixXd out(n3, static_cast<Eigen::Index>(n1) * n2);
    for (int k = 0; k < n3; ++k)
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j)
                out(k, static_cast<Eigen::Index>(i) * n2 + j) = t(i, j, k);
    return out;
}

double coherence(const Eigen::MatrixXd& basis) {
    const Eigen::Index n = basis.rows(), r = basis.cols();
    if (r < 1 || n < r) throw std::invalid_argument("coherence: need n >= r >= 1");
    const Eigen::MatrixXd gram = basis.transpose() * basis;
    const double dev = (gram - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff();
    if (dev > 1e-10)
        throw std::invalid_argument("coherence: columns are not orthonormal");
    const double max_row = basis.rowwise().squaredNorm().maxCoeff();
    return static_cast<double>(n) / static_cast<double>(r) * max_row;
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& M, double rel_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
    const auto& sig = svd.singularValues();
    if (sig.size() == 0 || sig(0) == 0.0)
        throw std::invalid_argument("orthonormal_basis: zero matrix");
    Eigen::Index rank = 0;
    while (rank < sig.size() && sig(rank) > rel_tol * sig(0)) ++rank;
    return svd.matrixU().leftCols(rank);
}

double subspace_coherence(const Eigen::MatrixXd& M) {
    return coherence(orthonormal_basis(M));
}

bool kruskal_rank_at_least_2(const Eigen::MatrixXd& M, double tol) {
    const Eigen::Index r = M.cols();
    if (M.rows() < 2) throw std::invalid_argument("kruskal_rank_at_least_2: need >= 2 rows");
    Eigen::VectorXd norms(r);
    for (Eigen::Index i = 0; i < r; ++i) {
        norms(i) = M.col(i).norm();
        if (norms(i) <= tol) return false;
    }
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = i + 1; j < r; ++j) {
            const double cosine = std::abs(M.col(i).dot(M.col(j))) / (norms(i) * norms(j));
            if (cosine >= 1.0 - tol) return false;
        }
    return true;
}

}  // namespace ts
