#include "tensorsandwich/censored_lstsq.hpp"

#include <stdexcept>

#include "tensorsandwich/errors.hpp"

namespace ts {

Eigen::MatrixXd solve_c_factor(const Eigen::MatrixXd& A_hat, const Eigen::MatrixXd& B_hat,
                               SamplingOracle& oracle,
                               const std::vector<std::pair<int, int>>& pairs, int n3) {
    if (A_hat.cols() != B_hat.cols())
        throw std::invalid_argument("solve_c_factor: factors must share one column count");
    const int r = static_cast<int>(A_hat.cols());
    const int m = static_cast<int>(pairs.size());
    if (m < r) throw std::invalid_argument("solve_c_factor: need at least r fibers");
    if (n3 < 1 || n3 > oracle.n3()) throw std::invalid_argument("solve_c_factor: bad n3");

    Eigen::MatrixXd restricted(m, r);
    for (int t = 0; t < m; ++t) {
        const auto& [i, j] = pairs[static_cast<std::size_t>(t)];
        restricted.row(t) = A_hat.row(i).cwiseProduct(B_hat.row(j));
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted);
    const Eigen::VectorXd& sig = svd.singularValues();
    if (sig(0) == 0.0 || sig(r - 1) < 1e-10 * sig(0))
        throw CompletionError(RunStatus::ill_conditioned_fibers,
                              "censored system ill-conditioned; raise gamma");

    // One factorization shared across all n3 right-hand sides.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(restricted);
    Eigen::MatrixXd C(n3, r);
    Eigen::VectorXd rhs(m);
    for (int k = 0; k < n3; ++k) {
        for (int t = 0; t < m; ++t) {
            const auto& [i, j] = pairs[static_cast<std::size_t>(t)];
            rhs(t) = oracle.query(i, j, k);
        }
        C.row(k) = qr.solve(rhs).transpose();
    }
    return C;
}

}  // namespace ts
