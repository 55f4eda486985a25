#include "tensorsandwich/jennrich.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tensorsandwich/errors.hpp"

namespace ts {

Eigen::VectorXd draw_sphere(int s, Rng& rng) {
    if (s < 1) throw std::invalid_argument("draw_sphere: s must be >= 1");
    Eigen::VectorXd v(s);
    double norm = 0.0;
    do {
        for (int i = 0; i < s; ++i) v(i) = rng.gaussian();
        norm = v.norm();
    } while (norm == 0.0);
    return v / norm;
}

Eigen::MatrixXd aggregate(const std::vector<Eigen::MatrixXd>& slices, const Eigen::VectorXd& w) {
    if (static_cast<Eigen::Index>(slices.size()) != w.size())
        throw std::invalid_argument("aggregate: weight count must match slice count");
    if (slices.empty()) throw std::invalid_argument("aggregate: no slices");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(slices[0].rows(), slices[0].cols());
    for (std::size_t k = 0; k < slices.size(); ++k) {
        if (slices[k].rows() != out.rows() || slices[k].cols() != out.cols())
            throw std::invalid_argument("aggregate: slice shapes differ");
        out += w(static_cast<Eigen::Index>(k)) * slices[k];
    }
    return out;
}

JennrichResult jennrich_factors(const Eigen::MatrixXd& T_u, const Eigen::MatrixXd& T_v, int rank,
                                const JennrichOptions& opts) {
    const Eigen::Index n = T_u.rows();
    if (T_v.rows() != n || T_v.cols() != T_u.cols())
        throw std::invalid_argument("jennrich_factors: aggregates must have one shape");
    if (rank < 1 || rank > std::min(n, T_u.cols()))
        throw std::invalid_argument("jennrich_factors: rank out of range");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(T_v, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sig = svd.singularValues();
    if (sig(0) == 0.0 || sig(rank - 1) <= opts.pinv_tol * sig(0))
        throw CompletionError(RunStatus::rank_deficient,
                              "jennrich: second aggregate has numerical rank below " +
                                  std::to_string(rank));

    // Rank-r truncated pseudoinverse of T_v; M = T_u T_v^+ = A D_u D_v^{-1} A^+.
    const Eigen::MatrixXd pinv = svd.matrixV().leftCols(rank) *
                                 sig.head(rank).cwiseInverse().asDiagonal() *
                                 svd.matrixU().leftCols(rank).transpose();
    const Eigen::MatrixXd M = T_u * pinv;

    Eigen::EigenSolver<Eigen::MatrixXd> eig(M);
    if (eig.info() != Eigen::Success)
        throw CompletionError(RunStatus::degenerate_eigenvalues, "jennrich: eigensolver failed");
    const Eigen::VectorXcd lambdas = eig.eigenvalues();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double ma = std::abs(lambdas(a)), mb = std::abs(lambdas(b));
        if (ma != mb) return ma > mb;
        if (lambdas(a).real() != lambdas(b).real()) return lambdas(a).real() > lambdas(b).real();
        return a < b;
    });

    const double lead = std::abs(lambdas(order[0]));
    if (lead == 0.0)
        throw CompletionError(RunStatus::degenerate_eigenvalues, "jennrich: zero spectrum");

    JennrichResult result;
    result.eigenvalues.resize(rank);
    result.A_hat.resize(n, rank);
    result.min_eigengap = lead;
    for (int i = 0; i < rank; ++i) {
        const std::complex<double> lam = lambdas(order[static_cast<std::size_t>(i)]);
        if (std::abs(lam.imag()) > opts.imag_tol * lead)
            throw CompletionError(RunStatus::non_real_spectrum,
                                  "jennrich: complex eigenvalue ratio");
        result.eigenvalues(i) = lam.real();

        Eigen::VectorXcd vec = eig.eigenvectors().col(order[static_cast<std::size_t>(i)]);
        // Rotate the complex phase so the largest-magnitude entry is real and
        // positive, then drop the (tiny) imaginary part.
        Eigen::Index peak = 0;
        vec.cwiseAbs().maxCoeff(&peak);
        const std::complex<double> pivot = vec(peak);
        if (std::abs(pivot) == 0.0)
            throw CompletionError(RunStatus::degenerate_eigenvalues, "jennrich: null eigenvector");
        vec *= std::conj(pivot) / std::abs(pivot);
        if (vec.imag().cwiseAbs().maxCoeff() > opts.imag_tol * vec.cwiseAbs().maxCoeff())
            throw CompletionError(RunStatus::non_real_spectrum,
                                  "jennrich: complex eigenvector");
        result.A_hat.col(i) = vec.real().normalized();
    }

    // The smallest kept ratio must stand clear of the discarded (null-space)
    // spectrum, and consecutive kept ratios clear of each other; otherwise
    // the eigenvector pairing is meaningless and the caller should redraw.
    for (int i = 0; i < rank; ++i) {
        const double cur = std::abs(result.eigenvalues(i));
        const double next =
            i + 1 < rank ? std::abs(result.eigenvalues(i + 1))
                         : (rank < n ? std::abs(lambdas(order[static_cast<std::size_t>(rank)])) : 0.0);
        const double gap = cur - next;
        result.min_eigengap = std::min(result.min_eigengap, gap);
        if (gap < opts.eigengap_tol * lead)
            throw CompletionError(RunStatus::degenerate_eigenvalues,
                                  "jennrich: eigenvalue gap below tolerance");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(result.A_hat);
    if (qr.rank() < rank)
        throw CompletionError(RunStatus::rank_deficient, "jennrich: dependent eigenvectors");
    result.B_hat = qr.solve(T_u).transpose();
    result.condition_diag = sig(rank - 1);
    return result;
}

}  // namespace ts
