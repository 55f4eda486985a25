#include "tensorsandwich/fiber_sampler.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tensorsandwich/errors.hpp"
#include "tensorsandwich/linalg.hpp"

namespace ts {

std::vector<std::pair<int, int>> select_fibers(const Eigen::MatrixXd& A_hat,
                                               const Eigen::MatrixXd& B_hat, int gamma) {
    if (A_hat.cols() != B_hat.cols())
        throw std::invalid_argument("select_fibers: factors must share one column count");
    const int n1 = static_cast<int>(A_hat.rows());
    const int n2 = static_cast<int>(B_hat.rows());
    const int r = static_cast<int>(A_hat.cols());
    if (r < 1) throw std::invalid_argument("select_fibers: rank must be >= 1");
    if (gamma < 1) throw std::invalid_argument("select_fibers: gamma must be >= 1");
    const std::int64_t want = static_cast<std::int64_t>(gamma) * r;
    if (want > static_cast<std::int64_t>(n1) * n2)
        throw std::invalid_argument("select_fibers: gamma * r exceeds the number of fibers");

    // Candidate vectors are the rows of A (.) B, i.e. the columns of
    // (A (.) B)^T. resid holds their residuals against the growing pivot
    // basis; recomputing norms each step keeps the tie-break exact.
    Eigen::MatrixXd resid = khatri_rao(A_hat, B_hat);  // (n1*n2) x r, row per candidate
    const Eigen::Index m = resid.rows();
    const Eigen::VectorXd orig_norms = resid.rowwise().squaredNorm();
    const double scale = orig_norms.maxCoeff();

    std::vector<char> used(static_cast<std::size_t>(m), 0);
    std::vector<Eigen::Index> selected;
    selected.reserve(static_cast<std::size_t>(want));

    int basis_size = 0;
    while (static_cast<std::int64_t>(selected.size()) < want && basis_size < r) {
        Eigen::Index best = -1;
        double best_norm = -1.0;
        for (Eigen::Index q = 0; q < m; ++q) {
            if (used[static_cast<std::size_t>(q)]) continue;
            const double norm_sq = resid.row(q).squaredNorm();
            if (norm_sq > best_norm) {
                best_norm = norm_sq;
                best = q;
            }
        }
        if (best < 0 || best_norm <= 1e-28 * scale)
            throw CompletionError(RunStatus::rank_deficient,
                                  "select_fibers: row space exhausted before rank pivots");
        used[static_cast<std::size_t>(best)] = 1;
        selected.push_back(best);

        Eigen::VectorXd dir = resid.row(best).transpose();
        dir.normalize();
        ++basis_size;
        resid -= (resid * dir) * dir.transpose();
    }

    if (static_cast<std::int64_t>(selected.size()) < want) {
        // Row space exhausted: take the remaining fibers by original norm,
        // largest first, lowest index on ties.
        std::vector<Eigen::Index> rest;
        for (Eigen::Index q = 0; q < m; ++q)
            if (!used[static_cast<std::size_t>(q)]) rest.push_back(q);
        std::stable_sort(rest.begin(), rest.end(), [&](Eigen::Index a, Eigen::Index b) {
            return orig_norms(a) > orig_norms(b);
        });
        for (Eigen::Index q : rest) {
            if (static_cast<std::int64_t>(selected.size()) == want) break;
            selected.push_back(q);
        }
    }

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(selected.size());
    for (Eigen::Index q : selected)
        pairs.emplace_back(static_cast<int>(q / n2), static_cast<int>(q % n2));
    return pairs;
}

SampleSet fibers_to_omega2(const std::vector<std::pair<int, int>>& pairs, int n3) {
    if (n3 < 1) throw std::invalid_argument("fibers_to_omega2: n3 must be >= 1");
    std::set<std::pair<int, int>> uniq(pairs.begin(), pairs.end());
    if (uniq.size() != pairs.size())
        throw std::invalid_argument("fibers_to_omega2: duplicate fiber locations");
    SampleSet omega2;
    for (const auto& [i, j] : pairs)
        for (int k = 0; k < n3; ++k) omega2.insert(i, j, k);
    return omega2;
}

}  // namespace ts
