#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "tensorsandwich/cp_model.hpp"
#include "tensorsandwich/dense_tensor.hpp"
#include "tensorsandwich/rng.hpp"

namespace ts::testing {

inline Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = rng.gaussian();
    return m;
}

inline CPModel random_model(int n1, int n2, int n3, int rank, std::uint64_t seed) {
    CPModel m;
    m.A = gaussian_matrix(n1, rank, derive_seed(seed, {1}));
    m.B = gaussian_matrix(n2, rank, derive_seed(seed, {2}));
    m.C = gaussian_matrix(n3, rank, derive_seed(seed, {3}));
    return m;
}

/// Independent expansion oracle: plain triple loop over components, no
/// unfolding or Khatri-Rao machinery.
inline DenseTensor3 triple_loop_dense(const CPModel& m) {
    DenseTensor3 out(m.n1(), m.n2(), m.n3());
    for (int i = 0; i < m.n1(); ++i)
        for (int j = 0; j < m.n2(); ++j)
            for (int k = 0; k < m.n3(); ++k) {
                double sum = 0.0;
                for (int l = 0; l < m.rank(); ++l) sum += m.A(i, l) * m.B(j, l) * m.C(k, l);
                out.at(i, j, k) = sum;
            }
    return out;
}

inline double max_abs_diff(const DenseTensor3& a, const DenseTensor3& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    return worst;
}

/// Largest principal angle (radians) between the column spans of two
/// orthonormal bases, via the sine formulation (resolves angles far below
/// the acos floor of ~sqrt(eps)).
inline double max_subspace_angle(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V) {
    const Eigen::MatrixXd perp = V - U * (U.transpose() * V);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(perp);
    const double s = std::min(1.0, svd.singularValues().maxCoeff());
    return std::asin(s);
}

}  // namespace ts::testing
