#include "tensorsandwich/dense_tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ts {

namespace {

void check_dims(int n1, int n2, int n3) {
    if (n1 < 1 || n2 < 1 || n3 < 1)
        throw std::invalid_argument("DenseTensor3: dimensions must be positive");
}

}  // namespace

DenseTensor3::DenseTensor3(int n1, int n2, int n3) : n1_(n1), n2_(n2), n3_(n3) {
    check_dims(n1, n2, n3);
    values_.assign(static_cast<std::size_t>(n1) * n2 * n3, 0.0);
}

DenseTensor3::DenseTensor3(int n1, int n2, int n3, std::vector<double> values)
    : n1_(n1), n2_(n2), n3_(n3), values_(std::move(values)) {
    check_dims(n1, n2, n3);
    if (values_.size() != static_cast<std::size_t>(n1) * n2 * n3)
        throw std::invalid_argument("DenseTensor3: value count does not match dims");
}

void DenseTensor3::check_bounds(int i, int j, int k) const {
    if (i < 0 || i >= n1_ || j < 0 || j >= n2_ || k < 0 || k >= n3_)
        throw std::out_of_range("DenseTensor3: index (" + std::to_string(i) + ", " +
                                std::to_string(j) + ", " + std::to_string(k) +
                                ") out of range");
}

Eigen::MatrixXd DenseTensor3::slice(int k) const {
    if (k < 0 || k >= n3_) throw std::out_of_range("DenseTensor3::slice: k out of range");
    Eigen::MatrixXd out(n1_, n2_);
    for (int i = 0; i < n1_; ++i)
        for (int j = 0; j < n2_; ++j) out(i, j) = (*this)(i, j, k);
    return out;
}

double DenseTensor3::frobenius_norm() const {
    double sq = 0.0;
    for (double v : values_) sq += v * v;
    return std::sqrt(sq);
}

bool DenseTensor3::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace ts
