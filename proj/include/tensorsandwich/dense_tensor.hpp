#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ts {

/// Dense order-3 tensor of doubles. Values are stored row-major, i.e. entry
/// (i, j, k) lives at flat index (i * n2 + j) * n3 + k; this is also the
/// on-disk layout of the tensor container format.
class DenseTensor3 {
  public:
    DenseTensor3() = default;
    DenseTensor3(int n1, int n2, int n3);
    DenseTensor3(int n1, int n2, int n3, std::vector<double> values);

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int n3() const { return n3_; }
    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
    bool cubic() const { return n1_ == n2_ && n2_ == n3_; }

    double operator()(int i, int j, int k) const { return values_[flat(i, j, k)]; }
    double& at(int i, int j, int k) { return values_[flat(i, j, k)]; }

    void check_bounds(int i, int j, int k) const;

    /// Frontal slice T[:,:,k] as an n1 x n2 matrix.
    Eigen::MatrixXd slice(int k) const;

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double frobenius_norm() const;
    bool all_finite() const;

  private:
    std::size_t flat(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * static_cast<std::size_t>(n2_) +
                static_cast<std::size_t>(j)) *
                   static_cast<std::size_t>(n3_) +
               static_cast<std::size_t>(k);
    }

    int n1_ = 0, n2_ = 0, n3_ = 0;
    std::vector<double> values_;
};

}  // namespace ts
