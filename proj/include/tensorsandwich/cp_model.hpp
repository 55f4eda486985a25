#pragma once

#include <Eigen/Dense>

#include "tensorsandwich/dense_tensor.hpp"

namespace ts {

/// CP model: factor matrices A (n1 x r), B (n2 x r), C (n3 x r). Column i of
/// each factor is the i-th rank-one component; component weights are folded
/// into the column scales of C (a separate weight vector would not be
/// identifiable, since any diagonal rescaling moves freely between B and C).
struct CPModel {
    Eigen::MatrixXd A, B, C;

    int rank() const { return static_cast<int>(A.cols()); }
    int n1() const { return static_cast<int>(A.rows()); }
    int n2() const { return static_cast<int>(B.rows()); }
    int n3() const { return static_cast<int>(C.rows()); }

    /// Throws std::invalid_argument unless all three factors share one
    /// column count.
    void validate() const;

    static CPModel zeros(int n1, int n2, int n3, int rank);
};

/// Expands the model to a dense tensor: entry (h, j, k) = sum_i A(h,i) B(j,i) C(k,i).
DenseTensor3 cp_to_dense(const CPModel& model);

}  // namespace ts
