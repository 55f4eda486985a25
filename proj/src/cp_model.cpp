#include "tensorsandwich/cp_model.hpp"

#include <stdexcept>

#include "tensorsandwich/linalg.hpp"

namespace ts {

void CPModel::validate() const {
    if (A.cols() != B.cols() || B.cols() != C.cols())
        throw std::invalid_argument("CPModel: factor matrices must share one column count");
    if (A.cols() < 1) throw std::invalid_argument("CPModel: rank must be >= 1");
    if (A.rows() < 1 || B.rows() < 1 || C.rows() < 1)
        throw std::invalid_argument("CPModel: factor matrices must be nonempty");
}

CPModel CPModel::zeros(int n1, int n2, int n3, int rank) {
    CPModel m;
    m.A = Eigen::MatrixXd::Zero(n1, rank);
    m.B = Eigen::MatrixXd::Zero(n2, rank);
    m.C = Eigen::MatrixXd::Zero(n3, rank);
    return m;
}

DenseTensor3 cp_to_dense(const CPModel& model) {
    model.validate();
    const int n1 = model.n1(), n2 = model.n2(), n3 = model.n3();
    // unfold3(T) = C (A (.) B)^T, then refold.
    const Eigen::MatrixXd m3 = model.C * khatri_rao(model.A, model.B).transpose();
    DenseTensor3 out(n1, n2, n3);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            for (int k = 0; k < n3; ++k)
                out.at(i, j, k) = m3(k, static_cast<Eigen::Index>(i) * n2 + j);
    return out;
}

}  // namespace ts
