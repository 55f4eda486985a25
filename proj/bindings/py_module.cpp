// Python bindings for the tensor completion core. Tensors cross the boundary
// as 3-d numpy arrays (copied), factor matrices as 2-d arrays via Eigen.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "tensorsandwich/cp_model.hpp"
#include "tensorsandwich/dense_tensor.hpp"
#include "tensorsandwich/linalg.hpp"
#include "tensorsandwich/sandwich.hpp"
#include "tensorsandwich/synthetic.hpp"

namespace py = pybind11;

namespace {

ts::DenseTensor3 tensor_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 3) throw std::invalid_argument("expected a 3-d array");
    const int n1 = static_cast<int>(arr.shape(0));
    const int n2 = static_cast<int>(arr.shape(1));
    const int n3 = static_cast<int>(arr.shape(2));
    std::vector<double> values(arr.data(), arr.data() + arr.size());
    return ts::DenseTensor3(n1, n2, n3, std::move(values));
}

py::array_t<double> array_from_tensor(const ts::DenseTensor3& t) {
    py::array_t<double> arr({t.n1(), t.n2(), t.n3()});
    std::copy(t.values().begin(), t.values().end(), arr.mutable_data());
    return arr;
}

py::dict report_to_dict(const ts::CompletionReport& report) {
    py::dict d;
    d["status"] = ts::to_string(report.status);
    d["message"] = report.message;
    d["omega1"] = report.omega1_count;
    d["omega2"] = report.omega2_count;
    d["total"] = report.total_count;
    d["fraction"] = report.fraction;
    d["rel_error"] = report.rel_error;
    d["jennrich_redraws"] = report.jennrich_redraws;
    d["fully_sampled_columns"] = report.fully_sampled_columns;
    d["phase_ms"] = report.phase_ms;
    return d;
}

py::tuple complete(const py::array_t<double, py::array::c_style | py::array::forcecast>& tensor,
                   int rank, int s, int gamma, double delta, std::int64_t budget,
                   int col_samples, double residual_tol, std::uint64_t seed, int als_iters,
                   const std::vector<int>& slice_indices) {
    ts::DenseTensor3 truth = tensor_from_array(tensor);
    ts::SandwichConfig cfg;
    cfg.s = s;
    cfg.gamma = gamma;
    cfg.delta = delta;
    cfg.seed = seed;
    cfg.als_iters = als_iters;
    cfg.explicit_slices = slice_indices;
    if (budget > 0) {
        cfg.slice_cfg = ts::SliceCompletionConfig::from_budget(rank, truth.n1(), budget);
    } else {
        cfg.slice_cfg = ts::SliceCompletionConfig::from_theory(
            rank, truth.n1(), static_cast<double>(truth.n1()) / rank, delta);
    }
    if (col_samples > 0) cfg.slice_cfg.per_column_samples = col_samples;
    cfg.slice_cfg.residual_tol = residual_tol;

    ts::SamplingOracle oracle(truth);
    auto [model, report] = ts::tensor_sandwich(oracle, cfg);
    report.rel_error = ts::relative_error(ts::cp_to_dense(model), truth);
    return py::make_tuple(model.A, model.B, model.C, report_to_dict(report));
}

py::tuple masked_als_py(const py::array_t<double, py::array::c_style | py::array::forcecast>& tensor,
                        const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask,
                        const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                        const Eigen::MatrixXd& C, int iters) {
    ts::DenseTensor3 data = tensor_from_array(tensor);
    if (mask.ndim() != 3 || mask.shape(0) != tensor.shape(0) || mask.shape(1) != tensor.shape(1) ||
        mask.shape(2) != tensor.shape(2))
        throw std::invalid_argument("mask must be a boolean array of the tensor's shape");

    ts::SamplingOracle oracle(data);
    const bool* m = mask.data();
    std::size_t idx = 0;
    for (int i = 0; i < data.n1(); ++i)
        for (int j = 0; j < data.n2(); ++j)
            for (int k = 0; k < data.n3(); ++k, ++idx)
                if (m[idx]) oracle.query(i, j, k);

    ts::CPModel init{A, B, C};
    auto [model, info] = ts::masked_als(oracle, init, iters);
    return py::make_tuple(model.A, model.B, model.C, info.observed_residuals,
                          info.skipped_row_updates);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Adaptive CP-rank tensor completion (sandwich sampling)";

    m.def("generate_synthetic",
          [](int n, int r, std::uint64_t seed, const std::vector<double>& weights) {
              auto [model, tensor] = ts::generate_synthetic(n, r, seed, weights);
              return py::make_tuple(array_from_tensor(tensor), model.A, model.B, model.C);
          },
          py::arg("n"), py::arg("rank"), py::arg("seed") = 0,
          py::arg("weights") = std::vector<double>{},
          "Random CP tensor with unit-norm Gaussian factors; returns (tensor, A, B, C).");

    m.def("cp_to_dense",
          [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C) {
              return array_from_tensor(ts::cp_to_dense(ts::CPModel{A, B, C}));
          },
          py::arg("A"), py::arg("B"), py::arg("C"));

    m.def("khatri_rao", &ts::khatri_rao, py::arg("A"), py::arg("B"),
          "Columnwise Kronecker product; row i*B.rows()+j holds A[i,:] * B[j,:].");

    m.def("unfold3",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& tensor) {
              return ts::unfold3(tensor_from_array(tensor));
          },
          py::arg("tensor"), "Mode-3 unfolding, one flattened frontal slice per row.");

    m.def("coherence", &ts::coherence, py::arg("basis"),
          "Coherence of an orthonormal basis, in [1, n/r].");

    m.def("subspace_coherence", &ts::subspace_coherence, py::arg("matrix"),
          "Coherence of the column span of a general matrix.");

    m.def("kruskal_rank_at_least_2", &ts::kruskal_rank_at_least_2, py::arg("matrix"),
          py::arg("tol") = 1e-12);

    m.def("add_noise_snr",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& tensor,
             double snr_db, std::uint64_t seed) {
              return array_from_tensor(ts::add_noise_snr(tensor_from_array(tensor), snr_db, seed));
          },
          py::arg("tensor"), py::arg("snr_db"), py::arg("seed") = 0,
          "Gaussian noise scaled so 10*log10(||T||_F/||N||_F) == snr_db exactly.");

    m.def("relative_error",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& est,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& truth) {
              return ts::relative_error(tensor_from_array(est), tensor_from_array(truth));
          },
          py::arg("estimate"), py::arg("truth"));

    m.def("complete", &complete, py::arg("tensor"), py::arg("rank"), py::arg("s") = 2,
          py::arg("gamma") = 4, py::arg("delta") = 0.1, py::arg("budget") = 0,
          py::arg("col_samples") = 0, py::arg("residual_tol") = 1e-8, py::arg("seed") = 0,
          py::arg("als_iters") = 0, py::arg("slice_indices") = std::vector<int>{},
          "Run the full adaptive completion pipeline; returns (A, B, C, report).");

    m.def("masked_als", &masked_als_py, py::arg("tensor"), py::arg("mask"), py::arg("A"),
          py::arg("B"), py::arg("C"), py::arg("iters"),
          "Alternating least squares restricted to the masked entries; returns "
          "(A, B, C, residuals, skipped).");
}
