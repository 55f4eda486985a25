#include "tensorsandwich/synthetic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tensorsandwich/rng.hpp"

namespace ts {

std::vector<double> quadratic_weights(int r) {
    std::vector<double> w(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) w[static_cast<std::size_t>(i)] = 1.0 / ((i + 1.0) * (i + 1.0));
    return w;
}

namespace {

Eigen::MatrixXd gaussian_unit_columns(int n, int r, Rng& rng) {
    Eigen::MatrixXd m(n, r);
    for (int c = 0; c < r; ++c) {
        for (int row = 0; row < n; ++row) m(row, c) = rng.gaussian();
        const double norm = m.col(c).norm();
        if (norm > 0.0) m.col(c) /= norm;
    }
    return m;
}

}  // namespace

std::pair<CPModel, DenseTensor3> generate_synthetic(int n, int r, std::uint64_t seed,
                                                    const std::vector<double>& weights) {
    if (r < 1) throw std::invalid_argument("generate_synthetic: rank must be >= 1");
    if (r > n)
        throw std::invalid_argument("generate_synthetic: rank must be <= n for the guaranteed class");
    const std::vector<double> w = weights.empty() ? quadratic_weights(r) : weights;
    if (static_cast<int>(w.size()) != r)
        throw std::invalid_argument("generate_synthetic: weights must have length r");

    Rng rng(seed);
    CPModel model;
    model.A = gaussian_unit_columns(n, r, rng);
    model.B = gaussian_unit_columns(n, r, rng);
    model.C = gaussian_unit_columns(n, r, rng);
    for (int i = 0; i < r; ++i) model.C.col(i) *= w[static_cast<std::size_t>(i)];
    return {model, cp_to_dense(model)};
}

DenseTensor3 add_noise_snr(const DenseTensor3& t, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0) return t;
    const double signal_norm = t.frobenius_norm();
    if (signal_norm == 0.0) throw std::invalid_argument("add_noise_snr: tensor must be nonzero");

    Rng rng(seed);
    std::vector<double> noise(t.values().size());
    double noise_sq = 0.0;
    for (double& v : noise) {
        v = rng.gaussian();
        noise_sq += v * v;
    }
    if (noise_sq == 0.0) throw std::runtime_error("add_noise_snr: degenerate noise draw");

    // 10 log10(||t|| / ||N||) = snr_db  =>  ||N|| = ||t|| * 10^(-snr_db / 10)
    const double target = signal_norm * std::pow(10.0, -snr_db / 10.0);
    const double scale = target / std::sqrt(noise_sq);

    DenseTensor3 out = t;
    for (std::size_t idx = 0; idx < noise.size(); ++idx) out.values()[idx] += scale * noise[idx];
    return out;
}

double relative_error(const DenseTensor3& est, const DenseTensor3& truth) {
    if (est.n1() != truth.n1() || est.n2() != truth.n2() || est.n3() != truth.n3())
        throw std::invalid_argument("relative_error: dimension mismatch");
    const double denom = truth.frobenius_norm();
    if (denom == 0.0) throw std::invalid_argument("relative_error: truth must be nonzero");
    double sq = 0.0;
    for (std::size_t idx = 0; idx < truth.values().size(); ++idx) {
        const double d = est.values()[idx] - truth.values()[idx];
        sq += d * d;
    }
    return std::sqrt(sq) / denom;
}

}  // namespace ts
