#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "tensorsandwich/experiments.hpp"
#include "tensorsandwich/sandwich.hpp"
#include "tensorsandwich/synthetic.hpp"

using namespace ts;
using ts::testing::max_abs_diff;

namespace {

SandwichConfig basic_config(int rank, int n, std::int64_t budget, std::uint64_t seed) {
    SandwichConfig cfg;
    cfg.seed = seed;
    cfg.slice_cfg = SliceCompletionConfig::from_budget(rank, n, budget);
    return cfg;
}

}  // namespace

TEST_CASE("in-class tensor completes exactly within the sample bound") {
    const int n = 40, r = 3;
    const auto [model, truth] = generate_synthetic(n, r, 3, std::vector<double>(r, 1.0));
    SamplingOracle oracle(truth);
    const std::int64_t budget = 1400;
    auto [est, report] = tensor_sandwich(oracle, basic_config(r, n, budget, 5));
    REQUIRE(report.ok());
    CHECK(relative_error(cp_to_dense(est), truth) < 1e-8);
    CHECK(report.total_count <= 2 * budget + 4 * n * r);
    CHECK(report.omega2_count == 4 * r * n);
    CHECK(report.fraction == doctest::Approx(static_cast<double>(report.total_count) / (n * n * n)));
}

TEST_CASE("rank-1 tensors complete from minimal samples") {
    const int n = 20;
    const auto [model, truth] = generate_synthetic(n, 1, 9);
    SamplingOracle oracle(truth);
    auto [est, report] = tensor_sandwich(oracle, basic_config(1, n, 8 * n, 2));
    REQUIRE(report.ok());
    CHECK(relative_error(cp_to_dense(est), truth) < 1e-10);
    CHECK(report.omega2_count == 4 * n);  // gamma * r * n tubes
}

TEST_CASE("identical config and seed reproduce the run bit for bit") {
    const int n = 24, r = 2;
    const auto [model, truth] = generate_synthetic(n, r, 13);
    SamplingOracle o1(truth), o2(truth);
    const SandwichConfig cfg = basic_config(r, n, 500, 11);
    auto [m1, r1] = tensor_sandwich(o1, cfg);
    auto [m2, r2] = tensor_sandwich(o2, cfg);
    CHECK((m1.A - m2.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((m1.B - m2.B).cwiseAbs().maxCoeff() == 0.0);
    CHECK((m1.C - m2.C).cwiseAbs().maxCoeff() == 0.0);
    CHECK(r1.total_count == r2.total_count);
    CHECK(r1.omega1_count == r2.omega1_count);
    CHECK(r1.jennrich_redraws == r2.jennrich_redraws);
}

TEST_CASE("no unobserved entry influences the estimate (poisoned oracle)") {
    const int n = 22, r = 2;
    const auto [model, truth] = generate_synthetic(n, r, 17);
    const SandwichConfig cfg = basic_config(r, n, 600, 23);

    SamplingOracle first(truth);
    auto [est1, rep1] = tensor_sandwich(first, cfg);
    REQUIRE(rep1.ok());

    // Same ground truth where every entry the first run did not touch is NaN.
    DenseTensor3 poisoned(n, n, n,
                          std::vector<double>(truth.values().size(),
                                              std::numeric_limits<double>::quiet_NaN()));
    for (const auto& t : first.observed_triples()) poisoned.at(t[0], t[1], t[2]) = truth(t[0], t[1], t[2]);

    SamplingOracle second(poisoned);
    auto [est2, rep2] = tensor_sandwich(second, cfg);
    REQUIRE(rep2.ok());
    const DenseTensor3 dense2 = cp_to_dense(est2);
    CHECK(dense2.all_finite());
    CHECK(max_abs_diff(dense2, cp_to_dense(est1)) == 0.0);
    CHECK(rep2.total_count == rep1.total_count);
}

TEST_CASE("budget starvation fails the run without garbage output") {
    const int n = 20, r = 3;
    const auto [model, truth] = generate_synthetic(n, r, 19);
    SamplingOracle oracle(truth);
    SandwichConfig cfg = basic_config(r, n, 30, 3);  // reveals one column, then starves
    auto [est, report] = tensor_sandwich(oracle, cfg);
    CHECK(report.status == RunStatus::budget_exceeded);
    CHECK_FALSE(report.message.empty());
    CHECK(relative_error(cp_to_dense(est), truth) == doctest::Approx(1.0));
}

TEST_CASE("explicit slice selection is honored") {
    const int n = 16, r = 2;
    const auto [model, truth] = generate_synthetic(n, r, 29);
    SamplingOracle oracle(truth);
    SandwichConfig cfg = basic_config(r, n, 400, 7);
    cfg.explicit_slices = {3, 12};
    auto [est, report] = tensor_sandwich(oracle, cfg);
    REQUIRE(report.ok());
    // Slice 3 was fully processed: at least one probe in every column.
    bool slice3_touched = true;
    for (int j = 0; j < n; ++j) {
        bool column_touched = false;
        for (int i = 0; i < n && !column_touched; ++i)
            column_touched = oracle.omega1().contains(i, j, 3);
        slice3_touched = slice3_touched && column_touched;
    }
    CHECK(slice3_touched);
    CHECK_FALSE(oracle.omega1().contains(0, 0, 5));  // untouched slice
}

TEST_CASE("structural validation of the pipeline config") {
    const auto [model, truth] = generate_synthetic(10, 2, 31);
    SamplingOracle oracle(truth);
    SandwichConfig cfg = basic_config(2, 10, 200, 1);
    cfg.s = 1;
    CHECK_THROWS_AS(tensor_sandwich(oracle, cfg), std::invalid_argument);
    cfg.s = 2;
    cfg.gamma = 0;
    CHECK_THROWS_AS(tensor_sandwich(oracle, cfg), std::invalid_argument);
    cfg.gamma = 4;
    cfg.explicit_slices = {1, 1};
    CHECK_THROWS_AS(tensor_sandwich(oracle, cfg), std::invalid_argument);
    cfg.explicit_slices = {1, 100};
    CHECK_THROWS_AS(tensor_sandwich(oracle, cfg), std::out_of_range);
    cfg.explicit_slices.clear();
    cfg.slice_cfg.rank_cap = 11;
    CHECK_THROWS_AS(tensor_sandwich(oracle, cfg), std::invalid_argument);
}

TEST_CASE("rectangular tensors complete structurally") {
    CPModel model = ts::testing::random_model(12, 9, 7, 2, 37);
    const DenseTensor3 truth = cp_to_dense(model);
    SamplingOracle oracle(truth);
    SandwichConfig cfg;
    cfg.seed = 3;
    cfg.slice_cfg.rank_cap = 2;
    cfg.slice_cfg.per_column_samples = 8;
    cfg.slice_cfg.budget = 12 * 9;
    auto [est, report] = tensor_sandwich(oracle, cfg);
    REQUIRE(report.ok());
    CHECK(relative_error(cp_to_dense(est), truth) < 1e-8);
}

TEST_CASE("masked ALS is stationary at the exact factors") {
    const int n = 14, r = 2;
    const auto [model, truth] = generate_synthetic(n, r, 41);
    SamplingOracle oracle(truth);
    // Observe a generous random mask.
    Rng rng(5);
    while (oracle.query_count() < 6 * n * r * 3) {
        oracle.query(static_cast<int>(rng.uniform_index(n)), static_cast<int>(rng.uniform_index(n)),
                     static_cast<int>(rng.uniform_index(n)));
    }
    auto [refined, info] = masked_als(oracle, model, 3);
    CHECK(relative_error(cp_to_dense(refined), truth) < 1e-12);
    for (double resid : info.observed_residuals) CHECK(resid < 1e-10);
}

TEST_CASE("masked ALS never increases the observed residual") {
    const int n = 20, r = 3;
    const auto [model, clean] = generate_synthetic(n, r, 43);
    const DenseTensor3 noisy = add_noise_snr(clean, 30.0, 7);
    SamplingOracle oracle(noisy);
    SandwichConfig cfg = basic_config(r, n, 700, 9);
    cfg.slice_cfg.residual_tol = 1e-4;
    auto [est, report] = tensor_sandwich(oracle, cfg);
    REQUIRE(report.ok());
    auto [refined, info] = masked_als(oracle, est, 100);
    REQUIRE(info.observed_residuals.size() == 100);
    for (std::size_t i = 1; i < info.observed_residuals.size(); ++i)
        CHECK(info.observed_residuals[i] <=
              info.observed_residuals[i - 1] * (1.0 + 1e-12) + 1e-14);
}

TEST_CASE("ALS refinement improves the noisy estimate (median over trials)") {
    const int n = 60, r = 5, trials = 10;
    std::vector<double> ts_err, tsals_err;
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t seed = derive_seed(4242, {static_cast<std::uint64_t>(trial)});
        const auto [model, clean] = generate_synthetic(n, r, seed);
        const DenseTensor3 noisy = add_noise_snr(clean, 30.0, derive_seed(seed, {1}));

        const std::int64_t budget = budget_from_fraction(0.35, n, r);
        SandwichConfig cfg = basic_config(r, n, budget, derive_seed(seed, {2}));
        cfg.slice_cfg.residual_tol = 16.0 * std::pow(10.0, -30.0 / 5.0);

        SamplingOracle o1(noisy);
        auto [est, report] = tensor_sandwich(o1, cfg);
        if (!report.ok()) {
            ts_err.push_back(1.0);
            tsals_err.push_back(1.0);
            continue;
        }
        ts_err.push_back(relative_error(cp_to_dense(est), clean));

        SandwichConfig cfg_als = cfg;
        cfg_als.als_iters = 100;
        SamplingOracle o2(noisy);
        auto [est2, report2] = tensor_sandwich(o2, cfg_als);
        tsals_err.push_back(relative_error(cp_to_dense(est2), clean));
    }
    CHECK(median(tsals_err) < median(ts_err));
}
