// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 1-5 are statistical pipeline checks at fixed seeds;
// criterion 2 runs the n = 200 configuration (fast with this slice backend);
// 6 and 7 are oracle equivalences and negative paths.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <vector>

#include "helpers.hpp"
#include "tensorsandwich/censored_lstsq.hpp"
#include "tensorsandwich/errors.hpp"
#include "tensorsandwich/experiments.hpp"
#include "tensorsandwich/fiber_sampler.hpp"
#include "tensorsandwich/jennrich.hpp"
#include "tensorsandwich/linalg.hpp"
#include "tensorsandwich/sandwich.hpp"
#include "tensorsandwich/synthetic.hpp"

using namespace ts;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kBaseSeed = 2024;
int failures = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %d (%s): %s  [%s]\n", criterion, name, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

std::vector<double> cell_errors(const SweepResult& result, std::int64_t budget, double snr,
                                const std::string& arm) {
    std::vector<double> errors;
    for (const TrialRow& row : result.rows) {
        if (row.slice_budget != budget) continue;
        if (!(row.snr_db == snr || (std::isinf(snr) && std::isinf(row.snr_db)))) continue;
        if (!arm.empty() && row.arm != arm) continue;
        errors.push_back(row.rel_error);
    }
    return errors;
}

// --- criterion 1 -----------------------------------------------------------

void criterion1_exactness() {
    const auto start = Clock::now();
    const int n = 40, r = 3, trials = 100;
    int good = 0;
    bool bound_ok = true;
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t seed = derive_seed(kBaseSeed, {1, static_cast<std::uint64_t>(trial)});
        const auto [model, truth] =
            generate_synthetic(n, r, seed, std::vector<double>(r, 1.0));
        const double mu0 = subspace_coherence(model.A);
        SliceCompletionConfig slice_cfg = SliceCompletionConfig::from_theory(r, n, mu0, 0.1);

        SandwichConfig cfg;
        cfg.seed = derive_seed(seed, {2});
        cfg.slice_cfg = slice_cfg;
        SamplingOracle oracle(truth);
        auto [est, rep] = tensor_sandwich(oracle, cfg);
        if (rep.ok() && relative_error(cp_to_dense(est), truth) < 1e-6) ++good;
        if (rep.total_count > 2 * slice_cfg.budget + 4 * static_cast<std::int64_t>(n) * r)
            bound_ok = false;
    }
    const double secs = seconds_since(start);
    report(1, "exactness at desk scale", good >= 95 && bound_ok && secs < 120.0,
           fmt("%d/100 exact, sample bound %s, %.1fs (< 120s)", good,
               bound_ok ? "held" : "violated", secs));
}

// --- criterion 2 -----------------------------------------------------------

void criterion2_paper_scale() {
    const auto start = Clock::now();
    const int n = 200, r = 20, trials = 10;
    const std::int64_t budget = budget_from_fraction(0.35, n, r);
    std::vector<double> errors;
    double max_fraction = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t seed = trial_seed(kBaseSeed, r, budget, trial);
        const auto [model, truth] = generate_synthetic(n, r, derive_seed(seed, {11}));
        SandwichConfig cfg;
        cfg.seed = derive_seed(seed, {12});
        cfg.slice_cfg = SliceCompletionConfig::from_budget(r, n, budget);
        SamplingOracle oracle(truth);
        auto [est, rep] = tensor_sandwich(oracle, cfg);
        errors.push_back(rep.ok() ? relative_error(cp_to_dense(est), truth) : 1.0);
        max_fraction = std::max(max_fraction, rep.fraction);
    }
    const double med = median(errors);
    const double secs = seconds_since(start);
    report(2, "paper-scale sample fraction", max_fraction <= 0.015 && med <= 1e-3 && secs < 1800.0,
           fmt("max fraction %.4f%% (<= 1.5%%), median rel err %.2e (<= 1e-3), %.1fs",
               100.0 * max_fraction, med, secs));
}

// --- criteria 3 and 4 ------------------------------------------------------

void criteria34_transition_and_noise() {
    const auto start3 = Clock::now();
    ExperimentSpec sample;
    sample.kind = SweepKind::sample;
    sample.n = 50;
    sample.ranks = {5};
    sample.trials = 10;
    sample.base_seed = kBaseSeed;
    const SweepResult sweep = run_sample_sweep(sample);

    std::vector<std::int64_t> budgets;
    for (double f : default_budget_fractions()) budgets.push_back(budget_from_fraction(f, 50, 5));
    const double inf = std::numeric_limits<double>::infinity();
    const double med_small = median(cell_errors(sweep, budgets.front(), inf, ""));
    const double med_large = median(cell_errors(sweep, budgets.back(), inf, ""));
    const double secs3 = seconds_since(start3);
    report(3, "phase transition", med_large <= 1e-6 && med_small >= 1e-2 && secs3 < 300.0,
           fmt("median %.2e at m=%lld, %.2e at m=%lld, %.1fs (< 300s)", med_small,
               static_cast<long long>(budgets.front()), med_large,
               static_cast<long long>(budgets.back()), secs3));

    ExperimentSpec noise;
    noise.kind = SweepKind::noise;
    noise.n = 50;
    noise.ranks = {5};
    noise.trials = 10;
    noise.base_seed = kBaseSeed;
    noise.budget_fraction = 0.7;
    noise.snr_db = {10.0, 20.0, 30.0, 40.0, inf};
    const SweepResult nsweep = run_noise_sweep(noise);
    const std::int64_t nbudget = budget_from_fraction(0.7, 50, 5);

    std::vector<double> medians;
    for (double snr : noise.snr_db) medians.push_back(median(cell_errors(nsweep, nbudget, snr, "")));
    int inversions = 0;
    for (std::size_t i = 1; i < medians.size(); ++i)
        if (medians[i] > medians[i - 1]) ++inversions;
    const double floor_ratio = medians.back() / std::max(med_large, 1e-300);
    const bool floor_ok = floor_ratio <= 10.0 && floor_ratio >= 0.1;
    report(4, "noise monotonicity",
           inversions <= 1 && floor_ok,
           fmt("medians 10..inf dB: %.2e %.2e %.2e %.2e %.2e, inversions %d (<= 1), "
               "inf/noiseless floor ratio %.2f",
               medians[0], medians[1], medians[2], medians[3], medians[4], inversions,
               floor_ratio));
}

// --- criterion 5 -----------------------------------------------------------

void criterion5_als() {
    const auto start = Clock::now();
    ExperimentSpec spec;
    spec.kind = SweepKind::als_compare;
    spec.n = 50;
    spec.ranks = {5};
    spec.snr_db = {30.0};
    spec.trials = 10;
    spec.base_seed = kBaseSeed;
    spec.budget_fraction = 0.35;
    spec.als_iters = 100;
    const SweepResult sweep = run_als_compare(spec);
    const std::int64_t budget = budget_from_fraction(0.35, 50, 5);

    const double med_ts = median(cell_errors(sweep, budget, 30.0, "TS"));
    const double med_tsals = median(cell_errors(sweep, budget, 30.0, "TS_ALS"));
    const double med_als = median(cell_errors(sweep, budget, 30.0, "ALS"));
    const double secs = seconds_since(start);
    report(5, "ALS refinement ordering",
           med_tsals < med_ts && med_als >= 10.0 * med_tsals && secs < 600.0,
           fmt("median TS %.2e, TS+ALS %.2e, ALS %.2e, %.1fs (< 600s)", med_ts, med_tsals,
               med_als, secs));
}

// --- criterion 6 -----------------------------------------------------------

void criterion6_oracle_equivalences() {
    bool pass = true;
    std::string detail;

    // cp_to_dense against the triple loop on all shapes <= 5.
    std::uint64_t seed = 7000;
    double worst = 0.0;
    for (int n1 = 1; n1 <= 5; ++n1)
        for (int n2 = 1; n2 <= 5; ++n2)
            for (int n3 = 1; n3 <= 5; ++n3)
                for (int r = 1; r <= 3; ++r) {
                    const CPModel m = ts::testing::random_model(n1, n2, n3, r, seed++);
                    worst = std::max(
                        worst, ts::testing::max_abs_diff(cp_to_dense(m),
                                                         ts::testing::triple_loop_dense(m)));
                }
    pass = pass && worst < 1e-12;
    detail += fmt("triple-loop %.1e; ", worst);

    // unfold3 == C (A kr B)^T.
    double unfold_worst = 0.0;
    for (std::uint64_t s2 = 0; s2 < 5; ++s2) {
        const auto [m, t] = generate_synthetic(12, 3, 7100 + s2);
        unfold_worst = std::max(
            unfold_worst,
            (unfold3(t) - m.C * khatri_rao(m.A, m.B).transpose()).cwiseAbs().maxCoeff());
    }
    pass = pass && unfold_worst < 1e-12;
    detail += fmt("unfold identity %.1e; ", unfold_worst);

    // Jennrich reconstruction identity.
    double recon_worst = 0.0;
    for (std::uint64_t s2 = 0; s2 < 20; ++s2) {
        const auto [m, t] = generate_synthetic(20, 3, 7200 + s2);
        std::vector<Eigen::MatrixXd> slices = {t.slice(0), t.slice(1)};
        Rng rng(derive_seed(7300, {s2}));
        const Eigen::MatrixXd T_u = aggregate(slices, draw_sphere(2, rng));
        const Eigen::MatrixXd T_v = aggregate(slices, draw_sphere(2, rng));
        const JennrichResult jr = jennrich_factors(T_u, T_v, 3);
        recon_worst = std::max(recon_worst,
                               (jr.A_hat * jr.B_hat.transpose() - T_u).norm() / T_u.norm());
    }
    pass = pass && recon_worst <= 1e-8;
    detail += fmt("jennrich identity %.1e; ", recon_worst);

    // Fiber selection invertibility across 100 seeds.
    double min_sigma = std::numeric_limits<double>::infinity();
    for (std::uint64_t s2 = 0; s2 < 100; ++s2) {
        const Eigen::MatrixXd A = ts::testing::gaussian_matrix(20, 4, derive_seed(7400, {s2, 1}));
        const Eigen::MatrixXd B = ts::testing::gaussian_matrix(20, 4, derive_seed(7400, {s2, 2}));
        const auto pairs = select_fibers(A, B, 4);
        Eigen::MatrixXd sub(pairs.size(), 4);
        for (std::size_t t = 0; t < pairs.size(); ++t)
            sub.row(static_cast<Eigen::Index>(t)) =
                A.row(pairs[t].first).cwiseProduct(B.row(pairs[t].second));
        min_sigma = std::min(min_sigma,
                             Eigen::JacobiSVD<Eigen::MatrixXd>(sub).singularValues().minCoeff());
    }
    pass = pass && min_sigma > 0.0;
    detail += fmt("fiber sigma_min %.1e; ", min_sigma);

    // Censored solve with full observation == unrestricted least squares.
    const auto [m6, t6] = generate_synthetic(9, 3, 7500);
    std::vector<std::pair<int, int>> all_pairs;
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) all_pairs.emplace_back(i, j);
    SamplingOracle oracle6(t6);
    const Eigen::MatrixXd censored = solve_c_factor(m6.A, m6.B, oracle6, all_pairs, 9);
    const Eigen::MatrixXd direct = khatri_rao(m6.A, m6.B)
                                       .colPivHouseholderQr()
                                       .solve(unfold3(t6).transpose())
                                       .transpose();
    const double solve_diff = (censored - direct).cwiseAbs().maxCoeff();
    pass = pass && solve_diff < 1e-10;
    detail += fmt("censored==direct %.1e", solve_diff);

    report(6, "oracle equivalences", pass, detail);
}

// --- criterion 7 -----------------------------------------------------------

void criterion7_negative_paths() {
    bool krank_ok = false, budget_ok = false, poison_ok = false;

    {  // k-rank violation
        CPModel m = ts::testing::random_model(10, 10, 10, 3, 7600);
        m.C.row(1) = m.C.row(0);
        const DenseTensor3 t = cp_to_dense(m);
        std::vector<Eigen::MatrixXd> slices = {t.slice(0), t.slice(1)};
        Rng rng(4);
        try {
            jennrich_factors(aggregate(slices, draw_sphere(2, rng)),
                             aggregate(slices, draw_sphere(2, rng)), 3);
        } catch (const CompletionError& err) {
            krank_ok = err.status() == RunStatus::degenerate_eigenvalues;
        }
    }

    {  // starved budget
        const auto [m, t] = generate_synthetic(20, 3, 7700);
        SamplingOracle oracle(t);
        SandwichConfig cfg;
        cfg.seed = 1;
        cfg.slice_cfg = SliceCompletionConfig::from_budget(3, 20, 30);
        auto [est, rep] = tensor_sandwich(oracle, cfg);
        budget_ok = rep.status == RunStatus::budget_exceeded;
    }

    {  // poisoned oracle: unobserved entries are NaN, estimate must be clean
        const int n = 24, r = 2;
        const auto [m, truth] = generate_synthetic(n, r, 7800);
        SandwichConfig cfg;
        cfg.seed = 5;
        cfg.slice_cfg = SliceCompletionConfig::from_budget(r, n, 700);
        SamplingOracle first(truth);
        auto [est1, rep1] = tensor_sandwich(first, cfg);
        DenseTensor3 poisoned(n, n, n,
                              std::vector<double>(truth.values().size(),
                                                  std::numeric_limits<double>::quiet_NaN()));
        for (const auto& tr : first.observed_triples())
            poisoned.at(tr[0], tr[1], tr[2]) = truth(tr[0], tr[1], tr[2]);
        SamplingOracle second(poisoned);
        auto [est2, rep2] = tensor_sandwich(second, cfg);
        poison_ok = rep1.ok() && rep2.ok() && cp_to_dense(est2).all_finite() &&
                    ts::testing::max_abs_diff(cp_to_dense(est1), cp_to_dense(est2)) == 0.0;
    }

    report(7, "negative paths", krank_ok && budget_ok && poison_ok,
           fmt("k-rank violation %s, starved budget %s, poisoned oracle %s",
               krank_ok ? "detected" : "MISSED", budget_ok ? "detected" : "MISSED",
               poison_ok ? "clean" : "LEAKED"));
}

}  // namespace

int main() {
    criterion1_exactness();
    criterion2_paper_scale();
    criteria34_transition_and_noise();
    criterion5_als();
    criterion6_oracle_equivalences();
    criterion7_negative_paths();
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
