#include "tensorsandwich/sandwich.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include "tensorsandwich/censored_lstsq.hpp"
#include "tensorsandwich/fiber_sampler.hpp"
#include "tensorsandwich/rng.hpp"

namespace ts {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<int> choose_slices(const SandwichConfig& cfg, int n3) {
    if (!cfg.explicit_slices.empty()) {
        if (static_cast<int>(cfg.explicit_slices.size()) != cfg.s)
            throw std::invalid_argument("tensor_sandwich: explicit slice list must have s entries");
        for (int k : cfg.explicit_slices)
            if (k < 0 || k >= n3)
                throw std::out_of_range("tensor_sandwich: explicit slice index out of range");
        std::set<int> uniq(cfg.explicit_slices.begin(), cfg.explicit_slices.end());
        if (static_cast<int>(uniq.size()) != cfg.s)
            throw std::invalid_argument("tensor_sandwich: duplicate explicit slice indices");
        return cfg.explicit_slices;
    }
    Rng rng(derive_seed(cfg.seed, {1}));
    std::vector<int> slices = rng.sample_without_replacement(n3, cfg.s);
    std::sort(slices.begin(), slices.end());
    return slices;
}

}  // namespace

std::pair<CPModel, CompletionReport> tensor_sandwich(SamplingOracle& oracle,
                                                     const SandwichConfig& cfg) {
    const int n1 = oracle.n1(), n2 = oracle.n2(), n3 = oracle.n3();
    const int rank = cfg.slice_cfg.rank_cap;
    if (cfg.s < 2) throw std::invalid_argument("tensor_sandwich: s must be >= 2");
    if (cfg.s > n3) throw std::invalid_argument("tensor_sandwich: s exceeds slice count");
    if (cfg.gamma < 1) throw std::invalid_argument("tensor_sandwich: gamma must be >= 1");
    if (rank < 1 || rank > std::min(n1, n2))
        throw std::invalid_argument("tensor_sandwich: rank must be in [1, min(n1, n2)]");

    CompletionReport report;
    CPModel model = CPModel::zeros(n1, n2, n3, rank);

    const auto fill_counts = [&] {
        const auto counts = oracle.sample_report();
        report.omega1_count = counts.omega1;
        report.omega2_count = counts.omega2;
        report.total_count = counts.total;
        report.fraction = counts.fraction;
    };

    try {
        // Slice Complete Phase
        auto t0 = Clock::now();
        const std::vector<int> slices = choose_slices(cfg, n3);
        SliceCompletionConfig slice_cfg = cfg.slice_cfg;
        slice_cfg.seed = derive_seed(cfg.seed, {2});
        oracle.set_phase(SamplePhase::slice);
        std::vector<SliceCompletion> completions = complete_slices(oracle, slices, slice_cfg);
        std::vector<Eigen::MatrixXd> completed;
        completed.reserve(completions.size());
        for (auto& c : completions) {
            report.fully_sampled_columns.push_back(c.fully_sampled_columns);
            completed.push_back(std::move(c.completed));
        }
        report.phase_ms["slice"] = ms_since(t0);

        // Jennrich Complete Phase (redraws reuse the completed slices; the
        // sphere vectors cost no samples)
        t0 = Clock::now();
        JennrichResult factors;
        bool have_factors = false;
        CompletionError last(RunStatus::degenerate_eigenvalues, "unreached");
        for (int attempt = 0; attempt <= cfg.max_jennrich_redraws && !have_factors; ++attempt) {
            Rng sphere_rng(derive_seed(cfg.seed, {3, static_cast<std::uint64_t>(attempt)}));
            const Eigen::VectorXd u = draw_sphere(cfg.s, sphere_rng);
            const Eigen::VectorXd v = draw_sphere(cfg.s, sphere_rng);
            try {
                factors = jennrich_factors(aggregate(completed, u), aggregate(completed, v),
                                           rank, cfg.jennrich);
                have_factors = true;
            } catch (const CompletionError& err) {
                last = err;
                if (attempt < cfg.max_jennrich_redraws) report.jennrich_redraws = attempt + 1;
            }
        }
        if (!have_factors) throw last;
        report.phase_ms["jennrich"] = ms_since(t0);

        // Censored Least Squares Phase
        t0 = Clock::now();
        oracle.set_phase(SamplePhase::fiber);
        const auto pairs = select_fibers(factors.A_hat, factors.B_hat, cfg.gamma);
        model.A = factors.A_hat;
        model.B = factors.B_hat;
        model.C = solve_c_factor(model.A, model.B, oracle, pairs, n3);
        report.phase_ms["censored"] = ms_since(t0);

        if (cfg.als_iters > 0) {
            t0 = Clock::now();
            model = masked_als(oracle, model, cfg.als_iters).first;
            report.phase_ms["als"] = ms_since(t0);
        }
    } catch (const CompletionError& err) {
        report.status = err.status();
        report.message = err.what();
        fill_counts();
        return {CPModel::zeros(n1, n2, n3, rank), report};
    }

    fill_counts();
    return {model, report};
}

namespace {

/// Row-wise censored least-squares update of one factor. For each row of the
/// target factor, the design matrix rows are elementwise products of the
/// other two factors' rows at that row's observed entries.
void update_factor(Eigen::MatrixXd& target,
                   const std::vector<std::vector<std::array<int, 3>>>& by_row,
                   const Eigen::MatrixXd& F1, const Eigen::MatrixXd& F2, int i1, int i2,
                   const SamplingOracle& oracle, int& skipped) {
    const int r = static_cast<int>(target.cols());
    for (int row = 0; row < static_cast<int>(by_row.size()); ++row) {
        const auto& entries = by_row[static_cast<std::size_t>(row)];
        if (static_cast<int>(entries.size()) < r) {
            ++skipped;
            continue;
        }
        Eigen::MatrixXd design(entries.size(), r);
        Eigen::VectorXd rhs(entries.size());
        for (std::size_t t = 0; t < entries.size(); ++t) {
            const auto& e = entries[t];
            design.row(static_cast<Eigen::Index>(t)) =
                F1.row(e[static_cast<std::size_t>(i1)])
                    .cwiseProduct(F2.row(e[static_cast<std::size_t>(i2)]));
            rhs(static_cast<Eigen::Index>(t)) = oracle.observed_value(e[0], e[1], e[2]);
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        if (qr.rank() < r) {
            ++skipped;
            continue;
        }
        target.row(row) = qr.solve(rhs).transpose();
    }
}

}  // namespace

std::pair<CPModel, AlsInfo> masked_als(const SamplingOracle& oracle, CPModel init, int iters) {
    init.validate();
    if (init.n1() != oracle.n1() || init.n2() != oracle.n2() || init.n3() != oracle.n3())
        throw std::invalid_argument("masked_als: init dims do not match the oracle");
    if (iters < 0) throw std::invalid_argument("masked_als: iters must be >= 0");

    const auto triples = oracle.observed_triples();
    std::vector<std::vector<std::array<int, 3>>> by_i(static_cast<std::size_t>(oracle.n1()));
    std::vector<std::vector<std::array<int, 3>>> by_j(static_cast<std::size_t>(oracle.n2()));
    std::vector<std::vector<std::array<int, 3>>> by_k(static_cast<std::size_t>(oracle.n3()));
    for (const auto& t : triples) {
        by_i[static_cast<std::size_t>(t[0])].push_back(t);
        by_j[static_cast<std::size_t>(t[1])].push_back(t);
        by_k[static_cast<std::size_t>(t[2])].push_back(t);
    }

    const auto observed_residual = [&](const CPModel& m) {
        double sq = 0.0;
        for (const auto& t : triples) {
            const double est = m.A.row(t[0]).cwiseProduct(m.B.row(t[1])).dot(m.C.row(t[2]));
            const double d = oracle.observed_value(t[0], t[1], t[2]) - est;
            sq += d * d;
        }
        return std::sqrt(sq);
    };

    AlsInfo info;
    CPModel model = std::move(init);
    for (int sweep = 0; sweep < iters; ++sweep) {
        update_factor(model.A, by_i, model.B, model.C, 1, 2, oracle, info.skipped_row_updates);
        update_factor(model.B, by_j, model.A, model.C, 0, 2, oracle, info.skipped_row_updates);
        update_factor(model.C, by_k, model.A, model.B, 0, 1, oracle, info.skipped_row_updates);
        info.observed_residuals.push_back(observed_residual(model));
    }
    return {model, info};
}

}  // namespace ts
