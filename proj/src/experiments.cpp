#include "tensorsandwich/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>

#include "tensorsandwich/rng.hpp"
#include "tensorsandwich/synthetic.hpp"

namespace ts {

SweepKind sweep_kind_from_string(const std::string& s) {
    if (s == "sample") return SweepKind::sample;
    if (s == "noise") return SweepKind::noise;
    if (s == "als") return SweepKind::als_compare;
    throw std::invalid_argument("unknown sweep kind: " + s + " (want sample|noise|als)");
}

std::string to_string(SweepKind kind) {
    switch (kind) {
        case SweepKind::sample: return "sample";
        case SweepKind::noise: return "noise";
        case SweepKind::als_compare: return "als";
    }
    return "unknown";
}

void ExperimentSpec::validate() const {
    if (n < 2) throw std::invalid_argument("spec: n must be >= 2");
    if (ranks.empty()) throw std::invalid_argument("spec: ranks must be nonempty");
    for (int r : ranks)
        if (r < 1 || r > n) throw std::invalid_argument("spec: ranks must be in [1, n]");
    if (trials < 1) throw std::invalid_argument("spec: trials must be >= 1");
    if (s < 2) throw std::invalid_argument("spec: s must be >= 2");
    if (gamma < 1) throw std::invalid_argument("spec: gamma must be >= 1");
    if (kind == SweepKind::sample && budgets.empty() && budget_fractions.empty() &&
        default_budget_fractions().empty())
        throw std::invalid_argument("spec: no budgets");
    if (kind != SweepKind::sample && snr_db.empty())
        throw std::invalid_argument("spec: snr list must be nonempty");
}

std::uint64_t trial_seed(std::uint64_t base_seed, int rank, std::int64_t budget, int trial) {
    return derive_seed(base_seed, {static_cast<std::uint64_t>(rank),
                                   static_cast<std::uint64_t>(budget),
                                   static_cast<std::uint64_t>(trial)});
}

std::int64_t budget_from_fraction(double fraction, int n, int rank) {
    const double lg = std::log(static_cast<double>(n));
    return static_cast<std::int64_t>(std::llround(fraction * n * rank * lg * lg));
}

std::vector<double> default_budget_fractions() {
    // Six geometric points spanning [0.035, 0.7].
    std::vector<double> fracs;
    const double lo = 0.035, hi = 0.7;
    for (int i = 0; i < 6; ++i) fracs.push_back(lo * std::pow(hi / lo, i / 5.0));
    return fracs;
}

namespace {

using Clock = std::chrono::steady_clock;

double snr_scaled_residual_tol(double snr_db) {
    // ||N||/||T|| = 10^(-snr/10); the residual test compares energies, so the
    // noise floor scales as the square. The 16x margin keeps dependent
    // columns below the threshold without hiding genuinely new directions.
    if (std::isinf(snr_db)) return 1e-8;
    return std::max(1e-8, 16.0 * std::pow(10.0, -snr_db / 5.0));
}

struct TrialInputs {
    DenseTensor3 truth;
    DenseTensor3 source;  // truth, noise-corrupted when snr is finite
};

TrialInputs make_trial_data(const ExperimentSpec& spec, int rank, double snr,
                            std::uint64_t tseed) {
    auto [model, tensor] = generate_synthetic(spec.n, rank, derive_seed(tseed, {11}), spec.weights);
    TrialInputs data;
    data.source = std::isinf(snr)
                      ? tensor
                      : add_noise_snr(tensor, snr,
                                      derive_seed(tseed, {13, std::bit_cast<std::uint64_t>(snr)}));
    data.truth = std::move(tensor);
    return data;
}

SandwichConfig make_config(const ExperimentSpec& spec, int rank, std::int64_t budget, double snr,
                           std::uint64_t tseed, int als_iters) {
    SandwichConfig cfg;
    cfg.s = spec.s;
    cfg.gamma = spec.gamma;
    cfg.delta = spec.delta;
    cfg.seed = derive_seed(tseed, {12});
    cfg.als_iters = als_iters;
    cfg.slice_cfg = SliceCompletionConfig::from_budget(rank, spec.n, budget);
    cfg.slice_cfg.residual_tol = snr_scaled_residual_tol(snr);
    return cfg;
}

TrialRow run_pipeline_trial(const ExperimentSpec& spec, int rank, std::int64_t budget, double snr,
                            int trial, int als_iters, const TrialInputs& data) {
    const std::uint64_t tseed = trial_seed(spec.base_seed, rank, budget, trial);
    TrialRow row;
    row.rank = rank;
    row.slice_budget = budget;
    row.snr_db = snr;
    row.trial = trial;
    row.seed = tseed;

    SamplingOracle oracle(data.source);
    const auto start = Clock::now();
    auto [model, report] = tensor_sandwich(oracle, make_config(spec, rank, budget, snr, tseed, als_iters));
    row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();

    row.status = report.status;
    row.omega1 = report.omega1_count;
    row.omega2 = report.omega2_count;
    row.total = report.total_count;
    row.fraction = report.fraction;
    row.rel_error = relative_error(cp_to_dense(model), data.truth);
    return row;
}

void run_tasks(int threads, std::size_t count, const std::function<void(std::size_t)>& task) {
    const int workers = std::clamp(threads, 1, 64);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) task(i);
        });
    for (auto& t : pool) t.join();
}

std::vector<std::int64_t> resolve_budgets(const ExperimentSpec& spec, int rank) {
    if (!spec.budgets.empty()) return spec.budgets;
    const std::vector<double> fracs =
        spec.budget_fractions.empty() ? default_budget_fractions() : spec.budget_fractions;
    std::vector<std::int64_t> budgets;
    budgets.reserve(fracs.size());
    for (double f : fracs) budgets.push_back(budget_from_fraction(f, spec.n, rank));
    return budgets;
}

}  // namespace

SweepResult run_sample_sweep(const ExperimentSpec& spec) {
    spec.validate();
    const double inf = std::numeric_limits<double>::infinity();

    struct Cell {
        int rank;
        std::int64_t budget;
        int trial;
    };
    std::vector<Cell> cells;
    for (int rank : spec.ranks)
        for (std::int64_t budget : resolve_budgets(spec, rank))
            for (int trial = 0; trial < spec.trials; ++trial) cells.push_back({rank, budget, trial});

    SweepResult result;
    result.kind = SweepKind::sample;
    result.rows.resize(cells.size());
    run_tasks(spec.threads, cells.size(), [&](std::size_t idx) {
        const Cell& c = cells[idx];
        const auto data = make_trial_data(spec, c.rank, inf,
                                          trial_seed(spec.base_seed, c.rank, c.budget, c.trial));
        result.rows[idx] = run_pipeline_trial(spec, c.rank, c.budget, inf, c.trial, 0, data);
    });
    return result;
}

SweepResult run_noise_sweep(const ExperimentSpec& spec) {
    spec.validate();

    struct Cell {
        int rank;
        double snr;
        int trial;
    };
    std::vector<Cell> cells;
    for (int rank : spec.ranks)
        for (double snr : spec.snr_db)
            for (int trial = 0; trial < spec.trials; ++trial) cells.push_back({rank, snr, trial});

    SweepResult result;
    result.kind = SweepKind::noise;
    result.rows.resize(cells.size());
    run_tasks(spec.threads, cells.size(), [&](std::size_t idx) {
        const Cell& c = cells[idx];
        const std::int64_t budget = budget_from_fraction(spec.budget_fraction, spec.n, c.rank);
        const auto data = make_trial_data(spec, c.rank, c.snr,
                                          trial_seed(spec.base_seed, c.rank, budget, c.trial));
        result.rows[idx] = run_pipeline_trial(spec, c.rank, budget, c.snr, c.trial, 0, data);
    });
    return result;
}

SweepResult run_als_compare(const ExperimentSpec& spec) {
    spec.validate();

    struct Cell {
        int rank;
        double snr;
        int trial;
    };
    std::vector<Cell> cells;
    for (int rank : spec.ranks)
        for (double snr : spec.snr_db)
            for (int trial = 0; trial < spec.trials; ++trial) cells.push_back({rank, snr, trial});

    SweepResult result;
    result.kind = SweepKind::als_compare;
    result.rows.resize(cells.size() * 3);  // arm order per cell: TS, TS_ALS, ALS
    run_tasks(spec.threads, cells.size(), [&](std::size_t idx) {
        const Cell& c = cells[idx];
        const std::int64_t budget = budget_from_fraction(spec.budget_fraction, spec.n, c.rank);
        const std::uint64_t tseed = trial_seed(spec.base_seed, c.rank, budget, c.trial);
        const auto data = make_trial_data(spec, c.rank, c.snr, tseed);

        TrialRow ts_row = run_pipeline_trial(spec, c.rank, budget, c.snr, c.trial, 0, data);
        ts_row.arm = "TS";

        TrialRow tsals_row =
            run_pipeline_trial(spec, c.rank, budget, c.snr, c.trial, spec.als_iters, data);
        tsals_row.arm = "TS_ALS";

        // ALS alone: seeded random init on a uniform mask of the same
        // cardinality as the adaptive pattern, same source data.
        TrialRow als_row = ts_row;
        als_row.arm = "ALS";
        {
            SamplingOracle oracle(data.source);
            const std::int64_t target = ts_row.total;
            Rng mask_rng(derive_seed(tseed, {15}));
            const auto start = Clock::now();
            while (oracle.query_count() < target) {
                const std::int64_t flat = mask_rng.uniform_index(oracle.total_entries());
                const int i = static_cast<int>(flat / (spec.n * static_cast<std::int64_t>(spec.n)));
                const int rest = static_cast<int>(flat % (spec.n * static_cast<std::int64_t>(spec.n)));
                oracle.query(i, rest / spec.n, rest % spec.n);
            }
            Rng init_rng(derive_seed(tseed, {14}));
            CPModel init;
            init.A.resize(spec.n, c.rank);
            init.B.resize(spec.n, c.rank);
            init.C.resize(spec.n, c.rank);
            for (auto* factor : {&init.A, &init.B, &init.C})
                for (int col = 0; col < c.rank; ++col) {
                    for (int row = 0; row < spec.n; ++row) (*factor)(row, col) = init_rng.gaussian();
                    factor->col(col).normalize();
                }
            const CPModel als_model = masked_als(oracle, init, spec.als_iters).first;
            als_row.wall_ms =
                std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
            als_row.status = RunStatus::success;
            const auto counts = oracle.sample_report();
            als_row.omega1 = counts.omega1;
            als_row.omega2 = counts.omega2;
            als_row.total = counts.total;
            als_row.fraction = counts.fraction;
            als_row.rel_error = relative_error(cp_to_dense(als_model), data.truth);
        }

        result.rows[idx * 3 + 0] = std::move(ts_row);
        result.rows[idx * 3 + 1] = std::move(tsals_row);
        result.rows[idx * 3 + 2] = std::move(als_row);
    });
    return result;
}

SweepResult run_sweep(const ExperimentSpec& spec) {
    switch (spec.kind) {
        case SweepKind::sample: return run_sample_sweep(spec);
        case SweepKind::noise: return run_noise_sweep(spec);
        case SweepKind::als_compare: return run_als_compare(spec);
    }
    throw std::invalid_argument("run_sweep: bad kind");
}

namespace {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_snr(double v) {
    if (std::isinf(v)) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string csv_header(SweepKind kind) {
    switch (kind) {
        case SweepKind::sample:
            return "rank,slice_budget,trial,seed,omega1,omega2,total,fraction,rel_error,status,wall_ms";
        case SweepKind::noise:
            return "rank,snr_db,slice_budget,trial,seed,omega1,omega2,total,fraction,rel_error,status,wall_ms";
        case SweepKind::als_compare:
            return "rank,snr_db,arm,slice_budget,trial,seed,omega1,omega2,total,fraction,rel_error,status,wall_ms";
    }
    return {};
}

std::string to_csv(const SweepResult& result) {
    std::string out = csv_header(result.kind) + "\n";
    for (const TrialRow& row : result.rows) {
        out += std::to_string(row.rank);
        if (result.kind != SweepKind::sample) out += "," + format_snr(row.snr_db);
        if (result.kind == SweepKind::als_compare) out += "," + row.arm;
        out += "," + std::to_string(row.slice_budget);
        out += "," + std::to_string(row.trial);
        out += "," + std::to_string(row.seed);
        out += "," + std::to_string(row.omega1);
        out += "," + std::to_string(row.omega2);
        out += "," + std::to_string(row.total);
        out += "," + format_double(row.fraction);
        out += "," + format_double(row.rel_error);
        out += "," + to_string(row.status);
        out += "," + std::to_string(row.wall_ms);
        out += "\n";
    }
    return out;
}

void write_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << to_csv(result);
    if (!out) throw std::runtime_error("write failed: " + path);
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::string to_summary_csv(const SweepResult& result) {
    // Cell key: everything but trial; figures report the median, the text
    // reports averages, so both statistics are emitted.
    struct CellStats {
        std::vector<double> errors;
        int successes = 0;
    };
    std::map<std::string, CellStats> cells;  // key is the formatted prefix
    std::vector<std::string> order;
    for (const TrialRow& row : result.rows) {
        std::string key = std::to_string(row.rank);
        if (result.kind != SweepKind::sample) key += "," + format_snr(row.snr_db);
        if (result.kind == SweepKind::als_compare) key += "," + row.arm;
        key += "," + std::to_string(row.slice_budget);
        auto [it, fresh] = cells.try_emplace(key);
        if (fresh) order.push_back(key);
        it->second.errors.push_back(row.rel_error);
        if (row.status == RunStatus::success) ++it->second.successes;
    }

    std::string header = "rank";
    if (result.kind != SweepKind::sample) header += ",snr_db";
    if (result.kind == SweepKind::als_compare) header += ",arm";
    header += ",slice_budget,trials,successes,median_rel_error,mean_rel_error";

    std::string out = header + "\n";
    for (const std::string& key : order) {
        const CellStats& stats = cells.at(key);
        double mean = 0.0;
        for (double e : stats.errors) mean += e;
        mean /= static_cast<double>(stats.errors.size());
        out += key;
        out += "," + std::to_string(stats.errors.size());
        out += "," + std::to_string(stats.successes);
        out += "," + format_double(median(stats.errors));
        out += "," + format_double(mean);
        out += "\n";
    }
    return out;
}

void write_summary_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << to_summary_csv(result);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ts
