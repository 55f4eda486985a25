#include "tensorsandwich/slice_completion.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "tensorsandwich/errors.hpp"
#include "tensorsandwich/rng.hpp"

namespace ts {

SliceCompletionConfig SliceCompletionConfig::from_theory(int rank, int n_rows, double mu0,
                                                         double delta) {
    if (rank < 1 || n_rows < 1) throw std::invalid_argument("from_theory: bad rank or n");
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("from_theory: delta in (0,1)");
    if (mu0 < 1.0) mu0 = 1.0;
    const double lg = std::log(static_cast<double>(rank) * rank / delta);
    const int d_raw = static_cast<int>(std::ceil(2.0 * mu0 * rank * lg * lg));
    SliceCompletionConfig cfg;
    cfg.rank_cap = rank;
    cfg.per_column_samples = std::clamp(d_raw, 1, n_rows);
    cfg.budget = static_cast<std::int64_t>(cfg.per_column_samples + rank) * n_rows;
    return cfg;
}

SliceCompletionConfig SliceCompletionConfig::from_budget(int rank, int n_rows,
                                                         std::int64_t budget) {
    if (rank < 1 || n_rows < 1) throw std::invalid_argument("from_budget: bad rank or n");
    SliceCompletionConfig cfg;
    cfg.rank_cap = rank;
    const std::int64_t d = budget / n_rows - 2 * static_cast<std::int64_t>(rank);
    cfg.per_column_samples = static_cast<int>(std::clamp<std::int64_t>(d, 1, n_rows));
    cfg.budget = budget;
    return cfg;
}

namespace {

class SliceBudget {
  public:
    explicit SliceBudget(std::int64_t budget) : budget_(budget) {}

    /// Queries column entries at the given rows, enforcing the distinct-entry
    /// budget before revealing anything new.
    void charge(const std::vector<int>& rows, int col) {
        std::int64_t fresh = 0;
        for (int row : rows)
            if (!seen_.count({row, col})) ++fresh;
        if (distinct_ + fresh > budget_)
            throw CompletionError(RunStatus::budget_exceeded,
                                  "slice budget " + std::to_string(budget_) +
                                      " exhausted at column " + std::to_string(col));
        for (int row : rows) seen_.insert({row, col});
        distinct_ += fresh;
    }

    std::int64_t distinct() const { return distinct_; }

  private:
    std::int64_t budget_;
    std::int64_t distinct_ = 0;
    std::set<std::pair<int, int>> seen_;
};

std::vector<int> all_rows(int n) {
    std::vector<int> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
    return rows;
}

}  // namespace

SliceCompletion complete_slice(SamplingOracle& oracle, int slice_index,
                               const SliceCompletionConfig& cfg) {
    const int n1 = oracle.n1(), n2 = oracle.n2();
    if (slice_index < 0 || slice_index >= oracle.n3())
        throw std::out_of_range("complete_slice: slice index out of range");
    if (cfg.rank_cap < 1) throw std::invalid_argument("complete_slice: rank_cap must be >= 1");
    if (cfg.per_column_samples < 1)
        throw std::invalid_argument("complete_slice: per_column_samples must be >= 1");
    if (cfg.residual_tol < 0.0)
        throw std::invalid_argument("complete_slice: residual_tol must be >= 0");

    const int d = std::min(cfg.per_column_samples, n1);
    Rng rng(cfg.seed);
    SliceBudget budget(cfg.budget);
    const std::vector<int> full_column = all_rows(n1);

    SliceCompletion result;
    result.completed = Eigen::MatrixXd::Zero(n1, n2);
    Eigen::MatrixXd basis(n1, 0);

    // Running per-entry energy estimate over everything queried in this
    // slice. Residual tests compare against max(own energy, typical column
    // energy): judging weak columns only against themselves would let a
    // noise floor masquerade as a new direction.
    double energy_sum = 0.0;
    std::int64_t energy_count = 0;
    const auto record_energy = [&](double v) {
        energy_sum += v * v;
        ++energy_count;
    };
    const auto mean_energy = [&] { return energy_count > 0 ? energy_sum / energy_count : 0.0; };

    for (int col = 0; col < n2; ++col) {
        const std::vector<int> probe_rows = rng.sample_without_replacement(n1, d);
        budget.charge(probe_rows, col);
        Eigen::VectorXd probe(d);
        for (int t = 0; t < d; ++t) {
            probe(t) = oracle.query(probe_rows[static_cast<std::size_t>(t)], col, slice_index);
            record_energy(probe(t));
        }

        bool need_full = basis.cols() == 0;
        Eigen::VectorXd coeffs;
        if (!need_full) {
            Eigen::MatrixXd basis_rows(d, basis.cols());
            for (int t = 0; t < d; ++t) basis_rows.row(t) = basis.row(probe_rows[static_cast<std::size_t>(t)]);
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis_rows);
            if (qr.rank() < basis.cols()) {
                // Restricted basis lost rank; the residual test is blind here.
                need_full = true;
            } else {
                coeffs = qr.solve(probe);
                const double resid_sq = (probe - basis_rows * coeffs).squaredNorm();
                const double floor = std::max(probe.squaredNorm(), d * mean_energy());
                need_full = resid_sq > cfg.residual_tol * floor;
            }
        }

        if (!need_full) {
            result.completed.col(col) = basis * coeffs;
            continue;
        }

        budget.charge(full_column, col);
        Eigen::VectorXd column(n1);
        for (int row = 0; row < n1; ++row) {
            column(row) = oracle.query(row, col, slice_index);
            record_energy(column(row));
        }
        ++result.fully_sampled_columns;
        result.completed.col(col) = column;

        // Grow the basis by the column's component orthogonal to it; twice
        // through Gram-Schmidt keeps the basis orthonormal to round-off.
        Eigen::VectorXd perp = column;
        if (basis.cols() > 0) {
            perp -= basis * (basis.transpose() * perp);
            perp -= basis * (basis.transpose() * perp);
        }
        const double floor = std::max(column.squaredNorm(), n1 * mean_energy());
        if (floor > 0.0 && perp.squaredNorm() > cfg.residual_tol * floor) {
            if (basis.cols() == cfg.rank_cap)
                throw CompletionError(RunStatus::rank_cap_exceeded,
                                      "slice column space exceeds rank cap " +
                                          std::to_string(cfg.rank_cap));
            basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
            basis.col(basis.cols() - 1) = perp.normalized();
        }
    }

    result.basis = std::move(basis);
    result.distinct_queries = budget.distinct();
    return result;
}

std::vector<SliceCompletion> complete_slices(SamplingOracle& oracle,
                                             const std::vector<int>& slice_indices,
                                             const SliceCompletionConfig& cfg) {
    if (slice_indices.size() < 2)
        throw std::invalid_argument("complete_slices: need at least 2 slices");
    std::set<int> uniq(slice_indices.begin(), slice_indices.end());
    if (uniq.size() != slice_indices.size())
        throw std::invalid_argument("complete_slices: duplicate slice indices");

    std::vector<SliceCompletion> out;
    out.reserve(slice_indices.size());
    for (int k : slice_indices) {
        SliceCompletionConfig per_slice = cfg;
        per_slice.seed = derive_seed(cfg.seed, {0x51u, static_cast<std::uint64_t>(k)});
        try {
            out.push_back(complete_slice(oracle, k, per_slice));
        } catch (const CompletionError& err) {
            throw CompletionError(err.status(),
                                  "slice " + std::to_string(k) + ": " + err.what());
        }
    }
    return out;
}

}  // namespace ts
