#pragma once

#include <array>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "tensorsandwich/dense_tensor.hpp"

namespace ts {

/// Set of index triples (i, j, k), 0-based, no duplicates. Indices must fit
/// in 21 bits each (n up to ~2e6, far beyond anything this library runs).
class SampleSet {
  public:
    /// Returns true when the triple was new.
    bool insert(int i, int j, int k) { return keys_.insert(pack(i, j, k)).second; }
    bool contains(int i, int j, int k) const { return keys_.count(pack(i, j, k)) > 0; }
    std::int64_t size() const { return static_cast<std::int64_t>(keys_.size()); }

    /// Triples sorted lexicographically (deterministic iteration order).
    std::vector<std::array<int, 3>> sorted_triples() const;

  private:
    static std::uint64_t pack(int i, int j, int k) {
        return (static_cast<std::uint64_t>(i) << 42) | (static_cast<std::uint64_t>(j) << 21) |
               static_cast<std::uint64_t>(k);
    }

    std::unordered_set<std::uint64_t> keys_;
};

/// Which sampling round a query belongs to. Slice completion reveals Omega_1,
/// the fiber/censored-least-squares round reveals Omega_2.
enum class SamplePhase { slice, fiber };

/// Sole gateway to ground-truth entries. Reconstruction code never touches
/// the underlying tensor directly; every read goes through query(), which
/// records the location. Re-queries of an already observed entry are free:
/// the paper's accounting counts entries observed, not reads.
class SamplingOracle {
  public:
    explicit SamplingOracle(DenseTensor3 source) : source_(std::move(source)) {}

    int n1() const { return source_.n1(); }
    int n2() const { return source_.n2(); }
    int n3() const { return source_.n3(); }
    std::int64_t total_entries() const { return source_.size(); }

    void set_phase(SamplePhase phase) { phase_ = phase; }
    SamplePhase phase() const { return phase_; }

    /// Reveals entry (i, j, k), recording it in the current phase set.
    double query(int i, int j, int k);

    /// Value of an already revealed entry. Throws std::logic_error if the
    /// entry has never been queried; this is what keeps refinement passes
    /// (masked ALS) honest about using only observed data.
    double observed_value(int i, int j, int k) const;

    std::int64_t query_count() const { return observed_.size(); }
    const SampleSet& observed() const { return observed_; }
    const SampleSet& omega1() const { return omega1_; }
    const SampleSet& omega2() const { return omega2_; }

    struct Report {
        std::int64_t omega1 = 0;
        std::int64_t omega2 = 0;
        std::int64_t total = 0;
        double fraction = 0.0;
    };

    /// Exact per-phase counts; total deduplicates overlap between phases.
    Report sample_report() const;

    /// Observed triples in sorted order.
    std::vector<std::array<int, 3>> observed_triples() const { return observed_.sorted_triples(); }

  private:
    DenseTensor3 source_;
    SampleSet observed_, omega1_, omega2_;
    SamplePhase phase_ = SamplePhase::slice;
};

}  // namespace ts
