#include "tensorsandwich/sampling_oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace ts {

std::vector<std::array<int, 3>> SampleSet::sorted_triples() const {
    std::vector<std::array<int, 3>> out;
    out.reserve(keys_.size());
    for (std::uint64_t key : keys_) {
        out.push_back({static_cast<int>(key >> 42), static_cast<int>((key >> 21) & 0x1fffff),
                       static_cast<int>(key & 0x1fffff)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

double SamplingOracle::query(int i, int j, int k) {
    source_.check_bounds(i, j, k);
    observed_.insert(i, j, k);
    (phase_ == SamplePhase::slice ? omega1_ : omega2_).insert(i, j, k);
    return source_(i, j, k);
}

double SamplingOracle::observed_value(int i, int j, int k) const {
    source_.check_bounds(i, j, k);
    if (!observed_.contains(i, j, k))
        throw std::logic_error("SamplingOracle: entry has not been observed");
    return source_(i, j, k);
}

SamplingOracle::Report SamplingOracle::sample_report() const {
    Report rep;
    rep.omega1 = omega1_.size();
    rep.omega2 = omega2_.size();
    rep.total = observed_.size();
    rep.fraction = static_cast<double>(rep.total) / static_cast<double>(total_entries());
    return rep;
}

}  // namespace ts
