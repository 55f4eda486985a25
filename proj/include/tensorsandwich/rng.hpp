#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace ts {

/// SplitMix64 finalizer. Used as the mixing step of the seed-derivation
/// scheme below and nowhere else.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a list of integer
/// tags (experiment cell coordinates, phase ids, slice indices, ...).
///
/// Scheme (frozen, see unit tests): h = mix64(base), then for each tag
/// h = mix64(h ^ mix64(tag)). Equal (base, tags) always gives the same seed;
/// differing in any tag gives an unrelated stream.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = mix64(base);
    for (std::uint64_t t : tags) h = mix64(h ^ mix64(t));
    return h;
}

/// Deterministic random stream. The generator is std::mt19937_64 (whose
/// output sequence is fixed by the standard); the uniform/gaussian mappings
/// are implemented here rather than via <random> distributions, whose
/// sequences are implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (polar-free form, cached spare).
    double gaussian();

    /// Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
    std::int64_t uniform_index(std::int64_t n);

    /// k distinct indices drawn uniformly from [0, n), in draw order.
    std::vector<int> sample_without_replacement(int n, int k);

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ts
