#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ubac {

/// One round of the splitmix64 output function. Used to condition seeds and
/// to derive per-stream seeds; fixed constants, identical on every platform.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic random source. Wraps std::mt19937_64 (fully specified by the
/// standard) and performs all range reductions itself, so that streams are
/// reproducible across platforms and standard-library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Unbiased integer in [0, bound); bound must be positive.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (-bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform in [0, 1) with 53 significant bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bit() { return (next_u64() >> 63) != 0; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

std::vector<std::uint8_t> random_bits(std::size_t n, Rng& rng);

/// Seed for one named stream. Deterministic in (master, label).
std::uint64_t seed_for(std::uint64_t master, std::string_view label);

/// Per-stream seeds for a batch of distinct labels. Throws DuplicateLabel.
std::vector<std::uint64_t> seed_split(std::uint64_t master, std::span<const std::string> labels);

}  // namespace ubac
