#include "ubac/rng.hpp"

#include <unordered_set>

#include "ubac/errors.hpp"

namespace ubac {

std::vector<std::uint8_t> random_bits(std::size_t n, Rng& rng) {
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = rng.next_bit() ? 1 : 0;
    return out;
}

std::uint64_t seed_for(std::uint64_t master, std::string_view label) {
    // FNV-1a over the label, folded into the mixed master. The three mix64
    // rounds keep related labels ("trial/1", "trial/2") statistically far apart.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return mix64(mix64(master) ^ mix64(h));
}

std::vector<std::uint64_t> seed_split(std::uint64_t master, std::span<const std::string> labels) {
    std::unordered_set<std::string_view> seen;
    std::vector<std::uint64_t> seeds;
    seeds.reserve(labels.size());
    for (const auto& label : labels) {
        if (!seen.insert(label).second) throw DuplicateLabel("seed_split: duplicate label '" + label + "'");
        seeds.push_back(seed_for(master, label));
    }
    return seeds;
}

}  // namespace ubac
