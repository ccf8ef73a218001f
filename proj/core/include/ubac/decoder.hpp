#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ubac/tanner.hpp"

namespace ubac {

/// synced: rounds mirror flooding BP — each round resolves the check nodes
///   that were down to one erased socket at the start of the round, then
///   exchanges across the MAC pairs once. Per-round erased fractions line up
///   with the density-evolution sequence.
/// eager: cascades immediately; same fixed point, one recorded iteration.
enum class Schedule { synced, eager };

struct DecodeResult {
    std::vector<std::int8_t> user1_values;  // bit, or -1 when erased
    std::vector<std::int8_t> user2_values;
    int iterations_used = 0;
    std::vector<double> erased_fraction_per_iter;  // over all 2n VNs, after each CN pass
    bool success = false;
    long long message_updates = 0;  // edge and MAC touches, for the linear-time contract
};

/// Joint erasure decoding of one channel observation (length n + tau over
/// {-2..2}) produced with the given binary dither. Pins every position the
/// observation determines, then alternates CN resolution and MAC exchange.
/// Throws ObservationInconsistent when a pinned value contradicts a satisfied
/// constraint (impossible under the noiseless channel).
DecodeResult decode(const TannerGraph& graph, int tau, std::span<const std::int8_t> observation,
                    std::span<const std::uint8_t> dither, int max_iters,
                    Schedule schedule = Schedule::synced, const CnAdjacency* adj = nullptr);

/// Value-free mode: only the erased/known status evolves. The final erased
/// set matches decode() on any observation inducing the same pattern.
/// `erased` lists overlap positions in [tau, n).
DecodeResult decode_erasure_pattern(const TannerGraph& graph, int tau, std::span<const int> erased,
                                    int max_iters, Schedule schedule = Schedule::synced,
                                    const CnAdjacency* adj = nullptr);

}  // namespace ubac
