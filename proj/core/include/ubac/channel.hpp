#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ubac {

/// One realized channel use of the two-user adder channel with delay tau:
///   observation[p] = c1[p] d[p] + c2[p-tau] d[p-tau],   c,d BPSK, zero outside [0,n).
/// Boundary positions carry one user alone (magnitude 1); overlap positions
/// carry both (0 when the dithered symbols cancel, +-2 otherwise).
struct JointChannelInstance {
    int n = 0;
    int tau = 0;
    std::vector<std::int8_t> observation;   // length n + tau, values in {-2..2}
    std::vector<std::uint8_t> dither;       // binary, length n
    std::vector<int> erased_overlap;        // positions p with observation[p] == 0
};

std::vector<std::int8_t> bpsk(std::span<const std::uint8_t> bits);  // 2b - 1

/// Sum of the two dithered BPSK words. `dither` is the binary word, applied
/// as multiplication by 2d-1. Throws LengthMismatch.
std::vector<std::int8_t> transmit(std::span<const std::int8_t> c1, std::span<const std::int8_t> c2,
                                  int tau, std::span<const std::uint8_t> dither);

JointChannelInstance make_joint_instance(std::span<const std::uint8_t> m1,
                                         std::span<const std::uint8_t> m2, int tau,
                                         std::span<const std::uint8_t> dither);

/// Overlap positions in [tau, n), each erased independently with probability
/// 1/2; the exact law of the dithered channel. Sorted, deterministic per seed.
std::vector<int> sample_erasure_pattern(int n, int tau, std::uint64_t seed);

/// Recovers the delay from amplitude information: half the number of
/// magnitude-1 symbols. Throws MalformedObservation on an odd count.
int detect_tau(std::span<const std::int8_t> observation);

}  // namespace ubac
