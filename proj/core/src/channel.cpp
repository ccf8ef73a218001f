#include "ubac/channel.hpp"

#include <string>

#include "ubac/errors.hpp"
#include "ubac/rng.hpp"

namespace ubac {

std::vector<std::int8_t> bpsk(std::span<const std::uint8_t> bits) {
    std::vector<std::int8_t> out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) out[i] = static_cast<std::int8_t>(2 * (bits[i] & 1) - 1);
    return out;
}

std::vector<std::int8_t> transmit(std::span<const std::int8_t> c1, std::span<const std::int8_t> c2,
                                  int tau, std::span<const std::uint8_t> dither) {
    const int n = static_cast<int>(c1.size());
    if (c2.size() != c1.size() || dither.size() != c1.size())
        throw LengthMismatch("transmit: word lengths differ");
    if (tau < 0 || tau > n) throw TauOutOfRange("transmit: tau = " + std::to_string(tau));

    std::vector<std::int8_t> y(static_cast<std::size_t>(n) + tau, 0);
    for (int p = 0; p < n + tau; ++p) {
        int value = 0;
        if (p < n) value += c1[p] * (2 * (dither[p] & 1) - 1);
        if (p >= tau) value += c2[p - tau] * (2 * (dither[p - tau] & 1) - 1);
        y[p] = static_cast<std::int8_t>(value);
    }
    return y;
}

JointChannelInstance make_joint_instance(std::span<const std::uint8_t> m1,
                                         std::span<const std::uint8_t> m2, int tau,
                                         std::span<const std::uint8_t> dither) {
    JointChannelInstance inst;
    inst.n = static_cast<int>(m1.size());
    inst.tau = tau;
    inst.dither.assign(dither.begin(), dither.end());
    inst.observation = transmit(bpsk(m1), bpsk(m2), tau, dither);
    for (int p = tau; p < inst.n; ++p)
        if (inst.observation[p] == 0) inst.erased_overlap.push_back(p);
    return inst;
}

std::vector<int> sample_erasure_pattern(int n, int tau, std::uint64_t seed) {
    if (tau < 0 || tau > n) throw TauOutOfRange("sample_erasure_pattern: tau = " + std::to_string(tau));
    Rng rng(seed);
    std::vector<int> erased;
    for (int p = tau; p < n; ++p)
        if (rng.next_bit()) erased.push_back(p);
    return erased;
}

int detect_tau(std::span<const std::int8_t> observation) {
    int singles = 0;
    for (auto v : observation)
        if (v == 1 || v == -1) ++singles;
    if (singles % 2 != 0)
        throw MalformedObservation("detect_tau: odd count of magnitude-1 symbols");
    return singles / 2;
}

}  // namespace ubac
