#include "ubac/rlc.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ubac/channel.hpp"
#include "ubac/errors.hpp"

namespace ubac {

RlcDecodeResult rlc_decode(const Gf2Matrix& H, int tau, std::span<const std::int8_t> observation) {
    const int n = H.cols();
    const int r = H.rows();
    if (tau < 0 || tau > n) throw TauOutOfRange("rlc_decode: tau = " + std::to_string(tau));
    if (static_cast<int>(observation.size()) != n + tau)
        throw InconsistentObservation("rlc_decode: observation length");

    // read off everything the amplitudes pin
    std::vector<std::int8_t> m1(n, -1), m2(n, -1);
    std::vector<int> erased;
    for (int p = 0; p < n + tau; ++p) {
        const int y = observation[p];
        const bool boundary = p < tau || p >= n;
        if (boundary) {
            if (y != 1 && y != -1)
                throw InconsistentObservation("rlc_decode: boundary symbol magnitude");
            const std::uint8_t bit = y == 1 ? 1 : 0;  // c = 2m-1
            if (p < tau) m1[p] = static_cast<std::int8_t>(bit);
            else m2[p - tau] = static_cast<std::int8_t>(bit);
        } else if (y == 0) {
            erased.push_back(p);
        } else if (y == 2 || y == -2) {
            const std::uint8_t bit = y == 2 ? 1 : 0;
            m1[p] = static_cast<std::int8_t>(bit);
            m2[p - tau] = static_cast<std::int8_t>(bit);
        } else {
            throw InconsistentObservation("rlc_decode: overlap symbol outside {-2,0,2}");
        }
    }

    const int d = static_cast<int>(erased.size());
    RlcDecodeResult result;
    if (d > 0) {
        // syndromes of the known parts
        std::vector<std::uint8_t> known1(n, 0), known2(n, 0);
        for (int i = 0; i < n; ++i) {
            if (m1[i] >= 0) known1[i] = static_cast<std::uint8_t>(m1[i]);
            if (m2[i] >= 0) known2[i] = static_cast<std::uint8_t>(m2[i]);
        }
        const auto s1 = H.multiply(known1);
        const auto s2 = H.multiply(known2);

        std::vector<int> shifted(erased);
        for (auto& p : shifted) p -= tau;
        const Gf2Matrix top = H.select_columns(erased);
        const Gf2Matrix bottom = H.select_columns(shifted);

        // H_{E-tau} * 1 over the erased columns
        std::vector<std::uint8_t> ones(d, 1);
        const auto bottom_ones = bottom.multiply(ones);

        std::vector<std::uint8_t> rhs(2 * r, 0);
        for (int i = 0; i < r; ++i) rhs[i] = s1[i];
        for (int i = 0; i < r; ++i) rhs[r + i] = static_cast<std::uint8_t>(bottom_ones[i] ^ s2[i]);

        const auto solution = gf2_solve(top.stack(bottom), rhs);
        if (solution.kind == SolveKind::inconsistent)
            throw InconsistentObservation("rlc_decode: stacked system inconsistent");
        if (solution.kind == SolveKind::underdetermined) return result;  // ambiguous

        for (int j = 0; j < d; ++j) {
            m1[erased[j]] = static_cast<std::int8_t>(solution.particular[j]);
            m2[erased[j] - tau] = static_cast<std::int8_t>(1 ^ solution.particular[j]);
        }
    }

    result.outcome = RlcOutcome::decoded;
    result.m1.assign(n, 0);
    result.m2.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        result.m1[i] = static_cast<std::uint8_t>(m1[i]);
        result.m2[i] = static_cast<std::uint8_t>(m2[i]);
    }
    // final sanity on the full words
    for (auto bit : H.multiply(result.m1))
        if (bit) throw InconsistentObservation("rlc_decode: m1 leaves the code");
    for (auto bit : H.multiply(result.m2))
        if (bit) throw InconsistentObservation("rlc_decode: m2 leaves the code");
    return result;
}

double rlc_error_bound(int n, double rate) {
    return 0.5 * (n - 1) * std::exp2(n * (2.0 * rate - 1.5));
}

RlcExperimentResult rlc_experiment(int n, double rate, int tau, long long trials,
                                   std::uint64_t seed) {
    if (n < 2 || n > 512) throw DomainError("rlc_experiment: n outside [2, 512]");
    if (trials < 1) throw DomainError("rlc_experiment: trials < 1");
    const int k = static_cast<int>(std::llround(rate * n));
    if (k < 1 || k >= n) throw DomainError("rlc_experiment: rate gives no code");
    const int r = n - k;

    RlcExperimentResult result;
    result.trials = trials;
    result.bound = rlc_error_bound(n, rate);
    result.k = k;

    const std::vector<std::uint8_t> no_dither_bits(n, 1);  // dither 1 => multiplier +1
    for (long long t = 0; t < trials; ++t) {
        Rng rng(seed_for(seed, "rlc/" + std::to_string(t)));
        const Gf2Matrix H = Gf2Matrix::random(r, n, rng);
        const auto basis = gf2_nullspace(H);

        auto sample_codeword = [&]() {
            std::vector<std::uint8_t> m(n, 0);
            for (const auto& vec : basis) {
                if (!rng.next_bit()) continue;
                for (int i = 0; i < n; ++i) m[i] ^= vec[i];
            }
            return m;
        };
        const auto m1 = sample_codeword();
        const auto m2 = sample_codeword();
        const auto y = transmit(bpsk(m1), bpsk(m2), tau, no_dither_bits);

        bool error = false;
        try {
            const auto decoded = rlc_decode(H, tau, y);
            error = decoded.outcome != RlcOutcome::decoded || decoded.m1 != m1 || decoded.m2 != m2;
        } catch (const InconsistentObservation&) {
            error = true;
        }
        if (error) ++result.errors;
    }
    result.empirical_pe = static_cast<double>(result.errors) / static_cast<double>(trials);
    return result;
}

Gf2Matrix parity_check_matrix(const TannerGraph& graph) {
    Gf2Matrix H(graph.m, graph.n);
    for (int v = 0; v < graph.n; ++v)
        for (auto c : graph.neighbors(v)) H.flip(c, v);
    return H;
}

std::vector<std::uint8_t> ldpc_encode(const TannerGraph& graph,
                                      std::span<const std::uint8_t> dither,
                                      std::span<const std::uint8_t> info, std::uint64_t seed) {
    if (static_cast<int>(dither.size()) != graph.n) throw LengthMismatch("ldpc_encode: dither length");
    const Gf2Matrix H = parity_check_matrix(graph);
    auto basis = gf2_nullspace(H);
    if (basis.size() < info.size())
        throw RankDeficient("ldpc_encode: corank " + std::to_string(basis.size()) +
                            " < info length " + std::to_string(info.size()));

    // deterministic generator selection: permute the basis by the seed, use
    // the first |info| vectors
    std::vector<int> order(basis.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<std::uint8_t> m(dither.begin(), dither.end());
    for (std::size_t j = 0; j < info.size(); ++j) {
        if (!(info[j] & 1)) continue;
        const auto& column = basis[order[j]];
        for (int i = 0; i < graph.n; ++i) m[i] ^= column[i];
    }
    return m;
}

}  // namespace ubac
