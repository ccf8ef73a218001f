#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ubac/gf2.hpp"
#include "ubac/tanner.hpp"

namespace ubac {

/// One sampled random-linear-code trial: parity-check matrix, delay, the two
/// transmitted codewords and the erasure set their sum induces.
struct RlcInstance {
    Gf2Matrix H;
    int tau = 0;
    std::vector<std::uint8_t> m1, m2;
    std::vector<int> erased;  // overlap positions where the BPSK symbols cancel
};

enum class RlcOutcome { decoded, ambiguous };

struct RlcDecodeResult {
    RlcOutcome outcome = RlcOutcome::ambiguous;
    std::vector<std::uint8_t> m1, m2;  // filled when decoded
};

/// Decodes a noiseless two-user observation (length n + tau over {-2..2})
/// against the code {m : H m = 0} used by both senders. Every erased position
/// couples the two words (m1[i] = 1 - m2[i-tau]), giving the stacked system
///   [H_E ; H_{E-tau}] m1_E = [s1 ; H_{E-tau} 1 - s2].
/// Returns ambiguous when the stacked submatrix is column-rank deficient.
/// Throws InconsistentObservation when no codeword pair fits.
RlcDecodeResult rlc_decode(const Gf2Matrix& H, int tau, std::span<const std::int8_t> observation);

double rlc_error_bound(int n, double rate);  // ((n-1)/2) 2^(n(2R - 1.5))

struct RlcExperimentResult {
    long long trials = 0;
    long long errors = 0;  // ambiguous or wrong
    double empirical_pe = 0.0;
    double bound = 0.0;
    int k = 0;  // info bits actually used, round(n * rate)
};

/// Monte-Carlo estimate of the decoding failure rate for Bernoulli(1/2)
/// parity-check ensembles, against the closed-form bound. The bound is
/// evaluated at the requested rate; the experiment uses k = round(n*rate).
RlcExperimentResult rlc_experiment(int n, double rate, int tau, long long trials,
                                   std::uint64_t seed);

/// H of a sampled graph: row = CN, entries are socket counts mod 2, so a
/// double edge cancels.
Gf2Matrix parity_check_matrix(const TannerGraph& graph);

/// Coset encoding: m = G b + dither with H m = H dither. The seed fixes the
/// (deterministic) choice of generator columns when the code has more
/// dimensions than info bits. Throws RankDeficient when corank(H) < |info|.
std::vector<std::uint8_t> ldpc_encode(const TannerGraph& graph,
                                      std::span<const std::uint8_t> dither,
                                      std::span<const std::uint8_t> info, std::uint64_t seed);

}  // namespace ubac
