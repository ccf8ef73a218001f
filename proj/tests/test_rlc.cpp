#include <doctest.h>

#include <cmath>

#include "ubac/channel.hpp"
#include "ubac/errors.hpp"
#include "ubac/rlc.hpp"
#include "ubac/rng.hpp"
#include "ubac/tanner.hpp"

using namespace ubac;

namespace {

EnsembleSpec regular_spec(int dv, int dc) {
    return make_ensemble(
        DegreeDistribution::validate({{dv, 1.0}}, Perspective::node, Side::variable),
        DegreeDistribution::validate({{dc, 1.0}}, Perspective::node, Side::check));
}

std::vector<std::uint8_t> kernel_codeword(const std::vector<std::vector<std::uint8_t>>& basis,
                                          int n, Rng& rng) {
    std::vector<std::uint8_t> m(n, 0);
    for (const auto& vec : basis) {
        if (!rng.next_bit()) continue;
        for (int i = 0; i < n; ++i) m[i] ^= vec[i];
    }
    return m;
}

// every codeword pair consistent with the observation, by enumerating the code
std::vector<std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>> exhaustive_pairs(
    const Gf2Matrix& H, int tau, const std::vector<std::int8_t>& y) {
    const int n = H.cols();
    const auto basis = gf2_nullspace(H);
    const int k = static_cast<int>(basis.size());
    REQUIRE(k <= 12);
    std::vector<std::vector<std::uint8_t>> codewords;
    for (long long mask = 0; mask < (1ll << k); ++mask) {
        std::vector<std::uint8_t> m(n, 0);
        for (int j = 0; j < k; ++j)
            if (mask >> j & 1)
                for (int i = 0; i < n; ++i) m[i] ^= basis[j][i];
        codewords.push_back(std::move(m));
    }
    const std::vector<std::uint8_t> identity_dither(n, 1);
    std::vector<std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>> matches;
    for (const auto& m1 : codewords)
        for (const auto& m2 : codewords)
            if (transmit(bpsk(m1), bpsk(m2), tau, identity_dither) == y)
                matches.push_back({m1, m2});
    return matches;
}

}  // namespace

TEST_CASE("no erasures: both words read off the observation") {
    Rng rng(1);
    const int n = 16;
    const auto H = Gf2Matrix::random(6, n, rng);
    const auto basis = gf2_nullspace(H);
    const auto m1 = kernel_codeword(basis, n, rng);
    const auto y = transmit(bpsk(m1), bpsk(m1), 1, std::vector<std::uint8_t>(n, 1));
    // m2 = m1 shifts against itself: overlap symbols all +-2, nothing erased
    const auto result = rlc_decode(H, 1, y);
    REQUIRE(result.outcome == RlcOutcome::decoded);
    CHECK(result.m1 == m1);
    CHECK(result.m2 == m1);
}

TEST_CASE("rlc_decode agrees with exhaustive codeword-pair enumeration") {
    Rng rng(0x27a1);
    int decoded = 0, ambiguous = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 12, r = 6;
        const auto H = Gf2Matrix::random(r, n, rng);
        const auto basis = gf2_nullspace(H);
        const auto m1 = kernel_codeword(basis, n, rng);
        const auto m2 = kernel_codeword(basis, n, rng);
        const auto y = transmit(bpsk(m1), bpsk(m2), 1, std::vector<std::uint8_t>(n, 1));
        const auto matches = exhaustive_pairs(H, 1, y);
        REQUIRE(!matches.empty());

        const auto result = rlc_decode(H, 1, y);
        if (result.outcome == RlcOutcome::decoded) {
            ++decoded;
            // a unique stacked solution must be the unique consistent pair
            CHECK(matches.size() == 1);
            CHECK(result.m1 == matches[0].first);
            CHECK(result.m2 == matches[0].second);
        } else {
            ++ambiguous;
            CHECK(matches.size() > 1);
        }
    }
    CHECK(decoded > 0);  // the ensemble at rate 1/2, tau 1 mostly decodes
}

TEST_CASE("tau = 0 at rate above one half is almost always ambiguous") {
    Rng rng(0xaa);
    int ambiguous = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        const int n = 32, r = 10;  // r < n/2
        const auto H = Gf2Matrix::random(r, n, rng);
        const auto basis = gf2_nullspace(H);
        const auto m1 = kernel_codeword(basis, n, rng);
        const auto m2 = kernel_codeword(basis, n, rng);
        const auto y = transmit(bpsk(m1), bpsk(m2), 0, std::vector<std::uint8_t>(n, 1));
        ambiguous += rlc_decode(H, 0, y).outcome == RlcOutcome::ambiguous;
    }
    CHECK(ambiguous >= trials * 3 / 4);
}

TEST_CASE("decoding succeeds iff the stacked submatrix has full column rank") {
    Rng rng(0xf00);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 24, r = 8, tau = 1;
        const auto H = Gf2Matrix::random(r, n, rng);
        const auto basis = gf2_nullspace(H);
        const auto m1 = kernel_codeword(basis, n, rng);
        const auto m2 = kernel_codeword(basis, n, rng);
        const auto y = transmit(bpsk(m1), bpsk(m2), tau, std::vector<std::uint8_t>(n, 1));

        std::vector<int> erased, shifted;
        for (int p = tau; p < n; ++p)
            if (y[p] == 0) {
                erased.push_back(p);
                shifted.push_back(p - tau);
            }
        const auto stacked = H.select_columns(erased).stack(H.select_columns(shifted));
        const bool full_rank = gf2_rank(stacked) == static_cast<int>(erased.size());
        const auto result = rlc_decode(H, tau, y);
        CHECK((result.outcome == RlcOutcome::decoded) == full_rank);
        if (result.outcome == RlcOutcome::decoded) {
            CHECK(result.m1 == m1);
            CHECK(result.m2 == m2);
        }
    }
}

TEST_CASE("the closed-form bound matches its definition") {
    CHECK(rlc_error_bound(64, 0.7) == doctest::Approx(0.37300837378966684).epsilon(1e-12));
    CHECK(rlc_error_bound(64, 0.75) == doctest::Approx(31.5).epsilon(1e-12));
}

TEST_CASE("rlc_experiment: deterministic, bounded error rate at rate 0.7") {
    const auto a = rlc_experiment(48, 0.7, 1, 300, 7);
    const auto b = rlc_experiment(48, 0.7, 1, 300, 7);
    CHECK(a.errors == b.errors);
    CHECK(a.k == 34);  // round(0.7 * 48)
    CHECK(a.empirical_pe == doctest::Approx(static_cast<double>(a.errors) / 300));
    CHECK_THROWS_AS(rlc_experiment(1024, 0.7, 1, 10, 1), DomainError);
    CHECK_THROWS_AS(rlc_experiment(64, 0.001, 1, 10, 1), DomainError);
}

TEST_CASE("erasure-set size concentrates around (n - tau)/2") {
    Rng rng(0xcafe);
    const int n = 128, tau = 1, trials = 400;
    long long total = 0;
    for (int t = 0; t < trials; ++t) {
        const auto H = Gf2Matrix::random(32, n, rng);
        const auto basis = gf2_nullspace(H);
        const auto m1 = kernel_codeword(basis, n, rng);
        const auto m2 = kernel_codeword(basis, n, rng);
        const auto y = transmit(bpsk(m1), bpsk(m2), tau, std::vector<std::uint8_t>(n, 1));
        for (int p = tau; p < n; ++p) total += y[p] == 0;
    }
    const double mean = static_cast<double>(total) / trials;
    // 3 sigma for the mean of `trials` binomials
    const double slack = 3.0 * std::sqrt(n / 4.0 / trials);
    CHECK(std::abs(mean - (n - tau) / 2.0) <= slack);
}

TEST_CASE("ldpc_encode: coset membership, determinism, injectivity, rank guard") {
    const auto g = sample_graph(regular_spec(2, 4), 200, 12);
    Rng rng(3);
    const auto dither = random_bits(g.n, rng);
    const auto H = parity_check_matrix(g);
    const auto target = H.multiply(dither);

    const std::vector<std::uint8_t> zero_info(10, 0);
    const std::vector<std::uint8_t> zero_dither(g.n, 0);
    CHECK(ldpc_encode(g, zero_dither, zero_info, 1) == zero_dither);  // all-zero word

    std::vector<std::uint8_t> info = random_bits(40, rng);
    const auto m = ldpc_encode(g, dither, info, 9);
    CHECK(H.multiply(m) == target);
    CHECK(ldpc_encode(g, dither, info, 9) == m);

    auto other = info;
    other[0] ^= 1;
    CHECK(ldpc_encode(g, dither, other, 9) != m);

    const std::vector<std::uint8_t> too_long(180, 1);
    CHECK_THROWS_AS(ldpc_encode(g, dither, too_long, 9), RankDeficient);
}

TEST_CASE("a double edge cancels out of the parity-check matrix") {
    TannerGraph g;
    g.n = 2;
    g.m = 1;
    g.permutation_applied = true;
    g.vn_degree = {2, 1};
    g.vn_offset = {0, 2, 3};
    g.vn_to_cn = {0, 0, 0};  // VN 0 doubly attached to CN 0
    g.cn_degree = {3};
    const auto H = parity_check_matrix(g);
    CHECK_FALSE(H.get(0, 0));
    CHECK(H.get(0, 1));
}
