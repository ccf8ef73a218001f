#include "ubac/decoder.hpp"

#include <string>

#include "ubac/errors.hpp"

namespace ubac {

namespace {

// Peeling engine over the joint graph. Both users run the same Tanner graph;
// user 1's VN i and user 2's VN i-tau are coupled by the MAC node at
// position i whenever that position is erased.
class JointPeeler {
  public:
    JointPeeler(const TannerGraph& graph, int tau, const CnAdjacency& adj, bool track_values,
                std::span<const std::uint8_t> dither)
        : g_(graph), adj_(adj), tau_(tau), track_values_(track_values),
          dither_(dither.begin(), dither.end()) {
        known_[0].assign(g_.n, 0);
        known_[1].assign(g_.n, 0);
        value_[0].assign(g_.n, 0);
        value_[1].assign(g_.n, 0);
        erased_sockets_[0].assign(g_.m, 0);
        erased_sockets_[1].assign(g_.m, 0);
        acc_[0].assign(g_.m, 0);
        acc_[1].assign(g_.m, 0);
        position_erased_.assign(g_.n, 0);
        if (track_values_) {
            // coset target per CN: XOR of the dither over its sockets
            for (int v = 0; v < g_.n; ++v) {
                if (!(dither_[v] & 1)) continue;
                for (auto c : g_.neighbors(v)) {
                    acc_[0][c] ^= 1;
                    acc_[1][c] ^= 1;
                }
            }
        }
    }

    void pin(int user, int v, std::uint8_t bit) {
        known_[user][v] = 1;
        value_[user][v] = static_cast<std::int8_t>(bit);
    }

    void mark_position_erased(int p) { position_erased_[p] = 1; }

    // Called once after pinning: counts erased sockets and folds the known
    // values into each CN accumulator.
    void finalize_init() {
        for (int user = 0; user < 2; ++user) {
            for (int v = 0; v < g_.n; ++v) {
                const bool is_known = known_[user][v];
                if (!is_known) ++total_erased_;
                for (auto c : g_.neighbors(v)) {
                    if (is_known)
                        acc_[user][c] ^= static_cast<std::uint8_t>(value_[user][v] & 1);
                    else
                        erased_sockets_[user][c] += 1;
                }
            }
            for (int c = 0; c < g_.m; ++c) {
                if (erased_sockets_[user][c] == 1) next_cn_.push_back(pack(user, c));
                else if (erased_sockets_[user][c] == 0 && track_values_ && acc_[user][c])
                    throw ObservationInconsistent("decoder: satisfied CN violates parity");
            }
        }
    }

    DecodeResult run(int max_iters, Schedule schedule) {
        DecodeResult result;
        if (schedule == Schedule::eager) {
            const bool progress = run_eager();
            result.iterations_used = progress ? 1 : 0;
            result.erased_fraction_per_iter.push_back(fraction_erased());
        } else {
            for (int iter = 0; iter < max_iters && total_erased_ > 0; ++iter) {
                const long long before = resolved_count_;
                run_cn_pass();
                result.erased_fraction_per_iter.push_back(fraction_erased());
                run_mac_pass();
                if (resolved_count_ == before) {
                    result.erased_fraction_per_iter.pop_back();  // stalled round
                    break;
                }
                result.iterations_used += 1;
            }
        }
        result.success = total_erased_ == 0;
        result.message_updates = message_updates_;
        result.user1_values = values_of(0);
        result.user2_values = values_of(1);
        return result;
    }

  private:
    static std::int64_t pack(int user, int c) { return (static_cast<std::int64_t>(c) << 1) | user; }

    double fraction_erased() const {
        return static_cast<double>(total_erased_) / (2.0 * g_.n);
    }

    std::vector<std::int8_t> values_of(int user) const {
        std::vector<std::int8_t> out(g_.n);
        for (int v = 0; v < g_.n; ++v)
            out[v] = known_[user][v] ? value_[user][v] : static_cast<std::int8_t>(-1);
        return out;
    }

    // MAC relation on an erased position: the dithered symbols cancel, so
    //   m2[p-tau] = 1 ^ m1[p] ^ d[p] ^ d[p-tau]   (value mode).
    std::uint8_t mac_partner_bit(int p, std::uint8_t bit_known) const {
        if (!track_values_) return 0;
        return static_cast<std::uint8_t>(1u ^ bit_known ^ (dither_[p] & 1) ^ (dither_[p - tau_] & 1));
    }

    void resolve(int user, int v, std::uint8_t bit, std::vector<std::int64_t>& cn_out) {
        known_[user][v] = 1;
        value_[user][v] = static_cast<std::int8_t>(bit & 1);
        --total_erased_;
        ++resolved_count_;
        for (auto c : g_.neighbors(v)) {
            ++message_updates_;
            acc_[user][c] ^= (bit & 1);
            if (--erased_sockets_[user][c] == 1) cn_out.push_back(pack(user, c));
            else if (erased_sockets_[user][c] == 0 && track_values_ && acc_[user][c])
                throw ObservationInconsistent("decoder: resolved CN violates parity");
        }
        // the position this VN occupies in the joint view, if any
        const int p = user == 0 ? v : v + tau_;
        if (p >= tau_ && p < g_.n && position_erased_[p]) {
            ++message_updates_;
            const int partner_user = 1 - user;
            const int partner = partner_user == 0 ? p : p - tau_;
            if (!known_[partner_user][partner]) mac_candidates_.push_back(p);
            else if (track_values_ &&
                     (value_[partner_user][partner] & 1) != mac_partner_bit(p, bit))
                throw ObservationInconsistent("decoder: MAC constraint violated");
        }
    }

    void run_cn_pass() {
        current_cn_.swap(next_cn_);
        next_cn_.clear();
        for (const auto packed : current_cn_) {
            const int user = static_cast<int>(packed & 1);
            const int c = static_cast<int>(packed >> 1);
            if (erased_sockets_[user][c] != 1) continue;  // stale candidate
            // locate the erased socket
            const auto begin = adj_.offset[c], end = adj_.offset[c + 1];
            for (auto it = begin; it < end; ++it) {
                ++message_updates_;
                const int v = adj_.members[it];
                if (!known_[user][v]) {
                    resolve(user, v, acc_[user][c], next_cn_);
                    break;
                }
            }
        }
    }

    void run_mac_pass() {
        for (std::size_t i = 0; i < mac_candidates_.size(); ++i) {
            const int p = mac_candidates_[i];
            const bool k1 = known_[0][p];
            const bool k2 = known_[1][p - tau_];
            if (k1 == k2) continue;  // both resolved meanwhile, or stale
            ++message_updates_;
            if (k1)
                resolve(1, p - tau_, mac_partner_bit(p, value_[0][p] & 1), next_cn_);
            else
                resolve(0, p, mac_partner_bit(p, value_[1][p - tau_] & 1), next_cn_);
        }
        mac_candidates_.clear();
    }

    bool run_eager() {
        const long long before = resolved_count_;
        while (!next_cn_.empty() || !mac_candidates_.empty()) {
            run_cn_pass();
            run_mac_pass();
        }
        return resolved_count_ != before;
    }

    const TannerGraph& g_;
    const CnAdjacency& adj_;
    int tau_;
    bool track_values_;
    std::vector<std::uint8_t> dither_;

    std::vector<std::uint8_t> known_[2];
    std::vector<std::int8_t> value_[2];
    std::vector<std::int32_t> erased_sockets_[2];
    std::vector<std::uint8_t> acc_[2];
    std::vector<std::uint8_t> position_erased_;

    std::vector<std::int64_t> current_cn_, next_cn_;
    std::vector<int> mac_candidates_;

    long long total_erased_ = 0;
    long long resolved_count_ = 0;
    long long message_updates_ = 0;
};

}  // namespace

DecodeResult decode(const TannerGraph& graph, int tau, std::span<const std::int8_t> observation,
                    std::span<const std::uint8_t> dither, int max_iters, Schedule schedule,
                    const CnAdjacency* adj) {
    if (tau < 0 || tau > graph.n) throw TauOutOfRange("decode: tau = " + std::to_string(tau));
    if (static_cast<int>(observation.size()) != graph.n + tau)
        throw LengthMismatch("decode: observation length");
    if (static_cast<int>(dither.size()) != graph.n) throw LengthMismatch("decode: dither length");

    CnAdjacency local;
    if (!adj) {
        local = build_cn_adjacency(graph);
        adj = &local;
    }
    JointPeeler peeler(graph, tau, *adj, /*track_values=*/true, dither);

    const int n = graph.n;
    for (int p = 0; p < n + tau; ++p) {
        const int y = observation[p];
        const bool boundary = p < tau || p >= n;
        if (boundary) {
            if (y != 1 && y != -1)
                throw ObservationInconsistent("decode: boundary symbol must have magnitude 1");
            const std::uint8_t e = y == -1 ? 1 : 0;  // dithered bit m ^ d
            if (p < tau)
                peeler.pin(0, p, e ^ (dither[p] & 1));
            else
                peeler.pin(1, p - tau, e ^ (dither[p - tau] & 1));
        } else {
            if (y == 0) {
                peeler.mark_position_erased(p);
            } else if (y == 2 || y == -2) {
                const std::uint8_t e = y == -2 ? 1 : 0;  // both dithered bits agree
                peeler.pin(0, p, e ^ (dither[p] & 1));
                peeler.pin(1, p - tau, e ^ (dither[p - tau] & 1));
            } else {
                throw ObservationInconsistent("decode: overlap symbol must be in {-2,0,2}");
            }
        }
    }
    peeler.finalize_init();
    return peeler.run(max_iters, schedule);
}

DecodeResult decode_erasure_pattern(const TannerGraph& graph, int tau, std::span<const int> erased,
                                    int max_iters, Schedule schedule, const CnAdjacency* adj) {
    if (tau < 0 || tau > graph.n) throw TauOutOfRange("decode_erasure_pattern: tau");
    CnAdjacency local;
    if (!adj) {
        local = build_cn_adjacency(graph);
        adj = &local;
    }
    const std::vector<std::uint8_t> no_dither(graph.n, 0);
    JointPeeler peeler(graph, tau, *adj, /*track_values=*/false, no_dither);

    std::vector<std::uint8_t> is_erased(graph.n, 0);
    for (int p : erased) {
        if (p < tau || p >= graph.n)
            throw DomainError("decode_erasure_pattern: position outside the overlap");
        is_erased[p] = 1;
        peeler.mark_position_erased(p);
    }
    for (int v = 0; v < graph.n; ++v) {
        if (!(v >= tau && v < graph.n && is_erased[v])) peeler.pin(0, v, 0);
        const int p = v + tau;
        if (!(p < graph.n && is_erased[p])) peeler.pin(1, v, 0);
    }
    peeler.finalize_init();
    return peeler.run(max_iters, schedule);
}

}  // namespace ubac
