#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ubac/degree_dist.hpp"

namespace ubac {

/// One sampled bipartite graph. Both users run the same graph; the joint view
/// for a delay tau is formed by joint_view / the decoder, not stored here.
/// Adjacency is CSR over variable nodes; multi-edges are representable.
struct TannerGraph {
    int n = 0;
    int m = 0;
    std::uint64_t seed = 0;
    bool permutation_applied = false;
    std::vector<std::int32_t> vn_degree;
    std::vector<std::int32_t> vn_offset;  // size n+1
    std::vector<std::int32_t> vn_to_cn;   // flattened neighbor lists
    std::vector<std::int32_t> cn_degree;

    std::span<const std::int32_t> neighbors(int vn) const {
        return {vn_to_cn.data() + vn_offset[vn],
                static_cast<std::size_t>(vn_offset[vn + 1] - vn_offset[vn])};
    }
    long long edge_count() const { return static_cast<long long>(vn_to_cn.size()); }
};

/// CN -> VN adjacency derived from a graph, for decoders and scans.
struct CnAdjacency {
    std::vector<std::int32_t> offset;   // size m+1
    std::vector<std::int32_t> members;  // VN ids, multi-edges repeated
};
CnAdjacency build_cn_adjacency(const TannerGraph& graph);

/// Configuration-model sample: degrees by largest-remainder apportionment,
/// check-side counts adjusted until socket sums match, sockets matched through
/// one uniform permutation, variable nodes relabeled by a second uniform
/// permutation. Deterministic per seed. Throws DegreeAssignmentOverflow when
/// socket balancing cannot close the gap.
TannerGraph sample_graph(const EnsembleSpec& spec, int n, std::uint64_t seed);

/// Index arithmetic of the joint two-user factor graph at delay tau
/// (0-based): overlap position p in [tau, n) couples user-1 VN p with
/// user-2 VN p - tau; the 2*tau boundary VNs are observed directly.
struct JointTopology {
    int n = 0;
    int tau = 0;

    bool is_overlap(int position) const { return position >= tau && position < n; }
    std::optional<int> partner_of_user1(int i) const {
        if (i >= tau && i < n) return i - tau;
        return std::nullopt;
    }
    std::optional<int> partner_of_user2(int j) const {
        if (j >= 0 && j < n - tau) return j + tau;
        return std::nullopt;
    }
};
JointTopology joint_view(const TannerGraph& graph, int tau);  // TauOutOfRange

/// A minimal stopping set made of degree-one VNs in the joint graph at shift
/// tau: an alternating chord/partner cycle through 2K overlap positions,
/// i.e. 4K variable nodes.
struct StoppingSetReport {
    int tau = 0;
    std::vector<int> positions;                    // user-1 indices, sorted, size 2K
    std::vector<std::pair<int, int>> vn_indices;   // (user, index), all 4K members
    int size = 0;                                  // 4K
    int K = 0;
};

/// Exhaustive enumeration of the minimal degree-one stopping sets of size
/// <= 4*K_max for every tau in [1, tau_max]. K_max is capped at 8.
std::vector<StoppingSetReport> find_deg1_stopping_sets(const TannerGraph& graph, int tau_max,
                                                       int K_max);

struct ExpurgateResult {
    TannerGraph graph;
    int attempts = 0;  // graphs sampled, including the returned one
};

/// Resamples until a graph free of degree-one stopping sets of size
/// <= 4*K_max for all tau in [1, tau_max] is found. The budget counts
/// resamples beyond the first draw. Throws ExpurgationBudgetExceeded.
ExpurgateResult expurgate(const EnsembleSpec& spec, int n, int tau_max, int K_max,
                          int max_resamples, std::uint64_t seed);

/// Lower bound on the probability that a sampled joint graph has no
/// degree-one stopping set of size <= 4K for any tau in [1, tau_max]:
///   1 - (tau_max/2) sum_{k=1..K} (L1^2/(1-R))^k / (2k).
/// May be negative (vacuous).
double error_floor_bound(double L1, double R, int tau_max, int K);

/// Text form: header "n m seed", then one line per VN "index: cn cn ..."
/// with sorted neighbors.
void write_graph(std::ostream& out, const TannerGraph& graph);
TannerGraph read_graph(std::istream& in);

}  // namespace ubac
