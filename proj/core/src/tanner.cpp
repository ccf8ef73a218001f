#include "ubac/tanner.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "ubac/errors.hpp"
#include "ubac/rng.hpp"

namespace ubac {

namespace {

struct DegreeCount {
    int degree;
    long long count;
};

// Largest-remainder apportionment of `total` nodes across the distribution's
// support. Per-degree counts are within one node of the exact targets.
std::vector<DegreeCount> apportion(const DegreeDistribution& node_dist, long long total) {
    std::vector<DegreeCount> counts;
    std::vector<std::pair<double, int>> remainders;  // (remainder, slot)
    long long assigned = 0;
    for (const auto& [degree, fraction] : node_dist.coefficients()) {
        const double exact = fraction * static_cast<double>(total);
        const long long base = static_cast<long long>(std::floor(exact));
        counts.push_back({degree, base});
        remainders.push_back({exact - static_cast<double>(base), static_cast<int>(counts.size()) - 1});
        assigned += base;
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (long long seat = 0; seat < total - assigned; ++seat)
        counts[remainders[seat % remainders.size()].second].count += 1;
    return counts;
}

long long socket_sum(const std::vector<DegreeCount>& counts) {
    long long s = 0;
    for (const auto& dc : counts) s += dc.degree * dc.count;
    return s;
}

// Move check nodes between degree classes until the socket sum hits `target`,
// preferring single moves with the largest progress. Falls back to bumping
// the degree of individual nodes of the most populous class by one.
std::vector<std::int32_t> balance_cn_degrees(std::vector<DegreeCount> counts, long long target) {
    long long deficit = target - socket_sum(counts);
    while (deficit != 0) {
        int best_from = -1, best_to = -1;
        long long best_abs = std::llabs(deficit);
        for (std::size_t a = 0; a < counts.size(); ++a) {
            if (counts[a].count == 0) continue;
            for (std::size_t b = 0; b < counts.size(); ++b) {
                if (a == b) continue;
                const long long next = deficit - (counts[b].degree - counts[a].degree);
                if (std::llabs(next) < best_abs) {
                    best_abs = std::llabs(next);
                    best_from = static_cast<int>(a);
                    best_to = static_cast<int>(b);
                }
            }
        }
        if (best_from < 0) break;
        counts[best_from].count -= 1;
        counts[best_to].count += 1;
        deficit = target - socket_sum(counts);
    }

    std::vector<std::int32_t> degrees;
    for (const auto& dc : counts)
        degrees.insert(degrees.end(), static_cast<std::size_t>(dc.count),
                       static_cast<std::int32_t>(dc.degree));

    if (deficit != 0) {
        // spread one-socket bumps over distinct nodes of the largest class
        const auto largest = std::max_element(counts.begin(), counts.end(),
                                              [](const auto& a, const auto& b) { return a.count < b.count; });
        const int step = deficit > 0 ? 1 : -1;
        std::size_t cursor = 0;
        while (deficit != 0) {
            while (cursor < degrees.size() &&
                   (degrees[cursor] != largest->degree || degrees[cursor] + step < 1))
                ++cursor;
            if (cursor >= degrees.size())
                throw DegreeAssignmentOverflow("sample_graph: cannot balance socket counts");
            degrees[cursor] += step;
            ++cursor;
            deficit -= step;
        }
    }
    return degrees;
}

}  // namespace

CnAdjacency build_cn_adjacency(const TannerGraph& graph) {
    CnAdjacency adj;
    adj.offset.assign(graph.m + 1, 0);
    for (auto c : graph.vn_to_cn) adj.offset[c + 1] += 1;
    for (int c = 0; c < graph.m; ++c) adj.offset[c + 1] += adj.offset[c];
    adj.members.resize(graph.vn_to_cn.size());
    std::vector<std::int32_t> cursor(adj.offset.begin(), adj.offset.end() - 1);
    for (int v = 0; v < graph.n; ++v)
        for (auto c : graph.neighbors(v)) adj.members[cursor[c]++] = v;
    return adj;
}

TannerGraph sample_graph(const EnsembleSpec& spec, int n, std::uint64_t seed) {
    if (n < 2) throw DomainError("sample_graph: n too small");
    Rng rng(seed);

    const auto vn_counts = apportion(spec.vn, n);
    const long long sockets = socket_sum(vn_counts);

    const double mean_cn = spec.cn.mean_node_degree();
    const long long m = std::llround(static_cast<double>(sockets) / mean_cn);
    if (m < 1) throw DegreeAssignmentOverflow("sample_graph: no check nodes");
    auto cn_degrees = balance_cn_degrees(apportion(spec.cn, m), sockets);

    TannerGraph graph;
    graph.n = n;
    graph.m = static_cast<int>(cn_degrees.size());
    graph.seed = seed;
    graph.cn_degree = cn_degrees;

    // canonical ascending degrees, then a uniform relabeling of the VNs
    std::vector<std::int32_t> canonical;
    canonical.reserve(n);
    for (const auto& dc : vn_counts)
        canonical.insert(canonical.end(), static_cast<std::size_t>(dc.count),
                         static_cast<std::int32_t>(dc.degree));
    std::vector<std::int32_t> label(n);
    std::iota(label.begin(), label.end(), 0);
    rng.shuffle(label);
    graph.vn_degree.assign(n, 0);
    for (int i = 0; i < n; ++i) graph.vn_degree[label[i]] = canonical[i];
    graph.permutation_applied = true;

    graph.vn_offset.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) graph.vn_offset[v + 1] = graph.vn_offset[v] + graph.vn_degree[v];
    if (graph.vn_offset[n] != sockets)
        throw DegreeAssignmentOverflow("sample_graph: socket bookkeeping failure");

    std::vector<std::int32_t> cn_sockets;
    cn_sockets.reserve(sockets);
    for (int c = 0; c < graph.m; ++c)
        cn_sockets.insert(cn_sockets.end(), static_cast<std::size_t>(cn_degrees[c]),
                          static_cast<std::int32_t>(c));
    if (static_cast<long long>(cn_sockets.size()) != sockets)
        throw DegreeAssignmentOverflow("sample_graph: socket counts differ");
    rng.shuffle(cn_sockets);

    graph.vn_to_cn = std::move(cn_sockets);
    return graph;
}

JointTopology joint_view(const TannerGraph& graph, int tau) {
    if (tau < 0 || tau > graph.n) throw TauOutOfRange("joint_view: tau = " + std::to_string(tau));
    return JointTopology{graph.n, tau};
}

namespace {

// Adjacency among degree-one VNs that share a check node.
std::vector<std::vector<std::int32_t>> deg1_chords(const TannerGraph& graph) {
    std::vector<std::vector<std::int32_t>> chords(graph.n);
    std::vector<std::vector<std::int32_t>> cn_members(graph.m);
    for (int v = 0; v < graph.n; ++v)
        if (graph.vn_degree[v] == 1) cn_members[graph.neighbors(v)[0]].push_back(v);
    for (const auto& members : cn_members) {
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                chords[members[a]].push_back(members[b]);
                chords[members[b]].push_back(members[a]);
            }
    }
    return chords;
}

struct CycleSearch {
    const TannerGraph& graph;
    const std::vector<std::vector<std::int32_t>>& chords;
    int tau;
    int max_positions;  // 2 * K_max
    std::vector<int> path;
    std::vector<char> on_path;
    std::set<std::vector<int>>* found;

    bool eligible(int v) const {
        return v >= tau && v < graph.n && graph.vn_degree[v] == 1 &&
               graph.vn_degree[v - tau] == 1;
    }

    // Edge types alternate: odd path length extends over a shared CN between
    // the user-1 copies, even length over a shared CN between the user-2
    // copies (indices shifted by tau). A cycle closes with a shifted edge.
    void extend() {
        const int last = path.back();
        const int v1 = path.front();
        const bool chord_step = path.size() % 2 == 1;

        if (path.size() >= 2 && !chord_step) {
            // try to close: (last - tau) and (v1 - tau) share a CN
            const auto& back_edges = chords[last - tau];
            if (std::find(back_edges.begin(), back_edges.end(), v1 - tau) != back_edges.end()) {
                std::vector<int> key = path;
                std::sort(key.begin(), key.end());
                found->insert(std::move(key));
            }
        }
        if (static_cast<int>(path.size()) >= max_positions) return;

        auto try_next = [&](int w) {
            if (w <= v1 || !eligible(w) || on_path[w]) return;
            path.push_back(w);
            on_path[w] = 1;
            extend();
            on_path[w] = 0;
            path.pop_back();
        };
        if (chord_step) {
            for (int w : chords[last]) try_next(w);
        } else {
            for (int u : chords[last - tau]) try_next(u + tau);
        }
    }
};

}  // namespace

std::vector<StoppingSetReport> find_deg1_stopping_sets(const TannerGraph& graph, int tau_max,
                                                       int K_max) {
    if (K_max < 1 || K_max > 8) throw DomainError("find_deg1_stopping_sets: K_max outside [1,8]");
    if (tau_max < 1) throw DomainError("find_deg1_stopping_sets: tau_max < 1");
    const auto chords = deg1_chords(graph);

    std::vector<StoppingSetReport> reports;
    for (int tau = 1; tau <= std::min(tau_max, graph.n); ++tau) {
        std::set<std::vector<int>> sets;
        CycleSearch search{graph, chords, tau, 2 * K_max, {}, std::vector<char>(graph.n, 0), &sets};
        for (int v = tau; v < graph.n; ++v) {
            if (!search.eligible(v)) continue;
            search.path.assign(1, v);
            search.on_path[v] = 1;
            search.extend();
            search.on_path[v] = 0;
        }

        // keep only minimal sets; any stable superset contains one of these
        std::vector<std::vector<int>> kept;
        std::vector<std::vector<int>> by_size(sets.begin(), sets.end());
        std::stable_sort(by_size.begin(), by_size.end(),
                         [](const auto& a, const auto& b) { return a.size() < b.size(); });
        for (const auto& candidate : by_size) {
            bool contains_kept = false;
            for (const auto& small : kept) {
                if (small.size() >= candidate.size()) break;
                if (std::includes(candidate.begin(), candidate.end(), small.begin(), small.end())) {
                    contains_kept = true;
                    break;
                }
            }
            if (!contains_kept) kept.push_back(candidate);
        }

        for (const auto& positions : kept) {
            StoppingSetReport report;
            report.tau = tau;
            report.positions = positions;
            for (int p : positions) report.vn_indices.emplace_back(1, p);
            for (int p : positions) report.vn_indices.emplace_back(2, p - tau);
            report.size = static_cast<int>(report.vn_indices.size());
            report.K = report.size / 4;
            reports.push_back(std::move(report));
        }
    }
    return reports;
}

ExpurgateResult expurgate(const EnsembleSpec& spec, int n, int tau_max, int K_max,
                          int max_resamples, std::uint64_t seed) {
    if (max_resamples < 0) throw DomainError("expurgate: negative budget");
    for (int attempt = 1; attempt <= max_resamples + 1; ++attempt) {
        auto graph = sample_graph(spec, n, seed_for(seed, "expurgate/" + std::to_string(attempt)));
        if (find_deg1_stopping_sets(graph, tau_max, K_max).empty())
            return ExpurgateResult{std::move(graph), attempt};
    }
    throw ExpurgationBudgetExceeded("expurgate: no clean graph within " +
                                    std::to_string(max_resamples + 1) + " draws");
}

double error_floor_bound(double L1, double R, int tau_max, int K) {
    if (!(L1 >= 0.0 && L1 <= 1.0)) throw DomainError("error_floor_bound: L1 outside [0,1]");
    if (!(R > 0.0 && R < 1.0)) throw DomainError("error_floor_bound: R outside (0,1)");
    if (K < 0 || tau_max < 0) throw DomainError("error_floor_bound: negative K or tau_max");
    const double ratio = L1 * L1 / (1.0 - R);
    double sum = 0.0;
    double power = 1.0;
    for (int k = 1; k <= K; ++k) {
        power *= ratio;
        sum += power / (2.0 * k);
    }
    return 1.0 - 0.5 * tau_max * sum;
}

void write_graph(std::ostream& out, const TannerGraph& graph) {
    out << graph.n << ' ' << graph.m << ' ' << graph.seed << '\n';
    for (int v = 0; v < graph.n; ++v) {
        const auto nb = graph.neighbors(v);
        std::vector<std::int32_t> sorted(nb.begin(), nb.end());
        std::sort(sorted.begin(), sorted.end());
        out << v << ':';
        for (auto c : sorted) out << ' ' << c;
        out << '\n';
    }
}

TannerGraph read_graph(std::istream& in) {
    TannerGraph graph;
    if (!(in >> graph.n >> graph.m >> graph.seed)) throw ConfigError("graph file: bad header");
    if (graph.n < 0 || graph.m < 0) throw ConfigError("graph file: negative dimensions");
    graph.permutation_applied = true;
    graph.vn_degree.assign(graph.n, 0);
    graph.vn_offset.assign(graph.n + 1, 0);
    graph.cn_degree.assign(graph.m, 0);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<std::int32_t>> adjacency(graph.n);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int v;
        char colon;
        if (!(ls >> v >> colon) || colon != ':' || v < 0 || v >= graph.n)
            throw ConfigError("graph file: bad row '" + line + "'");
        int c;
        while (ls >> c) {
            if (c < 0 || c >= graph.m) throw ConfigError("graph file: check index out of range");
            adjacency[v].push_back(c);
            graph.cn_degree[c] += 1;
        }
    }
    for (int v = 0; v < graph.n; ++v) {
        graph.vn_degree[v] = static_cast<std::int32_t>(adjacency[v].size());
        graph.vn_offset[v + 1] = graph.vn_offset[v] + graph.vn_degree[v];
        graph.vn_to_cn.insert(graph.vn_to_cn.end(), adjacency[v].begin(), adjacency[v].end());
    }
    return graph;
}

}  // namespace ubac
