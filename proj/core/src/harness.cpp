#include "ubac/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "ubac/channel.hpp"
#include "ubac/decoder.hpp"
#include "ubac/errors.hpp"
#include "ubac/rlc.hpp"
#include "ubac/rng.hpp"

namespace ubac {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct TrialStats {
    long long trials = 0;
    long long block_errors = 0;
    long long bit_errors = 0;
    long long tau0_draws = 0;
    long long iterations = 0;
};

SimPointRow make_row(const HarnessConfig& cfg, int n, const TrialStats& stats) {
    SimPointRow row;
    row.code = cfg.code_name;
    row.n = n;
    row.tau_mode = cfg.tau_mode == TauMode::fixed ? "fixed" : "uniform";
    row.tau_max = cfg.tau_mode == TauMode::fixed ? cfg.tau : cfg.tau_max;
    row.trials = stats.trials;
    row.block_errors = stats.block_errors;
    row.bler = stats.trials ? static_cast<double>(stats.block_errors) / stats.trials : 0.0;
    row.bit_errors = stats.bit_errors;
    row.ber = stats.trials ? static_cast<double>(stats.bit_errors) / (2.0 * n * stats.trials) : 0.0;
    row.mean_iters = stats.trials ? static_cast<double>(stats.iterations) / stats.trials : 0.0;
    row.seed = cfg.master_seed;
    std::tie(row.wilson_lo, row.wilson_hi) = wilson_interval(stats.block_errors, stats.trials);
    row.tau0_fraction = stats.trials ? static_cast<double>(stats.tau0_draws) / stats.trials : 0.0;
    return row;
}

// Per-graph state for full-channel trials: the coset encoder reuses the
// nullspace basis across trials.
struct EncoderCache {
    std::vector<std::vector<std::uint8_t>> basis;
    Gf2Matrix H;
};

EncoderCache make_encoder_cache(const TannerGraph& graph) {
    EncoderCache cache;
    cache.H = parity_check_matrix(graph);
    cache.basis = gf2_nullspace(cache.H);
    return cache;
}

std::vector<std::uint8_t> encode_from_cache(const EncoderCache& cache, int n,
                                            std::span<const std::uint8_t> dither, Rng& rng) {
    std::vector<std::uint8_t> m(dither.begin(), dither.end());
    for (const auto& column : cache.basis) {
        if (!rng.next_bit()) continue;
        for (int i = 0; i < n; ++i) m[i] ^= column[i];
    }
    return m;
}

// One decoded trial at a concrete delay; returns (block_error, bit_errors, iters).
struct TrialOutcome {
    bool block_error = false;
    long long bit_errors = 0;
    int iterations = 0;
};

TrialOutcome run_trial(const HarnessConfig& cfg, const TannerGraph& graph, const CnAdjacency& adj,
                       const EncoderCache* encoder, int tau, std::uint64_t trial_seed) {
    const int n = graph.n;
    DecodeResult decoded;
    long long wrong_bits = 0;
    if (cfg.full_channel) {
        Rng rng(trial_seed);
        const auto dither = random_bits(n, rng);
        const auto m1 = encode_from_cache(*encoder, n, dither, rng);
        const auto m2 = encode_from_cache(*encoder, n, dither, rng);
        const auto y = transmit(bpsk(m1), bpsk(m2), tau, dither);
        decoded = decode(graph, tau, y, dither, cfg.max_iters, Schedule::synced, &adj);
        for (int i = 0; i < n; ++i) {
            if (decoded.user1_values[i] >= 0 && decoded.user1_values[i] != m1[i]) ++wrong_bits;
            if (decoded.user2_values[i] >= 0 && decoded.user2_values[i] != m2[i]) ++wrong_bits;
        }
    } else {
        const auto pattern = sample_erasure_pattern(n, tau, trial_seed);
        decoded = decode_erasure_pattern(graph, tau, pattern, cfg.max_iters, Schedule::synced, &adj);
    }
    long long erased = 0;
    for (int i = 0; i < n; ++i) {
        erased += decoded.user1_values[i] < 0;
        erased += decoded.user2_values[i] < 0;
    }
    TrialOutcome outcome;
    outcome.bit_errors = erased + wrong_bits;
    outcome.block_error = outcome.bit_errors > 0;
    outcome.iterations = decoded.iterations_used;
    return outcome;
}

std::vector<SimPointRow> run_sweep(const EnsembleSpec& spec, const HarnessConfig& cfg) {
    validate(cfg);
    std::vector<SimPointRow> rows;
    for (int n : cfg.n_list) {
        const auto t_start = std::chrono::steady_clock::now();
        const std::uint64_t graph_seed =
            seed_for(cfg.master_seed, "graph/" + cfg.code_name + "/" + std::to_string(n));

        TannerGraph graph;
        CnAdjacency adj;
        EncoderCache encoder;
        auto refresh_graph = [&](std::uint64_t seed) {
            graph = expurgate(spec, n, cfg.expurgate_tau_max, cfg.k_max, cfg.expurgate_budget, seed)
                        .graph;
            adj = build_cn_adjacency(graph);
            if (cfg.full_channel) encoder = make_encoder_cache(graph);
        };
        if (!cfg.resample_per_trial) refresh_graph(graph_seed);

        TrialStats stats;
        for (long long t = 0; t < cfg.trials; ++t) {
            if (cfg.time_cap_seconds > 0 && (t & 63) == 0 && t > 0) {
                const std::chrono::duration<double> elapsed =
                    std::chrono::steady_clock::now() - t_start;
                if (elapsed.count() > cfg.time_cap_seconds) {
                    std::cerr << "warning: n=" << n << " hit the time cap after " << t << "/"
                              << cfg.trials << " trials\n";
                    break;
                }
            }
            const std::uint64_t trial_seed = seed_for(
                cfg.master_seed, "point/" + std::to_string(n) + "/trial/" + std::to_string(t));
            if (cfg.resample_per_trial)
                refresh_graph(seed_for(cfg.master_seed, "graph/" + cfg.code_name + "/" +
                                                            std::to_string(n) + "/trial/" +
                                                            std::to_string(t)));

            int tau = cfg.tau;
            if (cfg.tau_mode == TauMode::uniform) {
                Rng draw(seed_for(trial_seed, "tau"));
                tau = static_cast<int>(draw.next_below(static_cast<std::uint64_t>(cfg.tau_max) + 1));
            }
            ++stats.trials;
            if (tau == 0) {
                // always a block error: the doubled parity equations collapse
                ++stats.tau0_draws;
                ++stats.block_errors;
                const auto pattern = sample_erasure_pattern(n, 0, trial_seed);
                stats.bit_errors += 2 * static_cast<long long>(pattern.size());
                continue;
            }
            const auto outcome = run_trial(cfg, graph, adj, cfg.full_channel ? &encoder : nullptr,
                                           tau, trial_seed);
            stats.block_errors += outcome.block_error;
            stats.bit_errors += outcome.bit_errors;
            stats.iterations += outcome.iterations;
        }
        rows.push_back(make_row(cfg, n, stats));
    }
    return rows;
}

}  // namespace

void validate(const HarnessConfig& cfg) {
    if (cfg.n_list.empty()) throw ConfigError("config: empty n list");
    if (!std::is_sorted(cfg.n_list.begin(), cfg.n_list.end()))
        throw ConfigError("config: n list must be ascending");
    for (int n : cfg.n_list)
        if (n < 2) throw ConfigError("config: n < 2");
    if (cfg.trials < 0) throw ConfigError("config: negative trials");
    if (cfg.max_iters < 1) throw ConfigError("config: max_iters < 1");
    if (cfg.tau_mode == TauMode::fixed && (cfg.tau < 0 || cfg.tau > cfg.n_list.front()))
        throw ConfigError("config: fixed tau outside [0, n]");
    if (cfg.tau_mode == TauMode::uniform && cfg.tau_max < 0)
        throw ConfigError("config: negative tau_max");
    if (cfg.k_max < 1 || cfg.k_max > 8) throw ConfigError("config: k_max outside [1,8]");
    if (cfg.expurgate_tau_max < 1) throw ConfigError("config: expurgate_tau_max < 1");
    if (cfg.expurgate_budget < 0) throw ConfigError("config: negative expurgation budget");
}

std::string sim_csv_header() {
    return "code,n,tau_mode,tau_max,trials,block_errors,bler,bit_errors,ber,mean_iters,seed,"
           "wilson_lo,wilson_hi,tau0_fraction";
}

std::string to_csv(const SimPointRow& row) {
    std::ostringstream out;
    out << row.code << ',' << row.n << ',' << row.tau_mode << ',' << row.tau_max << ','
        << row.trials << ',' << row.block_errors << ',' << fmt(row.bler) << ',' << row.bit_errors
        << ',' << fmt(row.ber) << ',' << fmt(row.mean_iters) << ',' << row.seed << ','
        << fmt(row.wilson_lo) << ',' << fmt(row.wilson_hi) << ',' << fmt(row.tau0_fraction);
    return out.str();
}

std::vector<SimPointRow> run_bler_fixed_tau(const EnsembleSpec& spec, const HarnessConfig& cfg) {
    if (cfg.tau_mode != TauMode::fixed) throw ConfigError("run_bler_fixed_tau: wrong tau mode");
    return run_sweep(spec, cfg);
}

std::vector<SimPointRow> run_ber_random_tau(const EnsembleSpec& spec, const HarnessConfig& cfg) {
    if (cfg.tau_mode != TauMode::uniform) throw ConfigError("run_ber_random_tau: wrong tau mode");
    return run_sweep(spec, cfg);
}

DeVsSimResult run_de_vs_sim(const EnsembleSpec& spec, const HarnessConfig& cfg) {
    validate(cfg);
    if (cfg.n_list.size() != 1) throw ConfigError("run_de_vs_sim: exactly one n expected");
    if (cfg.tau_mode != TauMode::fixed) throw ConfigError("run_de_vs_sim: fixed tau expected");
    const int n = cfg.n_list.front();

    DeVsSimResult result;
    result.de = de_run(spec.vn, spec.cn, cfg.max_iters, 1e-12);

    if (cfg.trials == 0) return result;

    const std::uint64_t graph_seed =
        seed_for(cfg.master_seed, "graph/" + cfg.code_name + "/" + std::to_string(n));
    auto expurgated =
        expurgate(spec, n, cfg.expurgate_tau_max, cfg.k_max, cfg.expurgate_budget, graph_seed);
    result.graph_attempts = expurgated.attempts;
    const auto adj = build_cn_adjacency(expurgated.graph);

    for (long long t = 0; t < cfg.trials; ++t) {
        const std::uint64_t trial_seed = seed_for(
            cfg.master_seed, "point/" + std::to_string(n) + "/trial/" + std::to_string(t));
        const auto pattern = sample_erasure_pattern(n, cfg.tau, trial_seed);
        const auto decoded = decode_erasure_pattern(expurgated.graph, cfg.tau, pattern,
                                                    cfg.max_iters, Schedule::synced, &adj);
        const auto& fractions = decoded.erased_fraction_per_iter;
        const std::size_t len = std::max(fractions.size(), result.de.p.size());
        double dev = 0.0;
        for (std::size_t l = 0; l < len; ++l) {
            const double sim =
                l < fractions.size() ? fractions[l] : (fractions.empty() ? 0.0 : fractions.back());
            const double de_p = l < result.de.p.size()
                                    ? result.de.p[l]
                                    : (result.de.p.empty() ? 0.0 : result.de.p.back());
            dev = std::max(dev, std::abs(sim - de_p));
        }
        result.trial_fractions.push_back(fractions);
        result.max_deviation.push_back(dev);
    }
    return result;
}

void write_de_trajectory_csv(std::ostream& out, const DETrajectory& de) {
    write_trajectory_csv(out, de);
}

void write_sim_trajectories_csv(std::ostream& out, const DeVsSimResult& result) {
    out << "trial,iter,erased_fraction\n";
    for (std::size_t t = 0; t < result.trial_fractions.size(); ++t)
        for (std::size_t l = 0; l < result.trial_fractions[t].size(); ++l)
            out << t << ',' << (l + 1) << ',' << fmt(result.trial_fractions[t][l]) << '\n';
}

void write_deviation_csv(std::ostream& out, const DeVsSimResult& result) {
    out << "trial,max_abs_dev\n";
    for (std::size_t t = 0; t < result.max_deviation.size(); ++t)
        out << t << ',' << fmt(result.max_deviation[t]) << '\n';
}

std::pair<double, double> wilson_interval(long long x, long long t) {
    if (t <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 97.5% normal quantile
    const double p = static_cast<double>(x) / t;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / t;
    const double center = p + z2 / (2.0 * t);
    const double half = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t));
    const double lo = x == 0 ? 0.0 : std::max(0.0, (center - half) / denom);
    const double hi = x == t ? 1.0 : std::min(1.0, (center + half) / denom);
    return {lo, hi};
}

void write_run_manifest(std::ostream& out, const HarnessConfig& cfg,
                        const std::vector<std::pair<std::string, std::string>>& extra) {
    out << "version = " << kVersion << "\n";
    out << "code = " << cfg.code_name << "\n";
    out << "n =";
    for (int n : cfg.n_list) out << ' ' << n;
    out << "\n";
    out << "tau_mode = " << (cfg.tau_mode == TauMode::fixed ? "fixed" : "uniform") << "\n";
    out << "tau = " << cfg.tau << "\n";
    out << "tau_max = " << cfg.tau_max << "\n";
    out << "expurgate_tau_max = " << cfg.expurgate_tau_max << "\n";
    out << "k_max = " << cfg.k_max << "\n";
    out << "expurgate_budget = " << cfg.expurgate_budget << "\n";
    out << "trials = " << cfg.trials << "\n";
    out << "max_iters = " << cfg.max_iters << "\n";
    out << "seed = " << cfg.master_seed << "\n";
    out << "resample_per_trial = " << (cfg.resample_per_trial ? 1 : 0) << "\n";
    out << "full_channel = " << (cfg.full_channel ? 1 : 0) << "\n";
    for (const auto& [k, v] : extra) out << k << " = " << v << "\n";
}

HarnessConfig parse_config_file(std::istream& in, const HarnessConfig& defaults) {
    HarnessConfig cfg = defaults;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::istringstream probe(line);
            std::string token;
            if (probe >> token)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        std::istringstream key_in(line.substr(0, eq)), value_in(line.substr(eq + 1));
        std::string key;
        key_in >> key;
        auto want_int = [&](auto& field) {
            long long v;
            if (!(value_in >> v)) throw ConfigError("config line " + std::to_string(lineno));
            field = static_cast<std::decay_t<decltype(field)>>(v);
        };
        if (key == "code") value_in >> cfg.code_name;
        else if (key == "n") {
            cfg.n_list.clear();
            int v;
            while (value_in >> v) cfg.n_list.push_back(v);
        } else if (key == "tau_mode") {
            std::string mode;
            value_in >> mode;
            if (mode == "fixed") cfg.tau_mode = TauMode::fixed;
            else if (mode == "uniform") cfg.tau_mode = TauMode::uniform;
            else throw ConfigError("config line " + std::to_string(lineno) + ": bad tau_mode");
        } else if (key == "tau") want_int(cfg.tau);
        else if (key == "tau_max") want_int(cfg.tau_max);
        else if (key == "expurgate_tau_max") want_int(cfg.expurgate_tau_max);
        else if (key == "k_max") want_int(cfg.k_max);
        else if (key == "expurgate_budget") want_int(cfg.expurgate_budget);
        else if (key == "trials") want_int(cfg.trials);
        else if (key == "max_iters") want_int(cfg.max_iters);
        else if (key == "seed") want_int(cfg.master_seed);
        else if (key == "resample_per_trial") want_int(cfg.resample_per_trial);
        else if (key == "full_channel") want_int(cfg.full_channel);
        else if (key == "time_cap_seconds") {
            double v;
            if (!(value_in >> v)) throw ConfigError("config line " + std::to_string(lineno));
            cfg.time_cap_seconds = v;
        } else {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

}  // namespace ubac
