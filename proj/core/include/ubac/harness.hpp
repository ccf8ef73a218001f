#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ubac/degree_dist.hpp"
#include "ubac/density_evolution.hpp"
#include "ubac/tanner.hpp"

namespace ubac {

inline constexpr const char* kVersion = "0.1.0";

enum class TauMode { fixed, uniform };

/// Knobs shared by the simulation experiments. Trials are seeded as
/// seed_for(master_seed, "point/<n>/trial/<t>"), graphs as
/// seed_for(master_seed, "graph/<code>/<n>"), so a config replays exactly.
struct HarnessConfig {
    std::string code_name = "code";
    std::vector<int> n_list;
    TauMode tau_mode = TauMode::fixed;
    int tau = 1;                    // delay in fixed mode
    int tau_max = 0;                // inclusive upper bound in uniform mode
    int expurgate_tau_max = 1;      // shift range scanned during expurgation
    int k_max = 3;                  // stopping sets up to size 4*k_max are expurgated
    int expurgate_budget = 49;      // resamples beyond the first draw
    long long trials = 1000;
    int max_iters = 200;
    std::uint64_t master_seed = 1;
    bool resample_per_trial = false;  // fresh expurgated graph per trial
    bool full_channel = false;        // encode + transmit + decode instead of pattern sampling
    double time_cap_seconds = 0.0;    // per point; 0 disables; trials scale down with a warning
};

void validate(const HarnessConfig& cfg);

/// One result row. The leading columns are the fixed CSV schema; the wilson
/// and tau0 columns are appended extras.
struct SimPointRow {
    std::string code;
    int n = 0;
    std::string tau_mode;
    int tau_max = 0;           // the fixed delay in fixed mode
    long long trials = 0;
    long long block_errors = 0;
    double bler = 0.0;
    long long bit_errors = 0;
    double ber = 0.0;          // per-user bit errors / (2 n trials)
    double mean_iters = 0.0;
    std::uint64_t seed = 0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    double tau0_fraction = 0.0;
};

std::string sim_csv_header();
std::string to_csv(const SimPointRow& row);

/// BLER sweep over cfg.n_list at the fixed delay cfg.tau.
std::vector<SimPointRow> run_bler_fixed_tau(const EnsembleSpec& spec, const HarnessConfig& cfg);

/// BER/BLER sweep with tau drawn uniformly from [0, tau_max] per trial;
/// tau = 0 counts as a block error without decoding.
std::vector<SimPointRow> run_ber_random_tau(const EnsembleSpec& spec, const HarnessConfig& cfg);

struct DeVsSimResult {
    DETrajectory de;
    std::vector<std::vector<double>> trial_fractions;  // per trial, per iteration
    std::vector<double> max_deviation;                 // per trial, vs the DE p sequence
    int graph_attempts = 0;
};

/// Decoder sample paths against the density-evolution prediction at a single
/// blocklength (cfg.n_list must have one entry).
DeVsSimResult run_de_vs_sim(const EnsembleSpec& spec, const HarnessConfig& cfg);

void write_de_trajectory_csv(std::ostream& out, const DETrajectory& de);
void write_sim_trajectories_csv(std::ostream& out, const DeVsSimResult& result);
void write_deviation_csv(std::ostream& out, const DeVsSimResult& result);

/// 95% Wilson interval for x successes in t trials.
std::pair<double, double> wilson_interval(long long x, long long t);

/// Config echo + version + master seed, one "key = value" per line.
void write_run_manifest(std::ostream& out, const HarnessConfig& cfg,
                        const std::vector<std::pair<std::string, std::string>>& extra = {});

/// "key = value" file, '#' comments. Unknown keys are rejected.
HarnessConfig parse_config_file(std::istream& in, const HarnessConfig& defaults = {});

}  // namespace ubac
