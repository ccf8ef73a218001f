// Command-line workbench for the two-user frame-asynchronous adder-channel
// toolkit: density evolution, ensemble optimization, graph expurgation,
// decoder simulations and random-linear-code experiments. Every subcommand
// writes CSV results plus a run-manifest echoing its configuration.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ubac/code_spec.hpp"
#include "ubac/decoder.hpp"
#include "ubac/density_evolution.hpp"
#include "ubac/errors.hpp"
#include "ubac/harness.hpp"
#include "ubac/optimizer.hpp"
#include "ubac/rlc.hpp"
#include "ubac/tanner.hpp"

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw ubac::ConfigError("cannot write " + (dir / name).string());
    return out;
}

void write_manifest(const fs::path& dir, const ubac::HarnessConfig& cfg,
                    std::vector<std::pair<std::string, std::string>> extra = {}) {
    auto out = open_out(dir, "manifest.txt");
    ubac::write_run_manifest(out, cfg, extra);
}

ubac::HarnessConfig base_config(const std::string& config_path) {
    ubac::HarnessConfig cfg;
    if (config_path.empty()) return cfg;
    std::ifstream in(config_path);
    if (!in) throw ubac::ConfigError("cannot open config " + config_path);
    return ubac::parse_config_file(in, cfg);
}

void emit_rows(const fs::path& dir, const std::vector<ubac::SimPointRow>& rows) {
    auto out = open_out(dir, "results.csv");
    out << ubac::sim_csv_header() << '\n';
    for (const auto& row : rows) out << ubac::to_csv(row) << '\n';
    for (const auto& row : rows) std::cout << ubac::to_csv(row) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-user asynchronous adder-channel code workbench"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key = value config file; flags override")
        ->configurable(false);

    // shared flags, bound per subcommand
    struct Shared {
        std::string code = "code2";
        std::vector<int> n_list;
        long long trials = 1000;
        std::uint64_t seed = 1;
        std::string out_dir = "out";
        int max_iters = 200;
        int k_max = 3;
        int budget = 49;
        int expurgate_tau_max = 1;
        double time_cap = 0.0;
    } sh;

    auto add_shared = [&](CLI::App* cmd, bool with_n) {
        cmd->add_option("--code", sh.code, "preset name (code1..code3) or spec file path");
        if (with_n) cmd->add_option("--n", sh.n_list, "blocklengths, ascending")->expected(-1);
        cmd->add_option("--trials", sh.trials, "trials per point");
        cmd->add_option("--seed", sh.seed, "master seed");
        cmd->add_option("--out", sh.out_dir, "output directory");
        cmd->add_option("--max-iters", sh.max_iters, "decoder iteration cap");
        cmd->add_option("--K", sh.k_max, "expurgate stopping sets up to size 4K");
        cmd->add_option("--budget", sh.budget, "expurgation resample budget");
        cmd->add_option("--expurgate-taumax", sh.expurgate_tau_max,
                        "shift range scanned during expurgation");
        cmd->add_option("--time-cap", sh.time_cap, "per-point wall-clock cap in seconds");
    };

    // de-eval
    auto* de_eval = app.add_subcommand("de-eval", "density evolution trajectory and margin");
    double de_target = 1e-8, de_delta = 0.0;
    int de_grid = 256, de_iters = 2000;
    add_shared(de_eval, false);
    de_eval->add_option("--target", de_target, "stop once p falls below this");
    de_eval->add_option("--delta", de_delta, "margin slack to report");
    de_eval->add_option("--grid", de_grid, "margin grid size");
    de_eval->add_option("--iters", de_iters, "iteration cap");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "alternating degree-distribution optimization");
    ubac::OptimizerConfig opt_cfg;
    std::string opt_init = "code1";
    optimize->add_option("--init", opt_init, "starting spec (preset or path)");
    optimize->add_option("--delta", opt_cfg.delta, "margin slack");
    optimize->add_option("--lmax", opt_cfg.l_max, "max VN degree");
    optimize->add_option("--rmax", opt_cfg.r_max, "max CN degree");
    optimize->add_option("--grid", opt_cfg.grid, "constraint grid size");
    optimize->add_option("--rounds", opt_cfg.max_rounds, "alternation rounds");
    optimize->add_option("--seed", opt_cfg.seed, "seed");
    optimize->add_option("--min-vn-degree", opt_cfg.min_vn_degree, "smallest VN degree allowed");
    long long opt_n_for_delta = 0;
    optimize->add_option("--n-for-delta", opt_n_for_delta, "set delta = c/sqrt(n)");
    optimize->add_option("--delta-coefficient", opt_cfg.delta_coefficient, "c in delta = c/sqrt(n)");
    std::string opt_out = "out";
    optimize->add_option("--out", opt_out, "output directory");

    // expurgate
    auto* expurgate_cmd = app.add_subcommand("expurgate", "sample a graph free of short stopping sets");
    int ex_n = 10000, ex_tau_max = 1;
    add_shared(expurgate_cmd, false);
    expurgate_cmd->add_option("--graph-n", ex_n, "blocklength");
    expurgate_cmd->add_option("--taumax", ex_tau_max, "scan shifts 1..taumax");

    // simulate-fixed / simulate-random
    auto* sim_fixed = app.add_subcommand("simulate-fixed", "BLER sweep at a fixed delay");
    int sf_tau = 1;
    add_shared(sim_fixed, true);
    sim_fixed->add_option("--tau", sf_tau, "delay");
    bool sf_full = false, sf_resample = false;
    sim_fixed->add_flag("--full-channel", sf_full, "encode/transmit instead of pattern sampling");
    sim_fixed->add_flag("--resample-per-trial", sf_resample, "fresh graph per trial");

    auto* sim_random = app.add_subcommand("simulate-random", "BER sweep with uniform random delay");
    int sr_tau_max = 100;
    add_shared(sim_random, true);
    sim_random->add_option("--taumax", sr_tau_max, "tau drawn uniformly from [0, taumax]");
    bool sr_full = false, sr_resample = false;
    sim_random->add_flag("--full-channel", sr_full, "encode/transmit instead of pattern sampling");
    sim_random->add_flag("--resample-per-trial", sr_resample, "fresh graph per trial");

    // de-vs-sim
    auto* de_vs_sim = app.add_subcommand("de-vs-sim", "decoder sample paths against DE");
    int dvs_tau = 1;
    add_shared(de_vs_sim, true);
    de_vs_sim->add_option("--tau", dvs_tau, "delay");

    // rlc
    auto* rlc = app.add_subcommand("rlc", "random-linear-code decoding experiment");
    int rlc_n = 64, rlc_tau = 1;
    double rlc_rate = 0.7;
    long long rlc_trials = 2000;
    std::uint64_t rlc_seed = 1;
    std::string rlc_out = "out";
    rlc->add_option("--n", rlc_n, "blocklength (<= 512)");
    rlc->add_option("--rate", rlc_rate, "per-user rate");
    rlc->add_option("--tau", rlc_tau, "delay");
    rlc->add_option("--trials", rlc_trials, "trials");
    rlc->add_option("--seed", rlc_seed, "seed");
    rlc->add_option("--out", rlc_out, "output directory");

    // floor-bound
    auto* floor = app.add_subcommand("floor-bound", "stopping-set avoidance probability bound");
    double fb_l1 = 0.376, fb_rate = 0.689;
    int fb_tau_max = 1, fb_k = 3;
    floor->add_option("--L1", fb_l1, "degree-one VN fraction");
    floor->add_option("--R", fb_rate, "design rate");
    floor->add_option("--taumax", fb_tau_max, "shift range");
    floor->add_option("--K", fb_k, "stopping sets up to size 4K");

    CLI11_PARSE(app, argc, argv);

    try {
        ubac::HarnessConfig cfg = base_config(config_path);
        auto fill_shared = [&](ubac::TauMode mode, int tau, int tau_max) {
            cfg.code_name = sh.code;
            if (!sh.n_list.empty()) cfg.n_list = sh.n_list;
            cfg.trials = sh.trials;
            cfg.master_seed = sh.seed;
            cfg.max_iters = sh.max_iters;
            cfg.k_max = sh.k_max;
            cfg.expurgate_budget = sh.budget;
            cfg.expurgate_tau_max = sh.expurgate_tau_max;
            cfg.time_cap_seconds = sh.time_cap;
            cfg.tau_mode = mode;
            cfg.tau = tau;
            cfg.tau_max = tau_max;
        };

        if (de_eval->parsed()) {
            const auto spec = ubac::resolve_code_spec(sh.code).ensemble;
            const auto trajectory = ubac::de_run(spec.vn, spec.cn, de_iters, de_target);
            const auto report = ubac::feasibility_margin(spec.vn, spec.cn, de_delta, de_grid);
            auto out = open_out(sh.out_dir, "de_trajectory.csv");
            ubac::write_trajectory_csv(out, trajectory);
            std::cout << "design_rate " << spec.design_rate << "\n"
                      << "converged " << (trajectory.converged ? 1 : 0) << "\n"
                      << "iterations "
                      << (trajectory.iterations_to_target ? *trajectory.iterations_to_target : -1)
                      << "\n"
                      << "margin " << report.margin << " at y = " << report.argmin << "\n";
            fill_shared(ubac::TauMode::fixed, 1, 0);
            cfg.n_list = {2};
            write_manifest(sh.out_dir, cfg,
                           {{"subcommand", "de-eval"}, {"target", std::to_string(de_target)}});
        } else if (optimize->parsed()) {
            if (opt_n_for_delta > 0) opt_cfg.n_for_delta = opt_n_for_delta;
            const auto init = ubac::resolve_code_spec(opt_init).ensemble;
            const auto result = ubac::alternate(init, opt_cfg);
            ubac::CodeSpec final_spec{result.spec, std::nullopt};
            fs::create_directories(opt_out);
            ubac::save_code_spec((fs::path(opt_out) / "optimized.spec").string(), final_spec);
            auto audit = open_out(opt_out, "audit.csv");
            audit << "round,rate,margin\n";
            audit.precision(17);
            for (const auto& row : result.audit)
                audit << row.round << ',' << row.rate << ',' << row.margin << '\n';
            std::cout << "final_rate " << result.spec.design_rate << " after "
                      << result.audit.back().round << " rounds\n";
        } else if (expurgate_cmd->parsed()) {
            const auto spec = ubac::resolve_code_spec(sh.code).ensemble;
            const auto result =
                ubac::expurgate(spec, ex_n, ex_tau_max, sh.k_max, sh.budget, sh.seed);
            auto out = open_out(sh.out_dir, "graph.txt");
            ubac::write_graph(out, result.graph);
            std::cout << "attempts " << result.attempts << "\n";
            fill_shared(ubac::TauMode::fixed, 1, ex_tau_max);
            cfg.n_list = {ex_n};
            write_manifest(sh.out_dir, cfg, {{"subcommand", "expurgate"},
                                             {"attempts", std::to_string(result.attempts)}});
        } else if (sim_fixed->parsed() || sim_random->parsed()) {
            const bool fixed = sim_fixed->parsed();
            const auto spec = ubac::resolve_code_spec(sh.code).ensemble;
            fill_shared(fixed ? ubac::TauMode::fixed : ubac::TauMode::uniform,
                        fixed ? sf_tau : 1, fixed ? 0 : sr_tau_max);
            cfg.full_channel = fixed ? sf_full : sr_full;
            cfg.resample_per_trial = fixed ? sf_resample : sr_resample;
            if (cfg.n_list.empty()) cfg.n_list = {1024, 2048, 4096};
            const auto rows = fixed ? ubac::run_bler_fixed_tau(spec, cfg)
                                    : ubac::run_ber_random_tau(spec, cfg);
            emit_rows(sh.out_dir, rows);
            write_manifest(sh.out_dir, cfg,
                           {{"subcommand", fixed ? "simulate-fixed" : "simulate-random"}});
        } else if (de_vs_sim->parsed()) {
            const auto spec = ubac::resolve_code_spec(sh.code).ensemble;
            fill_shared(ubac::TauMode::fixed, dvs_tau, 0);
            if (cfg.n_list.empty()) cfg.n_list = {50000};
            const auto result = ubac::run_de_vs_sim(spec, cfg);
            auto de_out = open_out(sh.out_dir, "de_trajectory.csv");
            ubac::write_de_trajectory_csv(de_out, result.de);
            auto sim_out = open_out(sh.out_dir, "trajectories.csv");
            ubac::write_sim_trajectories_csv(sim_out, result);
            auto dev_out = open_out(sh.out_dir, "deviation.csv");
            ubac::write_deviation_csv(dev_out, result);
            double worst = 0.0;
            for (double d : result.max_deviation) worst = std::max(worst, d);
            std::cout << "trials " << result.max_deviation.size() << " worst_deviation " << worst
                      << "\n";
            write_manifest(sh.out_dir, cfg, {{"subcommand", "de-vs-sim"}});
        } else if (rlc->parsed()) {
            const auto result = ubac::rlc_experiment(rlc_n, rlc_rate, rlc_tau, rlc_trials, rlc_seed);
            auto out = open_out(rlc_out, "rlc.csv");
            out << "n,rate,tau,trials,errors,empirical_pe,bound\n";
            out.precision(17);
            out << rlc_n << ',' << rlc_rate << ',' << rlc_tau << ',' << result.trials << ','
                << result.errors << ',' << result.empirical_pe << ',' << result.bound << '\n';
            std::cout << "empirical_pe " << result.empirical_pe << " bound " << result.bound
                      << " (k = " << result.k << ")\n";
        } else if (floor->parsed()) {
            std::cout << ubac::error_floor_bound(fb_l1, fb_rate, fb_tau_max, fb_k) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
