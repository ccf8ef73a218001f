#include "ubac/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "ubac/density_evolution.hpp"
#include "ubac/errors.hpp"
#include "ubac/simplex_lp.hpp"

namespace ubac {

namespace {

std::vector<double> grid_points(int grid) {
    std::vector<double> pts(grid);
    for (int k = 1; k <= grid; ++k) pts[k - 1] = static_cast<double>(k) / (grid + 1);
    return pts;
}

// Margin constraints are relative to the grid point: the update must contract
// y by at least a (1-delta) factor. An absolute slack cannot hold near y = 0,
// where the gap to the update shrinks linearly with y.
bool margins_hold(const DeSystem& sys, const std::vector<double>& pts, double threshold) {
    for (double y : pts) {
        if ((y - de_update_y(sys, y)) / y < threshold) return false;
    }
    // x-space form of the same condition, used by the lambda step
    for (double x : pts) {
        const double gx = x - de_scalar_step(x, sys);
        if (gx / x < threshold) return false;
    }
    return true;
}

DegreeDistribution edge_from_values(std::map<int, double> coeffs, Side side) {
    // clean up solver output: clamp negatives, drop dust, renormalize
    double sum = 0.0;
    for (auto& [d, v] : coeffs) {
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    std::map<int, double> cleaned;
    for (const auto& [d, v] : coeffs)
        if (v > 1e-12 * sum) cleaned[d] = v;
    double csum = 0.0;
    for (const auto& [d, v] : cleaned) csum += v;
    for (auto& [d, v] : cleaned) v /= csum;
    return DegreeDistribution::validate(cleaned, Perspective::edge, side);
}

DegreeDistribution solve_cn_lp(const DeSystem& fixed_vn, const std::vector<double>& pts,
                               double threshold, int r_max) {
    const int nv = r_max - 1;  // rho_2 .. rho_rmax
    lp::Problem prob;
    prob.num_vars = nv;
    prob.objective.resize(nv);
    for (int i = 2; i <= r_max; ++i) prob.objective[i - 2] = 1.0 / i;

    lp::Constraint simplex_eq;
    simplex_eq.a.assign(nv, 1.0);
    simplex_eq.rel = lp::Relation::eq;
    simplex_eq.b = 1.0;
    prob.constraints.push_back(simplex_eq);

    // f_rho(y) >= threshold * y, i.e.
    //   sum_i rho_i (1 - L(y)lambda(y)/2)^(i-1) >= 1 - y (1 - threshold)
    for (double y : pts) {
        const double base = 1.0 - 0.5 * fixed_vn.L(y) * fixed_vn.lambda(y);
        lp::Constraint con;
        con.a.resize(nv);
        double power = base;  // (i-1)-th power, starting at i = 2
        for (int i = 2; i <= r_max; ++i) {
            con.a[i - 2] = power;
            power *= base;
        }
        con.rel = lp::Relation::ge;
        con.b = 1.0 - y * (1.0 - threshold);
        prob.constraints.push_back(con);
    }

    const auto sol = lp::solve(prob);
    if (sol.status != lp::Status::optimal)
        throw Infeasible("optimize_cn: no rho meets the margin at this delta");

    std::map<int, double> rho;
    for (int i = 2; i <= r_max; ++i) rho[i] = sol.x[i - 2];
    return edge_from_values(std::move(rho), Side::check);
}

double kappa_of(const DegreeDistribution& lambda_edge) { return lambda_edge.rate_integral(); }

std::vector<int> lambda_support(const OptimizerConfig& cfg) {
    if (cfg.l_max < 1 || cfg.r_max < 2 || cfg.grid < 32)
        throw DomainError("optimizer config: requires l_max >= 1, r_max >= 2, grid >= 32");
    std::vector<int> support;
    for (int d = std::max(1, cfg.min_vn_degree); d <= cfg.l_max; ++d) support.push_back(d);
    if (support.empty()) throw DomainError("optimizer config: empty lambda support");
    return support;
}

}  // namespace

double effective_delta(const OptimizerConfig& cfg) {
    if (cfg.n_for_delta)
        return cfg.delta_coefficient / std::sqrt(static_cast<double>(*cfg.n_for_delta));
    return cfg.delta;
}

DegreeDistribution optimize_cn(const DegreeDistribution& vn, const OptimizerConfig& cfg) {
    const double delta = effective_delta(cfg);
    if (delta + cfg.strictness >= 1.0)
        throw Infeasible("optimize_cn: delta >= 1, margins are below 1");
    if (cfg.r_max < 2 || cfg.grid < 32) throw DomainError("optimize_cn: bad config");

    // a degree-2 placeholder; only L and lambda of `fixed_vn` are used below
    const DegreeDistribution cn_placeholder =
        DegreeDistribution::validate({{2, 1.0}}, Perspective::edge, Side::check);
    const DeSystem fixed_vn(vn, cn_placeholder);

    int grid = cfg.grid;
    auto threshold = [&] { return delta + cfg.strictness + cfg.grid_guard / (double(grid) * grid); };
    DegreeDistribution rho = solve_cn_lp(fixed_vn, grid_points(grid), threshold(), cfg.r_max);

    // grid-density robustness: re-check on a 4x finer grid, refine and
    // re-solve once when a finer point falls below the slack
    for (int refinement = 0; refinement < 2; ++refinement) {
        const auto fine = grid_points(4 * grid);
        const DeSystem candidate(vn, rho);
        bool ok = true;
        for (double y : fine) {
            if ((y - de_update_y(candidate, y)) / y < delta) {
                ok = false;
                break;
            }
        }
        if (ok || refinement == 1) return rho;
        grid *= 4;
        rho = solve_cn_lp(fixed_vn, grid_points(grid), threshold(), cfg.r_max);
    }
    return rho;
}

DegreeDistribution optimize_vn(const DegreeDistribution& cn, const OptimizerConfig& cfg) {
    // seed with the feasible candidate of highest kappa, if any
    const double delta = effective_delta(cfg);
    const double threshold =
        delta + cfg.strictness + cfg.grid_guard / (double(cfg.grid) * cfg.grid);
    const auto support = lambda_support(cfg);
    const auto pts = grid_points(cfg.grid);

    std::optional<DegreeDistribution> best;
    double best_kappa = -1.0;
    std::vector<std::map<int, double>> candidates;
    for (int d : support) candidates.push_back({{d, 1.0}});
    {
        std::map<int, double> uniform;
        for (int d : support) uniform[d] = 1.0 / support.size();
        candidates.push_back(uniform);
    }
    for (const auto& coeffs : candidates) {
        auto lambda = DegreeDistribution::validate(coeffs, Perspective::edge, Side::variable);
        if (cfg.l1_cap && lambda.to_node().fraction(1) > *cfg.l1_cap + 1e-12) continue;
        const DeSystem sys(lambda, cn);
        if (!margins_hold(sys, pts, threshold) || kappa_of(lambda) <= best_kappa) continue;
        best = lambda;
        best_kappa = kappa_of(lambda);
    }
    if (!best) throw Infeasible("optimize_vn: no feasible lambda in the candidate set");
    return optimize_vn(cn, cfg, *best);
}

DegreeDistribution optimize_vn(const DegreeDistribution& cn, const OptimizerConfig& cfg,
                               const DegreeDistribution& start) {
    const double delta = effective_delta(cfg);
    const double threshold =
        delta + cfg.strictness + cfg.grid_guard / (double(cfg.grid) * cfg.grid);
    if (delta + cfg.strictness >= 1.0)
        throw Infeasible("optimize_vn: delta >= 1, margins are below 1");
    const auto support = lambda_support(cfg);
    const auto pts = grid_points(cfg.grid);
    const int nv = static_cast<int>(support.size());

    auto as_vector = [&](const DegreeDistribution& lambda) {
        std::vector<double> v(nv, 0.0);
        for (int j = 0; j < nv; ++j) v[j] = lambda.fraction(support[j]);
        return v;
    };
    auto as_dist = [&](const std::vector<double>& v) {
        std::map<int, double> coeffs;
        for (int j = 0; j < nv; ++j) coeffs[support[j]] = v[j];
        return edge_from_values(std::move(coeffs), Side::variable);
    };
    auto feasible = [&](const DegreeDistribution& lambda) {
        if (cfg.l1_cap && lambda.to_node().fraction(1) > *cfg.l1_cap + 1e-12) return false;
        return margins_hold(DeSystem(lambda, cn), pts, threshold);
    };

    DegreeDistribution incumbent = start.perspective() == Perspective::edge ? start : start.to_edge();
    {
        // restrict the start to the configured support
        auto v = as_vector(incumbent);
        double covered = 0.0;
        for (double x : v) covered += x;
        if (covered < 1.0 - 1e-9) throw Infeasible("optimize_vn: start lies outside the support");
        incumbent = as_dist(v);
    }
    if (!feasible(incumbent)) throw Infeasible("optimize_vn: start violates the margin at this delta");

    const DegreeDistribution cn_edge = cn.to_edge();
    const auto z_of = [&](double x) { return 1.0 - cn_edge.eval(1.0 - x); };

    for (int round = 0; round < cfg.inner_iters; ++round) {
        const auto frozen = as_vector(incumbent);

        // Linearized problem over (lambda, kappa): the bilinear form
        //   sum_{i,j} lambda_i lambda_j z^(i+j-1) / i   (i indexing the L factor)
        // is frozen in the i slot. The incumbent stays feasible for its own
        // linearization, so the LP optimum can only improve kappa.
        lp::Problem prob;
        prob.num_vars = nv + 1;  // lambda..., kappa
        prob.objective.assign(nv + 1, 0.0);
        prob.objective[nv] = -1.0;  // maximize kappa

        lp::Constraint sum_one;
        sum_one.a.assign(nv + 1, 0.0);
        for (int j = 0; j < nv; ++j) sum_one.a[j] = 1.0;
        sum_one.rel = lp::Relation::eq;
        sum_one.b = 1.0;
        prob.constraints.push_back(sum_one);

        lp::Constraint kappa_def;
        kappa_def.a.assign(nv + 1, 0.0);
        for (int j = 0; j < nv; ++j) kappa_def.a[j] = 1.0 / support[j];
        kappa_def.a[nv] = -1.0;
        kappa_def.rel = lp::Relation::eq;
        kappa_def.b = 0.0;
        prob.constraints.push_back(kappa_def);

        if (cfg.l1_cap && support.front() == 1) {
            // L_1 = (lambda_1 / 1) / kappa <= cap
            lp::Constraint cap;
            cap.a.assign(nv + 1, 0.0);
            cap.a[0] = 1.0;
            cap.a[nv] = -*cfg.l1_cap;
            cap.rel = lp::Relation::le;
            cap.b = 0.0;
            prob.constraints.push_back(cap);
        }

        for (double x : pts) {
            const double z = z_of(x);
            lp::Constraint con;
            con.a.assign(nv + 1, 0.0);
            for (int j = 0; j < nv; ++j) {
                double coeff = 0.0;
                for (int s = 0; s < nv; ++s)
                    coeff += frozen[s] / support[s] * std::pow(z, support[s] + support[j] - 1);
                con.a[j] = coeff;
            }
            con.a[nv] = -2.0 * x * (1.0 - threshold);
            con.rel = lp::Relation::le;
            con.b = 0.0;
            prob.constraints.push_back(con);
        }

        const auto sol = lp::solve(prob);
        if (sol.status != lp::Status::optimal) break;

        std::vector<double> target(sol.x.begin(), sol.x.begin() + nv);
        const auto base = as_vector(incumbent);
        const double kappa_now = kappa_of(incumbent);

        // longest step toward the LP optimum that keeps the true margins
        bool accepted = false;
        for (double t = 1.0; t >= 1.0 / 4096.0; t *= 0.5) {
            std::vector<double> mixed(nv);
            for (int j = 0; j < nv; ++j) mixed[j] = (1.0 - t) * base[j] + t * target[j];
            auto candidate = as_dist(mixed);
            if (kappa_of(candidate) <= kappa_now * (1.0 + 1e-12)) break;
            if (feasible(candidate)) {
                incumbent = candidate;
                accepted = true;
                break;
            }
        }
        if (!accepted || kappa_of(incumbent) <= kappa_now + 1e-10) break;
    }
    return incumbent;
}

AlternateResult alternate(const EnsembleSpec& init, const OptimizerConfig& cfg) {
    const double delta = effective_delta(cfg);
    if (cfg.max_rounds < 0) throw DomainError("alternate: max_rounds < 0");

    auto margin_of = [&](const DegreeDistribution& vn, const DegreeDistribution& cn) {
        return feasibility_margin(vn, cn, delta, cfg.grid).margin;
    };

    DegreeDistribution lambda = init.vn.to_edge();
    DegreeDistribution rho = init.cn.to_edge();
    double rate = 1.0 - rho.rate_integral() / lambda.rate_integral();
    double margin = margin_of(init.vn, init.cn);
    if (margin <= 0.0) throw Infeasible("alternate: initial spec fails the margin at this delta");

    AlternateResult result{EnsembleSpec{init.vn, init.cn, rate}, {}};
    result.audit.push_back({0, rate, margin});

    for (int round = 1; round <= cfg.max_rounds; ++round) {
        DegreeDistribution next_rho = rho;
        DegreeDistribution next_lambda = lambda;
        try {
            next_rho = optimize_cn(next_lambda, cfg);
            try {
                next_lambda = optimize_vn(next_rho, cfg, next_lambda);
            } catch (const Infeasible&) {
                // warm start can miss the margin on off-grid points; reseed
                next_lambda = optimize_vn(next_rho, cfg);
            }
        } catch (const Infeasible&) {
            if (round == 1) throw;
            break;  // keep best-so-far
        }
        const double next_rate = 1.0 - next_rho.rate_integral() / next_lambda.rate_integral();
        if (next_rate < rate - 1e-12) break;  // reject the round
        lambda = next_lambda;
        rho = next_rho;
        rate = next_rate;
        margin = margin_of(lambda.to_node(), rho.to_node());
        result.audit.push_back({round, rate, margin});
    }

    result.spec = EnsembleSpec{lambda.to_node(), rho.to_node(), rate};
    return result;
}

}  // namespace ubac
