#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ubac/degree_dist.hpp"

namespace ubac {

struct OptimizerConfig {
    int l_max = 8;
    int r_max = 12;
    double delta = 0.0;
    int grid = 256;
    int max_rounds = 10;
    std::optional<long long> n_for_delta;  // when set, delta = delta_coefficient / sqrt(n)
    double delta_coefficient = 0.5;
    std::uint64_t seed = 1;

    int min_vn_degree = 1;                 // smallest degree admitted in lambda's support
    std::optional<double> l1_cap;          // optional ceiling on the node fraction L_1
    double strictness = 1e-9;              // strict inequalities realized as >= delta + strictness
    /// Second-order guard band guard/grid^2 added to the grid constraints so
    /// the continuum inequality also holds between grid points (the margin
    /// curve dips by O(curvature/grid^2) between binding points).
    double grid_guard = 8.0;
    int inner_iters = 40;                  // linearization rounds of the lambda step
};

/// Slack actually used: delta, or delta_coefficient/sqrt(n) when n_for_delta is set.
double effective_delta(const OptimizerConfig& cfg);

/// Check-side step. With lambda fixed, minimizes sum rho_i/i (maximizing the
/// mean check degree and hence the rate) over edge fractions rho_2..rho_rmax
/// subject to the contraction constraint at slack delta on the grid. The
/// solution is re-verified on a 4x finer grid and re-solved on it when a
/// finer-grid point dips below the slack. Throws Infeasible.
DegreeDistribution optimize_cn(const DegreeDistribution& vn, const OptimizerConfig& cfg);

/// Variable-side step. With rho fixed, maximizes kappa = sum lambda_i/i by
/// successive linearization of the bilinear constraint: each round freezes the
/// L-factor at the incumbent, solves the resulting LP, and accepts the longest
/// step toward the LP optimum that keeps the true margins at slack delta.
/// Iterates are always feasible and kappa never decreases. Global optimality
/// is not claimed. Throws Infeasible when no feasible lambda is found.
DegreeDistribution optimize_vn(const DegreeDistribution& cn, const OptimizerConfig& cfg);
DegreeDistribution optimize_vn(const DegreeDistribution& cn, const OptimizerConfig& cfg,
                               const DegreeDistribution& start);

struct OptimizerRound {
    int round;      // 0 = initial spec
    double rate;
    double margin;  // feasibility_margin(vn, cn, delta, grid)
};

struct AlternateResult {
    EnsembleSpec spec;
    std::vector<OptimizerRound> audit;
};

/// Alternates optimize_cn / optimize_vn from a feasible starting spec. A round
/// that would lower the design rate is rejected and the alternation stops, so
/// the audit-trail rates are nondecreasing. Infeasibility of the starting
/// point throws; infeasibility in a later round terminates with best-so-far.
AlternateResult alternate(const EnsembleSpec& init, const OptimizerConfig& cfg);

}  // namespace ubac
