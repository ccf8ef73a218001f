#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "ubac/degree_dist.hpp"

namespace ubac {

/// Erasure probabilities of the four message types after an iteration:
/// x VN->CN, y CN->VN, w VN->MAC, z MAC->VN.
struct DEState {
    double x = 1.0;
    double y = 1.0;
    double w = 1.0;
    double z = 0.5;
    int iteration = 0;
};

struct DETrajectory {
    std::vector<DEState> states;  // states.front() is the initial condition
    std::vector<double> p;        // residual bit erasure probability, p[l-1] after iteration l
    bool converged = false;
    std::optional<int> iterations_to_target;
};

/// Precomputed L / lambda / rho evaluators for one ensemble. Accepts the
/// variable-side distribution in either perspective (needs both L and lambda)
/// and the check side in either perspective (needs rho).
class DeSystem {
  public:
    DeSystem(const DegreeDistribution& vn, const DegreeDistribution& cn);

    double L(double x) const { return vn_node_.eval(x); }
    double lambda(double x) const { return vn_edge_.eval(x); }
    double rho(double x) const { return cn_edge_.eval(x); }

    const DegreeDistribution& vn_node() const { return vn_node_; }
    const DegreeDistribution& vn_edge() const { return vn_edge_; }
    const DegreeDistribution& cn_edge() const { return cn_edge_; }

  private:
    DegreeDistribution vn_node_;
    DegreeDistribution vn_edge_;
    DegreeDistribution cn_edge_;
};

DEState de_initial_state();

/// One update in the order x, y, w, z:
///   x' = z lambda(y), y' = 1 - rho(1 - x'), w' = L(y'), z' = w'/2.
DEState de_step(const DEState& state, const DeSystem& sys);

/// Scalar reduction x' = L(1-rho(1-x)) lambda(1-rho(1-x)) / 2.
double de_scalar_step(double x, const DeSystem& sys);

/// The y-space update y' = 1 - rho(1 - L(y) lambda(y) / 2).
double de_update_y(const DeSystem& sys, double y);

/// Iterates de_step from the initial condition, recording p_l = z_{l-1} L(y_l)
/// each iteration, until p_l <= target or max_iters.
DETrajectory de_run(const DeSystem& sys, int max_iters, double target);

struct FeasibilityReport {
    double margin;   // min over the grid of (y - de_update_y(y))/y, minus delta
    double argmin;   // grid point where the minimum occurs
};

/// Contraction-rate margin of the y-recursion on a uniform grid over (0,1)
/// (endpoints excluded, grid >= 10 points). A positive value certifies that
/// every grid point contracts by at least a (1-delta) factor per iteration.
/// The margin is measured relative to y: the absolute gap y - update(y) tends
/// to zero linearly at y -> 0, so a fixed absolute slack would be
/// unsatisfiable near the origin for any ensemble.
FeasibilityReport feasibility_margin(const DeSystem& sys, double delta, int grid);

// Convenience overloads building the DeSystem on the fly.
DETrajectory de_run(const DegreeDistribution& vn, const DegreeDistribution& cn, int max_iters,
                    double target);
FeasibilityReport feasibility_margin(const DegreeDistribution& vn, const DegreeDistribution& cn,
                                     double delta, int grid);

void write_trajectory_csv(std::ostream& out, const DETrajectory& trajectory);

}  // namespace ubac
