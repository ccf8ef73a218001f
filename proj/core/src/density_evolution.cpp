#include "ubac/density_evolution.hpp"

#include <ostream>

#include "ubac/errors.hpp"

namespace ubac {

DeSystem::DeSystem(const DegreeDistribution& vn, const DegreeDistribution& cn)
    : vn_node_(vn.to_node()), vn_edge_(vn.to_edge()), cn_edge_(cn.to_edge()) {
    if (vn.side() != Side::variable || cn.side() != Side::check)
        throw PerspectiveMismatch("DeSystem: expects a (variable, check) pair");
}

DEState de_initial_state() { return DEState{}; }

DEState de_step(const DEState& state, const DeSystem& sys) {
    DEState next;
    next.x = state.z * sys.lambda(state.y);
    next.y = 1.0 - sys.rho(1.0 - next.x);
    next.w = sys.L(next.y);
    next.z = 0.5 * next.w;
    next.iteration = state.iteration + 1;
    return next;
}

double de_scalar_step(double x, const DeSystem& sys) {
    const double y = 1.0 - sys.rho(1.0 - x);
    return 0.5 * sys.L(y) * sys.lambda(y);
}

double de_update_y(const DeSystem& sys, double y) {
    return 1.0 - sys.rho(1.0 - 0.5 * sys.L(y) * sys.lambda(y));
}

DETrajectory de_run(const DeSystem& sys, int max_iters, double target) {
    if (max_iters < 1) throw DomainError("de_run: max_iters < 1");
    if (!(target >= 0.0 && target <= 1.0)) throw DomainError("de_run: target outside [0,1]");

    DETrajectory trajectory;
    DEState state = de_initial_state();
    trajectory.states.push_back(state);
    for (int l = 1; l <= max_iters; ++l) {
        const double z_prev = state.z;
        state = de_step(state, sys);
        trajectory.states.push_back(state);
        trajectory.p.push_back(z_prev * sys.L(state.y));
        if (trajectory.p.back() <= target) {
            trajectory.converged = true;
            trajectory.iterations_to_target = l;
            break;
        }
    }
    return trajectory;
}

FeasibilityReport feasibility_margin(const DeSystem& sys, double delta, int grid) {
    if (grid < 10) throw DomainError("feasibility_margin: grid < 10");
    if (delta < 0.0) throw DomainError("feasibility_margin: delta < 0");
    FeasibilityReport report{2.0, 0.0};
    for (int k = 1; k <= grid; ++k) {
        const double y = static_cast<double>(k) / (grid + 1);
        const double margin = (y - de_update_y(sys, y)) / y;
        if (margin < report.margin) {
            report.margin = margin;
            report.argmin = y;
        }
    }
    report.margin -= delta;
    return report;
}

DETrajectory de_run(const DegreeDistribution& vn, const DegreeDistribution& cn, int max_iters,
                    double target) {
    return de_run(DeSystem(vn, cn), max_iters, target);
}

FeasibilityReport feasibility_margin(const DegreeDistribution& vn, const DegreeDistribution& cn,
                                     double delta, int grid) {
    return feasibility_margin(DeSystem(vn, cn), delta, grid);
}

void write_trajectory_csv(std::ostream& out, const DETrajectory& trajectory) {
    out << "iter,x,y,w,z,p\n";
    out.precision(17);
    for (std::size_t l = 0; l < trajectory.states.size(); ++l) {
        const auto& s = trajectory.states[l];
        out << s.iteration << ',' << s.x << ',' << s.y << ',' << s.w << ',' << s.z << ',';
        if (l == 0)
            out << 1;  // nothing decoded before the first iteration
        else
            out << trajectory.p[l - 1];
        out << '\n';
    }
}

}  // namespace ubac
