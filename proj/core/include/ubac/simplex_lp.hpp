#pragma once

#include <vector>

namespace ubac::lp {

enum class Relation { le, ge, eq };

struct Constraint {
    std::vector<double> a;
    Relation rel;
    double b;
};

/// minimize c.x  subject to  A x {<=,>=,=} b,  x >= 0
struct Problem {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<Constraint> constraints;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Solution {
    Status status = Status::infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

/// Two-phase dense simplex. Dantzig pricing with a Bland fallback once the
/// iteration count passes half the budget, which breaks the cycles Dantzig
/// can enter on degenerate vertices.
Solution solve(const Problem& problem, double eps = 1e-9, int max_iterations = 50000);

}  // namespace ubac::lp
