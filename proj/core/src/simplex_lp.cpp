#include "ubac/simplex_lp.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace ubac::lp {

namespace {

// Dense tableau:
//   rows 0..m-1: constraint rows over [structural | slack/surplus | artificial | rhs]
//   row m:       phase objective (reduced costs), rhs = -objective value
class Tableau {
  public:
    Tableau(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    void pivot(int pr, int pc) {
        const double inv = 1.0 / at(pr, pc);
        double* prow = &data_[static_cast<std::size_t>(pr) * cols_];
        for (int c = 0; c < cols_; ++c) prow[c] *= inv;
        prow[pc] = 1.0;
        for (int r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            double* row = &data_[static_cast<std::size_t>(r) * cols_];
            const double factor = row[pc];
            if (factor == 0.0) continue;
            for (int c = 0; c < cols_; ++c) row[c] -= factor * prow[c];
            row[pc] = 0.0;
        }
    }

  private:
    int rows_, cols_;
    std::vector<double> data_;
};

struct Dict {
    int m = 0;           // constraint rows
    int n = 0;           // columns excluding rhs
    int rhs = 0;         // rhs column index
    std::vector<int> basis;
};

// One simplex phase on the current objective row (row m). Returns status.
Status run_phase(Tableau& t, Dict& d, double eps, int& iters_left, int bland_after) {
    int iter = 0;
    while (true) {
        if (--iters_left <= 0) return Status::iteration_limit;
        const bool bland = ++iter > bland_after;
        // entering column
        int pc = -1;
        double best = -eps;
        for (int c = 0; c < d.n; ++c) {
            const double rc = t.at(d.m, c);
            if (rc < -eps) {
                if (bland) { pc = c; break; }
                if (rc < best) { best = rc; pc = c; }
            }
        }
        if (pc < 0) return Status::optimal;
        // ratio test
        int pr = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int r = 0; r < d.m; ++r) {
            const double a = t.at(r, pc);
            if (a > eps) {
                const double ratio = t.at(r, d.rhs) / a;
                if (ratio < best_ratio - eps ||
                    (ratio < best_ratio + eps && (pr < 0 || d.basis[r] < d.basis[pr]))) {
                    best_ratio = ratio;
                    pr = r;
                }
            }
        }
        if (pr < 0) return Status::unbounded;
        t.pivot(pr, pc);
        d.basis[pr] = pc;
    }
}

}  // namespace

Solution solve(const Problem& problem, double eps, int max_iterations) {
    const int m = static_cast<int>(problem.constraints.size());
    const int nv = problem.num_vars;

    // Count extra columns. Every row gets either a slack (<=), a surplus +
    // artificial (>=), or an artificial (=); rows are first normalized to
    // nonnegative rhs.
    int n_slack = 0, n_art = 0;
    for (const auto& con : problem.constraints) {
        Relation rel = con.rel;
        if (con.b < 0.0) rel = rel == Relation::le ? Relation::ge : (rel == Relation::ge ? Relation::le : Relation::eq);
        if (rel == Relation::le) ++n_slack;
        else if (rel == Relation::ge) { ++n_slack; ++n_art; }
        else ++n_art;
    }

    const int n = nv + n_slack + n_art;
    Tableau t(m + 1, n + 1);
    Dict d;
    d.m = m;
    d.n = n;
    d.rhs = n;
    d.basis.assign(m, -1);

    int slack_col = nv;
    int art_col = nv + n_slack;
    std::vector<int> art_rows;
    for (int r = 0; r < m; ++r) {
        const auto& con = problem.constraints[r];
        assert(static_cast<int>(con.a.size()) == nv);
        double sign = con.b < 0.0 ? -1.0 : 1.0;
        Relation rel = con.rel;
        if (sign < 0.0) rel = rel == Relation::le ? Relation::ge : (rel == Relation::ge ? Relation::le : Relation::eq);
        for (int c = 0; c < nv; ++c) t.at(r, c) = sign * con.a[c];
        t.at(r, d.rhs) = sign * con.b;
        if (rel == Relation::le) {
            t.at(r, slack_col) = 1.0;
            d.basis[r] = slack_col++;
        } else if (rel == Relation::ge) {
            t.at(r, slack_col) = -1.0;
            ++slack_col;
            t.at(r, art_col) = 1.0;
            d.basis[r] = art_col++;
            art_rows.push_back(r);
        } else {
            t.at(r, art_col) = 1.0;
            d.basis[r] = art_col++;
            art_rows.push_back(r);
        }
    }

    int iters_left = max_iterations;
    const int bland_after = max_iterations / 2;

    Solution sol;
    if (n_art > 0) {
        // phase 1: minimize the artificial sum
        for (int c = nv + n_slack; c < n; ++c) t.at(m, c) = 1.0;
        for (int r : art_rows)
            for (int c = 0; c <= n; ++c) t.at(m, c) -= t.at(r, c);
        const Status st = run_phase(t, d, eps, iters_left, bland_after);
        if (st == Status::iteration_limit) { sol.status = st; return sol; }
        if (-t.at(m, d.rhs) > 1e-7) { sol.status = Status::infeasible; return sol; }
        // pivot remaining artificials out of the basis (degenerate rows)
        for (int r = 0; r < m; ++r) {
            if (d.basis[r] < nv + n_slack) continue;
            int pc = -1;
            for (int c = 0; c < nv + n_slack; ++c)
                if (std::abs(t.at(r, c)) > eps) { pc = c; break; }
            if (pc >= 0) {
                t.pivot(r, pc);
                d.basis[r] = pc;
            }
        }
        // disable artificial columns
        for (int r = 0; r <= m; ++r)
            for (int c = nv + n_slack; c < n; ++c) t.at(r, c) = 0.0;
    }

    // phase 2 objective, expressed over the current basis
    for (int c = 0; c <= n; ++c) t.at(m, c) = 0.0;
    for (int c = 0; c < nv; ++c) t.at(m, c) = problem.objective[c];
    for (int r = 0; r < m; ++r) {
        const int b = d.basis[r];
        if (b >= 0 && b < nv && problem.objective[b] != 0.0) {
            const double factor = problem.objective[b];
            for (int c = 0; c <= n; ++c) t.at(m, c) -= factor * t.at(r, c);
        }
    }
    // keep disabled artificial columns out of pricing
    for (int c = nv + n_slack; c < n; ++c) t.at(m, c) = 0.0;

    const Status st = run_phase(t, d, eps, iters_left, bland_after);
    if (st != Status::optimal) { sol.status = st; return sol; }

    sol.status = Status::optimal;
    sol.x.assign(nv, 0.0);
    for (int r = 0; r < m; ++r)
        if (d.basis[r] >= 0 && d.basis[r] < nv) sol.x[d.basis[r]] = t.at(r, d.rhs);
    sol.objective = 0.0;
    for (int c = 0; c < nv; ++c) sol.objective += problem.objective[c] * sol.x[c];
    return sol;
}

}  // namespace ubac::lp
