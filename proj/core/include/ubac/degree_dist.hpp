#pragma once

#include <map>

namespace ubac {

enum class Perspective { node, edge };
enum class Side { variable, check };

/// A degree distribution over a Tanner-graph side, either as node fractions
/// (L_i / R_i) or edge fractions (lambda_i / rho_i). Immutable once built, so
/// instances can be shared freely across threads.
///
/// Node perspective evaluates sum_i c_i x^i, edge perspective sum_i c_i x^(i-1).
class DegreeDistribution {
  public:
    struct Options {
        double sum_tolerance = 1e-9;
        bool allow_check_degree_one = false;
        /// Renormalize after the tolerance check. Meant for ingesting rounded
        /// published tables together with a wide tolerance; validation itself
        /// never adjusts coefficients silently.
        bool renormalize = false;
    };

    /// Checks the raw coefficient map and returns the distribution.
    /// Throws NegativeFraction, SumNotOne, ZeroDegree, DegreeNotAllowed.
    static DegreeDistribution validate(const std::map<int, double>& coefficients,
                                       Perspective perspective, Side side,
                                       const Options& options);
    static DegreeDistribution validate(const std::map<int, double>& coefficients,
                                       Perspective perspective, Side side) {
        return validate(coefficients, perspective, side, Options{});
    }

    const std::map<int, double>& coefficients() const { return coeffs_; }
    Perspective perspective() const { return perspective_; }
    Side side() const { return side_; }

    double fraction(int degree) const;
    int min_degree() const { return coeffs_.begin()->first; }
    int max_degree() const { return coeffs_.rbegin()->first; }

    /// Polynomial evaluation on [0,1]; throws DomainError outside.
    double eval(double x) const;

    /// Derivative of the polynomial at x = 1 (e.g. rho'(1) for stability checks).
    double derivative_at_one() const;

    /// Average node degree described by this distribution, regardless of
    /// perspective: sum i*c_i for node form, 1 / sum(c_i / i) for edge form.
    double mean_node_degree() const;

    /// sum_i c_i / i; for an edge-perspective distribution this is the
    /// integral of the polynomial over [0,1].
    double rate_integral() const;

    DegreeDistribution to_edge() const;
    DegreeDistribution to_node() const;

  private:
    DegreeDistribution(std::map<int, double> c, Perspective p, Side s)
        : coeffs_(std::move(c)), perspective_(p), side_(s) {}

    std::map<int, double> coeffs_;
    Perspective perspective_;
    Side side_;
};

/// 1 - mean(vn)/mean(cn) for node-perspective distributions.
/// Throws PerspectiveMismatch unless both are node perspective,
/// RateOutOfRange if the result leaves (0,1).
double design_rate(const DegreeDistribution& vn, const DegreeDistribution& cn);

struct EnsembleSpec {
    DegreeDistribution vn;  // node perspective, variable side
    DegreeDistribution cn;  // node perspective, check side
    double design_rate;
};

EnsembleSpec make_ensemble(const DegreeDistribution& vn, const DegreeDistribution& cn);

}  // namespace ubac
