#include "ubac/degree_dist.hpp"

#include <cmath>
#include <string>

#include "ubac/errors.hpp"

namespace ubac {

DegreeDistribution DegreeDistribution::validate(const std::map<int, double>& coefficients,
                                                Perspective perspective, Side side,
                                                const Options& options) {
    if (coefficients.empty()) throw ZeroDegree("degree distribution: empty coefficient map");
    double sum = 0.0;
    for (const auto& [degree, fraction] : coefficients) {
        if (degree <= 0) throw ZeroDegree("degree distribution: degree " + std::to_string(degree));
        if (fraction < 0.0)
            throw NegativeFraction("degree distribution: negative fraction at degree " +
                                   std::to_string(degree));
        if (degree == 1 && side == Side::check && !options.allow_check_degree_one)
            throw DegreeNotAllowed("degree distribution: degree-1 check entry not allowed");
        sum += fraction;
    }
    if (std::abs(sum - 1.0) > options.sum_tolerance)
        throw SumNotOne("degree distribution: coefficients sum to " + std::to_string(sum));

    std::map<int, double> coeffs;
    for (const auto& [degree, fraction] : coefficients) {
        if (fraction == 0.0) continue;  // keep the support sparse
        coeffs.emplace(degree, options.renormalize ? fraction / sum : fraction);
    }
    if (coeffs.empty()) throw SumNotOne("degree distribution: all fractions are zero");
    return DegreeDistribution(std::move(coeffs), perspective, side);
}

double DegreeDistribution::fraction(int degree) const {
    auto it = coeffs_.find(degree);
    return it == coeffs_.end() ? 0.0 : it->second;
}

double DegreeDistribution::eval(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("eval: x = " + std::to_string(x));
    double value = 0.0;
    for (const auto& [degree, c] : coeffs_) {
        const int power = perspective_ == Perspective::node ? degree : degree - 1;
        value += c * std::pow(x, power);
    }
    if (value < 0.0) return 0.0;
    return value > 1.0 ? 1.0 : value;
}

double DegreeDistribution::derivative_at_one() const {
    double value = 0.0;
    for (const auto& [degree, c] : coeffs_) {
        const int power = perspective_ == Perspective::node ? degree : degree - 1;
        value += c * power;
    }
    return value;
}

double DegreeDistribution::mean_node_degree() const {
    if (perspective_ == Perspective::node) {
        double mean = 0.0;
        for (const auto& [degree, c] : coeffs_) mean += degree * c;
        return mean;
    }
    return 1.0 / rate_integral();
}

double DegreeDistribution::rate_integral() const {
    double value = 0.0;
    for (const auto& [degree, c] : coeffs_) value += c / degree;
    return value;
}

DegreeDistribution DegreeDistribution::to_edge() const {
    if (perspective_ == Perspective::edge) return *this;
    const double mean = mean_node_degree();
    std::map<int, double> edge;
    for (const auto& [degree, c] : coeffs_) edge.emplace(degree, degree * c / mean);
    return DegreeDistribution(std::move(edge), Perspective::edge, side_);
}

DegreeDistribution DegreeDistribution::to_node() const {
    if (perspective_ == Perspective::node) return *this;
    const double scale = rate_integral();
    std::map<int, double> node;
    for (const auto& [degree, c] : coeffs_) node.emplace(degree, c / degree / scale);
    return DegreeDistribution(std::move(node), Perspective::node, side_);
}

double design_rate(const DegreeDistribution& vn, const DegreeDistribution& cn) {
    if (vn.perspective() != Perspective::node || cn.perspective() != Perspective::node)
        throw PerspectiveMismatch("design_rate: expects node-perspective distributions");
    const double rate = 1.0 - vn.mean_node_degree() / cn.mean_node_degree();
    if (!(rate > 0.0 && rate < 1.0))
        throw RateOutOfRange("design_rate: " + std::to_string(rate));
    return rate;
}

EnsembleSpec make_ensemble(const DegreeDistribution& vn, const DegreeDistribution& cn) {
    return EnsembleSpec{vn, cn, design_rate(vn, cn)};
}

}  // namespace ubac
