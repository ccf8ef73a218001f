#include "ubac/code_spec.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "ubac/errors.hpp"

namespace ubac {

namespace {

constexpr double kLenientTolerance = 2e-3;

DegreeDistribution make_side(const std::map<int, double>& coeffs, Side side) {
    DegreeDistribution::Options opts;
    opts.sum_tolerance = kLenientTolerance;
    opts.renormalize = true;
    return DegreeDistribution::validate(coeffs, Perspective::node, side, opts);
}

}  // namespace

CodeSpec parse_code_spec(std::istream& in) {
    std::map<int, double> vn, cn;
    std::optional<long long> n;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "vn" || key == "cn") {
            int degree;
            double fraction;
            if (!(ls >> degree >> fraction))
                throw ConfigError("code spec line " + std::to_string(lineno) + ": expected '" +
                                  key + " <degree> <fraction>'");
            auto& side = key == "vn" ? vn : cn;
            side[degree] += fraction;
        } else if (key == "n") {
            long long value;
            if (!(ls >> value) || value <= 0)
                throw ConfigError("code spec line " + std::to_string(lineno) + ": bad blocklength");
            n = value;
        } else {
            throw ConfigError("code spec line " + std::to_string(lineno) + ": unknown key '" +
                              key + "'");
        }
    }
    if (vn.empty() || cn.empty()) throw ConfigError("code spec: missing vn or cn entries");
    auto vn_dist = make_side(vn, Side::variable);
    auto cn_dist = make_side(cn, Side::check);
    return CodeSpec{make_ensemble(vn_dist, cn_dist), n};
}

CodeSpec load_code_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open code spec: " + path);
    return parse_code_spec(in);
}

void write_code_spec(std::ostream& out, const CodeSpec& spec) {
    out << std::setprecision(17);
    if (spec.n) out << "n " << *spec.n << "\n";
    for (const auto& [degree, fraction] : spec.ensemble.vn.coefficients())
        out << "vn " << degree << " " << fraction << "\n";
    for (const auto& [degree, fraction] : spec.ensemble.cn.coefficients())
        out << "cn " << degree << " " << fraction << "\n";
}

void save_code_spec(const std::string& path, const CodeSpec& spec) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write code spec: " + path);
    write_code_spec(out, spec);
}

CodeSpec preset_code(int index) {
    std::map<int, double> vn, cn;
    switch (index) {
        case 1:
            vn = {{1, 0.376}, {2, 0.594}, {5, 0.014}, {6, 0.016}};
            cn = {{4, 0.586}, {5, 0.188}, {10, 0.227}};
            break;
        case 2:
            vn = {{1, 0.560}, {2, 0.371}, {7, 0.061}, {8, 0.008}};
            cn = {{4, 0.128}, {5, 0.582}, {10, 0.290}};
            break;
        case 3:
            vn = {{1, 0.444}, {2, 0.445}, {8, 0.111}};
            cn = {{4, 0.323}, {5, 0.489}, {20, 0.188}};
            break;
        default:
            throw ConfigError("preset_code: index " + std::to_string(index));
    }
    auto vn_dist = make_side(vn, Side::variable);
    auto cn_dist = make_side(cn, Side::check);
    return CodeSpec{make_ensemble(vn_dist, cn_dist), std::nullopt};
}

CodeSpec resolve_code_spec(const std::string& name_or_path) {
    if (name_or_path == "code1") return preset_code(1);
    if (name_or_path == "code2") return preset_code(2);
    if (name_or_path == "code3") return preset_code(3);
    return load_code_spec(name_or_path);
}

}  // namespace ubac
