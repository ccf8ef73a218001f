#include <doctest.h>

#include "ubac/code_spec.hpp"
#include "ubac/density_evolution.hpp"
#include "ubac/errors.hpp"

using namespace ubac;

namespace {

DeSystem system_for(int preset) {
    const auto spec = preset_code(preset).ensemble;
    return DeSystem(spec.vn, spec.cn);
}

DeSystem regular(int vn_degree, int cn_degree) {
    const auto vn =
        DegreeDistribution::validate({{vn_degree, 1.0}}, Perspective::node, Side::variable);
    const auto cn = DegreeDistribution::validate({{cn_degree, 1.0}}, Perspective::node, Side::check);
    return DeSystem(vn, cn);
}

}  // namespace

TEST_CASE("first step from the initial condition") {
    const auto sys = system_for(2);
    const auto s1 = de_step(de_initial_state(), sys);
    CHECK(s1.x == doctest::Approx(0.5).epsilon(1e-15));  // z0 * lambda(1)
    CHECK(s1.iteration == 1);
}

TEST_CASE("zero is an absorbing fixed point") {
    const auto sys = system_for(1);
    DEState state;
    state.x = 0.0;
    state.y = 0.0;
    state.w = 0.0;
    state.z = 0.0;
    const auto next = de_step(state, sys);
    CHECK(next.x == 0.0);
    CHECK(next.y == 0.0);
    CHECK(next.w == 0.0);
    CHECK(next.z == 0.0);
}

TEST_CASE("one and two full steps match the hand-evaluated recursion") {
    // frozen from an independent evaluation of the four update formulas
    const auto sys = system_for(2);
    auto s = de_step(de_initial_state(), sys);
    CHECK(s.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.y == doctest::Approx(0.9602121065327428).epsilon(1e-12));
    CHECK(s.w == doctest::Approx(0.93147404650737298).epsilon(1e-12));
    CHECK(s.z == doctest::Approx(0.46573702325368649).epsilon(1e-12));
    s = de_step(s, sys);
    CHECK(s.x == doctest::Approx(0.42997563057791982).epsilon(1e-12));
    CHECK(s.y == doctest::Approx(0.93348790405482274).epsilon(1e-12));
    CHECK(s.w == doctest::Approx(0.88833349664686378).epsilon(1e-12));
    CHECK(s.z == doctest::Approx(0.44416674832343189).epsilon(1e-12));
}

TEST_CASE("scalar step: fixed points, frozen value, monotonicity") {
    const auto sys1 = system_for(1);
    CHECK(de_scalar_step(0.0, sys1) == doctest::Approx(0.0));
    CHECK(de_scalar_step(1.0, sys1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(de_scalar_step(0.3, sys1) == doctest::Approx(0.2747802226717056).epsilon(1e-12));

    double prev = 0.0;
    for (int k = 0; k <= 50; ++k) {
        const double x = k / 50.0;
        const double v = de_scalar_step(x, sys1);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("de_run converges for all three presets and matches the scalar recursion") {
    for (int preset : {1, 2, 3}) {
        const auto sys = system_for(preset);
        const auto run = de_run(sys, 2000, 1e-6);
        CHECK(run.converged);
        REQUIRE(run.iterations_to_target.has_value());
        CHECK(*run.iterations_to_target < 2000);
        CHECK(run.p.back() <= 1e-6);

        // x-sequence equals iterates of the scalar map; y matches its own recursion
        for (std::size_t l = 0; l + 1 < run.states.size(); ++l) {
            CHECK(run.states[l + 1].x ==
                  doctest::Approx(de_scalar_step(run.states[l].x, sys)).epsilon(1e-12));
            CHECK(run.states[l + 1].y ==
                  doctest::Approx(de_update_y(sys, run.states[l].y)).epsilon(1e-12));
        }
        // p_l = z_{l-1} L(y_l), in [0,1], nonincreasing
        for (std::size_t l = 0; l < run.p.size(); ++l) {
            CHECK(run.p[l] ==
                  doctest::Approx(run.states[l].z * sys.L(run.states[l + 1].y)).epsilon(1e-12));
            CHECK(run.p[l] >= 0.0);
            CHECK(run.p[l] <= 1.0);
            if (l > 0) CHECK(run.p[l] <= run.p[l - 1] + 1e-15);
        }
        // x is monotone nonincreasing from iteration 1 on
        for (std::size_t l = 1; l + 1 < run.states.size(); ++l)
            CHECK(run.states[l + 1].x <= run.states[l].x + 1e-15);
    }
}

TEST_CASE("a low-rate regular pair converges; hand iterates agree") {
    const auto sys = regular(2, 3);  // implied rate 1/3
    const auto run = de_run(sys, 2000, 1e-8);
    CHECK(run.converged);
    // scalar iterates from x0 = 1, computed by hand
    CHECK(run.states[1].x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(run.states[2].x == doctest::Approx(0.2109375).epsilon(1e-12));
    CHECK(run.states[3].x == doctest::Approx(0.026872490990058395).epsilon(1e-12));
}

TEST_CASE("target = 1 stops after one recorded iteration") {
    const auto run = de_run(system_for(2), 50, 1.0);
    CHECK(run.converged);
    CHECK(run.p.size() == 1);
    CHECK(run.iterations_to_target == 1);
}

TEST_CASE("de_run validates its arguments") {
    const auto sys = system_for(1);
    CHECK_THROWS_AS(de_run(sys, 0, 1e-6), DomainError);
    CHECK_THROWS_AS(de_run(sys, 10, -0.1), DomainError);
}

TEST_CASE("feasibility margins: presets positive at delta 0, impossible slacks negative") {
    for (int preset : {1, 2, 3}) {
        const auto spec = preset_code(preset).ensemble;
        const auto report = feasibility_margin(spec.vn, spec.cn, 0.0, 256);
        CHECK(report.margin > 0.0);
        CHECK(report.argmin > 0.0);
        CHECK(report.argmin < 1.0);
    }
    const auto code2 = preset_code(2).ensemble;
    CHECK(feasibility_margin(code2.vn, code2.cn, 1.0, 256).margin < 0.0);

    // rate 0.98 pair, far above capacity: DE stalls and the margin is negative
    const auto vn = DegreeDistribution::validate({{2, 1.0}}, Perspective::node, Side::variable);
    const auto cn = DegreeDistribution::validate({{100, 1.0}}, Perspective::node, Side::check);
    CHECK(feasibility_margin(vn, cn, 0.0, 256).margin < 0.0);
    const auto stalled = de_run(vn, cn, 2000, 1e-8);
    CHECK_FALSE(stalled.converged);

    CHECK_THROWS_AS(feasibility_margin(vn, cn, 0.0, 9), DomainError);
    CHECK_THROWS_AS(feasibility_margin(vn, cn, -0.5, 64), DomainError);
}

TEST_CASE("margin report pinpoints the binding grid point of a feasible pair") {
    const auto code2 = preset_code(2).ensemble;
    const auto report = feasibility_margin(code2.vn, code2.cn, 0.0, 256);
    const DeSystem sys(code2.vn, code2.cn);
    const double y = report.argmin;
    CHECK((y - de_update_y(sys, y)) / y == doctest::Approx(report.margin).epsilon(1e-12));
}
