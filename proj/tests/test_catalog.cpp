#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "tpob/catalog.hpp"

using namespace tpob;

TEST_CASE("ball solution oracle values (lambda=1, R=1, n=2)") {
    CHECK(std::abs(ball_solution_eval_radial(1.0, 1.0, 2, 1.0)) <= 1e-14);
    // V(1/2) = -3/16 + ln(2)/2.
    CHECK(ball_solution_eval_radial(1.0, 1.0, 2, 0.5) ==
          doctest::Approx(-3.0 / 16 + std::log(2.0) / 2).epsilon(1e-13));
    // |V'(1)| via a symmetric difference with Richardson extrapolation.
    auto dv = [](double step) {
        return (ball_solution_eval_radial(1.0, 1.0, 2, 1.0 + step) -
                ball_solution_eval_radial(1.0, 1.0, 2, 1.0 - step)) /
               (2.0 * step);
    };
    const double d1 = dv(1e-4), d2 = dv(5e-5);
    CHECK(std::abs((4.0 * d2 - d1) / 3.0) <= 1e-9);
    // Vector form agrees with the radial form.
    CHECK(ball_solution_eval(1.0, 1.0, 2, {0.3, 0.4}) ==
          doctest::Approx(ball_solution_eval_radial(1.0, 1.0, 2, 0.5))
              .epsilon(1e-14));
    CHECK_THROWS_AS(ball_solution_eval(1.0, 1.0, 2, {0.0, 0.0}),
                    std::domain_error);
}

TEST_CASE("half-space solutions satisfy their closed forms") {
    const Coefficients c{2.0, 3.0};
    ExactSolution sol;
    sol.kind = ExactKind::HalfSpaceParabolic;
    sol.sign = +1;
    sol.a = 0.3;
    CHECK(exact_eval(sol, c, {0.8, 0.1}) ==
          doctest::Approx(0.5 * 2.0 * 0.5 * 0.5).epsilon(1e-14));
    CHECK(exact_eval(sol, c, {0.1, 0.5}) == doctest::Approx(0.0));
    sol.sign = -1;
    CHECK(exact_eval(sol, c, {0.8, 0.1}) ==
          doctest::Approx(-0.5 * 3.0 * 0.5 * 0.5).epsilon(1e-14));
    sol.kind = ExactKind::HalfSpaceWithLinear;
    sol.sign = +1;
    sol.alpha = 0.7;
    CHECK(exact_eval(sol, c, {0.5, -0.2}) ==
          doctest::Approx(0.5 * 2.0 * 0.25 + 0.7 * 0.5).epsilon(1e-14));
}

TEST_CASE("homogeneous profile peaks at lambda/2 on the equator") {
    const double pi = 3.14159265358979323846;
    CHECK(homogeneous_profile_eval(+1, 2.0, pi / 2) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(homogeneous_profile_eval(-1, 0.5, pi / 2) ==
          doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(homogeneous_profile_eval(+1, 1.0, 0.0) == doctest::Approx(0.0));
    CHECK(homogeneous_profile_eval(+1, 1.0, pi) ==
          doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("counterexample data family validates its parameters") {
    CHECK_THROWS_AS(counterexample_boundary_data(0.1, 0.2, 0.3, 0.2, 1.0),
                    std::invalid_argument);  // s <= w
    CHECK_THROWS_AS(counterexample_boundary_data(-0.1, 0.2, 0.2, 0.3, 1.0),
                    std::invalid_argument);
    const Scenario sc = make_counterexample_scenario(0.05, 0.24, 0.25, 0.3,
                                                     {1.0, 1.0});
    // The bump is supported in [s-w, s+w] = [0.05, 0.55]: value, slope and
    // curvature all vanish at the touch point.
    const CondReport rep = validate_condition_cond(sc);
    CHECK(rep.pass);
    CHECK(std::abs(rep.value) <= 1e-10);
    CHECK(std::abs(rep.grad) <= 1e-7);
    CHECK(std::abs(rep.hess) <= 1e-5);
    // Peak of the bump on Pi.
    CHECK(sc.pi_value(0.3) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(sc.pi_value(0.0) == doctest::Approx(0.0));
}

TEST_CASE("smooth data has a convergent Dini integral estimate") {
    const DiniReport rep =
        dini_integral([](double t) { return t * t * t; }, 64);
    CHECK(!rep.divergent);
    CHECK(rep.integral < 100.0);
}

TEST_CASE("scenario JSON round trip is bit exact") {
    const Scenario scenarios[] = {
        make_halfspace_scenario(+1, 0.3, {1.0, 2.0}),
        make_halfspace_scenario(-1, 0.0, {0.5, 1.5}),
        make_withlinear_scenario(+1, 0.125, {1.0, 1.0}),
        make_oddsym_scenario(0.75, {1.0, 1.0}),
        make_counterexample_scenario(0.01, 0.2, 0.25, 0.3, {1.0, 1.0}),
        make_typical_example(0),
        make_typical_example(1),
        make_typical_example(2),
    };
    for (const Scenario& sc : scenarios) {
        const std::string once = scenario_to_json(sc);
        const std::string twice = scenario_to_json(scenario_from_json(once));
        CHECK(once == twice);
        // Round-tripped scenarios evaluate identical boundary data.
        const Scenario back = scenario_from_json(once);
        for (double t : {-0.7, -0.1, 0.0, 0.3, 0.9})
            CHECK(back.pi_value(t) == sc.pi_value(t));
    }
}

TEST_CASE("scenario file IO round trip") {
    const auto path =
        std::filesystem::temp_directory_path() / "catalog_roundtrip.json";
    const Scenario sc = make_oddsym_scenario(1.25, {2.0, 0.5});
    save_scenario(sc, path.string());
    const Scenario back = load_scenario(path.string());
    CHECK(scenario_to_json(back) == scenario_to_json(sc));
    std::filesystem::remove(path);
    CHECK_THROWS(load_scenario(path.string()));
}

TEST_CASE("preset scenarios carry positive coefficients and exact tags") {
    const Scenario hs = make_halfspace_scenario(+1, 0.3, {1.0, 1.0});
    REQUIRE(hs.exact.has_value());
    CHECK(hs.exact->kind == ExactKind::HalfSpaceParabolic);
    CHECK(hs.exact->a == 0.3);
    const Scenario odd = make_oddsym_scenario(1.0, {1.0, 1.0});
    CHECK(!odd.exact.has_value());
    CHECK(odd.coeffs.lambda_plus > 0.0);
    CHECK(odd.coeffs.lambda_minus > 0.0);
    // Odd-symmetric data vanishes on Pi and is odd in x2 on the arc.
    CHECK(odd.pi_value(0.4) == doctest::Approx(0.0));
    const double up = odd.boundary_value({std::sqrt(0.5), std::sqrt(0.5)});
    const double dn = odd.boundary_value({std::sqrt(0.5), -std::sqrt(0.5)});
    CHECK(up == doctest::Approx(-dn).epsilon(1e-12));
    CHECK(up != 0.0);
}
