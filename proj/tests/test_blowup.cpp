#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "tpob/blowup.hpp"
#include "tpob/solver.hpp"

using namespace tpob;

namespace {

Field sample_reference(const std::function<double(Vec2)>& f) {
    const Shape hd = HalfDisk{{0.0, 0.0}, 1.0};
    return sample_field(build_mask(hd, reference_grid()), f);
}

}  // namespace

TEST_CASE("reference grid covers the unit half disk at h = 1/128") {
    const GridSpec& g = reference_grid();
    CHECK(g.h == doctest::Approx(1.0 / 128));
    CHECK(g.node(0, 0).x1 == doctest::Approx(0.0));
    CHECK(g.node(g.n1 - 1, 0).x1 == doctest::Approx(1.0));
    CHECK(g.node(0, 0).x2 == doctest::Approx(-1.0));
    CHECK(g.node(0, g.n2 - 1).x2 == doctest::Approx(1.0));
}

TEST_CASE("quadratic rescaling fixes 2-homogeneous fields") {
    Field u = sample_reference([](Vec2 p) { return 0.5 * p.x1 * p.x1; });
    const Field v = rescale_quadratic(u, 0.25);
    const GridSpec& g = v.grid();
    double worst = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            if (v.mask->is_interior(i, j))
                worst = std::max(worst, std::abs(v.at(i, j) - u.at(i, j)));
    // Bilinear resampling is not exact on quadratics: error
    // ~ (h^2/8) |D^2 u| / d^2 ~ 1.2e-4 at d = 1/4.
    CHECK(worst <= 3e-4);
    CHECK_THROWS_AS(rescale_quadratic(u, 2.0), std::invalid_argument);
}

TEST_CASE("supnorm rescaling reports the measured denominator") {
    Field u = sample_reference([](Vec2 p) { return 3.0 * p.x1; });
    double sup = 0.0;
    const Field v = rescale_supnorm(u, 0.5, &sup);
    CHECK(sup == doctest::Approx(1.5).epsilon(0.05));
    // Rescaled sup is ~1 by construction.
    double vmax = 0.0;
    const GridSpec& g = v.grid();
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            if (v.mask->is_interior(i, j))
                vmax = std::max(vmax, std::abs(v.at(i, j)));
    CHECK(vmax == doctest::Approx(1.0).epsilon(0.05));
    Field zero = sample_reference([](Vec2) { return 0.0; });
    CHECK_THROWS_AS(rescale_supnorm(zero, 0.5), std::invalid_argument);
}

TEST_CASE("classification recovers every taxonomy member") {
    const Coefficients c{1.0, 1.0};
    struct Case {
        std::function<double(Vec2)> f;
        GlobalTag tag;
        double param;
    } const cases[] = {
        {[](Vec2 p) {
             const double t = std::max(p.x1 - 0.3, 0.0);
             return 0.5 * t * t;
         },
         GlobalTag::PositiveParabolic, 0.3},
        {[](Vec2 p) {
             const double t = std::max(p.x1 - 0.2, 0.0);
             return -0.5 * t * t;
         },
         GlobalTag::NegativeParabolic, 0.2},
        {[](Vec2 p) { return 0.5 * p.x1 * p.x1 + 0.4 * p.x1; },
         GlobalTag::PositiveWithLinear, 0.4},
        {[](Vec2 p) { return -0.5 * p.x1 * p.x1 - 0.2 * p.x1; },
         GlobalTag::NegativeWithLinear, 0.2},
        {[](Vec2 p) { return 0.7 * p.x1; }, GlobalTag::Linear, 0.7},
        {[](Vec2) { return 0.0; }, GlobalTag::Zero, 0.0},
    };
    for (const Case& cs : cases) {
        const GlobalSolutionClass got =
            classify_limit(sample_reference(cs.f), c);
        CHECK(got.tag == cs.tag);
        CHECK(got.parameter == doctest::Approx(cs.param).epsilon(0.02));
        CHECK(got.distance <= 1e-6);
    }
}

TEST_CASE("classification rejects nonzero flat-side data") {
    Field u = sample_reference([](Vec2 p) { return 1.0 + p.x1; });
    CHECK_THROWS_AS(classify_limit(u, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("homogeneity defect separates degree 2 from degree 3") {
    Field quad = sample_reference([](Vec2 p) { return p.x1 * p.x1; });
    Field cubic = sample_reference([](Vec2 p) { return p.x1 * p.x1 * p.x1; });
    const std::vector<std::pair<double, double>> pairs = {{0.25, 0.5},
                                                          {0.5, 0.9}};
    CHECK(homogeneity_defect(quad, pairs) <= 1e-3);  // resampling floor
    CHECK(homogeneity_defect(cubic, pairs) >= 0.2);
}

TEST_CASE("barrier check: defect is 4 h^2 and quarters under halving") {
    GridSpec g;
    g.n1 = g.n2 = 33;
    g.h = 1.0 / 16;
    g.origin = {-1.0, -1.0};
    const double d1 = barrier_check(g);
    CHECK(d1 == doctest::Approx(4.0 * g.h * g.h).epsilon(1e-8));
    GridSpec g2 = g;
    g2.h /= 2;
    g2.n1 = g2.n2 = 65;
    CHECK(barrier_check(g2) == doctest::Approx(d1 / 4).epsilon(1e-6));
}

TEST_CASE("ODE brute force finds the two analytic profiles") {
    const Coefficients c{1.0, 1.0};
    const ODEBruteForceReport rep = ode_brute_force(c, 100, 800, 1);
    CHECK(rep.n_starts == 100);
    REQUIRE(rep.profiles.size() == 2);
    for (const auto& prof : rep.profiles) {
        CHECK(prof.deviation <= 1e-6);
        CHECK(prof.hits >= 1);
        REQUIRE(int(prof.values.size()) == rep.grid_m + 1);
    }
    // One positive, one negative profile with peak lambda/2 at pi/2.
    const double mid0 = rep.profiles[0].values[rep.grid_m / 2];
    const double mid1 = rep.profiles[1].values[rep.grid_m / 2];
    CHECK(std::abs(std::abs(mid0) - 0.5) <= 1e-5);
    CHECK(std::abs(std::abs(mid1) - 0.5) <= 1e-5);
    CHECK(mid0 * mid1 < 0.0);
    CHECK_THROWS_AS(ode_brute_force(c, 10, 800, 1), std::invalid_argument);
    CHECK_THROWS_AS(ode_brute_force(c, 100, 100, 1), std::invalid_argument);
}

TEST_CASE("ODE determinism: identical seeds, identical reports") {
    const Coefficients c{2.0, 0.5};
    const auto a = ode_brute_force(c, 100, 800, 7);
    const auto b = ode_brute_force(c, 100, 800, 7);
    REQUIRE(a.profiles.size() == b.profiles.size());
    CHECK(a.n_failed == b.n_failed);
    for (size_t k = 0; k < a.profiles.size(); ++k)
        CHECK(a.profiles[k].values == b.profiles[k].values);
}

TEST_CASE("blow-up sequence CSV labels every scale") {
    Field u = sample_reference([](Vec2 p) { return 0.5 * p.x1 * p.x1; });
    const BlowupSequence seq =
        make_blowup_sequence(u, {0.25, 0.125}, RescaleMode::Quadratic);
    REQUIRE(seq.fields.size() == 2);
    std::vector<GlobalSolutionClass> classes;
    for (const Field& f : seq.fields)
        classes.push_back(classify_limit(f, {1.0, 1.0}));
    const std::string csv = blowup_to_csv(seq, classes);
    CHECK(csv.find("positive_parabolic") != std::string::npos);
    CHECK(csv.find('\r') == std::string::npos);
}
