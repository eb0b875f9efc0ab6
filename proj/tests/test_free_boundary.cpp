#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "tpob/free_boundary.hpp"
#include "tpob/solver.hpp"

using namespace tpob;

namespace {

Field sample_on_halfdisk(double h, const std::function<double(Vec2)>& f) {
    const Shape hd = HalfDisk{{0.0, 0.0}, 1.0};
    return sample_field(build_mask(hd, grid_for_shape(hd, h)), f);
}

}  // namespace

TEST_CASE("offset parabola: free boundary is the vertical line x1 = a") {
    const double h = 1.0 / 64, a = 0.4;
    Field u = sample_on_halfdisk(h, [&](Vec2 p) {
        const double t = std::max(p.x1 - a, 0.0);
        return 0.5 * t * t;
    });
    const FreeBoundaryCurve gamma = extract_gamma(u, h * h);
    const auto verts = gamma.all_vertices();
    REQUIRE(!verts.empty());
    for (const Vec2& v : verts) CHECK(std::abs(v.x1 - a) <= 3.0 * h);
}

TEST_CASE("full-domain parabola hugging the flat side: Gamma is empty") {
    const double h = 1.0 / 64;
    Field u =
        sample_on_halfdisk(h, [](Vec2 p) { return 0.5 * p.x1 * p.x1; });
    CHECK(extract_gamma(u, h * h).all_vertices().empty());
}

TEST_CASE("zero field: Gamma empty, everything is the coincidence set") {
    const double h = 1.0 / 32;
    Field u = sample_on_halfdisk(h, [](Vec2) { return 0.0; });
    CHECK(extract_gamma(u, h * h).all_vertices().empty());
    const RegionDecomposition d = decompose(u, h * h, 4.0 * h);
    CHECK(d.omega_plus.empty());
    CHECK(d.omega_minus.empty());
    int interior = 0;
    const GridSpec& g = u.grid();
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) interior += u.mask->is_interior(i, j);
    CHECK(int(d.lambda_set.size()) == interior);
}

TEST_CASE("decomposition splits by sign with thresholds") {
    const double h = 1.0 / 32;
    Field u = sample_on_halfdisk(h, [](Vec2 p) { return p.x2; });
    const RegionDecomposition d = decompose(u, h * h, 4.0 * h);
    CHECK(!d.omega_plus.empty());
    CHECK(!d.omega_minus.empty());
    // |grad u| = 1 everywhere: nothing qualifies for the coincidence set.
    CHECK(d.lambda_set.empty());
    for (int idx : d.omega_plus) CHECK(u.values[idx] > h * h);
    for (int idx : d.omega_minus) CHECK(u.values[idx] < -h * h);
}

TEST_CASE("cone membership is strict x1 > eps |x2|") {
    const auto flags =
        cone_test({{1.0, 0.0}, {0.5, 0.9}, {0.5, 1.1}, {-0.1, 0.0}}, 0.5);
    CHECK(flags == std::vector<bool>{true, true, false, false});
}

TEST_CASE("density ratios: half-plane field fills half of each ball") {
    const double h = 1.0 / 64;
    Field u = sample_on_halfdisk(h, [](Vec2 p) { return p.x2; });
    const RegionDecomposition d = decompose(u, h * h, 4.0 * h);
    const DensityTrace tr =
        density_ratios(d, {0.5, 0.25, 2.0 * h}, {0.0, 0.0});
    REQUIRE(tr.entries.size() == 2);
    REQUIRE(tr.skipped_radii.size() == 1);
    CHECK(tr.skipped_radii[0] == doctest::Approx(2.0 * h));
    for (const auto& e : tr.entries) {
        CHECK(e.ratio_plus == doctest::Approx(0.5).epsilon(0.15));
        CHECK(e.ratio_minus == doctest::Approx(0.5).epsilon(0.15));
        CHECK(e.ratio_lambda == doctest::Approx(0.0));
    }
}

TEST_CASE("nondegeneracy trace of the quadratic is the constant 1") {
    const double h = 1.0 / 64;
    Field u = sample_on_halfdisk(h, [](Vec2 p) { return p.norm_sq(); });
    const RadialTrace tr = nondegeneracy_trace(u, {0.25, 0.5}, {0.0, 0.0});
    for (const auto& e : tr.entries)
        CHECK(e.value == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("tangency profile: annulus max of x1/|x2|, -inf when empty") {
    FreeBoundaryCurve gamma;
    gamma.polylines = {{{0.05, 0.2}, {0.1, 0.2}},   // |x| ~ 0.21-0.22
                       {{0.02, -0.4}, {0.03, -0.45}}};
    const TangencyProfile prof = tangency_profile(gamma, {0.25, 0.5, 1.0});
    REQUIRE(prof.entries.size() == 3);
    CHECK(prof.entries[0].sigma_hat == doctest::Approx(0.5));   // 0.1/0.2
    CHECK(prof.entries[1].sigma_hat ==
          doctest::Approx(0.03 / 0.45));  // max over both annulus vertices
    CHECK(prof.entries[2].sigma_hat ==
          -std::numeric_limits<double>::infinity());
}

TEST_CASE("growth check measures the linear slope at the touch point") {
    const double h = 1.0 / 64;
    Field u = sample_on_halfdisk(
        h, [](Vec2 p) { return 2.0 * p.x1 + 0.25 * p.x1 * p.x1; });
    const RadialTrace tr = growth_check(u, {0.25, 0.5});
    // sup |u - 2 x1| / r^2 = 0.25 exactly for the quadratic remainder.
    for (const auto& e : tr.entries)
        CHECK(e.value == doctest::Approx(0.25).epsilon(0.05));
    // Requires a half disk whose flat side passes through the origin.
    const Shape disk = Disk{{0.0, 0.0}, 1.0};
    Field v = sample_field(build_mask(disk, grid_for_shape(disk, h)),
                           [](Vec2 p) { return p.x1; });
    CHECK_THROWS_AS(growth_check(v, {0.25}), std::invalid_argument);
}

TEST_CASE("CSV exports carry headers and LF endings") {
    const double h = 1.0 / 32;
    Field u = sample_on_halfdisk(h, [](Vec2 p) { return p.x2; });
    const RegionDecomposition d = decompose(u, h * h, 4.0 * h);
    const std::string dec = decomposition_to_csv(d);
    CHECK(dec.rfind("i,j,", 0) == 0);
    CHECK(dec.find('\r') == std::string::npos);
    FreeBoundaryCurve gamma;
    gamma.polylines = {{{0.1, 0.2}, {0.3, 0.4}}};
    const std::string gcsv = gamma_to_csv(gamma);
    CHECK(gcsv.rfind("polyline,", 0) == 0);
    CHECK(gcsv.find('\r') == std::string::npos);
}
