#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tpob/grid.hpp"
#include "tpob/solver.hpp"

using namespace tpob;

namespace {

GridSpec unit_square_grid(int n) {
    GridSpec g;
    g.n1 = g.n2 = n;
    g.h = 1.0 / (n - 1);
    g.origin = {0.0, 0.0};
    return g;
}

}  // namespace

TEST_CASE("grid spec indexing round trip") {
    GridSpec g = unit_square_grid(17);
    CHECK(g.index(3, 5) == 3 * 17 + 5);
    const Vec2 p = g.node(4, 8);
    CHECK(p.x1 == doctest::Approx(4.0 / 16).epsilon(1e-15));
    CHECK(p.x2 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.in_grid(0, 16));
    CHECK(!g.in_grid(17, 0));
    CHECK(!g.in_grid(-1, 3));
}

TEST_CASE("rectangle mask: boundary ring is Dirichlet, interior is full") {
    GridSpec g = unit_square_grid(9);
    auto mask = build_mask(Rectangle{{0, 0}, {1, 1}}, g);
    int interior = 0, dirichlet = 0;
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
            const bool edge = i == 0 || j == 0 || i == 8 || j == 8;
            if (edge) CHECK(mask->cls(i, j) == NodeClass::DirichletBoundary);
            else CHECK(mask->cls(i, j) == NodeClass::Interior);
            interior += mask->is_interior(i, j);
            dirichlet += mask->cls(i, j) == NodeClass::DirichletBoundary;
        }
    CHECK(interior == 7 * 7);
    CHECK(dirichlet == 81 - 49);
    // No cut arms on an aligned rectangle.
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) CHECK(mask->arms_of(i, j) == nullptr);
}

TEST_CASE("disk mask: arm fractions lie in (0,1] and hit the circle") {
    const Disk disk{{0.0, 0.0}, 1.0};
    GridSpec g = grid_for_shape(Shape{disk}, 1.0 / 16);
    auto mask = build_mask(Shape{disk}, g);
    int cut_nodes = 0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            const NodeArms* arms = mask->arms_of(i, j);
            if (!arms) continue;
            CHECK(mask->is_interior(i, j));
            ++cut_nodes;
            for (int d = 0; d < 4; ++d) {
                CHECK(arms->frac[d] > 0.0);
                CHECK(arms->frac[d] <= 1.0);
                if (arms->frac[d] < 1.0)
                    CHECK(arms->point[d].norm() ==
                          doctest::Approx(1.0).epsilon(1e-10));
            }
        }
    CHECK(cut_nodes > 0);
}

TEST_CASE("mask not contained in the grid box throws") {
    GridSpec g = unit_square_grid(9);
    CHECK_THROWS_AS(build_mask(Disk{{0.0, 0.0}, 2.0}, g),
                    std::invalid_argument);
}

TEST_CASE("Shortley-Weller Laplacian is exact on quadratics") {
    const Disk disk{{0.0, 0.0}, 1.0};
    GridSpec g = grid_for_shape(Shape{disk}, 1.0 / 32);
    auto mask = build_mask(Shape{disk}, g);
    Field f = sample_field(
        mask, [](Vec2 p) { return p.x1 * p.x1 + 2.0 * p.x2 * p.x2 + p.x1; });
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            if (mask->is_interior(i, j))
                CHECK(laplacian_at(f, i, j) ==
                      doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("gradient is exact on linear fields") {
    GridSpec g = unit_square_grid(17);
    auto mask = build_mask(Rectangle{{0, 0}, {1, 1}}, g);
    Field f = sample_field(mask,
                           [](Vec2 p) { return 3.0 * p.x1 - 2.0 * p.x2; });
    for (int i = 1; i < 16; ++i)
        for (int j = 1; j < 16; ++j) {
            const Vec2 grad = gradient_at(f, i, j);
            CHECK(grad.x1 == doctest::Approx(3.0).epsilon(1e-12));
            CHECK(grad.x2 == doctest::Approx(-2.0).epsilon(1e-12));
        }
}

TEST_CASE("bilinear interpolation reproduces bilinear functions") {
    GridSpec g = unit_square_grid(17);
    auto mask = build_mask(Rectangle{{0, 0}, {1, 1}}, g);
    Field f = sample_field(
        mask, [](Vec2 p) { return 1.0 + p.x1 * p.x2 - 0.5 * p.x1; });
    CHECK(interpolate(f, {0.3141, 0.2718}) ==
          doctest::Approx(1.0 + 0.3141 * 0.2718 - 0.5 * 0.3141)
              .epsilon(1e-12));
    CHECK_THROWS_AS(interpolate(f, {1.5, 0.5}), std::domain_error);
}

TEST_CASE("disk/rectangle overlap area oracles") {
    // Rectangle fully inside the disk.
    CHECK(disk_rect_overlap({0, 0}, 2.0, -0.5, 0.5, -0.5, 0.5) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Disjoint.
    CHECK(disk_rect_overlap({0, 0}, 1.0, 2.0, 3.0, 2.0, 3.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // Quarter disk: unit disk against [0,1]^2.
    CHECK(disk_rect_overlap({0, 0}, 1.0, 0.0, 1.0, 0.0, 1.0) ==
          doctest::Approx(std::numbers::pi / 4).epsilon(1e-10));
    // Half disk via a wide rectangle.
    CHECK(disk_rect_overlap({0, 0}, 1.0, 0.0, 5.0, -5.0, 5.0) ==
          doctest::Approx(std::numbers::pi / 2).epsilon(1e-10));
}

TEST_CASE("sup over a half ball picks the max interior magnitude") {
    const HalfDisk hd{{0.0, 0.0}, 1.0};
    GridSpec g = grid_for_shape(Shape{hd}, 1.0 / 32);
    auto mask = build_mask(Shape{hd}, g);
    Field f = sample_field(mask, [](Vec2 p) { return p.x1 * p.x1; });
    const double s = sup_on_half_ball(f, 0.5, {0.0, 0.0});
    CHECK(s <= 0.25 + 1e-12);
    CHECK(s > 0.25 * 0.8);
}
