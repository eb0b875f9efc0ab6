#include "tpob/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tpob {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

int DomainMask::count(NodeClass c) const {
    int n = 0;
    for (NodeClass k : node_class)
        if (k == c) ++n;
    return n;
}

Field::Field(std::shared_ptr<const DomainMask> m) : mask(std::move(m)) {
    values.assign(mask->grid.node_count(), kNaN);
    arm_values.assign(mask->arms.size(), {kNaN, kNaN, kNaN, kNaN});
    for (int i = 0; i < mask->grid.n1; ++i)
        for (int j = 0; j < mask->grid.n2; ++j)
            if (mask->cls(i, j) != NodeClass::Exterior)
                values[mask->grid.index(i, j)] = 0.0;
}

std::shared_ptr<const DomainMask> build_mask(const Shape& shape,
                                             const GridSpec& grid) {
    if (grid.h <= 0.0 || grid.n1 < 3 || grid.n2 < 3)
        throw std::invalid_argument("build_mask: invalid grid spec");
    Vec2 lo, hi;
    shape_bbox(shape, lo, hi);
    const double tol = 1e-9 * grid.h;
    const Vec2 glo = grid.node(0, 0);
    const Vec2 ghi = grid.node(grid.n1 - 1, grid.n2 - 1);
    if (lo.x1 < glo.x1 - tol || lo.x2 < glo.x2 - tol || hi.x1 > ghi.x1 + tol ||
        hi.x2 > ghi.x2 + tol)
        throw std::invalid_argument(
            "build_mask: shape " + shape_name(shape) +
            " not contained in the grid bounding box");

    auto mask = std::make_shared<DomainMask>();
    mask->grid = grid;
    mask->shape = shape;
    mask->node_class.assign(grid.node_count(), NodeClass::Exterior);
    mask->arm_slot.assign(grid.node_count(), -1);

    const double eps = 1e-9 * grid.h;
    for (int i = 0; i < grid.n1; ++i) {
        for (int j = 0; j < grid.n2; ++j) {
            const Vec2 p = grid.node(i, j);
            if (shape_contains_interior(shape, p, eps))
                mask->node_class[grid.index(i, j)] = NodeClass::Interior;
            else if (shape_on_boundary(shape, p, eps))
                mask->node_class[grid.index(i, j)] = NodeClass::DirichletBoundary;
        }
    }

    // Record fractional arms for interior nodes facing an exterior neighbor.
    for (int i = 0; i < grid.n1; ++i) {
        for (int j = 0; j < grid.n2; ++j) {
            if (!mask->is_interior(i, j)) continue;
            NodeArms arms;
            bool cut = false;
            for (int d = 0; d < 4; ++d) {
                const int ni = i + kArmDi[d], nj = j + kArmDj[d];
                const bool nbr_valid = mask->is_valid(ni, nj);
                if (nbr_valid) continue;
                const Vec2 p = grid.node(i, j);
                const Vec2 dir{kArmDi[d] * grid.h, kArmDj[d] * grid.h};
                const double t = shape_arm_fraction(shape, p, dir);
                arms.frac[d] = t;
                arms.point[d] = p + dir * t;
                cut = true;
            }
            if (cut) {
                mask->arm_slot[grid.index(i, j)] = int(mask->arms.size());
                mask->arms.push_back(arms);
            }
        }
    }
    return mask;
}

Field sample_field(std::shared_ptr<const DomainMask> mask,
                   const std::function<double(Vec2)>& f) {
    Field out(mask);
    const GridSpec& g = mask->grid;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            if (mask->cls(i, j) != NodeClass::Exterior)
                out.at(i, j) = f(g.node(i, j));
    for (size_t s = 0; s < mask->arms.size(); ++s)
        for (int d = 0; d < 4; ++d)
            if (mask->arms[s].frac[d] < 1.0)
                out.arm_values[s][d] = f(mask->arms[s].point[d]);
    return out;
}

namespace {

// Neighbor value and arm fraction along direction d for an interior node.
inline void arm_value(const Field& f, int i, int j, int d, const NodeArms* arms,
                      double& val, double& frac) {
    frac = arms ? arms->frac[d] : 1.0;
    if (frac < 1.0) {
        const int slot = f.mask->arm_slot[f.grid().index(i, j)];
        val = f.arm_values[slot][d];
    } else {
        val = f.at(i + kArmDi[d], j + kArmDj[d]);
    }
}

}  // namespace

double laplacian_at(const Field& f, int i, int j) {
    if (!f.mask->is_interior(i, j))
        throw std::invalid_argument("laplacian_at: node is not interior");
    const NodeArms* arms = f.mask->arms_of(i, j);
    const double h2 = f.grid().h * f.grid().h;
    const double u = f.at(i, j);
    double lap = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
        double uE, aE, uW, aW;
        arm_value(f, i, j, 2 * axis, arms, uE, aE);
        arm_value(f, i, j, 2 * axis + 1, arms, uW, aW);
        lap += 2.0 / h2 *
               (uW / (aW * (aW + aE)) + uE / (aE * (aW + aE)) - u / (aW * aE));
    }
    return lap;
}

Vec2 gradient_at(const Field& f, int i, int j) {
    if (!f.mask->is_interior(i, j))
        throw std::invalid_argument("gradient_at: node is not interior");
    const NodeArms* arms = f.mask->arms_of(i, j);
    const double h = f.grid().h;
    const double u = f.at(i, j);
    double g[2];
    for (int axis = 0; axis < 2; ++axis) {
        double uE, aE, uW, aW;
        arm_value(f, i, j, 2 * axis, arms, uE, aE);
        arm_value(f, i, j, 2 * axis + 1, arms, uW, aW);
        if (aE == 1.0 && aW == 1.0)
            g[axis] = (uE - uW) / (2.0 * h);
        else if (aE == 1.0)
            g[axis] = (uE - u) / h;  // one-sided away from the cut
        else if (aW == 1.0)
            g[axis] = (u - uW) / h;
        else
            g[axis] = (uE - uW) / ((aE + aW) * h);
    }
    return {g[0], g[1]};
}

double interpolate(const Field& f, Vec2 p) {
    const GridSpec& g = f.grid();
    const double fx = (p.x1 - g.origin.x1) / g.h;
    const double fy = (p.x2 - g.origin.x2) / g.h;
    int i = int(std::floor(fx));
    int j = int(std::floor(fy));
    i = std::min(std::max(i, 0), g.n1 - 2);
    j = std::min(std::max(j, 0), g.n2 - 2);
    const double tx = fx - i, ty = fy - j;
    if (tx < -1e-9 || tx > 1.0 + 1e-9 || ty < -1e-9 || ty > 1.0 + 1e-9)
        throw std::domain_error("interpolate: point outside the grid");

    const double w[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty,
                         tx * ty};
    const double v[4] = {f.at(i, j), f.at(i + 1, j), f.at(i, j + 1),
                         f.at(i + 1, j + 1)};
    double num = 0.0, den = 0.0;
    bool all_valid = true;
    for (int k = 0; k < 4; ++k) {
        if (std::isnan(v[k])) {
            all_valid = false;
            continue;
        }
        num += w[k] * v[k];
        den += w[k];
    }
    if (all_valid) return num;
    if (den <= 0.0)
        throw std::domain_error("interpolate: point outside the domain");
    // Cut cell along a curved boundary: renormalize over the valid corners.
    return num / den;
}

double sup_on_half_ball(const Field& f, double r, Vec2 center) {
    const GridSpec& g = f.grid();
    if (r <= 2.0 * g.h)
        throw std::invalid_argument("sup_on_half_ball: radius too small");
    double sup = 0.0;
    int n = 0;
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            if (!f.mask->is_interior(i, j)) continue;
            if ((g.node(i, j) - center).norm() > r) continue;
            sup = std::max(sup, std::abs(f.at(i, j)));
            ++n;
        }
    }
    if (n < 5)
        throw std::invalid_argument(
            "sup_on_half_ball: fewer than 5 interior nodes in the ball");
    return sup;
}

}  // namespace tpob
