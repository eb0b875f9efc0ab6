#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "tpob/geometry.hpp"

namespace tpob {

struct GridSpec {
    int n1 = 3;  // node count along x1
    int n2 = 3;  // node count along x2
    double h = 1.0;
    Vec2 origin;  // physical position of node (0,0)

    Vec2 node(int i, int j) const {
        return {origin.x1 + i * h, origin.x2 + j * h};
    }
    int index(int i, int j) const { return i * n2 + j; }
    int node_count() const { return n1 * n2; }
    bool in_grid(int i, int j) const {
        return i >= 0 && i < n1 && j >= 0 && j < n2;
    }
};

enum class NodeClass : unsigned char { Interior, DirichletBoundary, Exterior };

// Arm directions: 0:+x1, 1:-x1, 2:+x2, 3:-x2.
inline constexpr int kArmDi[4] = {1, -1, 0, 0};
inline constexpr int kArmDj[4] = {0, 0, 1, -1};

// Fractional arms of an interior node whose stencil is clipped by the
// analytic boundary (Shortley-Weller).
struct NodeArms {
    std::array<double, 4> frac{1.0, 1.0, 1.0, 1.0};
    std::array<Vec2, 4> point{};  // boundary hit per cut arm
};

struct DomainMask {
    GridSpec grid;
    Shape shape;
    std::vector<NodeClass> node_class;  // per node
    std::vector<int> arm_slot;          // per node, -1 or index into arms
    std::vector<NodeArms> arms;

    NodeClass cls(int i, int j) const { return node_class[grid.index(i, j)]; }
    bool is_interior(int i, int j) const {
        return cls(i, j) == NodeClass::Interior;
    }
    bool is_valid(int i, int j) const {
        return grid.in_grid(i, j) && cls(i, j) != NodeClass::Exterior;
    }
    const NodeArms* arms_of(int i, int j) const {
        const int s = arm_slot[grid.index(i, j)];
        return s < 0 ? nullptr : &arms[s];
    }
    int count(NodeClass c) const;
};

// Discrete scalar function on a masked grid. Exterior nodes carry NaN
// sentinels. arm_values parallels mask->arms: the boundary value at each
// cut-arm endpoint.
struct Field {
    std::shared_ptr<const DomainMask> mask;
    std::vector<double> values;
    std::vector<std::array<double, 4>> arm_values;

    explicit Field(std::shared_ptr<const DomainMask> m);
    Field() = default;

    const GridSpec& grid() const { return mask->grid; }
    double at(int i, int j) const { return values[mask->grid.index(i, j)]; }
    double& at(int i, int j) { return values[mask->grid.index(i, j)]; }
};

// Classify nodes of `grid` against `shape`. Throws std::invalid_argument if
// the shape is not contained in the grid's bounding box.
std::shared_ptr<const DomainMask> build_mask(const Shape& shape,
                                             const GridSpec& grid);

// Sample an analytic function onto a field (values at interior and Dirichlet
// nodes, boundary values at cut-arm endpoints, NaN outside).
Field sample_field(std::shared_ptr<const DomainMask> mask,
                   const std::function<double(Vec2)>& f);

// 5-point Laplacian with Shortley-Weller correction at cut arms.
// Node must be interior.
double laplacian_at(const Field& f, int i, int j);

// Central differences, one-sided at boundary-adjacent nodes.
Vec2 gradient_at(const Field& f, int i, int j);

// Bilinear interpolation from the enclosing cell. Throws std::domain_error
// for points outside the domain.
double interpolate(const Field& f, Vec2 p);

// max |f| over interior nodes within distance r of center, intersected with
// the domain. Requires at least 5 such nodes (r > 2h).
double sup_on_half_ball(const Field& f, double r, Vec2 center);

}  // namespace tpob
