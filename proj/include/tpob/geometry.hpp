#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace tpob {

struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;

    Vec2 operator+(Vec2 o) const { return {x1 + o.x1, x2 + o.x2}; }
    Vec2 operator-(Vec2 o) const { return {x1 - o.x1, x2 - o.x2}; }
    Vec2 operator*(double s) const { return {x1 * s, x2 * s}; }
    double norm() const { return std::hypot(x1, x2); }
    double norm_sq() const { return x1 * x1 + x2 * x2; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }

// Domain shapes. HalfDisk has its flat side on the line {x1 = center.x1}
// and occupies {x1 > center.x1}.
struct Rectangle {
    Vec2 lo, hi;
};
struct Disk {
    Vec2 center;
    double radius = 1.0;
};
struct HalfDisk {
    Vec2 center;
    double radius = 1.0;
};
struct Annulus {
    Vec2 center;
    double r_inner = 0.5;
    double r_outer = 1.0;
};

using Shape = std::variant<Rectangle, Disk, HalfDisk, Annulus>;

std::string shape_name(const Shape& s);

// Strict interior / boundary membership, with tolerance eps on distances.
bool shape_contains_interior(const Shape& s, Vec2 p, double eps);
bool shape_on_boundary(const Shape& s, Vec2 p, double eps);

// Bounding box of the shape.
void shape_bbox(const Shape& s, Vec2& lo, Vec2& hi);

// First intersection parameter t in (0, 1] of the segment p -> p + dir
// with the shape boundary, assuming p is inside and p + dir is outside.
double shape_arm_fraction(const Shape& s, Vec2 p, Vec2 dir);

// Exact area of the intersection of the disk B(center, r) with the axis
// aligned rectangle [x0,x1] x [y0,y1].
double disk_rect_overlap(Vec2 center, double r, double x0, double x1, double y0,
                         double y1);

}  // namespace tpob
