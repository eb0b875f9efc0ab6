#include "tpob/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace tpob {

namespace {

// Intersection of a segment p -> p+dir with the circle |x - c| = R.
// Returns the smallest t in (0,1] or -1 if none.
double segment_circle_hit(Vec2 p, Vec2 dir, Vec2 c, double R) {
    const Vec2 q = p - c;
    const double a = dot(dir, dir);
    const double b = 2.0 * dot(q, dir);
    const double cc = dot(q, q) - R * R;
    const double disc = b * b - 4.0 * a * cc;
    if (disc < 0.0 || a == 0.0) return -1.0;
    const double sq = std::sqrt(disc);
    double best = -1.0;
    for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (t > 1e-14 && t <= 1.0 + 1e-12) {
            if (best < 0.0 || t < best) best = t;
        }
    }
    return best > 1.0 ? 1.0 : best;
}

// Intersection with the vertical line x1 = v.
double segment_vline_hit(Vec2 p, Vec2 dir, double v) {
    if (dir.x1 == 0.0) return -1.0;
    const double t = (v - p.x1) / dir.x1;
    if (t > 1e-14 && t <= 1.0 + 1e-12) return std::min(t, 1.0);
    return -1.0;
}

double segment_hline_hit(Vec2 p, Vec2 dir, double v) {
    if (dir.x2 == 0.0) return -1.0;
    const double t = (v - p.x2) / dir.x2;
    if (t > 1e-14 && t <= 1.0 + 1e-12) return std::min(t, 1.0);
    return -1.0;
}

}  // namespace

std::string shape_name(const Shape& s) {
    struct V {
        std::string operator()(const Rectangle&) const { return "rectangle"; }
        std::string operator()(const Disk&) const { return "disk"; }
        std::string operator()(const HalfDisk&) const { return "half_disk"; }
        std::string operator()(const Annulus&) const { return "annulus"; }
    };
    return std::visit(V{}, s);
}

bool shape_contains_interior(const Shape& s, Vec2 p, double eps) {
    struct V {
        Vec2 p;
        double eps;
        bool operator()(const Rectangle& r) const {
            return p.x1 > r.lo.x1 + eps && p.x1 < r.hi.x1 - eps &&
                   p.x2 > r.lo.x2 + eps && p.x2 < r.hi.x2 - eps;
        }
        bool operator()(const Disk& d) const {
            return (p - d.center).norm() < d.radius - eps;
        }
        bool operator()(const HalfDisk& d) const {
            return p.x1 > d.center.x1 + eps &&
                   (p - d.center).norm() < d.radius - eps;
        }
        bool operator()(const Annulus& a) const {
            const double r = (p - a.center).norm();
            return r > a.r_inner + eps && r < a.r_outer - eps;
        }
    };
    return std::visit(V{p, eps}, s);
}

bool shape_on_boundary(const Shape& s, Vec2 p, double eps) {
    struct V {
        Vec2 p;
        double eps;
        bool operator()(const Rectangle& r) const {
            const bool in_x = p.x1 > r.lo.x1 - eps && p.x1 < r.hi.x1 + eps;
            const bool in_y = p.x2 > r.lo.x2 - eps && p.x2 < r.hi.x2 + eps;
            if (!in_x || !in_y) return false;
            return std::abs(p.x1 - r.lo.x1) <= eps ||
                   std::abs(p.x1 - r.hi.x1) <= eps ||
                   std::abs(p.x2 - r.lo.x2) <= eps ||
                   std::abs(p.x2 - r.hi.x2) <= eps;
        }
        bool operator()(const Disk& d) const {
            return std::abs((p - d.center).norm() - d.radius) <= eps;
        }
        bool operator()(const HalfDisk& d) const {
            const double r = (p - d.center).norm();
            if (std::abs(p.x1 - d.center.x1) <= eps && r <= d.radius + eps)
                return true;
            return p.x1 >= d.center.x1 - eps && std::abs(r - d.radius) <= eps;
        }
        bool operator()(const Annulus& a) const {
            const double r = (p - a.center).norm();
            return std::abs(r - a.r_inner) <= eps ||
                   std::abs(r - a.r_outer) <= eps;
        }
    };
    return std::visit(V{p, eps}, s);
}

void shape_bbox(const Shape& s, Vec2& lo, Vec2& hi) {
    struct V {
        Vec2 &lo, &hi;
        void operator()(const Rectangle& r) const {
            lo = r.lo;
            hi = r.hi;
        }
        void operator()(const Disk& d) const {
            lo = {d.center.x1 - d.radius, d.center.x2 - d.radius};
            hi = {d.center.x1 + d.radius, d.center.x2 + d.radius};
        }
        void operator()(const HalfDisk& d) const {
            lo = {d.center.x1, d.center.x2 - d.radius};
            hi = {d.center.x1 + d.radius, d.center.x2 + d.radius};
        }
        void operator()(const Annulus& a) const {
            lo = {a.center.x1 - a.r_outer, a.center.x2 - a.r_outer};
            hi = {a.center.x1 + a.r_outer, a.center.x2 + a.r_outer};
        }
    };
    std::visit(V{lo, hi}, s);
}

double shape_arm_fraction(const Shape& s, Vec2 p, Vec2 dir) {
    struct V {
        Vec2 p, dir;
        double operator()(const Rectangle& r) const {
            double best = -1.0;
            for (double t : {segment_vline_hit(p, dir, r.lo.x1),
                             segment_vline_hit(p, dir, r.hi.x1),
                             segment_hline_hit(p, dir, r.lo.x2),
                             segment_hline_hit(p, dir, r.hi.x2)}) {
                if (t > 0.0 && (best < 0.0 || t < best)) best = t;
            }
            return best;
        }
        double operator()(const Disk& d) const {
            return segment_circle_hit(p, dir, d.center, d.radius);
        }
        double operator()(const HalfDisk& d) const {
            double best = segment_circle_hit(p, dir, d.center, d.radius);
            const double t = segment_vline_hit(p, dir, d.center.x1);
            if (t > 0.0 && (best < 0.0 || t < best)) best = t;
            return best;
        }
        double operator()(const Annulus& a) const {
            double best = segment_circle_hit(p, dir, a.center, a.r_outer);
            const double t = segment_circle_hit(p, dir, a.center, a.r_inner);
            if (t > 0.0 && (best < 0.0 || t < best)) best = t;
            return best;
        }
    };
    const double t = std::visit(V{p, dir}, s);
    if (t <= 0.0)
        throw std::domain_error("shape_arm_fraction: no boundary crossing");
    return t;
}

namespace {

// Antiderivative of sqrt(r^2 - x^2).
double F(double x, double r) {
    x = std::clamp(x, -r, r);
    return 0.5 * (x * std::sqrt(std::max(0.0, r * r - x * x)) +
                  r * r * std::asin(x / r));
}

// Integral over [a,b] of clamp(sqrt(r^2-x^2), lo, hi) treating the circle
// profile as min(hi, max(lo, f(x))): used piecewise below.
}  // namespace

double disk_rect_overlap(Vec2 c, double r, double x0, double x1, double y0,
                         double y1) {
    // Shift so the disk is centered at the origin.
    x0 -= c.x1;
    x1 -= c.x1;
    y0 -= c.x2;
    y1 -= c.x2;
    if (x0 >= r || x1 <= -r || y0 >= r || y1 <= -r) return 0.0;
    x0 = std::max(x0, -r);
    x1 = std::min(x1, r);

    // Area = int_{x0}^{x1} [ min(y1, f) - max(y0, -f) ]_+ dx, f = sqrt(r^2-x^2).
    // Split at the abscissas where f crosses |y0| and |y1|.
    double cuts[8];
    int nc = 0;
    cuts[nc++] = x0;
    cuts[nc++] = x1;
    auto add_cut = [&](double y) {
        const double s = r * r - y * y;
        if (s > 0.0) {
            const double x = std::sqrt(s);
            if (-x > x0 && -x < x1) cuts[nc++] = -x;
            if (x > x0 && x < x1) cuts[nc++] = x;
        }
    };
    add_cut(y0);
    add_cut(y1);
    std::sort(cuts, cuts + nc);

    double area = 0.0;
    for (int k = 0; k + 1 < nc; ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        if (b - a <= 0.0) continue;
        const double xm = 0.5 * (a + b);
        const double fm = std::sqrt(std::max(0.0, r * r - xm * xm));
        const double top_c = std::min(y1, fm);   // constant or arc on (a,b)
        const double bot_c = std::max(y0, -fm);  // constant or arc on (a,b)
        if (top_c <= bot_c) continue;
        // Top contribution.
        double piece = 0.0;
        if (fm < y1)
            piece += F(b, r) - F(a, r);
        else
            piece += y1 * (b - a);
        // Bottom contribution.
        if (-fm > y0)
            piece -= -(F(b, r) - F(a, r));
        else
            piece -= y0 * (b - a);
        area += piece;
    }
    return area;
}

}  // namespace tpob
