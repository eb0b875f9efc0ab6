#include "tpob/monotonicity.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tpob {

void RadialTrace::validate(double h, double domain_radius) const {
    double prev = 2.0 * h;
    for (const Entry& e : entries) {
        if (e.r <= prev)
            throw std::invalid_argument(
                "RadialTrace: radii must be strictly increasing and > 2h");
        if (e.r >= domain_radius)
            throw std::invalid_argument(
                "RadialTrace: radius exceeds domain radius");
        prev = e.r;
    }
}

namespace {

// int_{B_r(center)} |grad f|^2 with f extended by zero outside its mask;
// per-cell midpoint gradients, cut cells weighted by exact overlap area.
double dirichlet_integral(const Field& f, Vec2 center, double r) {
    const GridSpec& g = f.grid();
    const double h = g.h;
    double total = 0.0;
    for (int i = 0; i + 1 < g.n1; ++i) {
        for (int j = 0; j + 1 < g.n2; ++j) {
            double v00 = f.at(i, j), v10 = f.at(i + 1, j);
            double v01 = f.at(i, j + 1), v11 = f.at(i + 1, j + 1);
            if (std::isnan(v00)) v00 = 0.0;
            if (std::isnan(v10)) v10 = 0.0;
            if (std::isnan(v01)) v01 = 0.0;
            if (std::isnan(v11)) v11 = 0.0;
            if (v00 == 0.0 && v10 == 0.0 && v01 == 0.0 && v11 == 0.0)
                continue;
            const Vec2 lo = g.node(i, j);
            const double area = disk_rect_overlap(
                center, r, lo.x1, lo.x1 + h, lo.x2, lo.x2 + h);
            if (area <= 0.0) continue;
            const double ux = 0.5 * ((v10 - v00) + (v11 - v01)) / h;
            const double uy = 0.5 * ((v01 - v00) + (v11 - v10)) / h;
            total += (ux * ux + uy * uy) * area;
        }
    }
    return total;
}

void require_acf_field(const Field& f, const Field& other, double tol,
                       const char* tag) {
    const GridSpec& g = f.grid();
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const double v = f.at(i, j);
            if (std::isnan(v)) continue;
            const Vec2 p = g.node(i, j);
            std::ostringstream err;
            if (v < -tol) {
                err << "acf_phi: " << tag << " negative at (" << p.x1 << ", "
                    << p.x2 << ")";
                throw std::invalid_argument(err.str());
            }
            if (p.norm() < 0.5 * g.h && std::abs(v) > tol) {
                err << "acf_phi: " << tag << " nonzero at the origin";
                throw std::invalid_argument(err.str());
            }
            const double w = other.grid().in_grid(i, j) ? other.at(i, j)
                                                        : 0.0;
            if (!std::isnan(w) && std::abs(v * w) > tol) {
                err << "acf_phi: supports overlap at (" << p.x1 << ", "
                    << p.x2 << ")";
                throw std::invalid_argument(err.str());
            }
        }
    }
}

}  // namespace

RadialTrace acf_phi(const Field& h1, const Field& h2,
                    const std::vector<double>& radii, double disjoint_tol) {
    require_acf_field(h1, h2, disjoint_tol, "h1");
    require_acf_field(h2, h1, disjoint_tol, "h2");
    RadialTrace tr;
    tr.functional = "acf";
    for (double r : radii) {
        const double i1 = dirichlet_integral(h1, {0.0, 0.0}, r);
        const double i2 = dirichlet_integral(h2, {0.0, 0.0}, r);
        tr.entries.push_back({r, i1 * i2 / (r * r * r * r)});
    }
    return tr;
}

RadialTrace weiss_phi(const Field& u, const Coefficients& coeffs,
                      const std::vector<double>& radii, int surface_samples,
                      double pi_tol) {
    const auto* hd = std::get_if<HalfDisk>(&u.mask->shape);
    if (!hd)
        throw std::invalid_argument("weiss_phi: field must live on a half-disk");
    const GridSpec& g = u.grid();
    const double h = g.h;
    // Zero data on the flat side.
    for (int j = 0; j < g.n2; ++j) {
        const double v = u.at(0, j);
        if (!std::isnan(v) && std::abs(v) > pi_tol)
            throw std::invalid_argument(
                "weiss_phi: nonzero data on the flat side");
    }
    if (surface_samples < 8)
        throw std::invalid_argument("weiss_phi: too few surface samples");

    RadialTrace tr;
    tr.functional = "weiss";
    tr.quadrature_samples = surface_samples;
    const Vec2 c = hd->center;
    for (double r : radii) {
        // Volume term; the grid starts at the flat side, so every cell
        // already lies in the half-plane.
        double vol = 0.0;
        for (int i = 0; i + 1 < g.n1; ++i) {
            for (int j = 0; j + 1 < g.n2; ++j) {
                const double v00 = u.at(i, j), v10 = u.at(i + 1, j);
                const double v01 = u.at(i, j + 1), v11 = u.at(i + 1, j + 1);
                if (std::isnan(v00) || std::isnan(v10) || std::isnan(v01) ||
                    std::isnan(v11))
                    continue;
                const Vec2 lo = g.node(i, j);
                const double area = disk_rect_overlap(
                    c, r, lo.x1, lo.x1 + h, lo.x2, lo.x2 + h);
                if (area <= 0.0) continue;
                const double ux = 0.5 * ((v10 - v00) + (v11 - v01)) / h;
                const double uy = 0.5 * ((v01 - v00) + (v11 - v10)) / h;
                const double um = 0.25 * (v00 + v10 + v01 + v11);
                vol += (ux * ux + uy * uy +
                        2.0 * coeffs.lambda_plus * std::max(um, 0.0) +
                        2.0 * coeffs.lambda_minus * std::max(-um, 0.0)) *
                       area;
            }
        }
        // Surface term over the half-circle, trapezoid in the angle.
        const double dth = std::numbers::pi / surface_samples;
        double surf = 0.0;
        for (int k = 0; k <= surface_samples; ++k) {
            const double th = -0.5 * std::numbers::pi + k * dth;
            const Vec2 p{c.x1 + r * std::cos(th), c.x2 + r * std::sin(th)};
            const double v = interpolate(u, p);
            const double w = (k == 0 || k == surface_samples) ? 0.5 : 1.0;
            surf += w * 2.0 * v * v * r * dth;
        }
        const double r4 = r * r * r * r;
        tr.entries.push_back({r, vol / r4 - surf / (r4 * r)});
    }
    return tr;
}

MonotonicityReport check_monotone(const RadialTrace& trace, double slack) {
    if (trace.entries.size() < 3)
        throw std::invalid_argument("check_monotone: need >= 3 entries");
    MonotonicityReport rep;
    double lo = trace.entries.front().value, hi = lo;
    for (size_t k = 1; k < trace.entries.size(); ++k) {
        const double v = trace.entries[k].value;
        const double inc = v - trace.entries[k - 1].value;
        if (inc < 0.0)
            rep.worst_violation = std::max(rep.worst_violation, -inc);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    rep.is_monotone = rep.worst_violation <= slack;
    rep.is_constant = hi - lo <= slack;
    return rep;
}

std::pair<Field, Field> tangential_derivative_parts(const Field& u) {
    Field pos(u.mask), neg(u.mask);
    const GridSpec& g = u.grid();
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            if (u.mask->cls(i, j) == NodeClass::Exterior) continue;
            double d2 = 0.0;
            if (u.mask->is_interior(i, j)) d2 = gradient_at(u, i, j).x2;
            pos.at(i, j) = std::max(d2, 0.0);
            neg.at(i, j) = std::max(-d2, 0.0);
        }
    }
    return {std::move(pos), std::move(neg)};
}

std::string trace_to_csv(const RadialTrace& trace) {
    std::ostringstream out;
    out.precision(17);
    out << "r," << (trace.functional.empty() ? "value" : trace.functional)
        << "\n";
    for (const auto& e : trace.entries) out << e.r << "," << e.value << "\n";
    return out.str();
}

}  // namespace tpob
