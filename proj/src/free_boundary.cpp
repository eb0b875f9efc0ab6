#include "tpob/free_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tpob {

namespace {

double fixed_boundary_distance(const Shape& shape, Vec2 p) {
    struct Visitor {
        Vec2 p;
        double operator()(const Rectangle& r) const {
            return std::min(std::min(p.x1 - r.lo.x1, r.hi.x1 - p.x1),
                            std::min(p.x2 - r.lo.x2, r.hi.x2 - p.x2));
        }
        double operator()(const Disk& d) const {
            return d.radius - (p - d.center).norm();
        }
        double operator()(const HalfDisk& d) const {
            return std::min(p.x1 - d.center.x1,
                            d.radius - (p - d.center).norm());
        }
        double operator()(const Annulus& a) const {
            const double rho = (p - a.center).norm();
            return std::min(rho - a.r_inner, a.r_outer - rho);
        }
    };
    return std::visit(Visitor{p}, shape);
}

using Segment = std::pair<Vec2, Vec2>;

// Marching squares on w = sign * u - level over one cell; "inside" means
// w > 0. Appends 0, 1 or 2 segments.
void cell_segments(const Field& u, int i, int j, double sign, double level,
                   std::vector<Segment>& out) {
    const GridSpec& g = u.grid();
    const double raw[4] = {u.at(i, j), u.at(i + 1, j), u.at(i + 1, j + 1),
                           u.at(i, j + 1)};
    double w[4];
    for (int k = 0; k < 4; ++k) {
        if (std::isnan(raw[k])) return;
        w[k] = sign * raw[k] - level;
    }
    const Vec2 base = g.node(i, j);
    const Vec2 corner[4] = {base,
                            {base.x1 + g.h, base.x2},
                            {base.x1 + g.h, base.x2 + g.h},
                            {base.x1, base.x2 + g.h}};
    int mask = 0;
    for (int k = 0; k < 4; ++k)
        if (w[k] > 0.0) mask |= 1 << k;
    if (mask == 0 || mask == 15) return;

    auto edge_point = [&](int a, int b) {
        double t = w[a] / (w[a] - w[b]);
        t = std::clamp(t, 0.0, 1.0);
        return Vec2{corner[a].x1 + t * (corner[b].x1 - corner[a].x1),
                    corner[a].x2 + t * (corner[b].x2 - corner[a].x2)};
    };
    // Edge indices: 0 bottom (0-1), 1 right (1-2), 2 top (2-3), 3 left (3-0).
    const int ends[4][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    int cut[4], ncut = 0;
    for (int e = 0; e < 4; ++e)
        if ((w[ends[e][0]] > 0.0) != (w[ends[e][1]] > 0.0)) cut[ncut++] = e;
    if (ncut == 2) {
        out.emplace_back(edge_point(ends[cut[0]][0], ends[cut[0]][1]),
                         edge_point(ends[cut[1]][0], ends[cut[1]][1]));
    } else if (ncut == 4) {
        // Saddle: split by the cell-center average.
        const double center = 0.25 * (w[0] + w[1] + w[2] + w[3]);
        const bool link01 = (center > 0.0) == (w[0] > 0.0);
        const Vec2 p[4] = {edge_point(0, 1), edge_point(1, 2),
                           edge_point(2, 3), edge_point(3, 0)};
        if (link01) {
            out.emplace_back(p[0], p[3]);
            out.emplace_back(p[1], p[2]);
        } else {
            out.emplace_back(p[0], p[1]);
            out.emplace_back(p[2], p[3]);
        }
    }
}

std::vector<std::vector<Vec2>> chain_segments(std::vector<Segment> segs) {
    using Key = std::pair<double, double>;
    auto key = [](Vec2 p) { return Key{p.x1, p.x2}; };
    std::multimap<Key, size_t> ends;
    for (size_t s = 0; s < segs.size(); ++s) {
        ends.emplace(key(segs[s].first), s);
        ends.emplace(key(segs[s].second), s);
    }
    std::vector<bool> used(segs.size(), false);
    std::vector<std::vector<Vec2>> lines;
    auto walk = [&](size_t start, bool from_first) {
        std::vector<Vec2> line;
        size_t s = start;
        Vec2 cur = from_first ? segs[s].first : segs[s].second;
        line.push_back(cur);
        while (true) {
            used[s] = true;
            Vec2 next = key(cur) == key(segs[s].first) ? segs[s].second
                                                       : segs[s].first;
            line.push_back(next);
            cur = next;
            size_t follow = segs.size();
            auto [lo, hi] = ends.equal_range(key(cur));
            for (auto it = lo; it != hi; ++it)
                if (!used[it->second]) {
                    follow = it->second;
                    break;
                }
            if (follow == segs.size()) break;
            s = follow;
        }
        return line;
    };
    // Open chains first (endpoints of degree 1), then remaining loops.
    for (size_t s = 0; s < segs.size(); ++s) {
        if (used[s]) continue;
        for (Vec2 p : {segs[s].first, segs[s].second}) {
            size_t degree = 0;
            auto [lo, hi] = ends.equal_range(key(p));
            for (auto it = lo; it != hi; ++it) ++degree;
            if (degree == 1) {
                lines.push_back(walk(s, key(p) == key(segs[s].first)));
                break;
            }
        }
    }
    for (size_t s = 0; s < segs.size(); ++s)
        if (!used[s]) lines.push_back(walk(s, true));
    return lines;
}

}  // namespace

std::vector<Vec2> FreeBoundaryCurve::all_vertices() const {
    std::vector<Vec2> out;
    for (const auto& line : polylines)
        out.insert(out.end(), line.begin(), line.end());
    return out;
}

RegionDecomposition decompose(const Field& u, double tau_u, double tau_g) {
    RegionDecomposition d;
    d.tau_u = tau_u;
    d.tau_g = tau_g;
    d.mask = u.mask;
    const GridSpec& g = u.grid();
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            if (!u.mask->is_interior(i, j)) continue;
            const double v = u.at(i, j);
            if (v > tau_u) {
                d.omega_plus.push_back(g.index(i, j));
            } else if (v < -tau_u) {
                d.omega_minus.push_back(g.index(i, j));
            } else if (gradient_at(u, i, j).norm() <= tau_g) {
                d.lambda_set.push_back(g.index(i, j));
            }
        }
    }
    return d;
}

FreeBoundaryCurve extract_gamma(const Field& u, double tau_u) {
    FreeBoundaryCurve curve;
    curve.tau_u = tau_u;
    curve.mask = u.mask;
    const GridSpec& g = u.grid();
    const double margin = 2.0 * g.h;
    std::vector<Segment> segs;
    for (int i = 0; i + 1 < g.n1; ++i) {
        for (int j = 0; j + 1 < g.n2; ++j) {
            cell_segments(u, i, j, +1.0, tau_u, segs);   // boundary of Omega+
            cell_segments(u, i, j, -1.0, tau_u, segs);   // boundary of Omega-
        }
    }
    // Gamma lives in the open domain: drop segments hugging the fixed
    // boundary (otherwise every positivity set bounded by the domain wall
    // would spuriously register a free boundary there).
    std::erase_if(segs, [&](const Segment& s) {
        return fixed_boundary_distance(u.mask->shape, s.first) < margin ||
               fixed_boundary_distance(u.mask->shape, s.second) < margin;
    });
    curve.polylines = chain_segments(std::move(segs));
    return curve;
}

DensityTrace density_ratios(const RegionDecomposition& decomp,
                            const std::vector<double>& radii, Vec2 center) {
    const GridSpec& g = decomp.mask->grid;
    DensityTrace tr;
    for (double r : radii) {
        if (r <= 4.0 * g.h) {
            tr.skipped_radii.push_back(r);
            continue;
        }
        const double r2 = r * r;
        auto count_in = [&](const std::vector<int>& set) {
            size_t n = 0;
            for (int idx : set) {
                const Vec2 p = g.node(idx / g.n2, idx % g.n2);
                if ((p - center).norm_sq() <= r2) ++n;
            }
            return n;
        };
        size_t total = 0;
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j)
                if (decomp.mask->is_interior(i, j) &&
                    (g.node(i, j) - center).norm_sq() <= r2)
                    ++total;
        if (total == 0) {
            tr.skipped_radii.push_back(r);
            continue;
        }
        const double denom = double(total);
        tr.entries.push_back({r, count_in(decomp.omega_plus) / denom,
                              count_in(decomp.omega_minus) / denom,
                              count_in(decomp.lambda_set) / denom});
    }
    return tr;
}

TangencyProfile tangency_profile(const FreeBoundaryCurve& gamma,
                                 const std::vector<double>& radii) {
    TangencyProfile prof;
    const auto vertices = gamma.all_vertices();
    for (double r : radii) {
        double best = -std::numeric_limits<double>::infinity();
        for (const Vec2& v : vertices) {
            const double rho = v.norm();
            if (rho <= 0.5 * r || rho > r) continue;
            best = std::max(best, v.x1 / std::abs(v.x2));
        }
        prof.entries.push_back({r, best});
    }
    return prof;
}

std::vector<bool> cone_test(const std::vector<Vec2>& points, double eps) {
    std::vector<bool> out;
    out.reserve(points.size());
    for (const Vec2& p : points) out.push_back(p.x1 > eps * std::abs(p.x2));
    return out;
}

RadialTrace nondegeneracy_trace(const Field& u,
                                const std::vector<double>& radii,
                                Vec2 center) {
    const GridSpec& g = u.grid();
    RadialTrace tr;
    tr.functional = "nondegeneracy";
    for (double r : radii) {
        double sup = 0.0;
        const double r2 = r * r;
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j)
                if (u.mask->is_valid(i, j) &&
                    (g.node(i, j) - center).norm_sq() <= r2)
                    sup = std::max(sup, std::abs(u.at(i, j)));
        tr.entries.push_back({r, sup / (r * r)});
    }
    return tr;
}

RadialTrace growth_check(const Field& u, const std::vector<double>& radii) {
    const auto* hd = std::get_if<HalfDisk>(&u.mask->shape);
    if (!hd || std::abs(hd->center.x1) > 1e-12 ||
        std::abs(hd->center.x2) > hd->radius)
        throw std::invalid_argument(
            "growth_check: needs a half-disk with the origin on its flat "
            "side");
    const GridSpec& g = u.grid();
    // Node at the origin plus two grid neighbors along e1.
    const int j0 = int(std::lround((0.0 - g.origin.x2) / g.h));
    const double u0 = u.at(0, j0), u1 = u.at(1, j0), u2 = u.at(2, j0);
    const double slope = (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * g.h);

    RadialTrace tr;
    tr.functional = "growth";
    for (double r : radii) {
        double sup = 0.0;
        const double r2 = r * r;
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
                if (!u.mask->is_valid(i, j)) continue;
                const Vec2 p = g.node(i, j);
                if (p.norm_sq() > r2) continue;
                sup = std::max(sup, std::abs(u.at(i, j) - slope * p.x1));
            }
        tr.entries.push_back({r, sup / (r * r)});
    }
    return tr;
}

std::string decomposition_to_csv(const RegionDecomposition& decomp) {
    const GridSpec& g = decomp.mask->grid;
    std::vector<char> label(size_t(g.n1) * g.n2, ' ');
    for (int idx : decomp.omega_plus) label[idx] = '+';
    for (int idx : decomp.omega_minus) label[idx] = '-';
    for (int idx : decomp.lambda_set) label[idx] = '0';
    std::ostringstream out;
    out.precision(17);
    out << "i,j,x1,x2,class\n";
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            if (!decomp.mask->is_interior(i, j)) continue;
            const Vec2 p = g.node(i, j);
            const char c = label[g.index(i, j)];
            const char* name = c == '+'   ? "omega_plus"
                               : c == '-' ? "omega_minus"
                               : c == '0' ? "lambda"
                                          : "band";
            out << i << "," << j << "," << p.x1 << "," << p.x2 << "," << name
                << "\n";
        }
    }
    return out.str();
}

std::string gamma_to_csv(const FreeBoundaryCurve& gamma) {
    std::ostringstream out;
    out.precision(17);
    out << "polyline,x1,x2\n";
    for (size_t k = 0; k < gamma.polylines.size(); ++k)
        for (const Vec2& v : gamma.polylines[k])
            out << k << "," << v.x1 << "," << v.x2 << "\n";
    return out.str();
}

}  // namespace tpob
