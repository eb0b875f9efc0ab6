#include "tpob/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace tpob {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string field_to_csv(const Field& u) {
    const GridSpec& g = u.grid();
    std::ostringstream out;
    out.precision(17);
    out << "i,j,x1,x2,u\n";
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            if (u.mask->cls(i, j) == NodeClass::Exterior) continue;
            const Vec2 p = g.node(i, j);
            out << i << "," << j << "," << p.x1 << "," << p.x2 << ","
                << u.at(i, j) << "\n";
        }
    return out.str();
}

std::string energy_trace_to_csv(const SolveReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "sweep,J\n";
    for (size_t k = 0; k < report.energy_trace.size(); ++k)
        out << k + 1 << "," << report.energy_trace[k] << "\n";
    return out.str();
}

std::string density_to_csv(const DensityTrace& tr) {
    std::ostringstream out;
    out.precision(17);
    out << "r,ratio_plus,ratio_minus,ratio_lambda\n";
    for (const auto& e : tr.entries)
        out << e.r << "," << e.ratio_plus << "," << e.ratio_minus << ","
            << e.ratio_lambda << "\n";
    return out.str();
}

std::string tangency_to_csv(const TangencyProfile& prof) {
    std::ostringstream out;
    out.precision(17);
    out << "r,sigma_hat\n";
    for (const auto& e : prof.entries)
        out << e.r << "," << e.sigma_hat << "\n";
    return out.str();
}

double boundary_sup_norm(const Scenario& sc) {
    // Sampled sup of the data over the shape boundary via the arc
    // parametrization plus, for half-disks, the flat side.
    double sup = 0.0;
    if (const auto* hd = std::get_if<HalfDisk>(&sc.shape)) {
        for (int k = 0; k <= 720; ++k) {
            const double th =
                -0.5 * std::numbers::pi + k * std::numbers::pi / 720;
            sup = std::max(sup, std::abs(sc.boundary_value(
                                    {hd->center.x1 + hd->radius * std::cos(th),
                                     hd->center.x2 +
                                         hd->radius * std::sin(th)})));
            const double x2 =
                hd->center.x2 + hd->radius * (k / 360.0 - 1.0);
            sup = std::max(sup,
                           std::abs(sc.boundary_value({hd->center.x1, x2})));
        }
        return sup;
    }
    Vec2 lo, hi;
    shape_bbox(sc.shape, lo, hi);
    for (int k = 0; k < 720; ++k) {
        const double t = double(k) / 720;
        const Vec2 pts[4] = {
            {lo.x1 + t * (hi.x1 - lo.x1), lo.x2},
            {lo.x1 + t * (hi.x1 - lo.x1), hi.x2},
            {lo.x1, lo.x2 + t * (hi.x2 - lo.x2)},
            {hi.x1, lo.x2 + t * (hi.x2 - lo.x2)},
        };
        for (const Vec2& p : pts)
            if (shape_on_boundary(sc.shape, p, 1e-9))
                sup = std::max(sup, std::abs(sc.boundary_value(p)));
    }
    // Curved boundaries: sample the circle(s).
    auto sample_circle = [&](Vec2 c, double r) {
        for (int k = 0; k < 720; ++k) {
            const double th = 2.0 * std::numbers::pi * k / 720;
            sup = std::max(sup, std::abs(sc.boundary_value(
                                    {c.x1 + r * std::cos(th),
                                     c.x2 + r * std::sin(th)})));
        }
    };
    if (const auto* d = std::get_if<Disk>(&sc.shape))
        sample_circle(d->center, d->radius);
    if (const auto* a = std::get_if<Annulus>(&sc.shape)) {
        sample_circle(a->center, a->r_inner);
        sample_circle(a->center, a->r_outer);
    }
    return sup;
}

struct VerifyResult {
    std::string csv;
    bool all_pass = true;
};

VerifyResult verify_scenario(const Scenario& sc) {
    VerifyResult res;
    std::ostringstream out;
    out << "check,pass\n";
    auto record = [&](const char* name, bool pass) {
        out << name << "," << (pass ? 1 : 0) << "\n";
        res.all_pass = res.all_pass && pass;
    };
    record("coefficients_positive",
           sc.coeffs.lambda_plus > 0.0 && sc.coeffs.lambda_minus > 0.0);
    bool roundtrip = false;
    try {
        const std::string once = scenario_to_json(sc);
        const std::string twice = scenario_to_json(scenario_from_json(once));
        roundtrip = once == twice;
    } catch (const std::exception&) {
    }
    record("json_roundtrip_bit_exact", roundtrip);
    bool finite = true;
    try {
        finite = std::isfinite(boundary_sup_norm(sc));
    } catch (const std::exception&) {
        finite = false;
    }
    record("boundary_data_finite", finite);
    bool pi_consistent = true;
    try {
        sc.pi_value(0.0);
    } catch (const std::exception&) {
        pi_consistent = false;
    }
    record("pi_trace_evaluable", pi_consistent);
    res.csv = out.str();
    return res;
}

// --- SVG ---------------------------------------------------------------

struct Canvas {
    Vec2 lo, hi;
    static constexpr double kSize = 800.0;
    static constexpr double kMargin = 60.0;
    double sx(double x1) const {
        return kMargin + (x1 - lo.x1) / (hi.x1 - lo.x1) * (kSize - 2 * kMargin);
    }
    double sy(double x2) const {
        return kSize - kMargin -
               (x2 - lo.x2) / (hi.x2 - lo.x2) * (kSize - 2 * kMargin);
    }
    double slen(double d) const {
        return d / (hi.x1 - lo.x1) * (kSize - 2 * kMargin);
    }
};

void append_num(std::string& s, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    s += buf;
}

void append_rect(std::string& s, double x, double y, double w, double h,
                 const char* fill) {
    s += "<rect x=\"";
    append_num(s, x);
    s += "\" y=\"";
    append_num(s, y);
    s += "\" width=\"";
    append_num(s, w);
    s += "\" height=\"";
    append_num(s, h);
    s += "\" fill=\"";
    s += fill;
    s += "\"/>\n";
}

std::string shape_outline(const Shape& shape, const Canvas& cv) {
    std::string d;
    auto move = [&](Vec2 p, bool first) {
        d += first ? "M " : "L ";
        append_num(d, cv.sx(p.x1));
        d += ' ';
        append_num(d, cv.sy(p.x2));
        d += ' ';
    };
    auto circle = [&](Vec2 c, double r) {
        for (int k = 0; k <= 256; ++k) {
            const double th = 2.0 * std::numbers::pi * k / 256;
            move({c.x1 + r * std::cos(th), c.x2 + r * std::sin(th)}, k == 0);
        }
        d += "Z ";
    };
    struct Visitor {
        const Canvas& cv;
        std::string& d;
        decltype(move)& mv;
        decltype(circle)& circ;
        void operator()(const Rectangle& r) const {
            mv(r.lo, true);
            mv({r.hi.x1, r.lo.x2}, false);
            mv(r.hi, false);
            mv({r.lo.x1, r.hi.x2}, false);
            d += "Z ";
        }
        void operator()(const Disk& dk) const { circ(dk.center, dk.radius); }
        void operator()(const HalfDisk& hd) const {
            for (int k = 0; k <= 128; ++k) {
                const double th =
                    -0.5 * std::numbers::pi + std::numbers::pi * k / 128;
                mv({hd.center.x1 + hd.radius * std::cos(th),
                    hd.center.x2 + hd.radius * std::sin(th)},
                   k == 0);
            }
            d += "Z ";
        }
        void operator()(const Annulus& a) const {
            circ(a.center, a.r_outer);
            circ(a.center, a.r_inner);
        }
    };
    std::visit(Visitor{cv, d, move, circle}, shape);
    return d;
}

}  // namespace

std::string plot_field(const Field& u, const RegionDecomposition& decomp,
                       const FreeBoundaryCurve& gamma) {
    const GridSpec& g = u.grid();
    Canvas cv;
    shape_bbox(u.mask->shape, cv.lo, cv.hi);

    std::string svg;
    svg +=
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
        "width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
    append_rect(svg, 0, 0, 800, 800, "#ffffff");

    // Region fills: run-length merged per grid column.
    std::vector<char> label(size_t(g.n1) * g.n2, ' ');
    for (int idx : decomp.omega_plus) label[idx] = '+';
    for (int idx : decomp.omega_minus) label[idx] = '-';
    for (int idx : decomp.lambda_set) label[idx] = '0';
    const char* fills[3] = {"#f6bfa8", "#a8c8f6", "#d8d8d8"};
    const char keys[3] = {'+', '-', '0'};
    const double cell = cv.slen(g.h);
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < g.n1; ++i) {
            int j = 0;
            while (j < g.n2) {
                if (label[g.index(i, j)] != keys[c]) {
                    ++j;
                    continue;
                }
                int j0 = j;
                while (j < g.n2 && label[g.index(i, j)] == keys[c]) ++j;
                const Vec2 p = g.node(i, j0);
                append_rect(svg, cv.sx(p.x1) - 0.5 * cell,
                            cv.sy(g.node(i, j - 1).x2) - 0.5 * cell, cell,
                            (j - j0) * cell, fills[c]);
            }
        }
    }

    // Domain outline.
    svg += "<path d=\"" + shape_outline(u.mask->shape, cv) +
           "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";

    // Free boundary, dashed.
    for (const auto& line : gamma.polylines) {
        if (line.size() < 2) continue;
        svg += "<polyline points=\"";
        for (const Vec2& v : line) {
            append_num(svg, cv.sx(v.x1));
            svg += ',';
            append_num(svg, cv.sy(v.x2));
            svg += ' ';
        }
        svg +=
            "\" fill=\"none\" stroke=\"#b00000\" stroke-width=\"2\" "
            "stroke-dasharray=\"8 5\"/>\n";
    }

    // Legend.
    const char* names[3] = {"u &gt; 0", "u &lt; 0", "u = |grad u| = 0"};
    for (int c = 0; c < 3; ++c) {
        append_rect(svg, 16, 16 + 26 * c, 20, 20, fills[c]);
        svg += "<text x=\"42\" y=\"" + std::to_string(31 + 26 * c) +
               "\" font-family=\"sans-serif\" font-size=\"14\">";
        svg += names[c];
        svg += "</text>\n";
    }
    svg +=
        "<line x1=\"16\" y1=\"104\" x2=\"36\" y2=\"104\" stroke=\"#b00000\" "
        "stroke-width=\"2\" stroke-dasharray=\"8 5\"/>\n"
        "<text x=\"42\" y=\"109\" font-family=\"sans-serif\" "
        "font-size=\"14\">free boundary</text>\n";
    svg += "</svg>\n";
    return svg;
}

Scenario resolve_scenario(const std::string& path) {
    if (path.rfind("builtin:", 0) == 0) {
        const std::string name = path.substr(8);
        if (name == "homogeneous")
            return make_halfspace_scenario(+1, 0.0, {1.0, 1.0});
        if (name == "halfspace")
            return make_halfspace_scenario(+1, 0.3, {1.0, 1.0});
        if (name == "withlinear")
            return make_withlinear_scenario(+1, 0.5, {1.0, 1.0});
        if (name == "oddsym") return make_oddsym_scenario(1.0, {1.0, 1.0});
        if (name == "counterexample")
            return make_counterexample_scenario(0.05, 0.24, 0.25, 0.3,
                                                {1.0, 1.0});
        if (name == "typical0") return make_typical_example(0);
        if (name == "typical1") return make_typical_example(1);
        if (name == "typical2") return make_typical_example(2);
        throw std::invalid_argument("unknown builtin scenario: " + name);
    }
    return load_scenario(path);
}

std::string run_counterexample_sweep(
    const std::vector<std::pair<double, double>>& delta_eps_pairs, double h,
    const Coefficients& coeffs) {
    double prev_delta = std::numeric_limits<double>::infinity();
    double prev_eps = std::numeric_limits<double>::infinity();
    std::ostringstream out;
    out.precision(17);
    out << "delta,eps,c0_eighth,cone_nonempty,boundary_sup\n";
    for (auto [delta, eps] : delta_eps_pairs) {
        if (delta >= prev_delta || eps >= prev_eps)
            throw std::invalid_argument(
                "run_counterexample_sweep: parameter lists must decrease");
        prev_delta = delta;
        prev_eps = eps;
        const Scenario sc =
            make_counterexample_scenario(delta, eps, 0.25, 0.3, coeffs);
        auto [u, report] = solve(sc, grid_for_shape(sc.shape, h));
        const double c0 =
            nondegeneracy_trace(u, {0.125}, {0.0, 0.0}).entries[0].value;
        const auto gamma = extract_gamma(u, h * h);
        bool cone_nonempty = false;
        std::vector<Vec2> in_ball;
        for (const Vec2& v : gamma.all_vertices())
            if (v.norm() <= 0.25) in_ball.push_back(v);
        for (bool inside : cone_test(in_ball, 0.5))
            cone_nonempty = cone_nonempty || inside;
        out << delta << "," << eps << "," << c0 << ","
            << (cone_nonempty ? 1 : 0) << "," << boundary_sup_norm(sc)
            << "\n";
    }
    return out.str();
}

int run(const RunManifest& manifest, std::ostream& log) {
    if (manifest.diagnostics.empty()) {
        log << "config error: diagnostics list is empty\n";
        return kExitConfigError;
    }
    const std::vector<std::string> known = {
        "solve",   "weiss", "acf", "density",        "tangency",
        "blowup",  "ode",   "catalog-verify",        "plot"};
    for (const std::string& d : manifest.diagnostics) {
        if (std::find(known.begin(), known.end(), d) == known.end()) {
            log << "config error: unknown diagnostic '" << d << "'\n";
            return kExitConfigError;
        }
    }
    Scenario sc;
    try {
        sc = resolve_scenario(manifest.scenario_path);
    } catch (const std::exception& ex) {
        log << "config error: scenario '" << manifest.scenario_path
            << "': " << ex.what() << "\n";
        return kExitConfigError;
    }
    if (manifest.h <= 0.0 || manifest.tol <= 0.0) {
        log << "config error: h and tol must be positive\n";
        return kExitConfigError;
    }
    std::error_code ec;
    fs::create_directories(manifest.out_dir, ec);
    const fs::path out_dir(manifest.out_dir);

    auto has = [&](const char* name) {
        return std::find(manifest.diagnostics.begin(),
                         manifest.diagnostics.end(),
                         name) != manifest.diagnostics.end();
    };
    const bool needs_solve = has("solve") || has("weiss") || has("acf") ||
                             has("density") || has("tangency") ||
                             has("blowup") || has("plot");

    std::ostringstream summary;
    summary.precision(17);
    summary << "scenario: " << sc.name << "\n"
            << "h: " << manifest.h << "\n"
            << "tol: " << manifest.tol << "\n"
            << "seed: " << manifest.seed << "\n"
            << "tau_u: " << manifest.h * manifest.h << " (= h^2)\n"
            << "tau_g: " << 4.0 * manifest.h << " (= 4h)\n";

    const double tau_u = manifest.h * manifest.h;
    const double tau_g = 4.0 * manifest.h;
    const std::vector<double> trace_radii = {0.2, 0.3, 0.4, 0.5,
                                             0.6, 0.7, 0.8};
    const std::vector<double> dyadic = {0.25, 0.125, 0.0625};

    bool converged = true;
    try {
        Field u;
        SolveReport report;
        if (needs_solve) {
            SolverConfig cfg;
            cfg.tol = manifest.tol;
            auto solved = solve(sc, grid_for_shape(sc.shape, manifest.h), cfg);
            u = std::move(solved.first);
            report = std::move(solved.second);
            converged = report.converged;
            summary << "sweeps_used: " << report.sweeps_used << "\n"
                    << "converged: " << (report.converged ? 1 : 0) << "\n"
                    << "final_update: " << report.final_update << "\n"
                    << "final_residual: " << report.final_residual << "\n";
        }
        if (has("solve")) {
            write_file(out_dir / "solution.csv", field_to_csv(u));
            write_file(out_dir / "energy_trace.csv",
                       energy_trace_to_csv(report));
            summary << "artifact solution.csv: i,j,x1,x2,u (node values)\n"
                    << "artifact energy_trace.csv: sweep,J (discrete energy "
                       "per sweep)\n";
        }
        if (has("weiss")) {
            const auto tr = weiss_phi(u, sc.coeffs, trace_radii);
            write_file(out_dir / "weiss.csv", trace_to_csv(tr));
            summary << "artifact weiss.csv: r,weiss (Weiss functional)\n"
                    << "weiss_first: " << tr.entries.front().value << "\n"
                    << "weiss_last: " << tr.entries.back().value << "\n";
        }
        if (has("acf")) {
            auto [hp, hn] = tangential_derivative_parts(u);
            const auto tr = acf_phi(hp, hn, trace_radii);
            write_file(out_dir / "acf.csv", trace_to_csv(tr));
            summary << "artifact acf.csv: r,acf (ACF functional of the "
                       "tangential derivative parts)\n";
        }
        RegionDecomposition decomp;
        if (has("density") || has("plot"))
            decomp = decompose(u, tau_u, tau_g);
        if (has("density")) {
            const auto tr = density_ratios(decomp, dyadic, {0.0, 0.0});
            write_file(out_dir / "density.csv", density_to_csv(tr));
            summary << "artifact density.csv: "
                       "r,ratio_plus,ratio_minus,ratio_lambda (node-count "
                       "area fractions of B_r)\n";
        }
        FreeBoundaryCurve gamma;
        if (has("tangency") || has("plot")) gamma = extract_gamma(u, tau_u);
        if (has("tangency")) {
            const auto prof = tangency_profile(gamma, dyadic);
            write_file(out_dir / "tangency.csv", tangency_to_csv(prof));
            summary << "artifact tangency.csv: r,sigma_hat (max x1/|x2| over "
                       "free-boundary vertices in (r/2, r]; -inf if empty)\n";
        }
        if (has("blowup")) {
            const auto seq =
                make_blowup_sequence(u, dyadic, RescaleMode::Supnorm);
            std::vector<GlobalSolutionClass> classes;
            for (size_t k = 0; k < seq.fields.size(); ++k) {
                const double d2 = seq.scales[k] * seq.scales[k];
                const Coefficients eff{
                    sc.coeffs.lambda_plus * d2 / seq.denominators[k],
                    sc.coeffs.lambda_minus * d2 / seq.denominators[k]};
                classes.push_back(classify_limit(seq.fields[k], eff));
            }
            write_file(out_dir / "blowup.csv", blowup_to_csv(seq, classes));
            summary << "artifact blowup.csv: d,denominator,tag,parameter,"
                       "distance (sup-norm blow-up classification)\n";
        }
        if (has("ode")) {
            const auto rep =
                ode_brute_force(sc.coeffs, 100, 800, manifest.seed);
            write_file(out_dir / "ode.csv", ode_report_to_csv(rep, sc.coeffs));
            summary << "artifact ode.csv: lambda_plus,lambda_minus,profile,"
                       "hits,max_value,deviation (profile clusters)\n"
                    << "ode_profiles: " << rep.profiles.size() << "\n"
                    << "ode_failed_starts: " << rep.n_failed << "\n"
                    << "ode_rejected_starts: " << rep.n_rejected << "\n";
        }
        if (has("catalog-verify")) {
            const VerifyResult res = verify_scenario(sc);
            write_file(out_dir / "verify.csv", res.csv);
            summary << "artifact verify.csv: check,pass (catalog invariant "
                       "checks)\n";
            if (!res.all_pass) {
                write_file(out_dir / "run_summary.txt", summary.str());
                log << "catalog-verify failed for scenario " << sc.name
                    << "\n";
                return kExitConfigError;
            }
        }
        if (has("plot")) {
            write_file(out_dir / "plot.svg", plot_field(u, decomp, gamma));
            summary << "artifact plot.svg: region fills, dashed free "
                       "boundary, domain outline\n";
        }
    } catch (const std::exception& ex) {
        log << "config error: " << ex.what() << "\n";
        return kExitConfigError;
    }

    if (!converged) summary << "flag: solver did not converge\n";
    write_file(out_dir / "run_summary.txt", summary.str());
    if (!converged) {
        log << "solver did not converge within the sweep budget\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

}  // namespace tpob
