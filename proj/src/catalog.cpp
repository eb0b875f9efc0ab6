#include "tpob/catalog.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tpob {

using std::numbers::pi;

namespace {

// Fundamental solution normalized so Delta U = delta_0, and its radial
// derivative.
double fundamental(double r, int n) {
    if (n == 2) return std::log(r) / (2.0 * pi);
    const double omega = 2.0 * std::pow(pi, n / 2.0) / std::tgamma(n / 2.0);
    return -1.0 / ((n - 2) * omega * std::pow(r, n - 2));
}

double fundamental_dr(double R, int n) {
    if (n == 2) return 1.0 / (2.0 * pi * R);
    const double omega = 2.0 * std::pow(pi, n / 2.0) / std::tgamma(n / 2.0);
    return 1.0 / (omega * std::pow(R, n - 1));
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

double ball_solution_eval_radial(double lambda, double R, int n, double r) {
    if (r <= 0.0)
        throw std::domain_error("ball_solution_eval: singular point x = 0");
    const double cR = lambda * R / n / fundamental_dr(R, n);
    const double C = -(lambda / (2.0 * n) * R * R - cR * fundamental(R, n));
    return lambda / (2.0 * n) * r * r - cR * fundamental(r, n) + C;
}

double ball_solution_eval(double lambda, double R, int n, Vec2 x) {
    return ball_solution_eval_radial(lambda, R, n, x.norm());
}

double halfspace_solution_eval(const ExactSolution& sol,
                               const Coefficients& coeffs, Vec2 x) {
    const double lam =
        sol.sign > 0 ? coeffs.lambda_plus : coeffs.lambda_minus;
    switch (sol.kind) {
        case ExactKind::HalfSpaceParabolic: {
            const double t = positive_part(x.x1 - sol.a);
            return sol.sign * 0.5 * lam * t * t;
        }
        case ExactKind::HalfSpaceWithLinear:
            return sol.sign * (0.5 * lam * x.x1 * x.x1 + sol.alpha * x.x1);
        case ExactKind::HomogeneousProfile:
            return sol.sign * 0.5 * lam * x.x1 * x.x1;
        default:
            throw std::invalid_argument(
                "halfspace_solution_eval: not a half-space variant");
    }
}

double homogeneous_profile_eval(int sign, double lambda, double theta) {
    if (theta < 0.0 || theta > pi)
        throw std::domain_error("homogeneous_profile_eval: theta outside [0,pi]");
    const double s = std::sin(theta);
    return sign * 0.5 * lambda * s * s;
}

double exact_eval(const ExactSolution& sol, const Coefficients& coeffs,
                  Vec2 x) {
    if (sol.kind == ExactKind::BallSolution)
        return ball_solution_eval(sol.lambda, sol.radius, sol.dim, x);
    return halfspace_solution_eval(sol, coeffs, x);
}

namespace {

double bump(double t, double delta, double w, double s) {
    const double q = 1.0 - ((t - s) / w) * ((t - s) / w);
    return q > 0.0 ? delta * q * q : 0.0;
}

}  // namespace

double Scenario::boundary_value(Vec2 p) const {
    const BoundaryDataSpec& b = boundary;
    double v = 0.0;
    switch (b.preset) {
        case BoundaryPreset::Zero:
            v = 0.0;
            break;
        case BoundaryPreset::ExactTrace:
            if (!exact)
                throw std::logic_error(
                    "boundary_value: ExactTrace without an exact solution");
            v = exact_eval(*exact, coeffs, p);
            break;
        case BoundaryPreset::OddSym: {
            // kappa * sin(2 theta) on the arc, zero on Pi; equals
            // 2 kappa x1 x2 / R^2 which vanishes at x1 = 0.
            const auto& hd = std::get<HalfDisk>(shape);
            const Vec2 q = p - hd.center;
            v = 2.0 * b.kappa * q.x1 * q.x2 / (hd.radius * hd.radius);
            break;
        }
        case BoundaryPreset::Counterexample: {
            const double t = positive_part(p.x1 - b.eps);
            v = 0.5 * b.lambda_plus * t * t;
            if (std::abs(p.x1) <= 1e-12)
                v += bump(p.x2, b.delta, b.width, b.bump_center);
            break;
        }
        case BoundaryPreset::PiPoly: {
            double acc = 0.0;
            for (size_t k = b.coeffs.size(); k-- > 0;)
                acc = acc * p.x2 + b.coeffs[k];
            v = acc;
            break;
        }
        case BoundaryPreset::TrigCircle: {
            // |p|^2 f(theta): continuous at the origin (where the polar
            // angle is undefined), equal to the plain Fourier polynomial
            // on the unit circle.
            const double th = std::atan2(p.x2, p.x1);
            double acc = b.trig.empty() ? 0.0 : b.trig[0];
            for (size_t k = 1; 2 * k - 1 < b.trig.size(); ++k) {
                acc += b.trig[2 * k - 1] * std::cos(k * th);
                if (2 * k < b.trig.size()) acc += b.trig[2 * k] * std::sin(k * th);
            }
            v = acc * p.norm_sq();
            break;
        }
        case BoundaryPreset::BallCombo: {
            for (const BallComponent& bc : b.balls) {
                const double r = (p - bc.center).norm();
                if (r <= 0.0) continue;
                v += bc.sign *
                     ball_solution_eval_radial(bc.lambda, bc.radius, 2,
                                               std::max(r, 1e-12));
            }
            break;
        }
    }
    return b.scale * v;
}

double Scenario::pi_value(double x2) const {
    double x1 = 0.0;
    if (const auto* hd = std::get_if<HalfDisk>(&shape)) x1 = hd->center.x1;
    return boundary_value({x1, x2});
}

BoundaryDataSpec counterexample_boundary_data(double delta, double eps,
                                              double w, double s,
                                              double lambda_plus) {
    if (delta < 0.0 || eps < 0.0 || w <= 0.0)
        throw std::invalid_argument(
            "counterexample_boundary_data: delta, eps, w must be positive");
    if (s <= w)
        throw std::invalid_argument(
            "counterexample_boundary_data: need s > w so the bump vanishes "
            "near 0");
    BoundaryDataSpec b;
    b.preset = BoundaryPreset::Counterexample;
    b.delta = delta;
    b.eps = eps;
    b.width = w;
    b.bump_center = s;
    b.lambda_plus = lambda_plus;
    return b;
}

CondReport validate_condition_cond(const std::function<double(double)>& f) {
    auto d1 = [&](double s) {
        return (f(-2 * s) - 8 * f(-s) + 8 * f(s) - f(2 * s)) / (12.0 * s);
    };
    auto d2 = [&](double s) {
        return (-f(-2 * s) + 16 * f(-s) - 30 * f(0) + 16 * f(s) - f(2 * s)) /
               (12.0 * s * s);
    };
    const double s0 = 1e-2;
    const double g1 = d1(s0), g2 = d1(s0 / 2), g3 = d1(s0 / 4);
    const double h1 = d2(s0), h2 = d2(s0 / 2), h3 = d2(s0 / 4);
    // Estimates of a smooth function settle under step refinement; blow
    // up marks a non-differentiable spec.
    if ((std::abs(g3) > 10.0 * std::abs(g2) + 1.0 && std::abs(g3) > 1e3) ||
        (std::abs(h3) > 10.0 * std::abs(h2) + 1.0 && std::abs(h3) > 1e3))
        throw std::domain_error(
            "validate_condition_cond: data not twice differentiable at 0");
    CondReport r;
    r.value = f(0.0);
    r.grad = (16.0 * g2 - g1) / 15.0;
    r.hess = (16.0 * h2 - h1) / 15.0;
    r.pass = std::abs(r.value) <= 1e-10 && std::abs(r.grad) <= 1e-6 &&
             std::abs(r.hess) <= 1e-5;
    return r;
}

CondReport validate_condition_cond(const Scenario& sc) {
    return validate_condition_cond(
        [&](double t) { return sc.pi_value(t); });
}

DiniReport dini_integral(const std::function<double(double)>& f, int samples) {
    if (samples < 16) samples = 16;
    const double x_max = 0.9;
    const double dd = 1e-4;  // step for the second-derivative stencil
    std::vector<double> xs(samples), d2(samples);
    for (int k = 0; k < samples; ++k) {
        xs[k] = -x_max + 2.0 * x_max * k / (samples - 1);
        d2[k] = (f(xs[k] + dd) - 2.0 * f(xs[k]) + f(xs[k] - dd)) / (dd * dd);
    }
    const double dx = xs[1] - xs[0];

    // omega(s) at s = m*dx, for a geometric-ish set of lags.
    std::vector<double> ss, om;
    int m = 1;
    while (m < samples) {
        double w = 0.0;
        for (int k = 0; k + m < samples; ++k)
            w = std::max(w, std::abs(d2[k + m] - d2[k]));
        ss.push_back(m * dx);
        om.push_back(w);
        m = std::max(m + 1, int(m * 1.25));
    }

    DiniReport rep;
    for (size_t k = 0; k + 1 < ss.size(); ++k) {
        if (ss[k] > 1.0) break;
        const double hi = std::min(ss[k + 1], 1.0);
        rep.integral +=
            0.5 * (om[k] / ss[k] + om[k + 1] / hi) * (hi - ss[k]);
    }
    // Observed power law of omega near 0 from the two smallest lags.
    if (om[0] > 1e-12 && om.size() > 2 && om[2] > om[0]) {
        rep.exponent = std::log(om[2] / om[0]) / std::log(ss[2] / ss[0]);
        rep.divergent = rep.exponent <= 0.0;
    } else {
        rep.exponent = om[0] <= 1e-12 ? 2.0 : 0.0;
    }
    return rep;
}

Scenario make_halfspace_scenario(int sign, double a, const Coefficients& c) {
    Scenario sc;
    std::ostringstream nm;
    nm << "halfspace_parabolic_" << (sign > 0 ? "pos" : "neg") << "_a" << a;
    sc.name = nm.str();
    sc.shape = HalfDisk{{0.0, 0.0}, 1.0};
    sc.coeffs = c;
    sc.exact = ExactSolution{ExactKind::HalfSpaceParabolic, sign, a};
    sc.boundary.preset = BoundaryPreset::ExactTrace;
    sc.cls = ClassParams{std::max(c.lambda_plus, c.lambda_minus), 1.0,
                         0.5 * std::min(c.lambda_plus, c.lambda_minus), 0.5};
    return sc;
}

Scenario make_withlinear_scenario(int sign, double alpha,
                                  const Coefficients& c) {
    Scenario sc;
    std::ostringstream nm;
    nm << "halfspace_withlinear_" << (sign > 0 ? "pos" : "neg") << "_alpha"
       << alpha;
    sc.name = nm.str();
    sc.shape = HalfDisk{{0.0, 0.0}, 1.0};
    sc.coeffs = c;
    sc.exact =
        ExactSolution{ExactKind::HalfSpaceWithLinear, sign, 0.0, alpha};
    sc.boundary.preset = BoundaryPreset::ExactTrace;
    sc.cls = ClassParams{std::max(c.lambda_plus, c.lambda_minus) + alpha, 1.0,
                         0.5 * std::min(c.lambda_plus, c.lambda_minus), 0.5};
    return sc;
}

Scenario make_oddsym_scenario(double kappa, const Coefficients& c) {
    Scenario sc;
    sc.name = "odd_symmetric";
    sc.shape = HalfDisk{{0.0, 0.0}, 1.0};
    sc.coeffs = c;
    sc.boundary.preset = BoundaryPreset::OddSym;
    sc.boundary.kappa = kappa;
    sc.cls = ClassParams{std::abs(kappa), 1.0, 0.01, 0.5};
    return sc;
}

Scenario make_counterexample_scenario(double delta, double eps, double w,
                                      double s, const Coefficients& c) {
    Scenario sc;
    std::ostringstream nm;
    nm << "counterexample_d" << delta << "_e" << eps;
    sc.name = nm.str();
    sc.shape = HalfDisk{{0.0, 0.0}, 1.0};
    sc.coeffs = c;
    sc.boundary = counterexample_boundary_data(delta, eps, w, s, c.lambda_plus);
    sc.cls = ClassParams{c.lambda_plus, 1.0, 0.01, 0.5};
    return sc;
}

Scenario make_typical_example(int k) {
    Scenario sc;
    sc.name = "typical_example_" + std::to_string(k);
    sc.shape = Rectangle{{-1.0, -1.0}, {1.0, 1.0}};
    sc.coeffs = {1.0, 1.0};
    sc.boundary.preset = BoundaryPreset::BallCombo;
    switch (k) {
        case 0:  // one-phase blob away from the left wall; large zero set
            sc.boundary.balls = {{{0.6, 0.0}, 1.0, 0.35, +1}};
            break;
        case 1:  // nearby positive and negative blobs
            sc.boundary.balls = {{{0.5, 0.45}, 1.0, 0.4, +1},
                                 {{0.5, -0.45}, 1.0, 0.4, -1}};
            break;
        default:  // sign-changing data overlapping the touch region
            sc.boundary.balls = {{{0.35, 0.35}, 1.0, 0.55, +1},
                                 {{0.35, -0.35}, 1.0, 0.55, -1}};
            break;
    }
    sc.cls = ClassParams{1.0, 1.0, 0.01, 0.5};
    return sc;
}

// ---------------------------------------------------------------------------
// JSON round trip
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json shape_to_json(const Shape& s) {
    json j;
    j["type"] = shape_name(s);
    if (const auto* r = std::get_if<Rectangle>(&s)) {
        j["lo"] = {r->lo.x1, r->lo.x2};
        j["hi"] = {r->hi.x1, r->hi.x2};
    } else if (const auto* d = std::get_if<Disk>(&s)) {
        j["center"] = {d->center.x1, d->center.x2};
        j["radius"] = d->radius;
    } else if (const auto* hd = std::get_if<HalfDisk>(&s)) {
        j["center"] = {hd->center.x1, hd->center.x2};
        j["radius"] = hd->radius;
    } else if (const auto* a = std::get_if<Annulus>(&s)) {
        j["center"] = {a->center.x1, a->center.x2};
        j["r_inner"] = a->r_inner;
        j["r_outer"] = a->r_outer;
    }
    return j;
}

Shape shape_from_json(const json& j) {
    const std::string type = j.at("type");
    auto vec = [&](const char* key) {
        return Vec2{j.at(key)[0].get<double>(), j.at(key)[1].get<double>()};
    };
    if (type == "rectangle") return Rectangle{vec("lo"), vec("hi")};
    if (type == "disk") return Disk{vec("center"), j.at("radius")};
    if (type == "half_disk") return HalfDisk{vec("center"), j.at("radius")};
    if (type == "annulus")
        return Annulus{vec("center"), j.at("r_inner"), j.at("r_outer")};
    throw std::invalid_argument("scenario: unknown shape type '" + type + "'");
}

const char* preset_name(BoundaryPreset p) {
    switch (p) {
        case BoundaryPreset::Zero: return "zero";
        case BoundaryPreset::ExactTrace: return "exact_trace";
        case BoundaryPreset::OddSym: return "odd_sym";
        case BoundaryPreset::Counterexample: return "counterexample";
        case BoundaryPreset::PiPoly: return "pi_poly";
        case BoundaryPreset::TrigCircle: return "trig_circle";
        case BoundaryPreset::BallCombo: return "ball_combo";
    }
    return "zero";
}

BoundaryPreset preset_from_name(const std::string& s) {
    if (s == "zero") return BoundaryPreset::Zero;
    if (s == "exact_trace") return BoundaryPreset::ExactTrace;
    if (s == "odd_sym") return BoundaryPreset::OddSym;
    if (s == "counterexample") return BoundaryPreset::Counterexample;
    if (s == "pi_poly") return BoundaryPreset::PiPoly;
    if (s == "trig_circle") return BoundaryPreset::TrigCircle;
    if (s == "ball_combo") return BoundaryPreset::BallCombo;
    throw std::invalid_argument("scenario: unknown boundary preset '" + s + "'");
}

const char* kind_name(ExactKind k) {
    switch (k) {
        case ExactKind::HalfSpaceParabolic: return "halfspace_parabolic";
        case ExactKind::HalfSpaceWithLinear: return "halfspace_with_linear";
        case ExactKind::BallSolution: return "ball_solution";
        case ExactKind::HomogeneousProfile: return "homogeneous_profile";
    }
    return "halfspace_parabolic";
}

ExactKind kind_from_name(const std::string& s) {
    if (s == "halfspace_parabolic") return ExactKind::HalfSpaceParabolic;
    if (s == "halfspace_with_linear") return ExactKind::HalfSpaceWithLinear;
    if (s == "ball_solution") return ExactKind::BallSolution;
    if (s == "homogeneous_profile") return ExactKind::HomogeneousProfile;
    throw std::invalid_argument("scenario: unknown exact kind '" + s + "'");
}

}  // namespace

std::string scenario_to_json(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    j["shape"] = shape_to_json(sc.shape);
    j["coefficients"] = {{"lambda_plus", sc.coeffs.lambda_plus},
                         {"lambda_minus", sc.coeffs.lambda_minus}};
    json b;
    b["preset"] = preset_name(sc.boundary.preset);
    b["scale"] = sc.boundary.scale;
    switch (sc.boundary.preset) {
        case BoundaryPreset::OddSym:
            b["kappa"] = sc.boundary.kappa;
            break;
        case BoundaryPreset::Counterexample:
            b["delta"] = sc.boundary.delta;
            b["eps"] = sc.boundary.eps;
            b["width"] = sc.boundary.width;
            b["bump_center"] = sc.boundary.bump_center;
            b["lambda_plus"] = sc.boundary.lambda_plus;
            break;
        case BoundaryPreset::PiPoly:
            b["coeffs"] = sc.boundary.coeffs;
            break;
        case BoundaryPreset::TrigCircle:
            b["trig"] = sc.boundary.trig;
            break;
        case BoundaryPreset::BallCombo: {
            json arr = json::array();
            for (const auto& bc : sc.boundary.balls)
                arr.push_back({{"center", {bc.center.x1, bc.center.x2}},
                               {"lambda", bc.lambda},
                               {"radius", bc.radius},
                               {"sign", bc.sign}});
            b["balls"] = arr;
            break;
        }
        default:
            break;
    }
    j["boundary"] = b;
    if (sc.exact) {
        j["exact"] = {{"kind", kind_name(sc.exact->kind)},
                      {"sign", sc.exact->sign},
                      {"a", sc.exact->a},
                      {"alpha", sc.exact->alpha},
                      {"lambda", sc.exact->lambda},
                      {"radius", sc.exact->radius},
                      {"dim", sc.exact->dim}};
    }
    j["class_params"] = {{"M", sc.cls.M},
                         {"R", sc.cls.R},
                         {"c0", sc.cls.c0},
                         {"r0", sc.cls.r0}};
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    json j = json::parse(text);
    Scenario sc;
    sc.name = j.value("name", "scenario");
    sc.shape = shape_from_json(j.at("shape"));
    sc.coeffs.lambda_plus = j.at("coefficients").at("lambda_plus");
    sc.coeffs.lambda_minus = j.at("coefficients").at("lambda_minus");
    if (sc.coeffs.lambda_plus <= 0.0 || sc.coeffs.lambda_minus <= 0.0)
        throw std::invalid_argument("scenario: lambda_± must be positive");
    const json& b = j.at("boundary");
    sc.boundary.preset = preset_from_name(b.at("preset"));
    sc.boundary.scale = b.value("scale", 1.0);
    switch (sc.boundary.preset) {
        case BoundaryPreset::OddSym:
            sc.boundary.kappa = b.at("kappa");
            break;
        case BoundaryPreset::Counterexample:
            sc.boundary = counterexample_boundary_data(
                b.at("delta"), b.at("eps"), b.at("width"), b.at("bump_center"),
                b.at("lambda_plus"));
            sc.boundary.scale = b.value("scale", 1.0);
            break;
        case BoundaryPreset::PiPoly:
            sc.boundary.coeffs = b.at("coeffs").get<std::vector<double>>();
            break;
        case BoundaryPreset::TrigCircle:
            sc.boundary.trig = b.at("trig").get<std::vector<double>>();
            break;
        case BoundaryPreset::BallCombo:
            for (const json& e : b.at("balls")) {
                BallComponent bc;
                bc.center = {e.at("center")[0], e.at("center")[1]};
                bc.lambda = e.at("lambda");
                bc.radius = e.at("radius");
                bc.sign = e.at("sign");
                sc.boundary.balls.push_back(bc);
            }
            break;
        default:
            break;
    }
    if (j.contains("exact")) {
        const json& e = j["exact"];
        ExactSolution ex;
        ex.kind = kind_from_name(e.at("kind"));
        ex.sign = e.value("sign", 1);
        ex.a = e.value("a", 0.0);
        ex.alpha = e.value("alpha", 0.0);
        ex.lambda = e.value("lambda", 1.0);
        ex.radius = e.value("radius", 1.0);
        ex.dim = e.value("dim", 2);
        sc.exact = ex;
    }
    if (j.contains("class_params")) {
        const json& c = j["class_params"];
        sc.cls = {c.value("M", 1.0), c.value("R", 1.0), c.value("c0", 0.1),
                  c.value("r0", 0.5)};
    }
    return sc;
}

void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << scenario_to_json(sc) << "\n";
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open scenario file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

}  // namespace tpob
