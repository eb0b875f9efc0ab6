#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tpob/geometry.hpp"

namespace tpob {

struct Coefficients {
    double lambda_plus = 1.0;
    double lambda_minus = 1.0;
};

// Closed-form reference solutions.
enum class ExactKind {
    HalfSpaceParabolic,  // sign * (lambda_sign/2) ((x1 - a)_+)^2
    HalfSpaceWithLinear, // sign * ((lambda_sign/2) x1^2 + alpha x1)
    BallSolution,        // radial V supported outside B_R's contact set
    HomogeneousProfile,  // sign * (lambda_sign/2) x1^2 (degree-2 homogeneous)
};

struct ExactSolution {
    ExactKind kind = ExactKind::HalfSpaceParabolic;
    int sign = +1;
    double a = 0.0;
    double alpha = 0.0;
    double lambda = 1.0;  // BallSolution only
    double radius = 1.0;  // BallSolution only
    int dim = 2;          // BallSolution only
};

// V(x) = lambda/(2n) |x|^2 - C_R U(|x|) + C with U the fundamental solution
// normalized so that Delta U = delta_0, C_R from C_R U'(R) = lambda R / n and
// C from V(R) = 0. Throws std::domain_error at x = 0.
double ball_solution_eval(double lambda, double R, int n, Vec2 x);
double ball_solution_eval_radial(double lambda, double R, int n, double r);

double halfspace_solution_eval(const ExactSolution& sol,
                               const Coefficients& coeffs, Vec2 x);

// phi(theta) = sign * (lambda/2) sin^2(theta), theta in [0, pi].
double homogeneous_profile_eval(int sign, double lambda, double theta);

double exact_eval(const ExactSolution& sol, const Coefficients& coeffs, Vec2 x);

// Boundary data families. Evaluable at any boundary point; the Pi part is
// the restriction to {x1 = 0}.
enum class BoundaryPreset {
    Zero,
    ExactTrace,      // trace of the scenario's exact solution
    OddSym,          // kappa * sin(2 theta) on the arc, 0 on Pi
    Counterexample,  // offset parabola trace plus a C^1 bump on Pi
    PiPoly,          // polynomial in x2 (same value off Pi)
    TrigCircle,      // |x|^2 times a Fourier polynomial in the polar angle
                     // about the origin (plain Fourier data on the unit arc)
    BallCombo,       // sum of shifted ball-solution traces
};

struct BallComponent {
    Vec2 center;
    double lambda = 1.0;
    double radius = 0.5;
    int sign = +1;
};

struct BoundaryDataSpec {
    BoundaryPreset preset = BoundaryPreset::Zero;
    double scale = 1.0;

    double kappa = 0.0;  // OddSym

    // Counterexample family (Fig. 3-style data): trace of
    // (lambda_plus/2)((x1-eps)_+)^2 plus delta * max(0, 1-((x2-s)/w)^2)^2 on Pi.
    double delta = 0.0;
    double eps = 0.0;
    double width = 0.0;
    double bump_center = 0.0;
    double lambda_plus = 1.0;

    std::vector<double> coeffs;  // PiPoly: c0 + c1 x2 + ...
    std::vector<double> trig;    // TrigCircle: a0, a1, b1, a2, b2, ...

    std::vector<BallComponent> balls;  // BallCombo
};

struct ClassParams {
    double M = 1.0;
    double R = 1.0;
    double c0 = 0.1;
    double r0 = 0.5;
};

struct Scenario {
    std::string name = "scenario";
    Shape shape = HalfDisk{{0.0, 0.0}, 1.0};
    Coefficients coeffs;
    BoundaryDataSpec boundary;
    std::optional<ExactSolution> exact;
    ClassParams cls;

    double boundary_value(Vec2 p) const;
    // Trace on Pi as a function of x2 (Pi at the half-disk flat side).
    double pi_value(double x2) const;
};

// delta, eps, w > 0 and s > w; throws std::invalid_argument otherwise.
BoundaryDataSpec counterexample_boundary_data(double delta, double eps,
                                              double w, double s,
                                              double lambda_plus);

struct CondReport {
    double value = 0.0;
    double grad = 0.0;
    double hess = 0.0;
    bool pass = false;
};

// Checks f(0) = |f'(0)| = |f''(0)| = 0 for the Pi part of the data by
// 5-point stencils at shrinking steps with Richardson extrapolation.
CondReport validate_condition_cond(const std::function<double(double)>& f_pi);
CondReport validate_condition_cond(const Scenario& sc);

struct DiniReport {
    double integral = 0.0;
    double exponent = 0.0;  // observed power of omega near 0
    bool divergent = false;
};

// Estimates the modulus of continuity omega of f'' by sampling and returns
// the quadrature of omega(s)/s over [s_min, 1].
DiniReport dini_integral(const std::function<double(double)>& f_pi,
                         int samples);

// Preset scenarios.
Scenario make_halfspace_scenario(int sign, double a, const Coefficients& c);
Scenario make_withlinear_scenario(int sign, double alpha,
                                  const Coefficients& c);
Scenario make_oddsym_scenario(double kappa, const Coefficients& c);
Scenario make_counterexample_scenario(double delta, double eps, double w,
                                      double s, const Coefficients& c);
// Qualitative sign-pattern presets on rectangles (k in {0,1,2}).
Scenario make_typical_example(int k);

// Scenario file I/O (JSON; parameters round-trip bit-exactly).
std::string scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const std::string& text);
void save_scenario(const Scenario& sc, const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace tpob
