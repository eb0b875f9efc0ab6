#pragma once

#include <string>
#include <vector>

#include "tpob/catalog.hpp"
#include "tpob/grid.hpp"

namespace tpob {

enum class RescaleMode { Quadratic, Supnorm };

// Rescaled fields u(d x)/denom on a common reference half-disk grid
// (radius 1, h = 1/128), one per scale.
struct BlowupSequence {
    std::vector<double> scales;        // decreasing
    std::vector<Field> fields;
    std::vector<double> denominators;  // d^2 (quadratic) or sup (supnorm)
    RescaleMode mode = RescaleMode::Quadratic;
};

enum class GlobalTag {
    PositiveParabolic,   // +(l+/2)((x1-a)+)^2, a >= 0
    NegativeParabolic,   // -(l-/2)((x1-a)+)^2, a >= 0
    PositiveWithLinear,  // +(l+/2)x1^2 + alpha x1, alpha >= 0
    NegativeWithLinear,  // -(l-/2)x1^2 - alpha x1, alpha >= 0
    Linear,              // slope * x1
    Zero,
};

const char* global_tag_name(GlobalTag tag);

struct GlobalSolutionClass {
    GlobalTag tag = GlobalTag::Zero;
    double parameter = 0.0;  // a, alpha or slope; 0 for Zero
    double distance = 0.0;   // sup-norm distance on the reference grid
};

struct ODEBruteForceReport {
    struct Profile {
        std::vector<double> values;  // on theta_k = k pi / m, k = 0..m
        double deviation;            // sup distance to nearest analytic
        int hits;                    // starts that converged here
    };
    std::vector<Profile> profiles;  // distinct nontrivial solutions
    int n_starts = 0;
    int n_failed = 0;    // non-converged starts
    int n_rejected = 0;  // converged but outside the amplitude cap
    int grid_m = 0;
};

// The common grid all blow-ups are resampled to.
const GridSpec& reference_grid();
Scenario reference_scenario(const Coefficients& coeffs);

// u(d x)/d^2 on the reference grid. Requires d <= source half-disk radius
// (std::invalid_argument otherwise).
Field rescale_quadratic(const Field& u, double d);

// u(d x)/sup_{B_d+}|u|; the sup is written to *sup_out when non-null.
// Rejects zero sup (std::invalid_argument).
Field rescale_supnorm(const Field& u, double d, double* sup_out = nullptr);

BlowupSequence make_blowup_sequence(const Field& u,
                                    const std::vector<double>& scales,
                                    RescaleMode mode);

// Fit every taxonomy form (parameters clamped to their admissible ranges),
// return the tag with the smallest sup distance; ties go to the smaller
// fitted parameter. Rejects nonzero flat-side data (std::invalid_argument).
GlobalSolutionClass classify_limit(const Field& u_ref,
                                   const Coefficients& coeffs,
                                   double pi_tol = 1e-6);

// max over sampled rays and radius pairs (rho, sigma) of
// |u(sigma w)/sigma^2 - u(rho w)/rho^2|.
double homogeneity_defect(const Field& u,
                          const std::vector<std::pair<double, double>>& pairs);

// Brute-force the BVP phi'' + 4 phi = g(phi), phi(0) = phi(pi) = 0:
// damped fixed-point iteration with tridiagonal solves from seeded random
// starts, clustered by sup distance. Requires n_starts >= 50, grid_m >= 200.
ODEBruteForceReport ode_brute_force(const Coefficients& coeffs, int n_starts,
                                    int grid_m, unsigned seed = 1);

// max |Delta_h U| over interior nodes for the harmonic quartic
// U = x1^4 + x2^4 - 6 x1^2 x2^2 sampled on the grid's bounding rectangle.
double barrier_check(const GridSpec& grid);

// CSV exports.
std::string blowup_to_csv(
    const BlowupSequence& seq,
    const std::vector<GlobalSolutionClass>& classes);
std::string ode_report_to_csv(const ODEBruteForceReport& report,
                              const Coefficients& coeffs);

}  // namespace tpob
