#pragma once

#include <string>
#include <vector>

#include "tpob/catalog.hpp"
#include "tpob/grid.hpp"

namespace tpob {

// Sampled map r -> functional value.
struct RadialTrace {
    struct Entry {
        double r;
        double value;
    };
    std::vector<Entry> entries;
    std::string functional;  // "acf", "weiss", ...
    std::string field_name;
    int quadrature_samples = 0;  // surface samples (weiss) or 0

    void validate(double h, double domain_radius) const;
};

struct MonotonicityReport {
    bool is_monotone = false;
    double worst_violation = 0.0;  // max negative increment, >= 0
    bool is_constant = false;
};

// phi(r) = r^-4 (int_{B_r} |grad h1|^2)(int_{B_r} |grad h2|^2), n = 2.
// Balls are centered at the origin; fields are extended by zero outside
// their masks. Cells cut by the circle are weighted by the exact covered
// area fraction.
// Preconditions checked: h1, h2 >= 0; h1 * h2 = 0 nodewise (within
// disjoint_tol); both vanish at the origin. Violations throw
// std::invalid_argument naming the offending node.
RadialTrace acf_phi(const Field& h1, const Field& h2,
                    const std::vector<double>& radii,
                    double disjoint_tol = 1e-9);

// Weiss functional in n = 2:
//   Phi(r) = r^-4 int_{B_r+} (|grad u|^2 + 2 l+ u^+ + 2 l- u^-)
//          - r^-5 int_{dB_r+} 2 u^2,
// for fields on a half-disk with zero data on the flat side. The volume
// term uses cut-cell quadrature, the surface term a trapezoid rule with
// surface_samples points and bilinear interpolation.
// Nonzero flat-side data above pi_tol throws std::invalid_argument.
RadialTrace weiss_phi(const Field& u, const Coefficients& coeffs,
                      const std::vector<double>& radii,
                      int surface_samples = 256, double pi_tol = 1e-8);

// Monotone iff every increment >= -slack; constant iff max-min <= slack.
// Requires >= 3 entries (std::invalid_argument otherwise).
MonotonicityReport check_monotone(const RadialTrace& trace, double slack);

// Tangential derivative D_{e2} u by central differences, split into
// positive/negative parts and extended by zero across the flat side
// (helper for the ACF functional on solved half-disk fields).
std::pair<Field, Field> tangential_derivative_parts(const Field& u);

// CSV with a header row, then full-precision r,value rows.
std::string trace_to_csv(const RadialTrace& trace);

}  // namespace tpob
