#pragma once

#include <string>
#include <vector>

#include "tpob/monotonicity.hpp"

namespace tpob {

// Interior nodes split by sign and coincidence thresholds.
struct RegionDecomposition {
    std::vector<int> omega_plus;   // u > tau_u
    std::vector<int> omega_minus;  // u < -tau_u
    std::vector<int> lambda_set;   // |u| <= tau_u and |grad u| <= tau_g
    double tau_u = 0.0;
    double tau_g = 0.0;
    std::shared_ptr<const DomainMask> mask;
};

// Zero-crossing polylines of the free boundary Gamma = d(Omega+) u d(Omega-)
// inside the open domain. Vertices closer than 2h to the fixed boundary are
// dropped, so boundaries that only hug the fixed boundary do not register.
struct FreeBoundaryCurve {
    std::vector<std::vector<Vec2>> polylines;
    double tau_u = 0.0;
    std::shared_ptr<const DomainMask> mask;

    std::vector<Vec2> all_vertices() const;
};

// (r, sigma_hat) with sigma_hat = max over Gamma vertices x with
// |x| in (r/2, r] of x1/|x2|; -inf for empty annuli.
struct TangencyProfile {
    struct Entry {
        double r;
        double sigma_hat;
    };
    std::vector<Entry> entries;
};

struct DensityTrace {
    struct Entry {
        double r;
        double ratio_plus;
        double ratio_minus;
        double ratio_lambda;
    };
    std::vector<Entry> entries;
    std::vector<double> skipped_radii;  // requested but below the 4h floor
};

RegionDecomposition decompose(const Field& u, double tau_u, double tau_g);

FreeBoundaryCurve extract_gamma(const Field& u, double tau_u);

// Node-counting area ratios over B_r(center) intersected with the domain.
// Radii <= 4h are recorded in skipped_radii instead of entries.
DensityTrace density_ratios(const RegionDecomposition& decomp,
                            const std::vector<double>& radii, Vec2 center);

TangencyProfile tangency_profile(const FreeBoundaryCurve& gamma,
                                 const std::vector<double>& radii);

// Per point: x1 > eps * |x2| (strict).
std::vector<bool> cone_test(const std::vector<Vec2>& points, double eps);

// Entries (r, sup_{B_r(center) cap domain} |u| / r^2).
RadialTrace nondegeneracy_trace(const Field& u,
                                const std::vector<double>& radii, Vec2 center);

// Entries (r, sup_{B_r+} |u - slope x1| / r^2) with slope = D_{e1}u(0)
// estimated by a one-sided second-order difference. The field must live on
// a half-disk whose flat side passes through the origin
// (std::invalid_argument otherwise).
RadialTrace growth_check(const Field& u, const std::vector<double>& radii);

// CSV exports: node class table (i,j,x1,x2,class) and polyline vertices
// (polyline,x1,x2).
std::string decomposition_to_csv(const RegionDecomposition& decomp);
std::string gamma_to_csv(const FreeBoundaryCurve& gamma);

}  // namespace tpob
