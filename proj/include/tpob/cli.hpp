#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tpob/blowup.hpp"
#include "tpob/free_boundary.hpp"
#include "tpob/monotonicity.hpp"
#include "tpob/solver.hpp"

namespace tpob {

struct RunManifest {
    std::string scenario_path;  // JSON file, or "builtin:<name>"
    double h = 1.0 / 64;
    std::vector<std::string> diagnostics;  // solve, weiss, acf, density,
                                           // tangency, blowup, ode,
                                           // catalog-verify, plot
    std::string out_dir = ".";
    unsigned seed = 1;
    double tol = 1e-10;
};

// Exit statuses: config/manifest problems are distinct from solver failure
// (artifacts are still written for the latter).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNotConverged = 3;

// Execute the manifest: one CSV per trace, one SVG per plot, plus a
// run_summary.txt echoing every threshold and measured constant.
int run(const RunManifest& manifest, std::ostream& log);

// Deterministic SVG 1.1 document, 800x800: region fills, dashed Gamma
// polylines, domain outline, legend.
std::string plot_field(const Field& u, const RegionDecomposition& decomp,
                       const FreeBoundaryCurve& gamma);

// Fig. 3-style family: per (delta, eps) pair, solve the counterexample
// scenario at mesh h and report c0(1/8), the K_{1/2} cap Gamma cap B_{1/4}
// non-emptiness flag and the boundary-data sup norm.
std::string run_counterexample_sweep(
    const std::vector<std::pair<double, double>>& delta_eps_pairs, double h,
    const Coefficients& coeffs);

// Shared by run() and tools: resolve "builtin:<name>" or load a JSON file.
Scenario resolve_scenario(const std::string& path);

}  // namespace tpob
