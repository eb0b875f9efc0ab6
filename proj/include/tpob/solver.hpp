#pragma once

#include <utility>
#include <vector>

#include "tpob/catalog.hpp"
#include "tpob/grid.hpp"

namespace tpob {

// Sign-selector source term g(u) = lambda_+ chi{u>0} - lambda_- chi{u<0},
// with g(0) = 0.
struct SourceSelector {
    Coefficients coeffs;
    double operator()(double u) const {
        if (u > 0.0) return coeffs.lambda_plus;
        if (u < 0.0) return -coeffs.lambda_minus;
        return 0.0;
    }
};

struct SolverConfig {
    double tol = 1e-10;     // max pointwise update for convergence
    int max_sweeps = 200000;
    double relaxation = 1.0;  // in [1, 2)
    enum class Order { Lexicographic, RedBlack } order = Order::Lexicographic;
    // Coarse-to-fine continuation depth (0 = solve directly on the grid).
    int continuation_levels = 3;
    bool record_energy = true;
};

struct SolveReport {
    int sweeps_used = 0;
    double final_update = 0.0;
    double final_residual = 0.0;
    std::vector<double> energy_trace;  // finest level, per sweep
    bool converged = true;
};

// Discrete energy J(u): cell-wise midpoint quadrature of
// |grad u|^2 + 2 lambda_+ u^+ + 2 lambda_- u^-.
double energy(const Field& f, const Coefficients& coeffs);

// Edge-based discrete energy, the exact objective of the Gauss-Seidel
// prox sweep (used for the per-sweep energy trace).
double discrete_energy(const Field& f, const Coefficients& coeffs);

// Unique u solving 4u + h^2 g(u) = S (soft threshold of the stencil sum).
double pointwise_prox(double S, double h, const Coefficients& coeffs);

// Minimize J over fields with scenario boundary data.
std::pair<Field, SolveReport> solve(const Scenario& sc, const GridSpec& grid,
                                    const SolverConfig& cfg = {});

// max over interior nodes with |u| > dead_band of |Delta_h u - g(u)|.
double residual(const Field& f, const Coefficients& coeffs, double dead_band);

// Grid covering the shape's bounding box with spacing h, aligned so that
// the box corners are nodes.
GridSpec grid_for_shape(const Shape& shape, double h);

}  // namespace tpob
