#pragma once

#include <functional>

#include "sph/grid.hpp"
#include "sph/solver.hpp"

namespace sph {

/// Radial p-harmonic function in r0 < |x| < r1 of R^n equal to 0 at r0 and 1 at r1.
double radial_pharmonic(int n, double p, double r, double r0 = 1.0, double r1 = 2.0);

/// Closed-form p-capacity of the condenser (closed B(0, r0), B(0, r1)) in R^n.
double annulus_capacity(int n, double p, double r0, double r1);

/// Annulus r0 < |x| < r1 with data 0 inside and 1 outside. With `symmetric` the grid
/// covers the coordinate orthant x_k >= 0 only, with natural conditions on its faces.
GridProblem annulus_problem(int n, double p, double h, double r0 = 1.0, double r1 = 2.0, bool symmetric = true);

/// max |u - radial| over interior nodes of a solved annulus problem.
double radial_sup_error(const ScalarField& u, double p, double r0 = 1.0, double r1 = 2.0);

struct Condenser {
    int n = 2;
    std::function<bool(const double*)> inner;  // closed set E
    double window_radius = 1.0;                 // open window B(0, R)
    /// Solve on the orthant x_k >= 0 and multiply by 2^n; E must be symmetric.
    bool symmetric = false;
};

struct CapacityResult {
    double capacity = 0.0;
    double symmetry_factor = 1.0;
    SolveReport report;
};

/// Minimal discrete p-energy of fields equal to 1 on the E-nodes and 0 outside the window.
CapacityResult variational_capacity(const Condenser& c, double p, double h, const SolverOptions& opt = {});

}  // namespace sph
