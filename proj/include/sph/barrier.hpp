#pragma once

#include <string>

#include "sph/point.hpp"

namespace sph {

/// Barriers at infinity for the upper half-space {x_n > 0}, with beta = (p - n)/(p - 1):
///   subcritical (p < n):   1 - (|x - (0,...,0,-k)|/k)^beta
///   critical (p = n):      log(|x - (0,...,0,-k)|/k)
///   supercritical (p > n): |x|^beta / k
enum class BarrierFormula { subcritical, critical, supercritical };

std::string to_string(BarrierFormula f);
BarrierFormula barrier_formula_for(int n, double p);
/// Throws InvalidInput when the formula does not match the sign of p - n.
void require_consistent(BarrierFormula f, int n, double p);
double barrier_value(BarrierFormula f, int n, double p, double k, std::span<const double> x);
/// Upper bound on the barrier that tends to 0 as k grows, for fixed x.
double barrier_decay_bound(BarrierFormula f, int n, double p, double k, std::span<const double> x);

struct BarrierGrid {
    double h = 1.0 / 8;
    double extent = 4.0;  // lattice on [-L, L]^{n-1} x [0, 2L]
    double residual_tol = 2.0;
    int far_levels = 24;  // sample spheres L 4^j, j < far_levels
};

struct BarrierReport {
    BarrierFormula formula{};
    int n = 0;
    double p = 0.0;
    double k = 0.0;
    /// (a) min over interior nodes of (dE/du_i)/(flux_i) scaled by r_i/h, r_i the
    /// distance to the pole; the superminimizer sign holds up to residual_tol.
    double min_scaled_residual = 0.0;
    bool residual_ok = false;
    /// (b) boundary values on x_n = 0 and the limit inferior at infinity.
    double min_boundary_value = 0.0;
    bool boundary_ok = false;
    double liminf_at_infinity = 0.0;
    bool infinity_ok = false;
    /// (c) u_k <= decay bound at all interior nodes.
    double max_decay_excess = 0.0;
    bool decay_ok = false;
    /// Gap to 1 - ((x_n + k)/k)^beta on the x_n axis (equality there).
    double axis_gap = 0.0;
    long nodes = 0;

    bool passes() const { return residual_ok && boundary_ok && infinity_ok && decay_ok; }
};

BarrierReport barrier_check(BarrierFormula f, int n, double p, double k, const BarrierGrid& grid = {});

}  // namespace sph
