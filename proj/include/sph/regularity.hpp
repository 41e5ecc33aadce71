#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sph/components.hpp"
#include "sph/domain.hpp"
#include "sph/porosity.hpp"
#include "sph/solver.hpp"

namespace sph {

/// Proxy for C_p(complement) > 0 or p < Q, with Q = n for Lebesgue measure.
struct GateReport {
    bool passes = false;
    bool complement_has_interior = false;
    int max_thin_dimension = -1;
    bool p_below_Q = false;
    std::string reason;
};

GateReport om_condition_gate(const Domain& dom, double p);
/// Throws HypothesisViolation when the gate fails.
void require_om_condition(const Domain& dom, double p);

enum class RegularityVerdict { regular_p_lt_Q, regular_no_unbounded, regular_porosity, inconclusive };
std::string to_string(RegularityVerdict v);

struct RegularityOptions {
    Vec base;       // a, defaults to the origin
    double k = 2.0; // components of the domain outside B(a, k)
    ComponentOptions components{};
    PorosityOptions porosity{};
};

struct RegularityReport {
    RegularityVerdict verdict = RegularityVerdict::inconclusive;
    GateReport gate;
    std::vector<ComponentInfo> components;
    std::optional<PorosityResult> porosity;
    std::vector<std::string> evidence;
};

/// Cascade: p < Q, then no unbounded components outside B(a, k), then porosity.
RegularityReport regularity_at_infinity_verdict(const Domain& dom, double p, const RegularityOptions& opt = {});

enum class ParabolicityVerdict { parabolic_trend, non_parabolic_trend, inconclusive };
std::string to_string(ParabolicityVerdict v);

struct ParabolicityOptions {
    Vec base;
    double inner_radius = 1.0;  // u = 0 on the domain within this distance of a
    int levels = 3;             // outer radii R_j = inner_radius 2^{j+1}, j = 1..levels
    double h = 1.0 / 16;
    double slope_tol = 0.4;
    /// Solve on the orthant x_k >= a_k and scale by 2^n (domain must be symmetric).
    bool symmetric = false;
    SolverOptions solver{};
};

struct ParabolicityResult {
    std::vector<double> outer_radii;
    std::vector<double> cap_estimates;
    double slope = 0.0;  // least-squares slope of log energy against log j
    bool nonincreasing = true;
    ParabolicityVerdict verdict = ParabolicityVerdict::inconclusive;
};

/// Condenser energies between B(a, r_in) and the complement of B(a, R_j) inside the
/// domain (restricted to the component of `direction` when given).
ParabolicityResult p_parabolicity_estimate(const Domain& dom, double p, const ParabolicityOptions& opt = {},
                                           const DirectionAtInfinity* direction = nullptr);

}  // namespace sph
