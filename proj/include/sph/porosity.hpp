#pragma once

#include <vector>

#include "sph/domain.hpp"

namespace sph {

struct PorosityWitness {
    int shell;  // m with 2^m <= |x - a| < 2^{m+1}
    Vec x;
    double theta;
};

struct PorosityOptions {
    std::vector<double> theta_grid{0.9, 0.75, 0.5, 0.25, 0.1, 0.05};
    int first_shell = 1;
    int witness_count = 8;
    int directions = 64;       // angular samples per shell (2-d); Fibonacci points in 3-d
    int radial_samples = 4;    // candidate radii per shell
};

struct PorosityResult {
    bool is_porous = false;
    double theta = 0.0;
    std::vector<PorosityWitness> witnesses;
    /// Per theta in the grid: whether every tested shell had a witness.
    std::vector<std::pair<double, bool>> per_theta;
};

/// Searches dyadic shells about a for balls B(x, theta |x - a|) certified disjoint from the domain.
PorosityResult porosity_at_infinity(const Domain& dom, const Vec& a, const PorosityOptions& opt);

/// Witnesses at one fixed theta, first hit per shell (empty entries omitted).
std::vector<PorosityWitness> porosity_witnesses(const Domain& dom, const Vec& a, double theta,
                                                const PorosityOptions& opt);

}  // namespace sph
