#pragma once

#include <utility>
#include <vector>

#include "sph/point.hpp"

namespace sph {

/// Base point, exponent and dimension of a sphericalized copy of R^n.
///
/// Construction enforces p > n/2 (n >= 2), the range in which the
/// sphericalized measure is doubling and supports a p-Poincare inequality.
class SphericalizationContext {
public:
    SphericalizationContext(Vec base_point, double p);

    const Vec& base() const { return a_; }
    double p() const { return p_; }
    int n() const { return static_cast<int>(a_.size()); }

    /// Poincare exponent q(p, Q) that the base space must support. Metadata only.
    double poincare_exponent() const;

    double dist_to_base(std::span<const double> x) const;

private:
    Vec a_;
    double p_;
};

double d_a(const SphericalizationContext& ctx, const PointOrInfinity& x, const PointOrInfinity& y);

struct Interval {
    double lo;
    double hi;
    bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
};

/// Certified enclosure [d_a/4, d_a] of the chain metric.
Interval dhat_bounds(const SphericalizationContext& ctx, const PointOrInfinity& x,
                     const PointOrInfinity& y);

/// Shortest chain x -> ... -> y through the sample points, with d_a as edge weight.
double dhat_chain_upper(const SphericalizationContext& ctx, const PointOrInfinity& x,
                        const PointOrInfinity& y, const std::vector<PointOrInfinity>& samples);

/// All-pairs chain distances over a fixed node list (Floyd-Warshall on d_a).
std::vector<std::vector<double>> dhat_chain_matrix(const SphericalizationContext& ctx,
                                                   const std::vector<PointOrInfinity>& nodes);

/// ds_hat / ds = (1 + |x - a|)^-2.
double arc_length_density(const SphericalizationContext& ctx, const PointOrInfinity& x);

/// Sphericalized length of a polyline, midpoint rule on each of `refine` subdivisions per edge.
double polyline_sphericalized_length(const SphericalizationContext& ctx,
                                     const std::vector<Vec>& vertices, int refine);

}  // namespace sph
