#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sph/geometry.hpp"
#include "sph/quadrature.hpp"

namespace sph {

struct PowerWeight {
    Vec center;
    double alpha;
};
struct SphericalizationDensity {
    SphericalizationContext ctx;
};
/// |y|^{2(p-n)}, the weight carried by the inverted domain.
struct InversionDensity {
    double p;
    int n;
};
struct LebesgueWeight {
    int n;
};

class WeightSpec {
public:
    using Kind = std::variant<PowerWeight, SphericalizationDensity, InversionDensity, LebesgueWeight>;

    static WeightSpec power(Vec center, double alpha);
    static WeightSpec sphericalization(const SphericalizationContext& ctx);
    /// Throws HypothesisViolation unless p > n/2.
    static WeightSpec inversion(double p, int n);
    static WeightSpec lebesgue(int n);

    const Kind& kind() const { return kind_; }
    int dim() const;
    /// Weight value; +inf or 0 at a singular point depending on the exponent sign.
    double evaluate(std::span<const double> x) const;
    bool is_singular(std::span<const double> x) const;
    /// Power-law view (center, exponent) when the weight is d(x, c)^alpha for some c.
    std::optional<PowerWeight> as_power() const;
    std::string describe() const;

private:
    explicit WeightSpec(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

double mu_a_density(const SphericalizationContext& ctx, std::span<const double> x);
double muhat_density(const SphericalizationContext& ctx, std::span<const double> x);

/// mu_a(R^n) by radial quadrature, and the bound 2 / mu(B(a, 1)).
double mu_a_total_mass(const SphericalizationContext& ctx);
double mu_a_mass_bound(int n);

struct BallSample {
    PointOrInfinity center;
    double radius;
    std::vector<QuadNode> nodes;
};

BallSample make_ball_sample(const Vec& center, double r, int nodes_per_ball);

struct ApQuotient {
    double value;
    std::size_t skipped_nodes;
};

/// (avg_B w)(avg_B w^{1/(1-p)})^{p-1} with averages against `base` on the ball's nodes.
ApQuotient ap_quotient(const WeightSpec& w, double p, const BallSample& ball, const WeightSpec& base);

/// Exact average of |x - c|^beta over B(c, r) in R^n; +inf when beta <= -n.
double centered_power_average(int n, double beta, double r);
/// Average of |x|^beta over B(z, r) with |z| = rho, n in {2, 3}; radial part in closed form
/// about the singular point, angular part adaptive. +inf when the ball meets 0 and beta <= -n.
double offcenter_power_average(int n, double beta, double rho, double r);

struct BallSamplerConfig {
    std::uint64_t seed = 1;
    double radius_min = 1e-3;
    double radius_max = 1.0;
    int balls_per_decade = 10;
    int nodes_per_ball = 64;
    double bound_factor = 10.0;
    double slope_tol = 0.05;
};

enum class ApVerdict { bounded, diverging, inconclusive };
std::string to_string(ApVerdict v);

struct ApReport {
    double p;
    WeightSpec weight;
    std::vector<double> radii;
    std::vector<int> ball_types;
    std::vector<double> quotients;
    double max_quotient;
    double prediction;
    double center_slope;
    ApVerdict verdict;
    BallSamplerConfig config;
};

/// Samples balls centered at the singular point, large off-center balls and small
/// off-center balls; A_1 variant when p == 1 (essinf estimated by the node minimum).
/// Power weights in R^2, R^3 use exact off-center averages. Bounded means a flat
/// centered quotient and sampled sups at small and large radii within bound_factor.
ApReport check_ap(const WeightSpec& w, double p, const BallSamplerConfig& cfg);

/// Least-squares slope of log muhat(B_hat(inf, r)) against log r.
double ball_measure_scaling_at_infinity(const SphericalizationContext& ctx,
                                        const std::vector<double>& radii);
/// muhat({x : d_a(x, inf) < r}).
double muhat_ball_at_infinity(const SphericalizationContext& ctx, double r);

/// True iff {inf} has zero p-capacity, i.e. p >= Q.
bool infinity_has_zero_capacity(double p, int Q);

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sph
