#include "sph/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace sph {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double power_value(double r, double alpha) {
    if (r > 0.0) return std::pow(r, alpha);
    if (alpha > 0.0) return 0.0;
    return alpha < 0.0 ? kInf : 1.0;
}
}  // namespace

WeightSpec WeightSpec::power(Vec center, double alpha) {
    if (center.size() < 2) throw InvalidInput("weight center needs dimension >= 2");
    if (!std::isfinite(alpha)) throw InvalidInput("weight exponent must be finite");
    return WeightSpec(PowerWeight{std::move(center), alpha});
}

WeightSpec WeightSpec::sphericalization(const SphericalizationContext& ctx) {
    return WeightSpec(SphericalizationDensity{ctx});
}

WeightSpec WeightSpec::inversion(double p, int n) {
    if (!(p > 0.5 * n) || !(p > 1.0))
        throw HypothesisViolation("inversion weight requires p > n/2 and p > 1");
    return WeightSpec(InversionDensity{p, n});
}

WeightSpec WeightSpec::lebesgue(int n) { return WeightSpec(LebesgueWeight{n}); }

int WeightSpec::dim() const {
    return std::visit(
        [](const auto& k) -> int {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, PowerWeight>) return static_cast<int>(k.center.size());
            else if constexpr (std::is_same_v<T, SphericalizationDensity>) return k.ctx.n();
            else return k.n;
        },
        kind_);
}

std::optional<PowerWeight> WeightSpec::as_power() const {
    if (auto* pw = std::get_if<PowerWeight>(&kind_)) return *pw;
    if (auto* inv = std::get_if<InversionDensity>(&kind_))
        return PowerWeight{Vec(inv->n, 0.0), 2.0 * (inv->p - inv->n)};
    if (auto* leb = std::get_if<LebesgueWeight>(&kind_)) return PowerWeight{Vec(leb->n, 0.0), 0.0};
    return std::nullopt;
}

double WeightSpec::evaluate(std::span<const double> x) const {
    require_same_dim(x.size(), static_cast<std::size_t>(dim()), "weight");
    if (auto* s = std::get_if<SphericalizationDensity>(&kind_)) return muhat_density(s->ctx, x);
    const PowerWeight pw = *as_power();
    return power_value(dist(x, pw.center), pw.alpha);
}

bool WeightSpec::is_singular(std::span<const double> x) const {
    if (std::holds_alternative<SphericalizationDensity>(kind_)) return false;
    const PowerWeight pw = *as_power();
    return pw.alpha != 0.0 && dist(x, pw.center) == 0.0;
}

std::string WeightSpec::describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, PowerWeight>) os << "power(alpha=" << k.alpha << ")";
            else if constexpr (std::is_same_v<T, SphericalizationDensity>)
                os << "sphericalization(p=" << k.ctx.p() << ")";
            else if constexpr (std::is_same_v<T, InversionDensity>)
                os << "inversion(p=" << k.p << ",n=" << k.n << ")";
            else os << "lebesgue";
        },
        kind_);
    return os.str();
}

double mu_a_density(const SphericalizationContext& ctx, std::span<const double> x) {
    const double m = unit_ball_volume(ctx.n()) * std::pow(1.0 + ctx.dist_to_base(x), ctx.n());
    return 1.0 / (m * m);
}

double muhat_density(const SphericalizationContext& ctx, std::span<const double> x) {
    return std::pow(1.0 + ctx.dist_to_base(x), -2.0 * ctx.p());
}

double mu_a_total_mass(const SphericalizationContext& ctx) {
    const int n = ctx.n();
    const double vn = unit_ball_volume(n);
    return radial_integral(
        n, [&](double t) { return std::pow(vn * std::pow(1.0 + t, n), -2.0); }, 0.0, kInf);
}

double mu_a_mass_bound(int n) { return 2.0 / unit_ball_volume(n); }

BallSample make_ball_sample(const Vec& center, double r, int nodes_per_ball) {
    return {PointOrInfinity(center), r, ball_rule(center, r, nodes_per_ball)};
}

ApQuotient ap_quotient(const WeightSpec& w, double p, const BallSample& ball, const WeightSpec& base) {
    if (!(p > 1.0)) throw InvalidInput("A_p quotient needs p > 1");
    std::vector<double> m, a, b;
    std::size_t skipped = 0;
    for (const auto& q : ball.nodes) {
        if (w.is_singular(q.x)) {
            ++skipped;
            continue;
        }
        const double wx = w.evaluate(q.x);
        const double mass = q.w * base.evaluate(q.x);
        m.push_back(mass);
        a.push_back(mass * wx);
        b.push_back(mass * std::pow(wx, 1.0 / (1.0 - p)));
    }
    if (m.empty()) throw InvalidInput("every quadrature node hit the weight singularity");
    const double M = pairwise_sum(m);
    return {(pairwise_sum(a) / M) * std::pow(pairwise_sum(b) / M, p - 1.0), skipped};
}

double centered_power_average(int n, double beta, double r) {
    if (beta <= -n) return kInf;
    return n / (n + beta) * std::pow(r, beta);
}

double offcenter_power_average(int n, double beta, double rho, double r) {
    if (n != 2 && n != 3) throw InvalidInput("off-center power averages need n = 2 or 3");
    if (!(r > 0.0) || !(rho >= 0.0)) throw InvalidInput("invalid ball for power average");
    if (rho == 0.0) return centered_power_average(n, beta, r);
    const bool inside = rho < r;
    if (inside && beta <= -n) return kInf;
    const double e = beta + n;
    // Ray from 0 at angle phi to z meets the ball for s in [s-, s+].
    auto radial = [&](double phi) {
        const double c = rho * std::cos(phi), q = r * r - std::pow(rho * std::sin(phi), 2);
        const double root = std::sqrt(std::max(0.0, q));
        const double hi = c + root, lo = inside ? 0.0 : std::max(0.0, c - root);
        if (e == 0.0) return std::log(hi / lo);
        return (std::pow(hi, e) - (inside ? 0.0 : std::pow(lo, e))) / e;
    };
    const double top = inside ? std::numbers::pi : std::asin(std::min(1.0, r / rho));
    const double total = n == 2 ? 2.0 * integrate(radial, 0.0, top)
                                : 2.0 * std::numbers::pi *
                                      integrate([&](double phi) { return radial(phi) * std::sin(phi); }, 0.0, top);
    return total / (unit_ball_volume(n) * std::pow(r, n));
}

std::string to_string(ApVerdict v) {
    switch (v) {
        case ApVerdict::bounded: return "bounded";
        case ApVerdict::diverging: return "diverging";
        default: return "inconclusive";
    }
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t m = x.size();
    if (m < 2 || y.size() != m) throw InvalidInput("slope fit needs two or more matching samples");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

namespace {

double a1_quotient(const WeightSpec& w, const BallSample& ball) {
    std::vector<double> m, a;
    double lo = kInf;
    for (const auto& q : ball.nodes) {
        if (w.is_singular(q.x)) continue;
        const double wx = w.evaluate(q.x);
        m.push_back(q.w);
        a.push_back(q.w * wx);
        lo = std::min(lo, wx);
    }
    return pairwise_sum(a) / pairwise_sum(m) / lo;
}

// Exact quotient on B(c, r) for the power weight |x - c|^alpha; independent of r.
double centered_power_quotient(int n, double alpha, double p) {
    if (p == 1.0) return alpha > 0.0 ? kInf : centered_power_average(n, alpha, 1.0);
    const double beta = alpha / (1.0 - p);
    return centered_power_average(n, alpha, 1.0) *
           std::pow(centered_power_average(n, beta, 1.0), p - 1.0);
}

Vec random_direction(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> N(0.0, 1.0);
    Vec d(n);
    double s = 0.0;
    do {
        s = 0.0;
        for (auto& c : d) {
            c = N(rng);
            s += c * c;
        }
    } while (s < 1e-12);
    for (auto& c : d) c /= std::sqrt(s);
    return d;
}

}  // namespace

ApReport check_ap(const WeightSpec& w, double p, const BallSamplerConfig& cfg) {
    if (!(p >= 1.0)) throw InvalidInput("A_p check needs p >= 1");
    if (!(cfg.radius_min > 0.0) || !(cfg.radius_max > cfg.radius_min) || cfg.balls_per_decade < 1)
        throw InvalidInput("invalid ball sampler radius range");
    const int n = w.dim();
    const auto pw = w.as_power();
    if (pw && pw->alpha <= -static_cast<double>(n))
        throw NotLocallyIntegrable("power weight exponent alpha <= -n is not locally integrable");
    const Vec center = pw ? pw->center : std::get<SphericalizationDensity>(w.kind()).ctx.base();
    const WeightSpec leb = WeightSpec::lebesgue(n);

    const double decades = std::log10(cfg.radius_max / cfg.radius_min);
    const int count = std::max(2, static_cast<int>(std::lround(decades * cfg.balls_per_decade)) + 1);
    std::vector<double> radii(count);
    for (int k = 0; k < count; ++k)
        radii[k] = cfg.radius_min * std::pow(cfg.radius_max / cfg.radius_min, double(k) / (count - 1));

    auto quotient = [&](const Vec& z, double r) {
        if (pw && (n == 2 || n == 3)) {
            const double rho = norm(sub(z, pw->center));
            const double avg = offcenter_power_average(n, pw->alpha, rho, r);
            if (p > 1.0) return avg * std::pow(offcenter_power_average(n, pw->alpha / (1.0 - p), rho, r), p - 1.0);
            const double far = rho + r, nearest = std::max(0.0, rho - r);
            const double lo = pw->alpha <= 0.0 ? std::pow(far, pw->alpha) : std::pow(nearest, pw->alpha);
            return lo > 0.0 ? avg / lo : kInf;
        }
        const BallSample ball = make_ball_sample(z, r, cfg.nodes_per_ball);
        return p == 1.0 ? a1_quotient(w, ball) : ap_quotient(w, p, ball, leb).value;
    };

    ApReport rep{p, w, {}, {}, {}, 0.0, 0.0, 0.0, ApVerdict::inconclusive, cfg};
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> near(0.1, 2.0), far(2.5, 20.0);
    std::vector<double> logr, logq;
    bool finite = true;
    for (double r : radii) {
        const double qc = pw ? centered_power_quotient(n, pw->alpha, p) : quotient(center, r);
        rep.radii.push_back(r);
        rep.ball_types.push_back(1);
        rep.quotients.push_back(qc);
        if (std::isfinite(qc)) {
            logr.push_back(std::log(r));
            logq.push_back(std::log(qc));
        } else {
            finite = false;
        }
        for (int type : {2, 3}) {
            const Vec dir = random_direction(rng, n);
            const double rho = r * (type == 2 ? near(rng) : far(rng));
            const Vec z = axpy(rho, dir, center);
            const double q = quotient(z, r);
            rep.radii.push_back(r);
            rep.ball_types.push_back(type);
            rep.quotients.push_back(q);
            if (!std::isfinite(q)) finite = false;
        }
    }
    rep.max_quotient = *std::max_element(rep.quotients.begin(), rep.quotients.end());
    rep.prediction = pw ? centered_power_quotient(n, pw->alpha, p) : rep.quotients.front();
    rep.center_slope = logr.size() >= 2 ? least_squares_slope(logr, logq) : 0.0;
    if (!finite || !std::isfinite(rep.prediction) || std::abs(rep.center_slope) > cfg.slope_tol)
        rep.verdict = ApVerdict::diverging;
    else {
        // Sup over the smaller and larger half of the radii must agree up to bound_factor.
        const double split = std::sqrt(cfg.radius_min * cfg.radius_max);
        double small = 0.0, large = 0.0;
        for (std::size_t i = 0; i < rep.quotients.size(); ++i) {
            double& sup = rep.radii[i] < split ? small : large;
            sup = std::max(sup, rep.quotients[i]);
        }
        if (small <= cfg.bound_factor * large && large <= cfg.bound_factor * small) rep.verdict = ApVerdict::bounded;
    }
    return rep;
}

double muhat_ball_at_infinity(const SphericalizationContext& ctx, double r) {
    if (!(r > 0.0) || r > 1.0) throw InvalidInput("radius about infinity must lie in (0, 1]");
    const int n = ctx.n();
    const double e = 2.0 * ctx.p() - n - 1.0;
    // s = 1/(1+|x-a|) maps {d_a(x, inf) < r} to s in (0, r).
    return unit_sphere_area(n) *
           integrate([&](double s) { return std::pow(s, e) * std::pow(1.0 - s, n - 1); }, 0.0, r);
}

double ball_measure_scaling_at_infinity(const SphericalizationContext& ctx,
                                        const std::vector<double>& radii) {
    if (radii.size() < 2) throw InvalidInput("need at least two radii");
    const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
    if (!(*lo > 0.0) || !(*hi < 0.25)) throw InvalidInput("radii must lie in (0, 1/4)");
    if (*hi / *lo < 100.0 * (1.0 - 1e-12)) throw InvalidInput("radii must span at least two decades");
    std::vector<double> x, y;
    for (double r : radii) {
        x.push_back(std::log(r));
        y.push_back(std::log(muhat_ball_at_infinity(ctx, r)));
    }
    return least_squares_slope(x, y);
}

bool infinity_has_zero_capacity(double p, int Q) {
    if (Q < 2 || !(p > 1.0) || !(p > 0.5 * Q))
        throw HypothesisViolation("(p, Q) must satisfy p > 1 and p > Q/2");
    return p >= Q;
}

}  // namespace sph
