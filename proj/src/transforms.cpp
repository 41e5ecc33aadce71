#include "sph/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace sph {

const char* to_string(Frame f) {
    switch (f) {
        case Frame::original: return "original";
        case Frame::sphericalized: return "sphericalized";
        default: return "inverted";
    }
}

namespace {
void require_frame(const GradientField& g, Frame f) {
    if (g.frame != f)
        throw InvalidInput(std::string("gradient field is in frame ") + to_string(g.frame) +
                           ", expected " + to_string(f));
}
}  // namespace

std::vector<FieldNode> box_nodes(const Vec& lo, const Vec& hi, double h) {
    require_same_dim(lo.size(), hi.size(), "box_nodes");
    if (!(h > 0.0)) throw InvalidInput("spacing must be positive");
    const std::size_t n = lo.size();
    std::vector<long> cnt(n);
    double vol = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        cnt[i] = std::max(1L, std::lround((hi[i] - lo[i]) / h));
        vol *= (hi[i] - lo[i]) / cnt[i];
    }
    std::vector<FieldNode> out;
    std::vector<long> idx(n, 0);
    while (true) {
        Vec x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = lo[i] + (idx[i] + 0.5) * (hi[i] - lo[i]) / cnt[i];
        out.push_back({std::move(x), vol, 0.0});
        std::size_t k = 0;
        while (k < n && ++idx[k] == cnt[k]) idx[k++] = 0;
        if (k == n) break;
    }
    return out;
}

GradientField sphericalize_gradient(const SphericalizationContext& ctx, const GradientField& g) {
    require_frame(g, Frame::original);
    GradientField out{Frame::sphericalized, g.nodes};
    for (auto& nd : out.nodes) {
        const double t = 1.0 + ctx.dist_to_base(nd.x);
        nd.g *= t * t;
    }
    return out;
}

GradientField unsphericalize_gradient(const SphericalizationContext& ctx, const GradientField& g) {
    require_frame(g, Frame::sphericalized);
    GradientField out{Frame::original, g.nodes};
    for (auto& nd : out.nodes) {
        const double t = 1.0 + ctx.dist_to_base(nd.x);
        nd.g /= t * t;
    }
    return out;
}

double energy(const GradientField& g, const WeightSpec& measure, double p) {
    PairwiseAccumulator acc;
    for (const auto& nd : g.nodes) {
        if (nd.g < 0.0) throw InvalidInput("upper gradient samples must be nonnegative");
        if (nd.g == 0.0) continue;
        acc.add(std::pow(nd.g, p) * measure.evaluate(nd.x) * nd.volume);
    }
    return acc.total();
}

double relative_gap(double a, double b) {
    const double m = std::max(std::abs(a), std::abs(b));
    return m == 0.0 ? 0.0 : std::abs(a - b) / m;
}

EnergyComparison energy_equality_check(const SphericalizationContext& ctx, const GradientField& g,
                                       double p) {
    require_frame(g, Frame::original);
    const double e0 = energy(g, WeightSpec::lebesgue(ctx.n()), p);
    const double e1 = energy(sphericalize_gradient(ctx, g), WeightSpec::sphericalization(ctx), p);
    return {e0, e1, relative_gap(e0, e1)};
}

bool admissibility_check(double p, int n) { return p > 0.5 * n; }

InversionMap::InversionMap(double p, int n, Vec center) : p_(p), n_(n), c_(std::move(center)) {
    if (n < 2) throw HypothesisViolation("inversion needs n >= 2");
    if (c_.empty()) c_.assign(n, 0.0);
    require_same_dim(c_.size(), static_cast<std::size_t>(n), "inversion center");
}

Vec InversionMap::forward(std::span<const double> x) const {
    Vec y = sub(x, c_);
    const double r2 = dot(y, y);
    if (r2 == 0.0) throw InvalidInput("inversion center maps to infinity");
    for (auto& v : y) v /= r2;
    return y;
}

Vec InversionMap::inverse(std::span<const double> y) const {
    require_same_dim(y.size(), c_.size(), "inversion");
    const double r2 = dot(y, y);
    if (r2 == 0.0) throw InvalidInput("origin of the image maps to infinity");
    Vec x(c_);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i] / r2;
    return x;
}

PointOrInfinity InversionMap::forward_point(const PointOrInfinity& x) const {
    require_same_dim(static_cast<std::size_t>(x.dim()), c_.size(), "inversion");
    if (x.is_infinity()) return PointOrInfinity(Vec(n_, 0.0));
    if (dist(x.coords(), c_) == 0.0) return PointOrInfinity::infinity(n_);
    return PointOrInfinity(forward(std::span<const double>(x.coords())));
}

PointOrInfinity InversionMap::inverse_point(const PointOrInfinity& y) const {
    require_same_dim(static_cast<std::size_t>(y.dim()), c_.size(), "inversion");
    if (y.is_infinity()) return PointOrInfinity(c_);
    if (norm(y.coords()) == 0.0) return PointOrInfinity::infinity(n_);
    return PointOrInfinity(inverse(std::span<const double>(y.coords())));
}

WeightSpec InversionMap::image_weight() const { return WeightSpec::inversion(p_, n_); }

InvertedEnergy invert_gradient_and_energy(const InversionMap& map, const GradientField& g) {
    require_frame(g, Frame::original);
    GradientField img{Frame::inverted, {}};
    img.nodes.reserve(g.nodes.size());
    for (const auto& nd : g.nodes) {
        const double r = dist(nd.x, map.center());
        if (r == 0.0 || !std::isfinite(r)) {
            if (nd.g != 0.0) throw InvalidInput("gradient must vanish at the inversion center");
            continue;
        }
        const double r2 = r * r;
        img.nodes.push_back({map.forward(std::span<const double>(nd.x)),
                             nd.volume * std::pow(r, -2.0 * map.n()), nd.g * r2});
    }
    const double e0 = energy(g, WeightSpec::lebesgue(map.n()), map.p());
    const double e1 = energy(img, map.image_weight(), map.p());
    return {std::move(img), e0, e1, relative_gap(e0, e1)};
}

EnergyComparison inversion_energy_radial(int n, double p, const std::function<double(double)>& g,
                                         double r0, double r1, double h, int order) {
    if (!(r0 > 0.0) || !(r1 > r0)) throw InvalidInput("annulus radii must satisfy 0 < r0 < r1");
    const double area = unit_sphere_area(n);
    auto panels = [&](double a, double b) { return std::max(1, static_cast<int>(std::ceil((b - a) / h))); };
    const Rule1D ro = composite_gauss(order, panels(r0, r1), r0, r1);
    std::vector<double> t0;
    for (std::size_t i = 0; i < ro.nodes.size(); ++i) {
        const double t = ro.nodes[i];
        t0.push_back(ro.weights[i] * std::pow(g(t), p) * std::pow(t, n - 1));
    }
    const double s0 = 1.0 / r1, s1 = 1.0 / r0;
    const Rule1D ri = composite_gauss(order, panels(s0, s1), s0, s1);
    std::vector<double> t1;
    for (std::size_t i = 0; i < ri.nodes.size(); ++i) {
        const double s = ri.nodes[i];
        const double gh = g(1.0 / s) / (s * s);
        t1.push_back(ri.weights[i] * std::pow(gh, p) * std::pow(s, 2.0 * (p - n)) * std::pow(s, n - 1));
    }
    const double e0 = area * pairwise_sum(t0), e1 = area * pairwise_sum(t1);
    return {e0, e1, relative_gap(e0, e1)};
}

Domain invert_domain(const InversionMap& map, const Domain& dom) {
    require_same_dim(static_cast<std::size_t>(dom.dim()), static_cast<std::size_t>(map.n()), "invert_domain");
    if (dom.contains_closure(map.center()) || !(dom.dist_lower_bound(map.center()) > 0.0))
        throw HypothesisViolation("inversion center lies in the closure of the domain");
    return dom.inverted(map.center());
}

double annulus_modulus_closed_form(int n, double p, double r, double R) {
    const double e = (1.0 - n) / (p - 1.0);
    const double I = std::abs(e + 1.0) < 1e-14 ? std::log(R / r)
                                               : (std::pow(R, e + 1.0) - std::pow(r, e + 1.0)) / (e + 1.0);
    return unit_sphere_area(n) * std::pow(I, 1.0 - p);
}

ModulusComparison modulus_invariance_check(const SphericalizationContext& ctx,
                                           const AnnulusCurveFamily& fam, double p) {
    if (!(fam.r > 0.0) || !(fam.R > fam.r)) throw InvalidInput("annulus family needs 0 < r < R");
    if (!(p > 1.0)) throw InvalidInput("modulus needs p > 1");
    const int n = ctx.n();
    const double e = (1.0 - n) / (p - 1.0);
    const double I = integrate([&](double t) { return std::pow(t, e); }, fam.r, fam.R);
    // Extremal density normalized so every radial segment has rho-length 1.
    auto rho = [&](double t) { return std::pow(t, e) / I; };
    auto rho_hat = [&](double t) { return rho(t) * (1.0 + t) * (1.0 + t); };
    const double area = unit_sphere_area(n);
    ModulusComparison out{};
    out.original =
        area * integrate([&](double t) { return std::pow(rho(t), p) * std::pow(t, n - 1); }, fam.r, fam.R);
    out.sphericalized = area * integrate(
                                   [&](double t) {
                                       return std::pow(rho_hat(t), p) * std::pow(1.0 + t, -2.0 * p) *
                                              std::pow(t, n - 1);
                                   },
                                   fam.r, fam.R);
    out.relative_gap = relative_gap(out.original, out.sphericalized);
    out.admissibility_original = integrate(rho, fam.r, fam.R);
    out.admissibility_sphericalized =
        integrate([&](double t) { return rho_hat(t) / ((1.0 + t) * (1.0 + t)); }, fam.r, fam.R);
    return out;
}

}  // namespace sph
