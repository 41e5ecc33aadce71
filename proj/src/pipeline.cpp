#include "sph/pipeline.hpp"

#include <cmath>
#include <limits>

#include "sph/errors.hpp"
#include "sph/measures.hpp"

namespace sph {

namespace {

double norm2(const double* x, int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += x[k] * x[k];
    return s;
}

// Half-width m h of a box that contains [-r, r] plus one layer, so 0 is a lattice node.
double aligned_half_width(double r, double h) { return (std::ceil(r / h) + 1.0) * h; }

}  // namespace

double ProblemFamily::evaluate(const ScalarField& u, const PointOrInfinity& x) const {
    if (x.dim() != dim()) throw DimensionMismatch("evaluation point has the wrong dimension");
    const auto y = to_grid(x);
    if (!y) throw InvalidInput("point has no image on the grid");
    return u.at(*y);
}

double ProblemFamily::distance_to_infinity(const NodePoint& q) const {
    return q.infinity ? 0.0 : std::numeric_limits<double>::infinity();
}

BoundedFamily::BoundedFamily(Domain dom, double p, double h, double margin)
    : dom_(std::move(dom)), p_(p), h_(h) {
    if (!dom_.bounded()) throw InvalidInput("bounded family needs a bounded domain");
    if (!(h > 0.0)) throw InvalidInput("grid spacing must be positive");
    box_ = dom_.bbox();
    for (int k = 0; k < dom_.dim(); ++k) {
        box_.lo[k] -= margin + 2.0 * h;
        box_.hi[k] += margin + 2.0 * h;
    }
}

GridProblem BoundedFamily::build(const BoundaryValue& f) const {
    const int n = dim();
    RegionSpec spec{box_.lo, box_.hi, h_, {}};
    auto inside = [&](const double* x) { return dom_.contains_grid(std::span<const double>(x, n), 0.5 * h_); };
    auto data = [&](const double* x) { return f(NodePoint{x, x, false}); };
    return make_problem(spec, p_, inside, data);
}

std::optional<Vec> BoundedFamily::to_grid(const PointOrInfinity& x) const {
    if (x.is_infinity()) return std::nullopt;
    return x.coords();
}

std::optional<Vec> BoundedFamily::from_grid(std::span<const double> y) const { return Vec(y.begin(), y.end()); }

PipelineFamily::PipelineFamily(Domain dom, double p, PipelineOptions opt)
    : dom_(std::move(dom)), p_(p), opt_(std::move(opt)) {
    const int n = dom_.dim();
    if (n < 2 || n > 3) throw InvalidInput("grid problems are implemented for n = 2, 3");
    if (!(p > 1.0)) throw InvalidInput("p must exceed 1");
    if (!(opt_.h > 0.0)) throw InvalidInput("grid spacing must be positive");
    if (!(p > 0.5 * n))
        throw NotLocallyIntegrable("the transported weight is not locally integrable for p <= n/2");
    if (opt_.transform == TransformKind::inversion) {
        if (opt_.center.empty()) opt_.center.assign(n, 0.0);
        require_same_dim(opt_.center.size(), static_cast<std::size_t>(n), "inversion center");
        const double d0 = dom_.dist_lower_bound(opt_.center);
        if (!(d0 > 0.0)) throw HypothesisViolation("inversion center must lie outside the closure of the domain");
        image_radius_ = 1.0 / d0;
    } else {
        if (opt_.base.empty()) opt_.base.assign(n, 0.0);
        require_same_dim(opt_.base.size(), static_cast<std::size_t>(n), "base point");
        if (!(opt_.truncation > 4.0 * opt_.h)) throw InvalidInput("truncation radius too small for the grid");
    }
    infinity_active_ = opt_.force_infinity_active.value_or(p < n);
}

double PipelineFamily::distance_to_infinity(const NodePoint& q) const {
    if (q.infinity) return 0.0;
    const int n = dim();
    if (opt_.transform == TransformKind::inversion) return std::sqrt(norm2(q.y, n));
    const double r = dist(std::span<const double>(q.x, n), opt_.base);
    return std::max(0.0, 1.0 / (1.0 + r) - 1.0 / (1.0 + opt_.truncation));
}

std::optional<Vec> PipelineFamily::to_grid(const PointOrInfinity& x) const {
    const int n = dim();
    if (opt_.transform == TransformKind::inversion) {
        if (x.is_infinity()) return Vec(n, 0.0);
        Vec y = sub(x.coords(), opt_.center);
        const double r2 = norm2(y.data(), n);
        if (r2 == 0.0) return std::nullopt;
        for (double& v : y) v /= r2;
        return y;
    }
    if (x.is_infinity()) {
        Vec y = opt_.base;
        y[0] += opt_.truncation;
        return y;
    }
    return x.coords();
}

std::optional<Vec> PipelineFamily::from_grid(std::span<const double> y) const {
    const int n = dim();
    if (opt_.transform == TransformKind::inversion) {
        const double r2 = norm2(y.data(), n);
        if (r2 == 0.0) return std::nullopt;
        Vec x(n);
        for (int k = 0; k < n; ++k) x[k] = opt_.center[k] + y[k] / r2;
        return x;
    }
    if (dist(y, opt_.base) >= opt_.truncation) return std::nullopt;
    return Vec(y.begin(), y.end());
}

GridProblem PipelineFamily::build(const BoundaryValue& f) const {
    const int n = dim();
    const double h = opt_.h;
    if (opt_.transform == TransformKind::inversion) {
        const double L = aligned_half_width(image_radius_, h);
        RegionSpec spec{Vec(n, -L), Vec(n, L), h, {}};
        const Vec& c = opt_.center;
        const double tiny = 1e-9 * h;
        auto inside = [&](const double* y) {
            const double r2 = norm2(y, n);
            if (r2 <= tiny * tiny) return !infinity_active_;
            double x[3];
            for (int k = 0; k < n; ++k) x[k] = c[k] + y[k] / r2;
            return dom_.contains_grid(std::span<const double>(x, n), 0.5 * h / r2);
        };
        auto data = [&](const double* y) {
            const double r2 = norm2(y, n);
            if (r2 <= tiny * tiny) return infinity_active_ ? f(NodePoint{nullptr, y, true}) : 0.0;
            double x[3];
            for (int k = 0; k < n; ++k) x[k] = c[k] + y[k] / r2;
            return f(NodePoint{x, y, false});
        };
        const double alpha = 2.0 * (p_ - n);
        CellWeightFn weight;
        if (alpha != 0.0) {
            const Vec origin(n, 0.0);
            weight = [n, alpha, origin](const double* corner, double hh) {
                auto w = [n, alpha](const double* y) { return std::pow(norm2(y, n), 0.5 * alpha); };
                return cell_average(n, w, corner, hh, 3, alpha < 0.0 ? origin.data() : nullptr);
            };
        }
        GridProblem P = make_problem(spec, p_, inside, data, weight);
        P.infinity_node = P.geom.nearest(Vec(n, 0.0));
        P.infinity_node_active = P.kind[P.infinity_node] == NodeKind::dirichlet;
        return P;
    }
    const Vec& a = opt_.base;
    const double R = opt_.truncation;
    Vec lo(n), hi(n);
    for (int k = 0; k < n; ++k) {
        lo[k] = a[k] - aligned_half_width(R, h);
        hi[k] = a[k] + aligned_half_width(R, h);
    }
    RegionSpec spec{lo, hi, h, {}};
    if (!infinity_active_)
        spec.region = [&](const double* x) { return dist(std::span<const double>(x, n), a) < R; };
    auto inside = [&](const double* x) {
        const std::span<const double> xs(x, n);
        return dist(xs, a) < R && dom_.contains_grid(xs, 0.5 * h);
    };
    auto data = [&](const double* x) {
        if (dist(std::span<const double>(x, n), a) >= R) return f(NodePoint{nullptr, x, true});
        return f(NodePoint{x, x, false});
    };
    const SphericalizationContext ctx(a, p_);
    CellWeightFn weight = [n, ctx, p = p_](const double* corner, double hh) {
        auto w = [&](const double* x) {
            const std::span<const double> xs(x, n);
            return muhat_density(ctx, xs) * std::pow(1.0 + ctx.dist_to_base(xs), 2.0 * p);
        };
        return cell_average(n, w, corner, hh, 2);
    };
    GridProblem P = make_problem(spec, p_, inside, data, weight);
    P.infinity_node_active = infinity_active_;
    return P;
}

UnboundedSolution solve_unbounded(const Domain& dom, double p, const std::function<double(const double*)>& f,
                                  std::optional<double> value_at_infinity, const PipelineOptions& opt,
                                  const SolverOptions& solver) {
    auto family = std::make_shared<PipelineFamily>(dom, p, opt);
    if (family->infinity_node_active() && !value_at_infinity)
        throw InvalidInput("a value at infinity is required when p < n");
    const double vinf = value_at_infinity.value_or(0.0);
    GridProblem P = family->build([&](const NodePoint& q) { return q.infinity ? vinf : f(q.x); });
    UnboundedSolution out{solve_dirichlet(P, solver), family, family->infinity_node_active()};
    return out;
}

}  // namespace sph
