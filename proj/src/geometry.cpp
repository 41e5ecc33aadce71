#include "sph/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace sph {

SphericalizationContext::SphericalizationContext(Vec base_point, double p)
    : a_(std::move(base_point)), p_(p) {
    const int n = static_cast<int>(a_.size());
    if (n < 2) throw HypothesisViolation("dimension must be at least 2");
    for (double c : a_)
        if (!std::isfinite(c)) throw InvalidInput("base point must be finite");
    if (!(p > 1.0)) throw HypothesisViolation("exponent p must exceed 1");
    if (!(p > 0.5 * n))
        throw HypothesisViolation("p = " + std::to_string(p) + " violates p > n/2 for n = " +
                                  std::to_string(n));
}

double SphericalizationContext::poincare_exponent() const {
    const double Q = n();
    return p_ <= Q ? p_ : p_ * Q / (2.0 * p_ - Q);
}

double SphericalizationContext::dist_to_base(std::span<const double> x) const {
    require_same_dim(x.size(), a_.size(), "dist_to_base");
    return dist(x, a_);
}

namespace {
void check_dims(const SphericalizationContext& ctx, const PointOrInfinity& x) {
    require_same_dim(static_cast<std::size_t>(x.dim()), static_cast<std::size_t>(ctx.n()),
                     "sphericalization");
}
}  // namespace

double d_a(const SphericalizationContext& ctx, const PointOrInfinity& x, const PointOrInfinity& y) {
    check_dims(ctx, x);
    check_dims(ctx, y);
    if (x.is_infinity() && y.is_infinity()) return 0.0;
    if (y.is_infinity()) return 1.0 / (1.0 + ctx.dist_to_base(x.coords()));
    if (x.is_infinity()) return 1.0 / (1.0 + ctx.dist_to_base(y.coords()));
    const double dx = ctx.dist_to_base(x.coords());
    const double dy = ctx.dist_to_base(y.coords());
    return dist(x.coords(), y.coords()) / ((1.0 + dx) * (1.0 + dy));
}

Interval dhat_bounds(const SphericalizationContext& ctx, const PointOrInfinity& x,
                     const PointOrInfinity& y) {
    const double d = d_a(ctx, x, y);
    return {0.25 * d, d};
}

std::vector<std::vector<double>> dhat_chain_matrix(const SphericalizationContext& ctx,
                                                   const std::vector<PointOrInfinity>& nodes) {
    const std::size_t m = nodes.size();
    std::vector<std::vector<double>> D(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) D[i][j] = D[j][i] = d_a(ctx, nodes[i], nodes[j]);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) D[i][j] = std::min(D[i][j], D[i][k] + D[k][j]);
    return D;
}

double dhat_chain_upper(const SphericalizationContext& ctx, const PointOrInfinity& x,
                        const PointOrInfinity& y, const std::vector<PointOrInfinity>& samples) {
    check_dims(ctx, x);
    check_dims(ctx, y);
    for (const auto& s : samples) check_dims(ctx, s);
    if (x == y) return 0.0;

    // Dijkstra on the complete graph; node 0 is x, node 1 is y.
    std::vector<const PointOrInfinity*> nodes{&x, &y};
    for (const auto& s : samples) nodes.push_back(&s);
    const std::size_t m = nodes.size();
    std::vector<double> best(m, std::numeric_limits<double>::infinity());
    std::vector<char> done(m, 0);
    best[0] = 0.0;
    for (std::size_t it = 0; it < m; ++it) {
        std::size_t u = m;
        for (std::size_t i = 0; i < m; ++i)
            if (!done[i] && (u == m || best[i] < best[u])) u = i;
        if (u == m || u == 1) break;
        done[u] = 1;
        for (std::size_t v = 0; v < m; ++v) {
            if (done[v]) continue;
            const double cand = best[u] + d_a(ctx, *nodes[u], *nodes[v]);
            if (cand < best[v]) best[v] = cand;
        }
    }
    return best[1];
}

double arc_length_density(const SphericalizationContext& ctx, const PointOrInfinity& x) {
    check_dims(ctx, x);
    if (x.is_infinity()) throw InvalidInput("arc length density is undefined at infinity");
    const double t = 1.0 + ctx.dist_to_base(x.coords());
    return 1.0 / (t * t);
}

double polyline_sphericalized_length(const SphericalizationContext& ctx,
                                     const std::vector<Vec>& vertices, int refine) {
    if (refine < 1) throw InvalidInput("refine must be positive");
    double total = 0.0;
    for (std::size_t k = 1; k < vertices.size(); ++k) {
        const Vec& p0 = vertices[k - 1];
        const Vec& p1 = vertices[k];
        require_same_dim(p0.size(), p1.size(), "polyline");
        const double len = dist(p0, p1) / refine;
        for (int s = 0; s < refine; ++s) {
            const double t = (s + 0.5) / refine;
            Vec mid(p0.size());
            for (std::size_t i = 0; i < p0.size(); ++i) mid[i] = p0[i] + t * (p1[i] - p0[i]);
            total += len * arc_length_density(ctx, PointOrInfinity(std::move(mid)));
        }
    }
    return total;
}

}  // namespace sph
