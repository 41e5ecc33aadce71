#include "sph/mazurkiewicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "sph/components.hpp"

namespace sph {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

long nearest_cell(const CellGrid& g, const Vec& x) {
    long idx = 0, stride = 1;
    for (int i = 0; i < g.n; ++i) {
        long c = static_cast<long>(std::floor((x[i] - g.origin[i]) / g.h));
        c = std::clamp(c, 0L, g.dims[i] - 1);
        idx += c * stride;
        stride *= g.dims[i];
    }
    return idx;
}

}  // namespace

double mazurkiewicz_distance(const Domain& dom, const Vec& x, const Vec& y, const MazurkiewiczOptions& opt,
                             const std::optional<SphericalizationContext>& ctx) {
    require_same_dim(x.size(), dom.dim(), "mazurkiewicz");
    require_same_dim(y.size(), dom.dim(), "mazurkiewicz");
    if (!dom.contains(x) || !dom.contains(y)) throw InvalidInput("both points must lie in the domain");
    if (ctx) require_same_dim(ctx->n(), dom.dim(), "mazurkiewicz frame");
    auto metric = [&](std::span<const double> p, std::span<const double> q) {
        return ctx ? d_a(*ctx, PointOrInfinity(Vec(p.begin(), p.end())), PointOrInfinity(Vec(q.begin(), q.end())))
                   : dist(p, q);
    };
    if (x == y) return 0.0;
    const int n = dom.dim();
    Vec lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        lo[i] = std::min(x[i], y[i]) - opt.margin;
        hi[i] = std::max(x[i], y[i]) + opt.margin;
    }
    const CellGrid g = CellGrid::covering(lo, hi, opt.h);
    const Labeling L = label_components(g, [&](const double* c) {
        return dom.contains_grid(std::span<const double>(c, n), 0.5 * opt.h);
    });
    const long sx = nearest_cell(g, x), sy = nearest_cell(g, y);
    if (L.label[sx] < 0 || L.label[sy] < 0 || L.label[sx] != L.label[sy]) return kInf;
    const int comp = L.label[sx];

    std::vector<Vec> centers{x, y, axpy(0.5, sub(y, x), x)};
    {
        std::vector<int> idx(n, 0);
        const int m = opt.centers_per_axis;
        while (true) {
            Vec z(n);
            for (int i = 0; i < n; ++i) z[i] = lo[i] + (hi[i] - lo[i]) * (idx[i] + 0.5) / m;
            centers.push_back(std::move(z));
            int k = 0;
            while (k < n && ++idx[k] == m) idx[k++] = 0;
            if (k == n) break;
        }
    }

    const long N = g.size();
    const long stride[3] = {1, g.dims[0], g.dims[0] * g.dims[1]};
    std::vector<double> key(N), len(N);
    std::vector<long> from(N);
    std::vector<double> cpos(N * n);
    for (long i = 0; i < N; ++i) g.center(i, &cpos[i * n]);
    double best = kInf;
    for (const Vec& z : centers) {
        // Bottleneck search: minimize the farthest excursion from z, then path length.
        std::fill(key.begin(), key.end(), kInf);
        std::fill(len.begin(), len.end(), kInf);
        std::fill(from.begin(), from.end(), -1);
        using Item = std::tuple<double, double, long>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        auto rad = [&](long c) { return dist(std::span<const double>(&cpos[c * n], n), z); };
        key[sx] = std::max(dist(x, z), rad(sx));
        len[sx] = 0.0;
        pq.emplace(key[sx], 0.0, sx);
        while (!pq.empty()) {
            auto [k, l, c] = pq.top();
            pq.pop();
            if (k > key[c] || (k == key[c] && l > len[c])) continue;
            if (c == sy) break;
            if (k >= best) break;
            long rem = c;
            for (int d = 0; d < n; ++d) {
                const long ci = rem % g.dims[d];
                rem /= g.dims[d];
                for (int dir : {-1, 1}) {
                    if ((dir < 0 && ci == 0) || (dir > 0 && ci == g.dims[d] - 1)) continue;
                    const long nb = c + dir * stride[d];
                    if (L.label[nb] != comp) continue;
                    const double nk = std::max(k, rad(nb)), nl = l + g.h;
                    if (nk < key[nb] || (nk == key[nb] && nl < len[nb])) {
                        key[nb] = nk;
                        len[nb] = nl;
                        from[nb] = c;
                        pq.emplace(nk, nl, nb);
                    }
                }
            }
        }
        if (from[sy] < 0 && sy != sx) continue;
        std::vector<Vec> path{x, y};
        for (long c = sy; c >= 0; c = from[c]) path.emplace_back(&cpos[c * n], &cpos[c * n] + n);
        double diam = 0.0;
        for (std::size_t i = 0; i < path.size(); ++i)
            for (std::size_t j = i + 1; j < path.size(); ++j) diam = std::max(diam, metric(path[i], path[j]));
        best = std::min(best, diam);
    }
    return best;
}

}  // namespace sph
