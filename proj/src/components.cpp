#include "sph/components.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sph {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CellGrid CellGrid::covering(const Vec& lo, const Vec& hi, double h) {
    require_same_dim(lo.size(), hi.size(), "grid box");
    const int n = static_cast<int>(lo.size());
    if (n < 2 || n > 3) throw InvalidInput("cell grids support n = 2 or 3");
    if (!(h > 0.0)) throw InvalidInput("grid spacing must be positive");
    CellGrid g;
    g.n = n;
    g.h = h;
    g.origin = lo;
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(hi[i] > lo[i]))
            throw InvalidInput("grid box must be finite and nondegenerate");
        g.dims[i] = std::max(1L, static_cast<long>(std::ceil((hi[i] - lo[i]) / h)));
    }
    if (static_cast<double>(g.dims[0]) * g.dims[1] * g.dims[2] > 4e8)
        throw InvalidInput("analysis grid too large; increase h or reduce R_max");
    return g;
}

void CellGrid::center(long idx, double* x) const {
    for (int i = 0; i < n; ++i) {
        const long c = idx % dims[i];
        idx /= dims[i];
        x[i] = origin[i] + (c + 0.5) * h;
    }
}

Vec CellGrid::center(long idx) const {
    Vec x(n);
    center(idx, x.data());
    return x;
}

Labeling label_components(const CellGrid& g, const std::function<bool(const double*)>& inside) {
    Labeling L{g, std::vector<std::int32_t>(g.size(), -1), 0, {}, {}};
    const long N = g.size();
    std::vector<char> in(N, 0);
    double x[3] = {0, 0, 0};
    for (long i = 0; i < N; ++i) {
        g.center(i, x);
        in[i] = inside(x) ? 1 : 0;
    }
    const long stride[3] = {1, g.dims[0], g.dims[0] * g.dims[1]};
    std::vector<long> stack;
    for (long s = 0; s < N; ++s) {
        if (!in[s] || L.label[s] >= 0) continue;
        const int id = L.count++;
        L.seed.push_back(s);
        long cnt = 0;
        L.label[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            const long c = stack.back();
            stack.pop_back();
            ++cnt;
            long rem = c;
            for (int d = 0; d < g.n; ++d) {
                const long ci = rem % g.dims[d];
                rem /= g.dims[d];
                for (int dir : {-1, 1}) {
                    if ((dir < 0 && ci == 0) || (dir > 0 && ci == g.dims[d] - 1)) continue;
                    const long nb = c + dir * stride[d];
                    if (in[nb] && L.label[nb] < 0) {
                        L.label[nb] = id;
                        stack.push_back(nb);
                    }
                }
            }
        }
        L.cells.push_back(cnt);
    }
    return L;
}

void check_resolution(const Domain& dom, double h) {
    if (auto f = dom.feature_size(); f && h > 0.5 * *f * (1.0 + 1e-12))
        throw InvalidInput("resolution too coarse: h = " + std::to_string(h) + " exceeds half the feature size " +
                           std::to_string(*f));
}

namespace {

struct OutsideBall {
    Labeling L;
    std::vector<ComponentInfo> info;
};

OutsideBall outside_ball(const Domain& dom, const Vec& a, double k, const ComponentOptions& opt) {
    require_same_dim(a.size(), dom.dim(), "base point");
    check_resolution(dom, opt.h);
    const int n = dom.dim();
    const double tube = opt.tube < 0.0 ? 0.5 * opt.h : opt.tube;
    Box b = dom.bbox();
    for (int i = 0; i < n; ++i) {
        b.lo[i] = std::max(b.lo[i], a[i] - opt.R_max);
        b.hi[i] = std::min(b.hi[i], a[i] + opt.R_max);
    }
    const CellGrid g = CellGrid::covering(b.lo, b.hi, opt.h);
    auto inside = [&](const double* x) {
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) r2 += (x[i] - a[i]) * (x[i] - a[i]);
        if (r2 <= k * k || r2 >= opt.R_max * opt.R_max) return false;
        return dom.contains_grid(std::span<const double>(x, n), tube);
    };
    OutsideBall out{label_components(g, inside), {}};
    std::vector<double> rmax(out.L.count, 0.0);
    double x[3];
    for (long i = 0; i < g.size(); ++i) {
        const int id = out.L.label[i];
        if (id < 0) continue;
        g.center(i, x);
        double r2 = 0.0;
        for (int d = 0; d < n; ++d) r2 += (x[d] - a[d]) * (x[d] - a[d]);
        rmax[id] = std::max(rmax[id], std::sqrt(r2));
    }
    const double touch = opt.R_max - std::sqrt(double(n)) * opt.h;
    for (int id = 0; id < out.L.count; ++id)
        out.info.push_back({id, rmax[id] < touch, g.center(out.L.seed[id]), out.L.cells[id], rmax[id]});
    return out;
}

}  // namespace

std::vector<ComponentInfo> components_outside_ball(const Domain& dom, const Vec& a, double k,
                                                   const ComponentOptions& opt) {
    return outside_ball(dom, a, k, opt).info;
}

namespace {

struct LocalCounts {
    int N;
    std::vector<int> H;
    double dH;
};

LocalCounts local_components(const Domain& dom, const Vec& x, double r, double h) {
    const int n = dom.dim();
    Vec lo(x), hi(x);
    for (int i = 0; i < n; ++i) {
        lo[i] -= r;
        hi[i] += r;
    }
    // Align cell centres symmetrically about x.
    const CellGrid g = CellGrid::covering(lo, hi, h);
    auto inside = [&](const double* c) {
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) r2 += (c[i] - x[i]) * (c[i] - x[i]);
        return r2 < r * r && dom.contains_grid(std::span<const double>(c, n), 0.5 * h);
    };
    const Labeling L = label_components(g, inside);
    std::vector<double> dmin(L.count, kInf);
    double c[3];
    for (long i = 0; i < g.size(); ++i) {
        const int id = L.label[i];
        if (id < 0) continue;
        g.center(i, c);
        dmin[id] = std::min(dmin[id], dist(std::span<const double>(c, n), x));
    }
    LocalCounts out{0, {}, kInf};
    for (int id = 0; id < L.count; ++id) {
        if (dmin[id] <= 2.0 * h) {
            ++out.N;
        } else {
            out.H.push_back(id);
            out.dH = std::min(out.dH, dmin[id]);
        }
    }
    return out;
}

}  // namespace

FiniteConnectivity finitely_connected_at_boundary(const Domain& dom, const std::vector<Vec>& probes,
                                                  const std::vector<double>& radii,
                                                  const std::vector<double>& infinity_radii,
                                                  const ConnectivityOptions& opt) {
    if (opt.levels < 2) throw InvalidInput("need at least two resolutions");
    FiniteConnectivity out;
    for (const Vec& x : probes) {
        require_same_dim(x.size(), dom.dim(), "probe");
        if (dom.contains(x) || !dom.contains_closure(x))
            throw InvalidInput("probe points must lie on the boundary");
        for (double r : radii) {
            if (!(r > 0.0) || !(r < 1.0)) throw InvalidInput("finite-probe radii must lie in (0, 1)");
            ConnectivityReport rep;
            rep.x = x;
            rep.r = r;
            for (int l = 0; l < opt.levels; ++l) {
                const double h = std::ldexp(opt.h0, -l);
                check_resolution(dom, h);
                LocalCounts lc = local_components(dom, x, r, h);
                rep.N_by_resolution.push_back(lc.N);
                rep.h_extent_by_resolution.push_back(lc.dH);
                rep.N = lc.N;
                rep.H = lc.H;
                rep.h_extent = lc.dH;
            }
            // Accumulation of H at x: its distance keeps shrinking with h, or new
            // components keep appearing next to x.
            bool shrinking = true, growing = true;
            const auto& d = rep.h_extent_by_resolution;
            const auto& N = rep.N_by_resolution;
            for (std::size_t l = 1; l < d.size(); ++l) {
                if (!(std::isfinite(d[l]) && d[l] <= d[l - 1] / 1.5)) shrinking = false;
                if (!(N[l] > N[l - 1])) growing = false;
            }
            rep.finitely_connected = !shrinking && !growing;
            out.finitely_connected = out.finitely_connected && rep.finitely_connected;
            out.reports.push_back(std::move(rep));
        }
    }
    const Vec a = opt.base.empty() ? Vec(dom.dim(), 0.0) : opt.base;
    for (double r : infinity_radii) {
        if (!(r > 1.0)) throw InvalidInput("radii about infinity must exceed 1");
        ConnectivityReport rep;
        rep.at_infinity = true;
        rep.r = r;
        rep.h_extent = 0.0;
        for (const auto& c : components_outside_ball(dom, a, r, opt.infinity)) {
            if (c.bounded) {
                rep.H.push_back(c.id);
                rep.h_extent = std::max(rep.h_extent, c.max_radius);
            } else {
                ++rep.N;
            }
        }
        rep.N_by_resolution.push_back(rep.N);
        rep.h_extent_by_resolution.push_back(rep.h_extent);
        rep.finitely_connected = rep.h_extent < 0.5 * opt.infinity.R_max;
        out.finitely_connected = out.finitely_connected && rep.finitely_connected;
        out.reports.push_back(std::move(rep));
    }
    return out;
}

std::vector<DirectionAtInfinity> directions_at_infinity(const Domain& dom, const Vec& a, int K,
                                                        const ComponentOptions& opt) {
    if (K < 1) throw InvalidInput("direction depth must be at least 1");
    std::vector<std::int32_t> prev_label;
    std::vector<DirectionAtInfinity> prev_chain;
    for (int k = 1; k <= K; ++k) {
        OutsideBall ob = outside_ball(dom, a, k, opt);
        std::vector<DirectionAtInfinity> chain(ob.L.count);
        for (const auto& c : ob.info) {
            if (c.bounded) continue;
            DirectionAtInfinity d;
            if (k > 1) {
                // The grids coincide across levels, so labels can be compared cell by cell.
                const int parent = prev_label[ob.L.seed[c.id]];
                for (long i = 0; i < ob.L.grid.size(); ++i)
                    if (ob.L.label[i] == c.id && prev_label[i] != parent)
                        throw InvalidInput("component nesting failed on the analysis grid");
                if (parent < 0 || prev_chain[parent].ids.empty()) continue;
                d = prev_chain[parent];
            }
            d.ids.push_back(c.id);
            d.representatives.push_back(c.representative);
            chain[c.id] = std::move(d);
        }
        prev_label = std::move(ob.L.label);
        prev_chain = std::move(chain);
    }
    std::vector<DirectionAtInfinity> out;
    for (auto& d : prev_chain)
        if (static_cast<int>(d.ids.size()) == K) out.push_back(std::move(d));
    return out;
}

}  // namespace sph
