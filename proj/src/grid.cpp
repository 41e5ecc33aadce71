#include "sph/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sph/quadrature.hpp"

namespace sph {

void GridGeometry::coords(long idx, double* x) const {
    const auto m = multi(idx);
    for (int k = 0; k < n; ++k) x[k] = origin[k] + h * static_cast<double>(m[k]);
}

Vec GridGeometry::coords(long idx) const {
    Vec x(n);
    coords(idx, x.data());
    return x;
}

long GridGeometry::nearest(std::span<const double> x) const {
    require_same_dim(x.size(), static_cast<std::size_t>(n), "GridGeometry::nearest");
    std::array<long, 3> m{0, 0, 0};
    for (int k = 0; k < n; ++k) {
        const long i = std::lround((x[k] - origin[k]) / h);
        m[k] = std::clamp(i, 0L, dims[k] - 1);
    }
    return index(m);
}

bool GridGeometry::on_border(long idx) const {
    const auto m = multi(idx);
    for (int k = 0; k < n; ++k)
        if (m[k] == 0 || m[k] == dims[k] - 1) return true;
    return false;
}

long GridProblem::count(NodeKind k) const { return std::count(kind.begin(), kind.end(), k); }

bool GridProblem::cell_active(long c) const {
    const auto m = geom.multi(c);
    for (int k = 0; k < geom.n; ++k)
        if (m[k] + 1 >= geom.dims[k]) return false;
    if (kind[c] == NodeKind::inactive) return false;
    bool any_interior = kind[c] == NodeKind::interior;
    for (int k = 0; k < geom.n; ++k) {
        const NodeKind q = kind[c + geom.stride(k)];
        if (q == NodeKind::inactive) return false;
        any_interior = any_interior || q == NodeKind::interior;
    }
    return any_interior || (!cell_inside.empty() && cell_inside[c]);
}

namespace {

// Offsets o with A(i, i + o) possibly nonzero for the forward-difference energy.
std::vector<long> neighbour_offsets(const GridGeometry& g) {
    std::vector<long> off;
    for (int k = 0; k < g.n; ++k) {
        off.push_back(g.stride(k));
        off.push_back(-g.stride(k));
        for (int l = 0; l < g.n; ++l)
            if (l != k) off.push_back(g.stride(l) - g.stride(k));
    }
    return off;
}

}  // namespace

void GridProblem::validate() const {
    const long N = geom.size();
    if (static_cast<long>(kind.size()) != N || static_cast<long>(data.size()) != N)
        throw InvalidInput("grid problem arrays do not match the lattice");
    if (!weight.empty() && static_cast<long>(weight.size()) != N)
        throw InvalidInput("cell weight array does not match the lattice");
    if (!cell_inside.empty() && static_cast<long>(cell_inside.size()) != N)
        throw InvalidInput("cell mask does not match the lattice");
    if (!(p > 1.0) || !std::isfinite(p)) throw InvalidInput("exponent p must be finite and > 1");
    for (long i = 0; i < N; ++i) {
        if (kind[i] == NodeKind::interior && geom.on_border(i))
            throw InvalidInput("interior node on the lattice border");
        if (kind[i] != NodeKind::inactive && !std::isfinite(data[i]))
            throw InvalidInput("non-finite nodal data");
    }
    if (!weight.empty())
        for (long c = 0; c < N; ++c)
            if (cell_active(c) && !(weight[c] > 0.0 && std::isfinite(weight[c])))
                throw InvalidInput("cell weight must be positive and finite on active cells");
    const auto off = neighbour_offsets(geom);
    std::vector<char> seen(N, 0);
    std::vector<long> stack;
    for (long s = 0; s < N; ++s) {
        if (kind[s] != NodeKind::interior || seen[s]) continue;
        bool anchored = false;
        seen[s] = 1;
        stack.assign(1, s);
        while (!stack.empty()) {
            const long v = stack.back();
            stack.pop_back();
            for (long o : off) {
                const long w = v + o;
                if (w < 0 || w >= N) continue;
                if (kind[w] == NodeKind::dirichlet) anchored = true;
                if (kind[w] == NodeKind::interior && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        if (!anchored)
            throw HypothesisViolation("interior component without Dirichlet data at node " + std::to_string(s));
    }
}

GridProblem make_problem(const RegionSpec& spec, double p, const std::function<bool(const double*)>& inside,
                         const PointFn& boundary, const CellWeightFn& cell_weight) {
    const int n = static_cast<int>(spec.lo.size());
    require_same_dim(spec.hi.size(), spec.lo.size(), "make_problem");
    if (n < 2 || n > 3) throw InvalidInput("grid problems are implemented for n = 2, 3");
    if (!(spec.h > 0.0)) throw InvalidInput("grid spacing must be positive");
    GridProblem P;
    P.p = p;
    P.geom.n = n;
    P.geom.h = spec.h;
    P.geom.origin.resize(n);
    double cells = 1.0;
    for (int k = 0; k < n; ++k) {
        if (!(spec.hi[k] > spec.lo[k])) throw InvalidInput("empty region box");
        const long m = std::lround((spec.hi[k] - spec.lo[k]) / spec.h);
        P.geom.dims[k] = m + 3;
        P.geom.origin[k] = spec.lo[k] - spec.h;
        cells *= static_cast<double>(m + 3);
    }
    if (cells > 6e7) throw InvalidInput("lattice too large");
    const long N = P.geom.size();
    P.kind.assign(N, NodeKind::inactive);
    P.data.assign(N, 0.0);
    std::vector<char> candidate(N, 0);
    double x[3];
    for (long i = 0; i < N; ++i) {
        if (P.geom.on_border(i)) continue;
        P.geom.coords(i, x);
        if (spec.region && !spec.region(x)) continue;
        if (inside(x)) {
            P.kind[i] = NodeKind::interior;
            P.data[i] = boundary(x);
        } else {
            candidate[i] = 1;
        }
    }
    auto mark = [&](long j) {
        if (candidate[j] && P.kind[j] == NodeKind::inactive) {
            P.kind[j] = NodeKind::dirichlet;
            P.geom.coords(j, x);
            P.data[j] = boundary(x);
        }
    };
    const auto off = neighbour_offsets(P.geom);
    for (long i = 0; i < N; ++i) {
        if (P.kind[i] != NodeKind::interior) continue;
        for (long o : off) mark(i + o);
    }
    P.cell_inside.assign(N, 0);
    for (long c = 0; c < N; ++c) {
        if (P.geom.on_border(c) || (P.kind[c] == NodeKind::inactive && !candidate[c])) continue;
        P.geom.coords(c, x);
        for (int k = 0; k < n; ++k) x[k] += 0.5 * spec.h;
        if ((spec.region && !spec.region(x)) || !inside(x)) continue;
        P.cell_inside[c] = 1;
        mark(c);
        for (int k = 0; k < n; ++k) mark(c + P.geom.stride(k));
    }
    if (cell_weight) {
        P.weight.assign(N, 1.0);
        for (long c = 0; c < N; ++c) {
            if (!P.cell_active(c)) continue;
            P.geom.coords(c, x);
            P.weight[c] = cell_weight(x, spec.h);
        }
    }
    return P;
}

namespace {

double cube_integral(int n, const std::function<double(const double*)>& f, const double* corner, double h,
                     int order, const double* singular, int depth) {
    bool touches = false;
    if (singular && depth > 0) {
        touches = true;
        for (int k = 0; k < n; ++k)
            if (singular[k] < corner[k] - 1e-14 || singular[k] > corner[k] + h + 1e-14) touches = false;
    }
    if (touches) {
        double sum = 0.0;
        double sub[3];
        for (int mask = 0; mask < (1 << n); ++mask) {
            for (int k = 0; k < n; ++k) sub[k] = corner[k] + ((mask >> k) & 1) * 0.5 * h;
            sum += cube_integral(n, f, sub, 0.5 * h, order, singular, depth - 1);
        }
        return sum;
    }
    const Rule1D r = gauss_legendre(order, 0.0, h);
    const int q = static_cast<int>(r.nodes.size());
    const int total = n == 2 ? q * q : q * q * q;
    double sum = 0.0;
    double y[3];
    for (int t = 0; t < total; ++t) {
        int rem = t;
        double w = 1.0;
        for (int k = 0; k < n; ++k) {
            const int a = rem % q;
            rem /= q;
            y[k] = corner[k] + r.nodes[a];
            w *= r.weights[a];
        }
        sum += w * f(y);
    }
    return sum;
}

}  // namespace

double cell_average(int n, const std::function<double(const double*)>& f, const double* corner, double h,
                    int order, const double* singular, int depth) {
    return cube_integral(n, f, corner, h, order, singular, depth) / std::pow(h, n);
}

double ScalarField::at(std::span<const double> x) const {
    const int n = geom.n;
    require_same_dim(x.size(), static_cast<std::size_t>(n), "ScalarField::at");
    std::array<long, 3> m{0, 0, 0};
    double t[3] = {0, 0, 0};
    for (int k = 0; k < n; ++k) {
        const double s = (x[k] - geom.origin[k]) / geom.h;
        const long i = std::clamp(static_cast<long>(std::floor(s)), 0L, geom.dims[k] - 2);
        m[k] = i;
        t[k] = std::clamp(s - static_cast<double>(i), 0.0, 1.0);
    }
    const long base = geom.index(m);
    double value = 0.0;
    bool complete = true;
    double best = std::numeric_limits<double>::infinity();
    long best_idx = -1;
    for (int mask = 0; mask < (1 << n); ++mask) {
        long idx = base;
        double w = 1.0, d2 = 0.0;
        for (int k = 0; k < n; ++k) {
            const int b = (mask >> k) & 1;
            idx += b * geom.stride(k);
            w *= b ? t[k] : 1.0 - t[k];
            d2 += (b - t[k]) * (b - t[k]);
        }
        if (kind[idx] == NodeKind::inactive) {
            complete = false;
            continue;
        }
        value += w * values[idx];
        if (d2 < best) {
            best = d2;
            best_idx = idx;
        }
    }
    if (complete) return value;
    if (best_idx >= 0) return values[best_idx];
    double xs[3];
    for (long i = 0; i < geom.size(); ++i) {
        if (kind[i] == NodeKind::inactive) continue;
        geom.coords(i, xs);
        double d2 = 0.0;
        for (int k = 0; k < n; ++k) d2 += (xs[k] - x[k]) * (xs[k] - x[k]);
        if (d2 < best) {
            best = d2;
            best_idx = i;
        }
    }
    if (best_idx < 0) throw InvalidInput("field has no active nodes");
    return values[best_idx];
}

double ScalarField::min_active() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (kind[i] != NodeKind::inactive) m = std::min(m, values[i]);
    return m;
}

double ScalarField::max_active() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (kind[i] != NodeKind::inactive) m = std::max(m, values[i]);
    return m;
}

}  // namespace sph
