#include "sph/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sph/errors.hpp"
#include "sph/grid.hpp"
#include "sph/solver.hpp"

namespace sph {

std::string to_string(BarrierFormula f) {
    switch (f) {
        case BarrierFormula::subcritical: return "subcritical";
        case BarrierFormula::critical: return "critical";
        case BarrierFormula::supercritical: return "supercritical";
    }
    return "?";
}

BarrierFormula barrier_formula_for(int n, double p) {
    if (p < n) return BarrierFormula::subcritical;
    return p == n ? BarrierFormula::critical : BarrierFormula::supercritical;
}

void require_consistent(BarrierFormula f, int n, double p) {
    if (n < 2) throw InvalidInput("barriers need n >= 2");
    if (!(p > 1.0)) throw InvalidInput("p must exceed 1");
    if (barrier_formula_for(n, p) != f)
        throw InvalidInput(to_string(f) + " barrier does not match p = " + std::to_string(p) +
                           ", n = " + std::to_string(n));
}

namespace {

double pole_distance(int n, double k, std::span<const double> x) {
    double s = 0.0;
    for (int j = 0; j < n - 1; ++j) s += x[j] * x[j];
    const double t = x[n - 1] + k;
    return std::sqrt(s + t * t);
}

double beta(int n, double p) { return (p - n) / (p - 1.0); }

}  // namespace

double barrier_value(BarrierFormula f, int n, double p, double k, std::span<const double> x) {
    require_consistent(f, n, p);
    require_same_dim(x.size(), static_cast<std::size_t>(n), "barrier");
    if (!(k > 0.0)) throw InvalidInput("k must be positive");
    switch (f) {
        case BarrierFormula::subcritical: return 1.0 - std::pow(pole_distance(n, k, x) / k, beta(n, p));
        case BarrierFormula::critical: return std::log(pole_distance(n, k, x) / k);
        case BarrierFormula::supercritical: return std::pow(norm(x), beta(n, p)) / k;
    }
    return 0.0;
}

double barrier_decay_bound(BarrierFormula f, int n, double p, double k, std::span<const double> x) {
    require_consistent(f, n, p);
    const double r = norm(x);
    switch (f) {
        case BarrierFormula::subcritical: return 1.0 - std::pow((r + k) / k, beta(n, p));
        case BarrierFormula::critical: return std::log((r + k) / k);
        case BarrierFormula::supercritical: return std::pow(r, beta(n, p)) / k;
    }
    return 0.0;
}

namespace {

// Unit directions in the closed upper half-space, including the boundary equator.
std::vector<Vec> hemisphere(int n) {
    std::vector<Vec> dirs;
    const double pi = std::numbers::pi;
    if (n == 2) {
        for (int i = 0; i <= 64; ++i) dirs.push_back({std::cos(pi * i / 64), std::sin(pi * i / 64)});
        return dirs;
    }
    for (int i = 0; i <= 16; ++i) {
        const double polar = 0.5 * pi * i / 16;
        const int az = i == 0 ? 1 : 32;
        for (int j = 0; j < az; ++j) {
            Vec d(n, 0.0);
            d[0] = std::sin(polar) * std::cos(2 * pi * j / az);
            d[1] = std::sin(polar) * std::sin(2 * pi * j / az);
            d[n - 1] = std::cos(polar);
            dirs.push_back(d);
        }
    }
    return dirs;
}

}  // namespace

BarrierReport barrier_check(BarrierFormula f, int n, double p, double k, const BarrierGrid& grid) {
    require_consistent(f, n, p);
    if (n > 3) throw InvalidInput("barrier grids are implemented for n = 2, 3");
    if (!(k > 0.0)) throw InvalidInput("k must be positive");
    if (f == BarrierFormula::critical && k < 2.0) throw InvalidInput("critical barrier needs k >= 2");
    if (!(grid.h > 0.0) || !(grid.extent >= 4.0 * grid.h)) throw InvalidInput("bad barrier grid");
    BarrierReport R;
    R.formula = f;
    R.n = n;
    R.p = p;
    R.k = k;
    auto u = [&](const double* x) { return barrier_value(f, n, p, k, std::span<const double>(x, n)); };

    const double L = grid.extent, h = grid.h;
    RegionSpec spec{Vec(n, -L), Vec(n, L), h, {}};
    spec.lo[n - 1] = 0.0;
    spec.hi[n - 1] = 2.0 * L;
    auto inside = [&](const double* x) {
        for (int j = 0; j < n - 1; ++j)
            if (std::abs(x[j]) > L - 0.5 * h) return false;
        return x[n - 1] > 0.5 * h && x[n - 1] < 2.0 * L - 0.5 * h;
    };
    const GridProblem P = make_problem(spec, p, inside, u);
    const NodalResidual res = energy_residual(P, P.data);

    R.min_scaled_residual = std::numeric_limits<double>::infinity();
    R.min_boundary_value = std::numeric_limits<double>::infinity();
    double x[3];
    for (long i = 0; i < P.geom.size(); ++i) {
        if (P.kind[i] == NodeKind::inactive) continue;
        P.geom.coords(i, x);
        const std::span<const double> xs(x, n);
        if (P.kind[i] == NodeKind::dirichlet) {
            if (std::abs(x[n - 1]) < 0.5 * h) R.min_boundary_value = std::min(R.min_boundary_value, P.data[i]);
            continue;
        }
        ++R.nodes;
        const double pole = f == BarrierFormula::supercritical ? norm(xs) : pole_distance(n, k, xs);
        if (res.flux[i] > 0.0)
            R.min_scaled_residual = std::min(R.min_scaled_residual, res.gradient[i] / res.flux[i] * pole / h);
        const double bound = barrier_decay_bound(f, n, p, k, xs);
        R.max_decay_excess = std::max(R.max_decay_excess, P.data[i] - bound);
        bool axis = true;
        for (int j = 0; j < n - 1; ++j) axis = axis && std::abs(x[j]) < 0.5 * h;
        if (axis && f == BarrierFormula::subcritical)
            R.axis_gap = std::max(R.axis_gap, std::abs(P.data[i] - (1.0 - std::pow((x[n - 1] + k) / k, beta(n, p)))));
    }
    R.residual_ok = R.nodes > 0 && R.min_scaled_residual >= -grid.residual_tol;
    R.decay_ok = R.max_decay_excess <= 1e-12;

    const std::vector<Vec> dirs = hemisphere(n);
    std::vector<double> sphere_min;
    Vec y(n);
    for (int j = 0; j < grid.far_levels; ++j) {
        const double r = L * std::pow(4.0, j);
        double m = std::numeric_limits<double>::infinity();
        for (const Vec& d : dirs) {
            for (int t = 0; t < n; ++t) y[t] = r * d[t];
            const double v = u(y.data());
            m = std::min(m, v);
            if (d[n - 1] == 0.0) R.min_boundary_value = std::min(R.min_boundary_value, v);
        }
        sphere_min.push_back(m);
    }
    R.boundary_ok = R.min_boundary_value >= -1e-12;
    bool nondecreasing = true;
    for (std::size_t j = 1; j < sphere_min.size(); ++j)
        nondecreasing = nondecreasing && sphere_min[j] >= sphere_min[j - 1] - 1e-12;
    const double last = sphere_min.back();
    R.liminf_at_infinity = last;
    if (last < 1.0 && sphere_min.size() >= 2) {
        const double g1 = 1.0 - sphere_min[sphere_min.size() - 2], g2 = 1.0 - last;
        // A gap decaying like a power of r extrapolates to zero.
        if (g1 > 0.0 && g2 > 0.0 && std::log(g2 / g1) / std::log(4.0) < -1e-3) R.liminf_at_infinity = 1.0;
    }
    R.infinity_ok = nondecreasing && R.liminf_at_infinity >= 1.0 - 1e-9;
    return R;
}

}  // namespace sph
