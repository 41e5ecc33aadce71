#include "sph/problems.hpp"

#include <cmath>

#include "sph/quadrature.hpp"

namespace sph {

double radial_pharmonic(int n, double p, double r, double r0, double r1) {
    if (!(p > 1.0)) throw InvalidInput("p must exceed 1");
    if (std::abs(p - n) < 1e-14) return std::log(r / r0) / std::log(r1 / r0);
    const double g = (p - n) / (p - 1.0);
    return (std::pow(r, g) - std::pow(r0, g)) / (std::pow(r1, g) - std::pow(r0, g));
}

double annulus_capacity(int n, double p, double r0, double r1) {
    if (!(r1 > r0 && r0 > 0.0)) throw InvalidInput("annulus radii must satisfy 0 < r0 < r1");
    const double s = (n - 1.0) / (p - 1.0);
    const double I = std::abs(s - 1.0) < 1e-14 ? std::log(r1 / r0)
                                               : (std::pow(r1, 1.0 - s) - std::pow(r0, 1.0 - s)) / (1.0 - s);
    return unit_sphere_area(n) * std::pow(I, 1.0 - p);
}

namespace {

double radius(int n, const double* x) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += x[k] * x[k];
    return std::sqrt(s);
}

}  // namespace

GridProblem annulus_problem(int n, double p, double h, double r0, double r1, bool symmetric) {
    RegionSpec spec;
    const double L = r1 + 2.0 * h;
    spec.lo.assign(n, symmetric ? 0.0 : -L);
    spec.hi.assign(n, L);
    spec.h = h;
    auto inside = [=](const double* x) {
        const double r = radius(n, x);
        return r > r0 && r < r1;
    };
    auto data = [=](const double* x) { return radial_pharmonic(n, p, radius(n, x), r0, r1); };
    return make_problem(spec, p, inside, data);
}

double radial_sup_error(const ScalarField& u, double p, double r0, double r1) {
    const int n = u.geom.n;
    double err = 0.0;
    double x[3];
    for (long i = 0; i < u.geom.size(); ++i) {
        if (u.kind[i] != NodeKind::interior) continue;
        u.geom.coords(i, x);
        err = std::max(err, std::abs(u.values[i] - radial_pharmonic(n, p, radius(n, x), r0, r1)));
    }
    return err;
}

CapacityResult variational_capacity(const Condenser& c, double p, double h, const SolverOptions& opt) {
    const int n = c.n;
    if (!c.inner) throw InvalidInput("condenser needs an inner set");
    const double R = c.window_radius;
    RegionSpec spec;
    const double L = R + 2.0 * h;
    spec.lo.assign(n, c.symmetric ? 0.0 : -L);
    spec.hi.assign(n, L);
    spec.h = h;
    auto inside = [&](const double* x) { return radius(n, x) < R && !c.inner(x); };
    auto data = [&](const double* x) { return c.inner(x) && radius(n, x) < R ? 1.0 : 0.0; };
    GridProblem P = make_problem(spec, p, inside, data);
    CapacityResult out;
    out.symmetry_factor = c.symmetric ? std::pow(2.0, n) : 1.0;
    bool any = false;
    for (long i = 0; i < P.geom.size(); ++i)
        if (P.kind[i] == NodeKind::dirichlet && P.data[i] == 1.0) any = true;
    if (!any) return out;
    const Solution s = solve_dirichlet(P, opt);
    out.report = s.report;
    out.capacity = out.symmetry_factor * s.report.energy;
    return out;
}

}  // namespace sph
