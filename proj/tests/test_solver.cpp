#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sph/multigrid.hpp"
#include "sph/problems.hpp"
#include "sph/solver.hpp"

using namespace sph;
using std::numbers::pi;

namespace {
double rad(const double* x, int n = 2) {
    double s = 0;
    for (int k = 0; k < n; ++k) s += x[k] * x[k];
    return std::sqrt(s);
}

GridProblem unit_square(double h, double p, const PointFn& f) {
    RegionSpec spec{{0, 0}, {1, 1}, h, {}};
    auto in = [](const double* x) { return x[0] > 0 && x[0] < 1 && x[1] > 0 && x[1] < 1; };
    return make_problem(spec, p, in, f);
}

GridProblem unit_disc(double h, double p, const PointFn& f) {
    RegionSpec spec{{-1.1, -1.1}, {1.1, 1.1}, h, {}};
    return make_problem(spec, p, [](const double* x) { return rad(x) < 1; }, f);
}

std::vector<double> nodal(const GridProblem& P, const PointFn& f) {
    std::vector<double> u(P.geom.size(), 0.0);
    double x[3];
    for (long i = 0; i < P.geom.size(); ++i) {
        P.geom.coords(i, x);
        u[i] = f(x);
    }
    return u;
}
}  // namespace

TEST_CASE("discrete energy of constant and linear fields") {
    for (double p : {1.5, 2.0, 3.0}) {
        const GridProblem P = unit_square(1.0 / 32, p, [](const double*) { return 0.0; });
        CHECK(discrete_energy(P, nodal(P, [](const double*) { return 3.0; })) == 0.0);
        CHECK(discrete_energy(P, nodal(P, [](const double* x) { return x[0]; })) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("discrete energy of log|x| on the annulus converges to 2 pi log 2") {
    const double exact = 2 * pi * std::log(2.0);
    double prev = 0;
    for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
        GridProblem P = annulus_problem(2, 2.0, h, 1.0, 2.0, false);
        const double gap = std::abs(discrete_energy(P, nodal(P, [](const double* x) { return std::log(rad(x)); })) - exact);
        CHECK(gap < 6.0 * h);
        if (prev > 0) CHECK(gap < 0.6 * prev);
        prev = gap;
    }
}

TEST_CASE("constant data gives the constant solution") {
    const GridProblem P = unit_disc(1.0 / 32, 3.0, [](const double*) { return 0.7; });
    const Solution s = solve_dirichlet(P);
    CHECK(s.report.energy == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(s.field.min_active() == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(s.field.max_active() == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("annulus solutions match the radial closed form") {
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        const double h = 1.0 / 64;
        const Solution s = solve_dirichlet(annulus_problem(2, p, h));
        const double err = radial_sup_error(s.field, p);
        CHECK(err <= 5 * h);
        CHECK(s.report.grad_norm <= 1e-8);
        CHECK(s.report.converged);
    }
}

TEST_CASE("p = 2 on the unit disc with data x1 reproduces x1") {
    double prev = 0;
    for (double h : {1.0 / 32, 1.0 / 64}) {
        const Solution s = solve_dirichlet(unit_disc(h, 2.0, [](const double* x) { return x[0]; }));
        double err = 0, x[2];
        for (long i = 0; i < s.field.geom.size(); ++i) {
            if (s.field.kind[i] != NodeKind::interior) continue;
            s.field.geom.coords(i, x);
            err = std::max(err, std::abs(s.field.values[i] - x[0]));
        }
        CHECK(err < 2 * h);
        if (prev > 0) CHECK(err < 0.75 * prev);
        prev = err;
    }
}

TEST_CASE("comparison principle, energy descent and report consistency on random data") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    for (double p : {1.5, 2.5, 4.0}) {
        double a[4];
        for (double& v : a) v = U(rng);
        auto f = [&](const double* x) {
            const double t = std::atan2(x[1], x[0]);
            return a[0] * std::cos(t) + a[1] * std::sin(2 * t) + a[2] * std::cos(3 * t) + a[3];
        };
        const GridProblem P = unit_disc(1.0 / 24, p, f);
        const Solution s = solve_dirichlet(P);
        const SolveReport& r = s.report;
        CHECK(r.u_min >= r.data_min - 1e-9);
        CHECK(r.u_max <= r.data_max + 1e-9);
        for (std::size_t k = 1; k < r.energies.size(); ++k)
            CHECK(r.energies[k] <= r.energies[k - 1] * (1 + 1e-12));
        CHECK(discrete_energy(P, s.field.values) == doctest::Approx(r.energy).epsilon(1e-13));
        CHECK(r.stage_iterations.size() == r.eps_schedule.size());
    }
}

TEST_CASE("ordered data give ordered solutions") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0, 1);
    for (int trial = 0; trial < 4; ++trial) {
        const double p = 1.5 + 2.5 * U(rng);
        const double c0 = U(rng), c1 = U(rng), bump = 0.1 + U(rng);
        auto f = [&](const double* x) { return c0 * x[0] + c1 * x[1] * x[1]; };
        auto g = [&](const double* x) { return f(x) + bump * std::max(0.0, x[0]); };
        const Solution sf = solve_dirichlet(unit_disc(1.0 / 16, p, f));
        const Solution sg = solve_dirichlet(unit_disc(1.0 / 16, p, g));
        double worst = 0;
        for (std::size_t i = 0; i < sf.field.values.size(); ++i)
            if (sf.field.kind[i] == NodeKind::interior) worst = std::max(worst, sf.field.values[i] - sg.field.values[i]);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("non-convergence raises SolveFailure carrying the report") {
    SolverOptions opt;
    opt.max_iterations = 1;
    opt.eps_schedule = {1e-10};
    opt.warm_start_linear = false;
    try {
        solve_dirichlet(annulus_problem(2, 4.0, 1.0 / 32), opt);
        FAIL("expected SolveFailure");
    } catch (const SolveFailure& e) {
        CHECK_FALSE(e.report().converged);
        CHECK(e.report().iterations == 1);
        CHECK(e.report().grad_norm > 1e-8);
    }
}

TEST_CASE("problem validation") {
    GridProblem P = unit_square(0.25, 2.0, [](const double*) { return 0.0; });
    for (auto& k : P.kind)
        if (k == NodeKind::dirichlet) k = NodeKind::inactive;
    CHECK_THROWS_AS(P.validate(), HypothesisViolation);
    GridProblem Q = unit_square(0.25, 2.0, [](const double*) { return 0.0; });
    Q.weight.assign(Q.geom.size(), 1.0);
    Q.weight[Q.geom.nearest(Vec{0.5, 0.5})] = -1.0;
    CHECK_THROWS_AS(Q.validate(), InvalidInput);
    Q.weight.clear();
    Q.p = 1.0;
    CHECK_THROWS_AS(Q.validate(), InvalidInput);
}

TEST_CASE("variational capacity of balls") {
    auto ball = [](const double* x) { return x[0] * x[0] + x[1] * x[1] <= 1.0; };
    Condenser c{2, ball, 8.0, true};
    const double cap = variational_capacity(c, 2.0, 1.0 / 32).capacity;
    CHECK(cap == doctest::Approx(2 * pi / std::log(8.0)).epsilon(0.02));
    Condenser none{2, [](const double*) { return false; }, 8.0, true};
    CHECK(variational_capacity(none, 2.0, 1.0 / 16).capacity == 0.0);
    CHECK(annulus_capacity(3, 2.0, 1.0, 2.0) == doctest::Approx(8 * pi));
    CHECK(annulus_capacity(2, 2.0, 1.0, std::exp(1.0)) == doctest::Approx(2 * pi));
    CHECK(radial_pharmonic(2, 3.0, 1.5) == doctest::Approx(0.5425821165873709).epsilon(1e-14));
    CHECK(radial_pharmonic(3, 2.0, 1.5) == doctest::Approx(0.6666666666666667).epsilon(1e-14));
    CHECK(radial_pharmonic(2, 2.0, std::sqrt(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("multigrid preconditioned CG on the lattice Laplacian") {
    GridProblem P = unit_square(1.0 / 256, 2.0, [](const double*) { return 0.0; });
    std::vector<char> unk(P.geom.size());
    for (long i = 0; i < P.geom.size(); ++i) unk[i] = P.kind[i] == NodeKind::interior;
    StencilOperator A;
    A.reset(P.geom, forward_difference_deltas(2), unk);
    for (long i : A.active) {
        A.add(i, i, 4.0);
        for (int k = 0; k < 2; ++k) {
            const long j = i + P.geom.stride(k);
            if (unk[j]) A.add(i, j, -1.0);
        }
    }
    Multigrid M;
    M.build(A);
    CHECK(M.levels() > 3);
    std::vector<double> b(P.geom.size(), 0.0), x;
    for (long i : A.active) b[i] = 1.0;
    const PcgResult r = pcg(A, M, b, x, 1e-10, 100);
    CHECK(r.converged);
    CHECK(r.iterations <= 20);
    std::vector<double> Ax;
    A.apply(x, Ax);
    double res = 0;
    for (long i : A.active) res = std::max(res, std::abs(Ax[i] - b[i]));
    CHECK(res < 1e-7);
}

TEST_CASE("field interpolation and cell averages") {
    const GridProblem P = unit_square(0.125, 2.0, [](const double* x) { return 2 * x[0] - x[1]; });
    ScalarField f{P.geom, P.kind, P.data};
    CHECK(f.at(Vec{0.31, 0.47}) == doctest::Approx(2 * 0.31 - 0.47).epsilon(1e-12));
    const double corner[2] = {0.0, 0.0}, origin[2] = {0.0, 0.0};
    auto inv = [](const double* y) { return 1.0 / std::hypot(y[0], y[1]); };
    // mean of 1/|y| over the unit square: 2 asinh(1)
    CHECK(cell_average(2, inv, corner, 1.0, 4, origin, 12) == doctest::Approx(2 * std::asinh(1.0)).epsilon(1e-3));
    auto quad = [](const double* y) { return y[0] * y[0] + y[1] * y[2]; };
    const double c3[3] = {1.0, 0.0, 0.0};
    CHECK(cell_average(3, quad, c3, 2.0, 3) == doctest::Approx(13.0 / 3 + 1.0).epsilon(1e-13));
}
