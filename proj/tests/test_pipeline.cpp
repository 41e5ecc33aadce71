#include <doctest.h>

#include <cmath>
#include <random>

#include "sph/barrier.hpp"
#include "sph/errors.hpp"
#include "sph/perron.hpp"
#include "sph/problems.hpp"

using namespace sph;

namespace {
PipelineOptions inversion(Vec c, double h) {
    PipelineOptions o;
    o.center = std::move(c);
    o.h = h;
    return o;
}

double poisson(const double* x) {
    const double a = x[0] - 0.5, b = x[1] + 2;
    return 2 * b / (a * a + b * b);
}

// E = alternate pieces of a random partition of [-2, 2] on the line x_2 = 0.
BoundarySet random_intervals(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-2, 2);
    std::vector<double> cut{-2, 2};
    for (int j = 0; j < 5; ++j) cut.push_back(U(rng));
    std::sort(cut.begin(), cut.end());
    std::vector<Box> in, out{{{-1e12, 0}, {-2, 0}}, {{2, 0}, {1e12, 0}}};
    for (std::size_t j = 0; j + 1 < cut.size(); ++j)
        (j % 2 ? out : in).push_back({{cut[j], 0}, {cut[j + 1], 0}});
    BoundarySet E = BoundarySet::boxes(2, in);
    E.complement = std::make_shared<BoundarySet>(BoundarySet::boxes(2, out, true));
    return E;
}
}  // namespace

TEST_CASE("constant data give constant solutions") {
    const Domain dom = examples::half_space(2, 0.5);
    for (double p : {1.5, 2.0, 3.0}) {
        auto s = solve_unbounded(dom, p, [](const double*) { return 0.3; }, 0.3, inversion({0, 0}, 1.0 / 32));
        const auto& f = s.solution.field;
        for (std::size_t i = 0; i < f.values.size(); ++i)
            if (f.kind[i] != NodeKind::inactive) CHECK(f.values[i] == doctest::Approx(0.3).epsilon(1e-10));
        CHECK(s.infinity_node_active == (p < 2));
        CHECK(s(PointOrInfinity({3.0, 7.0})) == doctest::Approx(0.3).epsilon(1e-10));
    }
}

TEST_CASE("half-plane Poisson integral through inversion") {
    const Domain dom = examples::half_space(2, 0.0);
    auto s = solve_unbounded(dom, 2.0, poisson, 0.0, inversion({0, -1}, 1.0 / 128));
    for (int j = 0; j < 10; ++j) {
        const double x[2] = {-3.0 + 0.7 * j, 0.25 + 0.3 * j};
        CHECK(std::abs(s(PointOrInfinity({x[0], x[1]})) - poisson(x)) < 0.01);
    }
    PipelineOptions sph;
    sph.transform = TransformKind::sphericalization;
    sph.base = {0, 0};
    sph.h = 1.0 / 8;
    sph.truncation = 16;
    auto t = solve_unbounded(dom, 2.0, poisson, std::nullopt, sph);
    CHECK_FALSE(t.infinity_node_active);
    for (int j = 0; j < 10; ++j) {
        const double x[2] = {-3.0 + 0.7 * j, 0.25 + 0.3 * j};
        CHECK(std::abs(t(PointOrInfinity({x[0], x[1]})) - poisson(x)) < 0.03);
    }
}

TEST_CASE("direct and inverted annulus solves agree") {
    const Domain ann = Domain::minus(Domain::ball({0, 0}, 2), Domain::ball({0, 0}, 1));
    for (double p : {1.5, 3.0}) {
        auto f = [p](const double* x) { return radial_pharmonic(2, p, std::hypot(x[0], x[1])); };
        const BoundedFamily direct(ann, p, 1.0 / 64);
        const auto u = solve_dirichlet(direct.build([&](const NodePoint& q) { return f(q.x); }));
        auto v = solve_unbounded(ann, p, f, 0.0, inversion({0, 0}, 1.0 / 128));
        double worst = 0;
        for (int j = 0; j < 24; ++j) {
            const double r = 1.1 + 0.8 * (j % 6) / 5.0, t = 0.7 * j;
            const PointOrInfinity x({r * std::cos(t), r * std::sin(t)});
            worst = std::max(worst, std::abs(direct.evaluate(u.field, x) - v(x)));
        }
        CHECK(worst < 0.02);
    }
}

TEST_CASE("infinity node follows the capacity rule") {
    const Domain dom = examples::half_space(2, 0.0);
    auto step = [](const double* x) { return 0.5 + 0.5 * std::tanh(x[0]); };
    CHECK_THROWS_AS(solve_unbounded(dom, 1.5, step, std::nullopt, inversion({0, -1}, 1.0 / 32)), InvalidInput);
    auto a = solve_unbounded(dom, 3.0, step, 0.0, inversion({0, -1}, 1.0 / 64));
    auto b = solve_unbounded(dom, 3.0, step, 1.0, inversion({0, -1}, 1.0 / 64));
    CHECK_FALSE(a.infinity_node_active);
    CHECK(a.solution.field.values == b.solution.field.values);
    CHECK(a.solution.report.u_min >= a.solution.report.data_min - 1e-12);
    CHECK(a.solution.report.u_max <= a.solution.report.data_max + 1e-12);
    auto c = solve_unbounded(dom, 1.5, step, 1.0, inversion({0, -1}, 1.0 / 64));
    CHECK(c.infinity_node_active);
    const long inf = c.solution.field.geom.nearest(Vec{0, 0});
    CHECK(c.solution.field.kind[inf] == NodeKind::dirichlet);
    CHECK(c.solution.field.values[inf] == 1.0);
}

TEST_CASE("pipeline preconditions") {
    const Domain dom = examples::half_space(3, 0.0);
    auto f = [](const double*) { return 0.0; };
    CHECK_THROWS_AS(solve_unbounded(dom, 2.0, f, 0.0, inversion({0, 0, 1}, 0.1)), HypothesisViolation);
    CHECK_THROWS_AS(solve_unbounded(dom, 1.4, f, 0.0, inversion({0, 0, -1}, 0.1)), NotLocallyIntegrable);
    CHECK_THROWS_AS(solve_unbounded(dom, 2.0, f, 0.0, inversion({0, -1}, 0.1)), DimensionMismatch);
}

TEST_CASE("half-plane harmonic measure") {
    const PipelineFamily fam(examples::half_space(2, 0.0), 2.0, inversion({0, -1}, 1.0 / 256));
    const std::vector<PointOrInfinity> at{PointOrInfinity({0.0, 1.0}), PointOrInfinity({1.0, 2.0})};
    const std::vector<double> deltas{0.1, 0.05, 0.025};
    auto seg = pharmonic_measure(fam, BoundarySet::boxes(2, {{{-1, 0}, {1, 0}}}), at, deltas);
    CHECK(seg.values[0] == doctest::Approx(0.5).epsilon(0.02));
    CHECK(seg.values[1] == doctest::Approx((std::atan(0.0) - std::atan(-1.0)) / M_PI).epsilon(0.03));
    CHECK(seg.perron.monotone);
    CHECK(seg.perron.limit_certified);
    CHECK(seg.within_unit_interval);
    auto ray = pharmonic_measure(fam, BoundarySet::boxes(2, {{{0, 0}, {1e12, 0}}}), at, deltas);
    CHECK(ray.values[0] == doctest::Approx(0.5).epsilon(0.02));
    auto all = pharmonic_measure(fam, BoundarySet::everything(), at, {0.1});
    auto none = pharmonic_measure(fam, BoundarySet::empty(), at, {0.1});
    for (int j = 0; j < 2; ++j) {
        CHECK(all.values[j] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(none.values[j] == doctest::Approx(0.0));
    }
}

TEST_CASE("infinity carries no harmonic measure for p < n") {
    const PipelineFamily fam(examples::half_space(2, 0.0), 1.5, inversion({0, -1}, 1.0 / 128));
    auto w = pharmonic_measure(fam, BoundarySet::infinity_only(), {PointOrInfinity({0.0, 1.0})}, {0.2, 0.1, 0.05, 0.025});
    CHECK(w.values[0] <= 0.02);
    CHECK(w.perron.monotone);
    CHECK_FALSE(w.perron.limit_certified);
}

TEST_CASE("lower Perron solutions stay below upper ones") {
    std::mt19937_64 rng(12);
    const PipelineFamily fam(examples::half_space(2, 0.0), 3.0, inversion({0, -1}, 1.0 / 64));
    for (int t = 0; t < 4; ++t) {
        const BoundarySet E = random_intervals(rng);
        auto up = perron_indicator(fam, E, PerronSide::upper, {0.8, 0.4, 0.2});
        auto lo = perron_indicator(fam, E, PerronSide::lower, {0.8, 0.4, 0.2});
        CHECK(up.monotone);
        CHECK(lo.monotone);
        double worst = -1;
        for (std::size_t i = 0; i < up.field.values.size(); ++i)
            if (up.field.kind[i] != NodeKind::inactive) worst = std::max(worst, lo.field.values[i] - up.field.values[i]);
        CHECK(worst <= 1e-6);
    }
    const BoundarySet far = BoundarySet::boxes(2, {{{-1e12, 0}, {-4, 0}}, {{4, 0}, {1e12, 0}}}, true);
    auto coarse = perron_indicator(fam, far, PerronSide::upper, {0.2, 0.1});
    CHECK_FALSE(coarse.monotone);
    CHECK_FALSE(coarse.limit_certified);
    CHECK_THROWS_AS(perron_indicator(fam, BoundarySet::boxes(2, {}), PerronSide::lower, {0.1}), InvalidInput);
    CHECK_THROWS_AS(perron_indicator(fam, BoundarySet::empty(), PerronSide::upper, {0.1, 0.2}), InvalidInput);
}

TEST_CASE("barrier formulas") {
    const double x[3] = {0, 0, 4};
    CHECK(barrier_value(BarrierFormula::subcritical, 3, 2.0, 4, x) == doctest::Approx(0.5));
    const double y[2] = {2, -2};
    CHECK(barrier_value(BarrierFormula::critical, 2, 2.0, 2, y) == doctest::Approx(0.0));
    const double z[3] = {0, 0, 1};
    double prev = 2;
    for (double k = 2; k < 1e6; k *= 2) {
        const double v = barrier_value(BarrierFormula::subcritical, 3, 2.0, k, z);
        CHECK(v < prev);
        CHECK(v <= barrier_decay_bound(BarrierFormula::subcritical, 3, 2.0, k, z) + 1e-15);
        prev = v;
    }
    CHECK(prev < 1e-5);
    CHECK_THROWS_AS(barrier_value(BarrierFormula::subcritical, 2, 2.0, 4, y), InvalidInput);
    CHECK_THROWS_AS(barrier_check(BarrierFormula::critical, 3, 2.0, 4), InvalidInput);
    for (double k : {4.0, 16.0, 64.0}) {
        const auto r = barrier_check(BarrierFormula::subcritical, 3, 2.0, k);
        CHECK(r.residual_ok);
        CHECK(r.boundary_ok);
        CHECK(r.infinity_ok);
        CHECK(r.decay_ok);
        CHECK(r.axis_gap < 1e-12);
    }
    CHECK(barrier_check(BarrierFormula::critical, 2, 2.0, 4).passes());
    CHECK(barrier_check(BarrierFormula::supercritical, 2, 3.0, 4).passes());
}
