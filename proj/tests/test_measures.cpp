#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sph/measures.hpp"

using namespace sph;
using std::numbers::pi;

TEST_CASE("mu_a and muhat densities") {
    SphericalizationContext ctx(Vec{0, 0}, 2.0);
    CHECK(mu_a_density(ctx, Vec{0, 0}) == doctest::Approx(1.0 / (pi * pi)));
    CHECK(mu_a_density(ctx, Vec{1, 0}) == doctest::Approx(1.0 / (16.0 * pi * pi)));
    CHECK(muhat_density(ctx, Vec{0, 0}) == 1.0);
    CHECK(muhat_density(ctx, Vec{1, 0}) == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("mu_a total mass: closed form and bound") {
    // omega_{n-1} v_n^{-2} B(n, n): 1/(3 pi) in the plane, 3/(40 pi) in space.
    SphericalizationContext c2(Vec{0.3, -1.0}, 2.0), c3(Vec{0, 0, 0}, 2.0);
    CHECK(mu_a_total_mass(c2) == doctest::Approx(1.0 / (3.0 * pi)).epsilon(1e-10));
    CHECK(mu_a_total_mass(c3) == doctest::Approx(3.0 / (40.0 * pi)).epsilon(1e-10));
    CHECK(mu_a_mass_bound(2) == doctest::Approx(2.0 / pi));
    CHECK(mu_a_total_mass(c2) < mu_a_mass_bound(2));
    CHECK(mu_a_total_mass(c3) < mu_a_mass_bound(3));
}

TEST_CASE("property: muhat / mu_a = v_n^2 (1+d)^{2(Q-p)}") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-50, 50);
    for (int n : {2, 3})
        for (double p : {1.6, 2.0, 3.5}) {
            SphericalizationContext ctx(Vec(n, 1.0), p);
            for (int t = 0; t < 50; ++t) {
                Vec x(n);
                for (auto& c : x) c = U(rng);
                const double d = ctx.dist_to_base(x);
                const double vn = unit_ball_volume(n);
                CHECK(muhat_density(ctx, x) / mu_a_density(ctx, x) ==
                      doctest::Approx(vn * vn * std::pow(1 + d, 2 * (n - p))).epsilon(1e-13));
            }
        }
}

TEST_CASE("weight spec evaluation") {
    auto w = WeightSpec::power(Vec{1, 1}, -1.0);
    CHECK(w.evaluate(Vec{1, 3}) == doctest::Approx(0.5));
    CHECK(w.is_singular(Vec{1, 1}));
    CHECK(std::isinf(w.evaluate(Vec{1, 1})));
    CHECK(WeightSpec::power(Vec{0, 0}, 2.0).evaluate(Vec{0, 0}) == 0.0);
    CHECK(WeightSpec::inversion(3.0, 2).evaluate(Vec{0, 2}) == doctest::Approx(4.0));
    CHECK(WeightSpec::inversion(2.0, 2).evaluate(Vec{0.1, 7}) == 1.0);
    CHECK_THROWS_AS(WeightSpec::inversion(1.4, 3), HypothesisViolation);
    SphericalizationContext ctx(Vec{0, 0}, 2.0);
    CHECK(WeightSpec::sphericalization(ctx).evaluate(Vec{1, 0}) == doctest::Approx(1.0 / 16));
    CHECK_THROWS_AS(w.evaluate(Vec{1, 2, 3}), DimensionMismatch);
}

TEST_CASE("A_p quotient examples") {
    auto leb = WeightSpec::lebesgue(2);
    auto ball = make_ball_sample(Vec{0.3, 0.2}, 0.7, 64);
    CHECK(ap_quotient(WeightSpec::power(Vec{0, 0}, 0.0), 2.0, ball, leb).value ==
          doctest::Approx(1.0).epsilon(1e-14));
    // Radial oracle: avg_{B(0,1)} |x|^beta = 2/(2+beta); (4/5)(4/3) = 16/15.
    CHECK(centered_power_average(2, 0.5, 1.0) * centered_power_average(2, -0.5, 1.0) ==
          doctest::Approx(16.0 / 15.0));
    // Same value from quadrature on a ball with no node at the origin.
    auto b = make_ball_sample(Vec{0, 0}, 1.0, 64);
    CHECK(ap_quotient(WeightSpec::power(Vec{0, 0}, 0.5), 2.0, b, leb).value ==
          doctest::Approx(16.0 / 15.0).epsilon(0.02));
    CHECK(std::isinf(centered_power_average(2, -2.0, 0.1)));
    CHECK_THROWS_AS(ap_quotient(WeightSpec::lebesgue(2), 1.0, ball, leb), InvalidInput);
}

TEST_CASE("off-center power averages") {
    for (int n : {2, 3})
        for (double rho : {0.3, 0.999, 1.0, 1.7, 6.0}) {
            // avg |x|^2 over B(z, r) = |z|^2 + n r^2 / (n + 2).
            CHECK(offcenter_power_average(n, 2.0, rho, 1.0) == doctest::Approx(rho * rho + n / (n + 2.0)).epsilon(1e-10));
            CHECK(offcenter_power_average(n, 0.0, rho, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
        }
    CHECK(offcenter_power_average(3, -2.5, 1e-9, 0.5) ==
          doctest::Approx(centered_power_average(3, -2.5, 0.5)).epsilon(1e-6));
    CHECK(std::isinf(offcenter_power_average(2, -2.0, 0.5, 1.0)));
    CHECK(std::isfinite(offcenter_power_average(2, -2.0, 1.5, 1.0)));
    CHECK_THROWS_AS(offcenter_power_average(4, 1.0, 0.5, 1.0), InvalidInput);
}

TEST_CASE("property: A_p quotient is at least 1") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-3, 3), A(-1.9, 5.0), P(1.1, 4.0), R(0.01, 3.0);
    for (int t = 0; t < 200; ++t) {
        const int n = t % 2 ? 3 : 2;
        Vec z(n);
        for (auto& c : z) c = U(rng);
        auto ball = make_ball_sample(z, R(rng), 64);
        auto w = WeightSpec::power(Vec(n, 0.0), A(rng) * n / 2);
        CHECK(ap_quotient(w, P(rng), ball, WeightSpec::lebesgue(n)).value >= 1.0 - 1e-12);
    }
}

TEST_CASE("check_ap verdicts") {
    BallSamplerConfig cfg;
    auto rep = check_ap(WeightSpec::power(Vec{0, 0}, 1.0), 3.0, cfg);
    CHECK(rep.verdict == ApVerdict::bounded);
    CHECK(rep.quotients.size() == 3 * 31);
    rep = check_ap(WeightSpec::power(Vec{0, 0}, 0.0), 2.0, cfg);
    CHECK(rep.verdict == ApVerdict::bounded);
    for (double q : rep.quotients) CHECK(q == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(check_ap(WeightSpec::power(Vec{0, 0}, 2.5), 2.0, cfg).verdict == ApVerdict::diverging);
    // Boundary case alpha = n(p-1): w^{1/(1-p)} = |x|^{-n}.
    CHECK(check_ap(WeightSpec::power(Vec{0, 0}, 2.0), 2.0, cfg).verdict == ApVerdict::diverging);
    CHECK_THROWS_AS(check_ap(WeightSpec::power(Vec{0, 0}, -2.0), 2.0, cfg), NotLocallyIntegrable);
    // A_1: -n < alpha <= 0 bounded, alpha > 0 not.
    CHECK(check_ap(WeightSpec::power(Vec{0, 0, 0}, -1.5), 1.0, cfg).verdict == ApVerdict::bounded);
    CHECK(check_ap(WeightSpec::power(Vec{0, 0}, 0.5), 1.0, cfg).verdict == ApVerdict::diverging);
}

TEST_CASE("check_ap is deterministic given the seed") {
    BallSamplerConfig cfg;
    cfg.seed = 99;
    auto a = check_ap(WeightSpec::power(Vec{0, 0, 0}, 1.3), 2.5, cfg);
    auto b = check_ap(WeightSpec::power(Vec{0, 0, 0}, 1.3), 2.5, cfg);
    CHECK(a.quotients == b.quotients);
}

TEST_CASE("ball measure near infinity") {
    SphericalizationContext ctx(Vec{0, 0}, 2.0);
    for (double r : {0.01, 0.1, 0.2})
        CHECK(muhat_ball_at_infinity(ctx, r) ==
              doctest::Approx(2 * pi * (r * r / 2 - r * r * r / 3)).epsilon(1e-10));
    std::vector<double> radii;
    for (int k = 0; k <= 20; ++k) radii.push_back(1e-3 * std::pow(10.0, k * 0.1));
    for (auto [n, p] : {std::pair{2, 1.5}, {2, 2.0}, {2, 3.0}, {3, 2.0}, {3, 3.0}}) {
        SphericalizationContext c(Vec(n, 0.0), p);
        CHECK(std::abs(ball_measure_scaling_at_infinity(c, radii) - (2 * p - n)) <= 0.1);
    }
    CHECK_THROWS_AS(ball_measure_scaling_at_infinity(ctx, {0.01, 0.3}), InvalidInput);
    CHECK_THROWS_AS(ball_measure_scaling_at_infinity(ctx, {0.01, 0.05}), InvalidInput);
}

TEST_CASE("capacity of infinity decision rule") {
    CHECK(infinity_has_zero_capacity(2.0, 2));
    CHECK_FALSE(infinity_has_zero_capacity(1.5, 2));
    CHECK(infinity_has_zero_capacity(3.0, 2));
    CHECK_FALSE(infinity_has_zero_capacity(2.9, 3));
    CHECK_THROWS_AS(infinity_has_zero_capacity(1.4, 3), HypothesisViolation);
}
