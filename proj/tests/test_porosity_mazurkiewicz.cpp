#include <doctest.h>

#include <cmath>
#include <random>

#include "sph/mazurkiewicz.hpp"
#include "sph/porosity.hpp"

using namespace sph;

TEST_CASE("half-plane is porous at theta = 1/2 in every shell") {
    PorosityOptions o;
    auto w = porosity_witnesses(examples::half_space(2), {0, 0}, 0.5, o);
    CHECK(static_cast<int>(w.size()) == o.witness_count);
    for (const auto& x : w) {
        CHECK(x.x[1] < 0.0);
        CHECK(examples::half_space(2).ball_disjoint(x.x, 0.5 * norm(x.x)));
    }
    auto r = porosity_at_infinity(examples::half_space(3), {0, 0, 0}, o);
    CHECK(r.is_porous);
    CHECK(r.theta >= 0.5);
}

TEST_CASE("porosity of the example domains") {
    PorosityOptions o;
    CHECK(porosity_at_infinity(examples::uncountable(4), {0, 0}, o).is_porous);
    CHECK(porosity_at_infinity(examples::fingers(10), {0, 0}, o).is_porous);
    auto p = porosity_at_infinity(examples::punctured_plane(), {0, 0}, o);
    CHECK_FALSE(p.is_porous);
    CHECK(p.witnesses.empty());
    CHECK_FALSE(porosity_at_infinity(examples::exterior_ball(2), {0, 0}, o).is_porous);
}

TEST_CASE("property: porosity witnesses re-check exactly") {
    PorosityOptions o;
    std::vector<Domain> doms{examples::half_space(2), examples::uncountable(3), examples::fingers(6),
                             examples::fingers_prime(6)};
    for (const auto& d : doms) {
        auto r = porosity_at_infinity(d, {0, 0}, o);
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> U(0, 1);
        for (const auto& w : r.witnesses) {
            const double rho = w.theta * norm(w.x);
            CHECK(d.ball_disjoint(w.x, rho));
            for (int k = 0; k < 200; ++k) {
                const double s = rho * std::sqrt(U(rng)) * 0.9999, t = 6.283185307179586 * U(rng);
                CHECK_FALSE(d.contains(Vec{w.x[0] + s * std::cos(t), w.x[1] + s * std::sin(t)}));
            }
        }
    }
}

TEST_CASE("Mazurkiewicz distance: convex domains and identity") {
    MazurkiewiczOptions o;
    auto h = examples::half_space(2);
    Vec x{0.2, 0.5}, y{1.7, 1.9};
    const double m = mazurkiewicz_distance(h, x, y, o);
    CHECK(m >= dist(x, y));
    CHECK(m <= dist(x, y) + std::sqrt(2.0) * o.h);
    CHECK(mazurkiewicz_distance(h, x, x, o) == 0.0);
    SphericalizationContext ctx(Vec{0, 0}, 2.0);
    const double mh = mazurkiewicz_distance(h, x, y, o, ctx);
    CHECK(mh >= d_a(ctx, x, y));
    CHECK(mh <= d_a(ctx, x, y) + 2 * o.h);
}

TEST_CASE("Mazurkiewicz distance across a slit") {
    MazurkiewiczOptions o;
    auto s = examples::slit_plane();
    // Oracle: the best connected set is the triangle x, tip, y; its diameter is
    // min over tips T of max(|x - T|, |y - T|, |x - y|).
    auto oracle = [](const Vec& x, const Vec& y) {
        double best = INFINITY;
        for (double t : {-1.0, 1.0}) {
            const Vec T{t, 0};
            best = std::min(best, std::max({dist(x, T), dist(y, T), dist(x, y)}));
        }
        return best;
    };
    for (auto [x, y] : {std::pair<Vec, Vec>{{0, 0.25}, {0, -0.25}}, {{0.3, 0.25}, {0.3, -0.25}}, {{-0.5, 0.1}, {0.2, -0.4}}}) {
        const double m = mazurkiewicz_distance(s, x, y, o);
        CHECK(m >= oracle(x, y) - 1e-12);
        CHECK(m <= oracle(x, y) + 3 * o.h);
        CHECK(m > 1.4 * dist(x, y));
    }
}

TEST_CASE("Mazurkiewicz distance between separated points") {
    MazurkiewiczOptions o;
    auto d = Domain::unite({Domain::ball({0, 0}, 1), Domain::ball({3, 0}, 1)});
    CHECK(std::isinf(mazurkiewicz_distance(d, {0, 0}, {3, 0}, o)));
    CHECK_THROWS_AS(mazurkiewicz_distance(d, {0, 0}, {1.5, 0}, o), InvalidInput);
}
