#include <doctest.h>

#include <cmath>

#include "sph/components.hpp"

using namespace sph;

namespace {
int unbounded(const std::vector<ComponentInfo>& c) {
    int u = 0;
    for (const auto& x : c) u += !x.bounded;
    return u;
}

// Unbounded components of the fingers domain outside B(0, k), truncated at R_max:
// the strip together with every finger whose mouth {1} x (2^j, 2^{j+1}) leaves the ball,
// one component per finger whose mouth lies inside the ball, and the wedge below F_0
// once its mouth {1} x (0, 1) is swallowed (k > sqrt 2).
int fingers_oracle(double k, int depth, double R_max) {
    int count = 1 + (k * k > 2.0 ? 1 : 0);
    for (int j = 0; j < depth; ++j)
        if (1.0 + std::ldexp(1.0, 2 * (j + 1)) < k * k && std::ldexp(1.0, j + 1) < R_max) ++count;
    return count;
}
}  // namespace

TEST_CASE("label components on a small grid") {
    auto g = CellGrid::covering({0, 0}, {4, 4}, 1.0);
    auto L = label_components(g, [](const double* x) { return x[0] < 1.0 || x[0] > 3.0; });
    CHECK(L.count == 2);
    CHECK(L.cells[0] == 4);
    CHECK(L.seed[0] == 0);
    CHECK(L.seed[1] == 3);
}

TEST_CASE("half-plane and exterior ball") {
    ComponentOptions o;
    o.R_max = 64;
    auto c = components_outside_ball(examples::half_space(2), {0, 0}, 1, o);
    CHECK(c.size() == 1);
    CHECK(unbounded(c) == 1);
    c = components_outside_ball(examples::exterior_ball(2), {0, 0}, 2, o);
    CHECK(c.size() == 1);
    CHECK(unbounded(c) == 1);
    o.R_max = 12;
    o.h = 0.5;
    c = components_outside_ball(examples::exterior_ball(3), {0, 0, 0}, 2, o);
    CHECK(c.size() == 1);
    CHECK(unbounded(c) == 1);
}

TEST_CASE("staircase has only bounded components outside B(0, 2)") {
    ComponentOptions o;
    o.h = 1.0 / 128;
    auto c = components_outside_ball(examples::staircase(6), {0, 0}, 2, o);
    CHECK(c.size() == 6);  // every tower pokes out of B(0, 2); tower 1 only near (1, 2)
    CHECK(unbounded(c) == 0);
}

TEST_CASE("fingers: analytic count of unbounded components") {
    ComponentOptions o;
    for (double k : {2.0, 48.0}) {
        auto c = components_outside_ball(examples::fingers(10), {0, 0}, k, o);
        CHECK(unbounded(c) == fingers_oracle(k, 10, o.R_max));
        CHECK(c.size() == static_cast<std::size_t>(unbounded(c)));
    }
    CHECK(fingers_oracle(2, 10, 1024) == 2);
    CHECK(fingers_oracle(48, 10, 1024) == 7);
}

TEST_CASE("property: refinement never loses unbounded components") {
    ComponentOptions o;
    o.R_max = 128;
    for (double k : {3.0, 9.0, 20.0}) {
        o.h = 0.25;
        const int coarse = unbounded(components_outside_ball(examples::fingers(7), {0, 0}, k, o));
        o.h = 0.125;
        const int fine = unbounded(components_outside_ball(examples::fingers(7), {0, 0}, k, o));
        CHECK(fine >= coarse);
        CHECK(fine == fingers_oracle(k, 7, 128));
    }
}

TEST_CASE("resolution guard") {
    ComponentOptions o;
    o.h = 0.5;
    CHECK_THROWS_AS(components_outside_ball(examples::staircase(3), {0, 0}, 2, o), InvalidInput);
}

TEST_CASE("finite connectivity at boundary points") {
    ConnectivityOptions co;
    co.infinity.R_max = 64;
    auto r = finitely_connected_at_boundary(examples::half_space(2), {{0.3, 0}}, {0.5}, {2.0}, co);
    CHECK(r.finitely_connected);
    CHECK(r.reports[0].N == 1);
    CHECK(r.reports[0].H.empty());
    CHECK(r.reports[1].at_infinity);
    CHECK(r.reports[1].N == 1);

    // Slit plane: two sides meet at interior slit points; one component at the tip.
    r = finitely_connected_at_boundary(examples::slit_plane(), {{0, 0}, {1, 0}}, {0.5}, {}, co);
    CHECK(r.reports[0].N == 2);
    CHECK(r.reports[1].N == 1);
    CHECK(r.finitely_connected);

    // Fingers' at a point of the x_2 axis: the finger components accumulate at it.
    r = finitely_connected_at_boundary(examples::fingers_prime(10), {{0, 2}}, {0.5}, {}, co);
    CHECK_FALSE(r.finitely_connected);
    CHECK(r.reports[0].N == 0);
    CHECK_FALSE(r.reports[0].H.empty());

    r = finitely_connected_at_boundary(examples::fingers(10), {{0, 2}}, {0.5}, {}, co);
    CHECK(r.finitely_connected);
    CHECK_THROWS_AS(finitely_connected_at_boundary(examples::half_space(2), {{0, 1}}, {0.5}, {}, co), InvalidInput);
}

TEST_CASE("directions at infinity") {
    ComponentOptions o;
    o.R_max = 64;
    auto d = directions_at_infinity(examples::half_space(2), {0, 0}, 3, o);
    CHECK(d.size() == 1);
    CHECK(d[0].ids.size() == 3);
    // Rays at angles pi/4, pi/2, 3pi/4 starting at radius 2 or 1 split the half-plane into 4 sectors.
    o.h = 1.0 / 16;
    d = directions_at_infinity(examples::uncountable(2), {0, 0}, 3, o);
    CHECK(d.size() == 4);
}
