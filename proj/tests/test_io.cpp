#include <doctest.h>

#include <sstream>

#include "sph/errors.hpp"
#include "sph/io.hpp"

using namespace sph;

TEST_CASE("field csv round trip") {
    RegionSpec spec{{-1, -1}, {1, 1}, 0.1, {}};
    auto P = make_problem(spec, 2.0, [](const double* x) { return x[0] * x[0] + x[1] * x[1] < 0.8; },
                          [](const double* x) { return x[0] / 3.0; });
    auto s = solve_dirichlet(P);
    std::stringstream ss;
    write_field_csv(ss, s.field);
    CHECK(ss.str().rfind("# n h origin_0 origin_1 dims_0 dims_1\n# 2 0.1 -1.1 -1.1 23 23\n", 0) == 0);
    const ScalarField back = read_field_csv(ss);
    CHECK(back.geom.dims == s.field.geom.dims);
    CHECK(back.kind == s.field.kind);
    for (std::size_t i = 0; i < back.values.size(); ++i)
        if (back.kind[i] != NodeKind::inactive) CHECK(back.values[i] == s.field.values[i]);
    std::istringstream bad("x,y\n");
    CHECK_THROWS_AS(read_field_csv(bad), InvalidInput);
}

TEST_CASE("report json keys") {
    SolveReport r;
    r.energy = 1.25;
    r.iterations = 7;
    r.eps_schedule = {1e-2, 1e-3};
    r.u_min = -1;
    r.u_max = 2;
    const auto j = report_json(r);
    for (const char* k : {"energy", "iters", "grad_norm", "eps_schedule", "min", "max"}) CHECK(j.contains(k));
    CHECK(j["iters"] == 7);
    CHECK(j["eps_schedule"].size() == 2);
}

TEST_CASE("config files") {
    const Config c = Config::parse("p = 2.5\n[grid]\nh = 0.015625\nn = 3\n[solver]\ngrad_tol = 1e-9\nname = x\n");
    CHECK(c.number("p", 0) == 2.5);
    CHECK(c.number("grid.h", 0) == 0.015625);
    CHECK(c.integer("grid.n", 2) == 3);
    CHECK(c.number("solver.grad_tol", 0) == 1e-9);
    CHECK(c.number("missing", 4.0) == 4.0);
    CHECK(c.get("solver.name", "") == "x");
    CHECK_THROWS_AS(c.number("solver.name", 0), InvalidInput);
    CHECK_THROWS_AS(c.integer("p", 0), InvalidInput);
    CHECK(parse_double("0.1") == 0.1);
    CHECK(format_double(0.1) == "0.1");
    CHECK_THROWS_AS(parse_double("1.5x"), InvalidInput);
}
