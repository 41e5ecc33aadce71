#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sph/barrier.hpp"
#include "sph/components.hpp"
#include "sph/errors.hpp"
#include "sph/measures.hpp"
#include "sph/perron.hpp"
#include "sph/pipeline.hpp"
#include "sph/porosity.hpp"
#include "sph/problems.hpp"
#include "sph/regularity.hpp"
#include "sph/transforms.hpp"

using namespace sph;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::require(bool ok, const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    std::printf("  %s %s\n", ok ? "ok  " : "FAIL", buf);
    std::fflush(stdout);
    if (!ok) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += buf;
    }
}

PipelineOptions inversion(Vec c, double h) {
    PipelineOptions o;
    o.center = std::move(c);
    o.h = h;
    return o;
}

Outcome c1() {
    Outcome out;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> U(0, 5), B(-3, 3), P(0.1, 4);
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 2;
        Vec base(n), lo(n, -4), hi(n, 4);
        for (auto& b : base) b = B(rng);
        SphericalizationContext ctx(base, std::max(1.0, n / 2.0) + P(rng));
        GradientField g{Frame::original, box_nodes(lo, hi, n == 2 ? 0.25 : 0.5)};
        for (auto& nd : g.nodes) nd.g = U(rng);
        worst = std::max(worst, energy_equality_check(ctx, g, ctx.p()).relative_gap);
    }
    out.require(worst <= 1e-12, "max relative gap over 100 fields %.3e <= 1e-12", worst);
    return out;
}

Outcome c2() {
    Outcome out;
    const std::vector<std::pair<const char*, std::function<double(double)>>> tests{
        {"1/r", [](double r) { return 1 / r; }},
        {"r^-1/2", [](double r) { return 1 / std::sqrt(r); }},
        {"exp(r)", [](double r) { return std::exp(r); }},
    };
    for (double p : {1.5, 2.0, 3.0})
        for (const auto& [name, g] : tests) {
            const double a = inversion_energy_radial(2, p, g, 1, 2, 1.0 / 128).relative_gap;
            const double b = inversion_energy_radial(2, p, g, 1, 2, 1.0 / 256).relative_gap;
            out.require(a <= 1e-6, "p=%.1f g=%s gap(1/128)=%.3e <= 1e-6", p, name, a);
            // Round-off floor: once the gap is at machine level the ratio carries no information.
            const bool floor = b <= 1e-13;
            out.require(floor || a / b >= 3.5, "p=%.1f g=%s gap ratio %.2f >= 3.5 (gap(1/256)=%.3e)", p, name,
                        a / b, b);
        }
    return out;
}

Outcome c3() {
    Outcome out;
    for (int n : {2, 3})
        for (double p : {1.75, 2.0, 3.0}) {
            SphericalizationContext ctx(Vec(n, 0.0), p);
            const double m = mu_a_total_mass(ctx), bound = mu_a_mass_bound(n);
            out.require(m <= 0.99 * bound, "n=%d p=%.1f mu_a=%.6f bound=%.6f margin=%.1f%%", n, p, m, bound,
                        100 * (1 - m / bound));
        }
    return out;
}

Outcome c4() {
    Outcome out;
    std::vector<double> radii;
    for (int k = 0; k <= 20; ++k) radii.push_back(1e-3 * std::pow(10.0, k * 0.1));
    for (auto [n, p] : {std::pair{2, 1.5}, {2, 2.0}, {2, 3.0}, {3, 2.0}, {3, 3.0}}) {
        SphericalizationContext ctx(Vec(n, 0.0), p);
        const double s = ball_measure_scaling_at_infinity(ctx, radii);
        out.require(std::abs(s - (2 * p - n)) <= 0.1, "n=%d p=%.1f slope=%.4f expected %.1f", n, p, s, 2 * p - n);
    }
    return out;
}

Outcome c5() {
    Outcome out;
    const std::vector<double> ps{1.5, 2.0, 2.5, 3.0, 4.0};
    const std::vector<std::vector<double>> alphas{{-1.5, -0.5, 0.5, 2.5, 7.0}, {-2.5, -1.0, 0.5, 2.5, 7.0}};
    BallSamplerConfig cfg;
    for (int n : {2, 3})
        for (double p : ps)
            for (double alpha : alphas[n - 2]) {
                const double hi = n * (p - 1);
                const bool bounded = -n < alpha && alpha < hi;
                const double margin = std::min(std::abs(alpha + n), std::abs(alpha - hi));
                const ApVerdict v = check_ap(WeightSpec::power(Vec(n, 0.0), alpha), p, cfg).verdict;
                const bool ok = v == (bounded ? ApVerdict::bounded : ApVerdict::diverging) ||
                                (margin < 0.25 && v == ApVerdict::inconclusive);
                out.require(ok, "n=%d p=%.1f alpha=%.1f verdict=%s expected %s", n, p, alpha, to_string(v).c_str(),
                            bounded ? "bounded" : "diverging");
            }
    return out;
}

Outcome c6() {
    Outcome out;
    for (int n : {2, 3})
        for (double p : {1.5, 2.0, 3.0, 4.0}) {
            const double h = 1.0 / 64;
            const double e1 = radial_sup_error(solve_dirichlet(annulus_problem(n, p, h)).field, p);
            const double e2 = radial_sup_error(solve_dirichlet(annulus_problem(n, p, h / 2)).field, p);
            out.require(e1 <= 5 * h, "n=%d p=%.1f err(1/64)=%.3e <= %.3e", n, p, e1, 5 * h);
            out.require(e2 <= 0.55 * e1, "n=%d p=%.1f err(1/128)/err(1/64)=%.3f <= 0.55", n, p, e2 / e1);
        }
    return out;
}

Outcome c7() {
    Outcome out;
    const PipelineFamily fam(examples::half_space(2, 0.0), 2.0, inversion({0, -1}, 1.0 / 512));
    auto w = pharmonic_measure(fam, BoundarySet::boxes(2, {{{-1, 0}, {1, 0}}}), {PointOrInfinity({0.0, 1.0})},
                               {0.1, 0.05, 0.025, 0.0125});
    out.require(std::abs(w.values[0] - 0.5) <= 0.01, "omega_2 at (0,1) = %.5f, |.-1/2| <= 0.01", w.values[0]);
    return out;
}

Outcome c8() {
    Outcome out;
    const PipelineFamily fam(examples::half_space(3, 0.0), 2.0, inversion({0, 0, -1}, 1.0 / 64));
    auto w = pharmonic_measure(fam, BoundarySet::infinity_only(), {PointOrInfinity({0.0, 0.0, 1.0})},
                               {0.2, 0.1, 0.05, 0.025});
    out.require(w.values[0] <= 0.02, "omega_2({inf}) at (0,0,1) = %.5f <= 0.02 (delta=0.025)", w.values[0]);
    for (double k : {4.0, 16.0, 64.0}) {
        const BarrierReport r = barrier_check(BarrierFormula::subcritical, 3, 2.0, k);
        out.require(r.passes(), "barrier k=%g residual=%.3e boundary_min=%.3e liminf=%.3e decay_excess=%.3e", k,
                    r.min_scaled_residual, r.min_boundary_value, r.liminf_at_infinity, r.max_decay_excess);
    }
    return out;
}

Outcome c9() {
    Outcome out;
    struct Case {
        int n;
        double p;
        double R;
    };
    for (const Case c : {Case{2, 2.0, 8.0}, Case{2, 3.0, 8.0}, Case{3, 2.0, 2.0}}) {
        const int n = c.n;
        Condenser cond{n, [n](const double* x) {
                           double s = 0;
                           for (int k = 0; k < n; ++k) s += x[k] * x[k];
                           return s <= 1.0;
                       },
                       c.R, true};
        const double cap = variational_capacity(cond, c.p, 1.0 / 64).capacity;
        const double exact = annulus_capacity(n, c.p, 1.0, c.R);
        const double err = std::abs(cap - exact) / exact;
        out.require(err <= 0.02, "n=%d p=%.1f B(0,1) in B(0,%g): cap=%.5f exact=%.5f rel err=%.2f%%", n, c.p, c.R,
                    cap, exact, 100 * err);
    }
    out.require(std::abs(annulus_capacity(2, 2.0, 1.0, 8.0) - 2 * pi / std::log(8.0)) <= 1e-12,
                "closed form 2 pi / log 8 = %.6f", 2 * pi / std::log(8.0));
    return out;
}

double step(const double* x) { return 0.5 + 0.5 * std::tanh(x[0]); }

Outcome c10() {
    Outcome out;
    struct Pair {
        double p;
        int Q;
    };
    const std::vector<Pair> pairs{{1.5, 2}, {2.0, 2}, {2.5, 2}, {3.0, 2}, {4.0, 2},
                                  {1.75, 3}, {2.0, 3}, {2.9, 3}, {3.0, 3}, {4.0, 3}};
    for (const Pair& pq : pairs) {
        const int n = pq.Q;
        const bool zero = infinity_has_zero_capacity(pq.p, pq.Q);
        out.require(zero == (pq.p >= pq.Q), "p=%.2f Q=%d zero capacity=%d", pq.p, pq.Q, zero);
        const Domain dom = examples::half_space(n, 0.5);
        const PipelineOptions opt = inversion(Vec(n, 0.0), n == 2 ? 1.0 / 32 : 1.0 / 8);
        const auto a = solve_unbounded(dom, pq.p, step, 0.0, opt);
        const auto b = solve_unbounded(dom, pq.p, step, 1.0, opt);
        out.require(a.infinity_node_active == !zero, "p=%.2f Q=%d infinity node active=%d", pq.p, pq.Q,
                    a.infinity_node_active);
        const auto& fa = a.solution.field;
        const auto& fb = b.solution.field;
        if (zero) {
            double diff = 0;
            for (std::size_t i = 0; i < fa.values.size(); ++i) diff = std::max(diff, std::abs(fa.values[i] - fb.values[i]));
            out.require(diff <= 1e-8, "p=%.2f Q=%d max change under infinity datum 0 -> 1: %.3e", pq.p, pq.Q, diff);
        } else {
            const long inf = fb.geom.nearest(Vec(n, 0.0));
            bool threw = false;
            try {
                solve_unbounded(dom, pq.p, step, std::nullopt, opt);
            } catch (const InvalidInput&) {
                threw = true;
            }
            out.require(fb.kind[inf] == NodeKind::dirichlet && fb.values[inf] == 1.0 && threw,
                        "p=%.2f Q=%d infinity node is Dirichlet with the datum; missing datum rejected", pq.p, pq.Q);
        }
    }
    return out;
}

Outcome c11() {
    Outcome out;
    RegularityOptions ro;
    ro.components.h = 1.0 / 128;
    const RegularityReport r = regularity_at_infinity_verdict(examples::staircase(6), 2.0, ro);
    out.require(r.verdict == RegularityVerdict::regular_no_unbounded, "staircase verdict: %s",
                to_string(r.verdict).c_str());

    PorosityOptions po;
    const auto w = porosity_witnesses(examples::half_space(2), {0, 0}, 0.5, po);
    std::vector<bool> seen(po.witness_count, false);
    bool disjoint = true;
    for (const auto& x : w) {
        const int s = x.shell - po.first_shell;
        if (s >= 0 && s < po.witness_count) seen[s] = true;
        disjoint = disjoint && examples::half_space(2).ball_disjoint(x.x, 0.5 * norm(x.x));
    }
    const long covered = std::count(seen.begin(), seen.end(), true);
    out.require(covered == po.witness_count && disjoint, "half-plane theta=1/2 witnesses in %ld of %d shells",
                covered, po.witness_count);

    ConnectivityOptions co;
    const auto fc = finitely_connected_at_boundary(examples::fingers_prime(10), {{0, 2}}, {0.5}, {}, co);
    out.require(!fc.finitely_connected, "fingers-prime at (0,2): finitely connected=%d", fc.finitely_connected);
    return out;
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

Outcome c12() {
    Outcome out;
    std::mt19937_64 rng(2024);
    const PipelineFamily fam(examples::half_space(2, 0.0), 3.0, inversion({0, -1}, 1.0 / 64));
    const std::vector<double> deltas{0.8, 0.4, 0.2};
    for (int t = 0; t < 20; ++t) {
        const BoundarySet E = random_intervals(rng);
        const auto up = perron_indicator(fam, E, PerronSide::upper, deltas);
        const auto lo = perron_indicator(fam, E, PerronSide::lower, deltas);
        double worst = -1;
        for (std::size_t i = 0; i < up.field.values.size(); ++i)
            if (up.field.kind[i] != NodeKind::inactive) worst = std::max(worst, lo.field.values[i] - up.field.values[i]);
        out.require(worst <= 1e-6 && up.monotone, "set %d: max(lower - upper)=%.3e, upper monotone=%d (violation %.2e)",
                    t, worst, up.monotone, up.max_violation);
    }
    return out;
}

Outcome c13() {
    Outcome out;
    struct Case {
        int n;
        double h;
        int levels;
        ParabolicityVerdict expect;
    };
    for (const Case c : {Case{2, 1.0 / 16, 4, ParabolicityVerdict::parabolic_trend},
                         Case{3, 1.0 / 12, 3, ParabolicityVerdict::non_parabolic_trend}}) {
        ParabolicityOptions opt;
        opt.symmetric = true;
        opt.h = c.h;
        opt.levels = c.levels;
        const ParabolicityResult r = p_parabolicity_estimate(examples::exterior_ball(c.n), 2.0, opt);
        out.require(r.verdict == c.expect, "n=%d p=2 verdict=%s slope=%.3f", c.n, to_string(r.verdict).c_str(),
                    r.slope);
        for (std::size_t j = 0; j < r.cap_estimates.size(); ++j) {
            const double exact = annulus_capacity(c.n, 2.0, 1.0, r.outer_radii[j]);
            const double err = std::abs(r.cap_estimates[j] - exact) / exact;
            out.require(err <= 0.05, "n=%d R=%g energy=%.5f closed form=%.5f rel err=%.2f%%", c.n, r.outer_radii[j],
                        r.cap_estimates[j], exact, 100 * err);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13};
    std::vector<int> which;
    if (argc < 2) {
        for (int k = 1; k <= 13; ++k) which.push_back(k);
    } else {
        for (int a = 1; a < argc; ++a) which.push_back(std::atoi(argv[a]));
    }
    int failures = 0;
    for (int k : which) {
        if (k < 1 || k > 13) {
            std::fprintf(stderr, "unknown criterion %d\n", k);
            return 2;
        }
        Outcome o;
        try {
            o = criteria[k - 1]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %d: %s%s%s\n", k, o.pass ? "PASS" : "FAIL", o.detail.empty() ? "" : " ",
                    o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
