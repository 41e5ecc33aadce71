#include "sph/regularity.hpp"

#include <cmath>
#include <sstream>

#include "sph/measures.hpp"

namespace sph {

GateReport om_condition_gate(const Domain& dom, double p) {
    const int n = dom.dim();
    GateReport g;
    g.p_below_Q = p < n;
    g.complement_has_interior = dom.has_interior_complement();
    g.max_thin_dimension = dom.max_thin_dimension();
    const bool thin_positive = g.max_thin_dimension >= 0 && p > n - g.max_thin_dimension;
    g.passes = g.complement_has_interior || thin_positive || g.p_below_Q;
    std::ostringstream s;
    if (g.complement_has_interior)
        s << "complement contains a ball";
    else if (thin_positive)
        s << "complement contains a " << g.max_thin_dimension << "-dimensional set of positive " << p
          << "-capacity";
    else if (g.p_below_Q)
        s << "p = " << p << " < Q = " << n;
    else
        s << "complement has zero " << p << "-capacity and p >= Q = " << n;
    g.reason = s.str();
    return g;
}

void require_om_condition(const Domain& dom, double p) {
    const GateReport g = om_condition_gate(dom, p);
    if (!g.passes) throw HypothesisViolation("domain condition fails: " + g.reason);
}

std::string to_string(RegularityVerdict v) {
    switch (v) {
        case RegularityVerdict::regular_p_lt_Q: return "regular (p<Q)";
        case RegularityVerdict::regular_no_unbounded: return "regular (no unbounded components)";
        case RegularityVerdict::regular_porosity: return "regular (porosity)";
        case RegularityVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

RegularityReport regularity_at_infinity_verdict(const Domain& dom, double p, const RegularityOptions& opt) {
    if (!(p > 1.0)) throw InvalidInput("p must exceed 1");
    const int n = dom.dim();
    RegularityReport r;
    r.gate = om_condition_gate(dom, p);
    if (!r.gate.passes) throw HypothesisViolation("domain condition fails: " + r.gate.reason);
    r.evidence.push_back("gate: " + r.gate.reason);
    if (p < n) {
        r.verdict = RegularityVerdict::regular_p_lt_Q;
        r.evidence.push_back("p < Q: infinity is always regular");
        return r;
    }
    const Vec a = opt.base.empty() ? Vec(n, 0.0) : opt.base;
    r.components = components_outside_ball(dom, a, opt.k, opt.components);
    int unbounded = 0;
    for (const auto& c : r.components) unbounded += !c.bounded;
    {
        std::ostringstream s;
        s << r.components.size() << " components outside B(a, " << opt.k << ") within R_max = "
          << opt.components.R_max << ", " << unbounded << " reaching the truncation sphere";
        r.evidence.push_back(s.str());
    }
    if (unbounded == 0) {
        r.verdict = RegularityVerdict::regular_no_unbounded;
        return r;
    }
    r.porosity = porosity_at_infinity(dom, a, opt.porosity);
    if (r.porosity->is_porous) {
        std::ostringstream s;
        s << "porous at theta = " << r.porosity->theta << " with " << r.porosity->witnesses.size() << " witnesses";
        r.evidence.push_back(s.str());
        r.verdict = RegularityVerdict::regular_porosity;
        return r;
    }
    r.evidence.push_back("no porosity witnesses in every tested shell");
    r.verdict = RegularityVerdict::inconclusive;
    return r;
}

std::string to_string(ParabolicityVerdict v) {
    switch (v) {
        case ParabolicityVerdict::parabolic_trend: return "parabolic-trend";
        case ParabolicityVerdict::non_parabolic_trend: return "non-parabolic-trend";
        case ParabolicityVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

double condenser_energy(const Domain& dom, double p, const Vec& a, double R, const ParabolicityOptions& opt,
                        const DirectionAtInfinity* direction) {
    const int n = dom.dim();
    const double r_in = opt.inner_radius, h = opt.h;
    auto dist_a = [&](const double* x) {
        double s = 0;
        for (int k = 0; k < n; ++k) s += (x[k] - a[k]) * (x[k] - a[k]);
        return std::sqrt(s);
    };
    RegionSpec spec;
    spec.h = h;
    for (int k = 0; k < n; ++k) {
        spec.lo.push_back(opt.symmetric ? a[k] : a[k] - R - 2 * h);
        spec.hi.push_back(a[k] + R + 2 * h);
    }
    spec.region = [&](const double* x) {
        const double r = dist_a(x);
        return r <= r_in || r >= R || dom.contains(std::span<const double>(x, n));
    };
    auto inside = [&](const double* x) {
        const double r = dist_a(x);
        return r > r_in && r < R && dom.contains(std::span<const double>(x, n));
    };
    auto data = [&](const double* x) { return dist_a(x) >= R ? 1.0 : 0.0; };
    GridProblem P = make_problem(spec, p, inside, data);
    if (direction && !direction->representatives.empty()) {
        const long N = P.geom.size();
        long start = P.geom.nearest(direction->representatives.front());
        if (P.kind[start] != NodeKind::interior) {
            double best = 1e300;
            double x[3];
            for (long i = 0; i < N; ++i) {
                if (P.kind[i] != NodeKind::interior) continue;
                P.geom.coords(i, x);
                const double d = dist(std::span<const double>(x, n), direction->representatives.front());
                if (d < best) {
                    best = d;
                    start = i;
                }
            }
        }
        std::vector<char> keep(N, 0);
        std::vector<long> stack{start};
        keep[start] = 1;
        while (!stack.empty()) {
            const long v = stack.back();
            stack.pop_back();
            for (int k = 0; k < n; ++k)
                for (long o : {P.geom.stride(k), -P.geom.stride(k)}) {
                    const long w = v + o;
                    if (P.kind[w] == NodeKind::interior && !keep[w]) {
                        keep[w] = 1;
                        stack.push_back(w);
                    }
                }
        }
        for (long i = 0; i < N; ++i)
            if (P.kind[i] == NodeKind::interior && !keep[i]) P.kind[i] = NodeKind::inactive;
    }
    bool reaches_one = false, has_interior = false;
    for (long i = 0; i < P.geom.size(); ++i) {
        has_interior = has_interior || P.kind[i] == NodeKind::interior;
        if (P.kind[i] == NodeKind::dirichlet && P.data[i] == 1.0) reaches_one = true;
    }
    if (!reaches_one || !has_interior) return 0.0;
    const double factor = opt.symmetric ? std::pow(2.0, n) : 1.0;
    return factor * solve_dirichlet(P, opt.solver).report.energy;
}

}  // namespace

ParabolicityResult p_parabolicity_estimate(const Domain& dom, double p, const ParabolicityOptions& opt,
                                           const DirectionAtInfinity* direction) {
    if (!(p > 1.0)) throw InvalidInput("p must exceed 1");
    if (opt.levels < 2) throw InvalidInput("at least two levels are needed for a trend");
    if (direction && static_cast<int>(direction->ids.size()) < 1)
        throw InvalidInput("direction too shallow");
    const int n = dom.dim();
    const Vec a = opt.base.empty() ? Vec(n, 0.0) : opt.base;
    ParabolicityResult res;
    std::vector<double> lj, le;
    bool any_zero = false;
    for (int j = 1; j <= opt.levels; ++j) {
        const double R = opt.inner_radius * std::pow(2.0, j + 1);
        const double e = condenser_energy(dom, p, a, R, opt, direction);
        res.outer_radii.push_back(R);
        res.cap_estimates.push_back(e);
        if (j > 1 && e > res.cap_estimates[j - 2] * (1 + 1e-6) + 1e-14) res.nonincreasing = false;
        if (e <= 0.0) {
            any_zero = true;
        } else {
            lj.push_back(std::log(static_cast<double>(j)));
            le.push_back(std::log(e));
        }
    }
    if (any_zero) {
        res.verdict = res.nonincreasing ? ParabolicityVerdict::parabolic_trend : ParabolicityVerdict::inconclusive;
        return res;
    }
    res.slope = least_squares_slope(lj, le);
    if (!res.nonincreasing)
        res.verdict = ParabolicityVerdict::inconclusive;
    else
        res.verdict = res.slope < -opt.slope_tol ? ParabolicityVerdict::parabolic_trend
                                                 : ParabolicityVerdict::non_parabolic_trend;
    return res;
}

}  // namespace sph
