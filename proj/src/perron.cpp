#include "sph/perron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sph/errors.hpp"

namespace sph {

BoundarySet BoundarySet::empty() {
    BoundarySet E;
    auto all = std::make_shared<BoundarySet>();
    all->dist = [](const double*) { return 0.0; };
    all->includes_infinity = true;
    E.complement = all;
    return E;
}

BoundarySet BoundarySet::everything() {
    BoundarySet E;
    E.dist = [](const double*) { return 0.0; };
    E.includes_infinity = true;
    E.complement = std::make_shared<BoundarySet>();
    return E;
}

BoundarySet BoundarySet::infinity_only() {
    BoundarySet E;
    E.includes_infinity = true;
    E.zero_measure = true;
    auto rest = std::make_shared<BoundarySet>();
    rest->dist = [](const double*) { return 0.0; };
    E.complement = rest;
    return E;
}

BoundarySet BoundarySet::boxes(int n, std::vector<Box> parts, bool includes_infinity) {
    for (const Box& b : parts) {
        require_same_dim(b.lo.size(), static_cast<std::size_t>(n), "boundary box");
        require_same_dim(b.hi.size(), static_cast<std::size_t>(n), "boundary box");
        for (int k = 0; k < n; ++k)
            if (!(b.lo[k] <= b.hi[k])) throw InvalidInput("boundary box has lo > hi");
    }
    BoundarySet E;
    E.includes_infinity = includes_infinity;
    if (parts.empty()) return E;
    E.dist = [n, parts = std::move(parts)](const double* x) {
        double best = std::numeric_limits<double>::infinity();
        for (const Box& b : parts) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                const double e = std::max({b.lo[k] - x[k], 0.0, x[k] - b.hi[k]});
                s += e * e;
            }
            best = std::min(best, s);
        }
        return std::sqrt(best);
    };
    return E;
}

double envelope(const ProblemFamily& family, const BoundarySet& E, double delta, const NodePoint& q) {
    if (q.infinity) return E.includes_infinity ? 1.0 : 0.0;
    double d = std::numeric_limits<double>::infinity();
    if (E.dist && q.x) {
        const int n = family.dim();
        const double dE = E.dist(q.x);
        const double dO = family.domain().dist_lower_bound(std::span<const double>(q.x, n));
        d = std::sqrt(std::max(0.0, dE * dE - dO * dO));
    }
    if (E.includes_infinity) d = std::min(d, family.distance_to_infinity(q));
    return std::max(0.0, 1.0 - d / delta);
}

namespace {

PerronResult upper_envelopes(const ProblemFamily& family, const BoundarySet& E, const std::vector<double>& deltas,
                             const SolverOptions& solver, double tol) {
    PerronResult R;
    R.deltas = deltas;
    R.limit_certified = !E.zero_measure;
    SolverOptions opt = solver;
    for (std::size_t j = 0; j < deltas.size(); ++j) {
        const double delta = deltas[j];
        GridProblem P = family.build([&](const NodePoint& q) { return envelope(family, E, delta, q); });
        Solution s = solve_dirichlet(P, opt);
        if (j > 0) {
            const auto& prev = R.fields.back().values;
            double decrement = 0.0;
            for (std::size_t i = 0; i < prev.size(); ++i) {
                if (s.field.kind[i] == NodeKind::inactive) continue;
                const double step = s.field.values[i] - prev[i];
                R.max_violation = std::max(R.max_violation, step);
                decrement = std::max(decrement, std::abs(step));
            }
            R.last_decrement = decrement;
        }
        opt.initial = s.field.values;
        R.reports.push_back(s.report);
        R.fields.push_back(std::move(s.field));
    }
    R.monotone = R.max_violation <= tol;
    if (!R.monotone) R.limit_certified = false;
    R.field = R.fields.back();
    return R;
}

}  // namespace

PerronResult perron_indicator(const ProblemFamily& family, const BoundarySet& E, PerronSide side,
                              std::vector<double> deltas, const SolverOptions& solver, double monotone_tol) {
    if (deltas.empty()) throw InvalidInput("delta schedule is empty");
    for (std::size_t j = 0; j < deltas.size(); ++j) {
        if (!(deltas[j] > 0.0) || !std::isfinite(deltas[j])) throw InvalidInput("delta must be positive");
        if (j > 0 && !(deltas[j] < deltas[j - 1])) throw InvalidInput("delta schedule must decrease");
    }
    if (side == PerronSide::upper) return upper_envelopes(family, E, deltas, solver, monotone_tol);
    if (!E.complement) throw InvalidInput("lower Perron solution needs the complement of E");
    PerronResult R = upper_envelopes(family, *E.complement, deltas, solver, monotone_tol);
    R.side = PerronSide::lower;
    auto flip = [](ScalarField& f) {
        for (std::size_t i = 0; i < f.values.size(); ++i)
            if (f.kind[i] != NodeKind::inactive) f.values[i] = 1.0 - f.values[i];
    };
    for (ScalarField& f : R.fields) flip(f);
    flip(R.field);
    return R;
}

HarmonicMeasure pharmonic_measure(const ProblemFamily& family, const BoundarySet& E,
                                  const std::vector<PointOrInfinity>& points, std::vector<double> deltas,
                                  const SolverOptions& solver) {
    HarmonicMeasure H;
    H.perron = perron_indicator(family, E, PerronSide::upper, std::move(deltas), solver);
    constexpr double slack = 1e-9;
    for (const auto& x : points) {
        const double v = family.evaluate(H.perron.field, x);
        if (v < -slack || v > 1.0 + slack) H.within_unit_interval = false;
        H.values.push_back(std::clamp(v, 0.0, 1.0));
    }
    return H;
}

}  // namespace sph
