#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "sph/pipeline.hpp"

namespace sph {

/// A subset E of the extended boundary, described by the distance to its finite part
/// (in the original frame) and whether it contains infinity.
struct BoundarySet {
    std::function<double(const double*)> dist;  // empty: no finite part
    bool includes_infinity = false;
    /// E is a null set (a point, a lower-dimensional piece of the boundary); the
    /// envelope limit is then not certified.
    bool zero_measure = false;
    /// The rest of the boundary; required for lower Perron solutions.
    std::shared_ptr<const BoundarySet> complement;

    static BoundarySet empty();
    static BoundarySet everything();
    static BoundarySet infinity_only();
    /// Union of closed axis-aligned boxes (degenerate boxes allowed).
    static BoundarySet boxes(int n, std::vector<Box> parts, bool includes_infinity = false);
};

/// f_delta(q) = max(0, 1 - d/delta), d the tangential boundary distance to E or the
/// distance to the image of infinity when E contains it.
double envelope(const ProblemFamily& family, const BoundarySet& E, double delta, const NodePoint& q);

enum class PerronSide { upper, lower };

struct PerronResult {
    ScalarField field;
    PerronSide side = PerronSide::upper;
    std::vector<double> deltas;
    std::vector<ScalarField> fields;  // one per delta
    std::vector<SolveReport> reports;
    bool monotone = true;
    double max_violation = 0.0;
    double last_decrement = 0.0;
    bool limit_certified = true;
};

/// Upper: solutions for the envelopes f_delta over a decreasing schedule, checked to
/// decrease nodewise. Lower: one minus the upper solution of the complement.
PerronResult perron_indicator(const ProblemFamily& family, const BoundarySet& E, PerronSide side,
                              std::vector<double> deltas, const SolverOptions& solver = {},
                              double monotone_tol = 1e-6);

struct HarmonicMeasure {
    std::vector<double> values;
    bool within_unit_interval = true;
    PerronResult perron;
};

/// Upper Perron values of the indicator of E at the evaluation points, clamped to [0, 1].
HarmonicMeasure pharmonic_measure(const ProblemFamily& family, const BoundarySet& E,
                                  const std::vector<PointOrInfinity>& points, std::vector<double> deltas,
                                  const SolverOptions& solver = {});

}  // namespace sph
