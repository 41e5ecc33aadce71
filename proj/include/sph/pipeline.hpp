#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "sph/domain.hpp"
#include "sph/grid.hpp"
#include "sph/solver.hpp"

namespace sph {

/// A lattice node as seen by boundary data: its point in the original space (absent
/// for the image of infinity) and its grid coordinates.
struct NodePoint {
    const double* x = nullptr;
    const double* y = nullptr;
    bool infinity = false;
};

using BoundaryValue = std::function<double(const NodePoint&)>;

/// Builds grid problems for one domain and exponent from varying boundary data.
class ProblemFamily {
public:
    virtual ~ProblemFamily() = default;
    virtual int dim() const = 0;
    virtual double p() const = 0;
    virtual const Domain& domain() const = 0;
    /// Distance of a node to the image of infinity, in the frame where infinity is a
    /// point (infinite when the family has no such point).
    virtual double distance_to_infinity(const NodePoint& q) const;
    virtual GridProblem build(const BoundaryValue& f) const = 0;
    /// Grid point representing x of the original space (nullopt for infinity when the
    /// family has no such point).
    virtual std::optional<Vec> to_grid(const PointOrInfinity& x) const = 0;
    /// Value of a field at an original-space point.
    double evaluate(const ScalarField& u, const PointOrInfinity& x) const;
    /// Original-space point of a grid point (nullopt for the image of infinity).
    virtual std::optional<Vec> from_grid(std::span<const double> y) const = 0;
};

/// Bounded domain solved directly on a box grid; the grid frame is the original frame.
class BoundedFamily : public ProblemFamily {
public:
    BoundedFamily(Domain dom, double p, double h, double margin = 0.0);
    int dim() const override { return dom_.dim(); }
    double p() const override { return p_; }
    const Domain& domain() const override { return dom_; }
    GridProblem build(const BoundaryValue& f) const override;
    std::optional<Vec> to_grid(const PointOrInfinity& x) const override;
    std::optional<Vec> from_grid(std::span<const double> y) const override;

private:
    Domain dom_;
    double p_;
    double h_;
    Box box_;
};

enum class TransformKind { inversion, sphericalization };

struct PipelineOptions {
    TransformKind transform = TransformKind::inversion;
    Vec center;              // inversion center, must lie outside the closure of the domain
    Vec base;                // sphericalization base point a
    double h = 1.0 / 64;     // grid spacing in the grid frame
    double truncation = 64;  // sphericalization: radius of the infinity pole about a
    /// Overrides the capacity rule for the infinity node (testing only).
    std::optional<bool> force_infinity_active;
};

/// Unbounded domain mapped to a bounded grid. Inversion: y = (x - c)/|x - c|^2 with
/// cell weights |y|^{2(p - n)}; infinity becomes the lattice node y = 0. Sphericalization:
/// the grid is the original frame truncated at |x - a| = truncation, the truncation sphere
/// being the infinity pole, with weights (1 + |x - a|)^{2p} times the muhat_a density.
/// The infinity node carries data iff p < Q.
class PipelineFamily : public ProblemFamily {
public:
    PipelineFamily(Domain dom, double p, PipelineOptions opt);
    int dim() const override { return dom_.dim(); }
    double p() const override { return p_; }
    const Domain& domain() const override { return dom_; }
    double distance_to_infinity(const NodePoint& q) const override;
    bool infinity_node_active() const { return infinity_active_; }
    const PipelineOptions& options() const { return opt_; }
    GridProblem build(const BoundaryValue& f) const override;
    std::optional<Vec> to_grid(const PointOrInfinity& x) const override;
    std::optional<Vec> from_grid(std::span<const double> y) const override;

private:
    Domain dom_;
    double p_;
    PipelineOptions opt_;
    bool infinity_active_;
    double image_radius_ = 0.0;
};

struct UnboundedSolution {
    Solution solution;
    std::shared_ptr<PipelineFamily> family;
    bool infinity_node_active = false;
    /// u(x) = u_hat(Phi(x)).
    double operator()(const PointOrInfinity& x) const { return family->evaluate(solution.field, x); }
};

/// Data f on the finite boundary (continuous extension to the complement) and the value
/// at infinity, required iff p < Q.
UnboundedSolution solve_unbounded(const Domain& dom, double p, const std::function<double(const double*)>& f,
                                  std::optional<double> value_at_infinity, const PipelineOptions& opt,
                                  const SolverOptions& solver = {});

}  // namespace sph
