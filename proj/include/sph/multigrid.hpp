#pragma once

#include <array>
#include <memory>
#include <vector>

#include "sph/grid.hpp"

namespace sph {

/// Symmetric operator on a node lattice stored by half stencil: slot s of node i holds
/// A(i, i + offset[s]) for the nonnegative linear offsets; slot 0 is the diagonal.
/// Rows and columns of nodes that are not unknowns are zero.
struct StencilOperator {
    GridGeometry geom;
    std::vector<std::array<int, 3>> deltas;
    std::vector<long> offsets;
    std::vector<char> unknown;
    std::vector<double> coef;
    std::vector<long> active;  // unknown nodes in increasing order

    int slots() const { return static_cast<int>(offsets.size()); }
    long size() const { return geom.size(); }
    void reset(const GridGeometry& g, std::vector<std::array<int, 3>> half_deltas, std::vector<char> unknowns);
    /// Adds a to A(i, j) and A(j, i) (once when i == j); both must be unknowns.
    void add(long i, long j, double a);
    int slot_of(long offset) const;
    void apply(const std::vector<double>& x, std::vector<double>& y) const;
    /// Symmetric Gauss-Seidel: forward then backward lexicographic sweep.
    void sgs(std::vector<double>& x, const std::vector<double>& b, int sweeps) const;
    void gauss_seidel(std::vector<double>& x, const std::vector<double>& b, bool forward) const;
    /// Recomputes `active` from `unknown`.
    void index_unknowns();
    long unknown_count() const { return static_cast<long>(active.size()); }
};

/// Forward-difference half stencil (diagonal, e_k, e_l - e_k).
std::vector<std::array<int, 3>> forward_difference_deltas(int n);
/// Full 3^n half stencil of Galerkin coarse operators.
std::vector<std::array<int, 3>> box_deltas(int n);

/// Galerkin geometric multigrid V(1,1) cycle with multilinear interpolation.
class Multigrid {
public:
    Multigrid();
    ~Multigrid();
    Multigrid(Multigrid&&) noexcept;
    Multigrid& operator=(Multigrid&&) noexcept;

    void build(const StencilOperator& fine, long coarsest_unknowns = 3000);
    /// z = M^{-1} r, one cycle started from zero.
    void apply(const std::vector<double>& r, std::vector<double>& z) const;
    int levels() const;
    bool built() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct PcgResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Preconditioned conjugate gradients for A x = b from the given x.
PcgResult pcg(const StencilOperator& A, const Multigrid& M, const std::vector<double>& b, std::vector<double>& x,
              double rtol, int max_iterations);

}  // namespace sph
