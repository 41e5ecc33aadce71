#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "sph/point.hpp"

namespace sph {

enum class NodeKind : std::uint8_t { inactive = 0, interior = 1, dirichlet = 2 };

/// Node lattice origin + i h, i in [0, dims) per axis; n = 2 or 3.
struct GridGeometry {
    int n = 2;
    std::array<long, 3> dims{1, 1, 1};
    Vec origin;
    double h = 1.0;

    long size() const { return dims[0] * dims[1] * dims[2]; }
    long stride(int k) const { return k == 0 ? 1 : k == 1 ? dims[0] : dims[0] * dims[1]; }
    std::array<long, 3> multi(long idx) const {
        return {idx % dims[0], (idx / dims[0]) % dims[1], idx / (dims[0] * dims[1])};
    }
    long index(const std::array<long, 3>& m) const { return m[0] + dims[0] * (m[1] + dims[1] * m[2]); }
    void coords(long idx, double* x) const;
    Vec coords(long idx) const;
    /// Lattice node closest to x (clamped to the grid).
    long nearest(std::span<const double> x) const;
    bool on_border(long idx) const;
};

/// Bounded weighted p-energy problem on a node lattice.
///
/// Cell c is the cube with lower corner node c; it is active when its n + 1
/// forward-difference nodes (c and c + e_k) are all active and either one of them is
/// interior or the cell centre lies in the domain.
struct GridProblem {
    GridGeometry geom;
    std::vector<NodeKind> kind;
    std::vector<double> data;    // Dirichlet values; initial guess at interior nodes
    std::vector<double> weight;  // per cell, empty means w = 1
    std::vector<char> cell_inside;  // per cell: centre in the domain (may be empty)
    double p = 2.0;
    long infinity_node = -1;
    bool infinity_node_active = false;

    long count(NodeKind k) const;
    double cell_weight(long c) const { return weight.empty() ? 1.0 : weight[c]; }
    bool cell_active(long c) const;
    /// Checks the invariants: no interior node on the lattice border, positive finite
    /// weights on active cells, every interior component reaches a Dirichlet node.
    void validate() const;
};

struct ScalarField {
    GridGeometry geom;
    std::vector<NodeKind> kind;
    std::vector<double> values;

    /// Multilinear interpolation when the enclosing cell's corners are active,
    /// otherwise the nearest active node value.
    double at(std::span<const double> x) const;
    double min_active() const;
    double max_active() const;
};

/// Box region with nodes lo + i h for i = 0 .. round((hi - lo)/h), surrounded by one
/// ghost layer of inactive nodes. Nodes outside `region` are also inactive; region
/// faces inside the box therefore carry natural boundary conditions.
struct RegionSpec {
    Vec lo;
    Vec hi;
    double h;
    std::function<bool(const double*)> region;  // empty: whole box
};

using PointFn = std::function<double(const double*)>;
using CellWeightFn = std::function<double(const double* lower_corner, double h)>;

/// Nodes in the domain become interior; nodes of the region outside the domain that
/// share an active cell with an interior node become Dirichlet nodes carrying `boundary`.
GridProblem make_problem(const RegionSpec& spec, double p, const std::function<bool(const double*)>& inside,
                         const PointFn& boundary, const CellWeightFn& cell_weight = {});

/// Average of f over the cube [corner, corner + h] by a tensor Gauss rule, with
/// `depth` levels of bisection towards a singular point when it touches the cell.
double cell_average(int n, const std::function<double(const double*)>& f, const double* corner, double h,
                    int order = 3, const double* singular = nullptr, int depth = 6);

}  // namespace sph
