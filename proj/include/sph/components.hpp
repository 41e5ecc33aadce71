#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "sph/domain.hpp"

namespace sph {

/// Uniform cell-centred grid over a box in R^2 or R^3.
struct CellGrid {
    int n = 2;
    std::array<long, 3> dims{1, 1, 1};
    Vec origin;
    double h = 1.0;

    static CellGrid covering(const Vec& lo, const Vec& hi, double h);
    long size() const { return dims[0] * dims[1] * dims[2]; }
    void center(long idx, double* x) const;
    Vec center(long idx) const;
};

struct Labeling {
    CellGrid grid;
    std::vector<std::int32_t> label;  // -1 outside
    int count = 0;
    std::vector<long> seed;   // first cell of each component in index order
    std::vector<long> cells;  // cell count per component
};

/// Face-neighbour components of the cells whose centres satisfy `inside`.
Labeling label_components(const CellGrid& g, const std::function<bool(const double*)>& inside);

struct ComponentOptions {
    double h = 0.25;
    double R_max = 1024.0;
    /// Radius of the tube that stands in for thin primitives; negative means h/2.
    double tube = -1.0;
};

struct ComponentInfo {
    int id;
    bool bounded;
    Vec representative;
    long cells;
    double max_radius;
};

/// Components of the domain minus the closed ball B(a, k), within |x - a| < R_max.
std::vector<ComponentInfo> components_outside_ball(const Domain& dom, const Vec& a, double k,
                                                   const ComponentOptions& opt);

/// Throws InvalidInput when h exceeds half the domain's declared feature size.
void check_resolution(const Domain& dom, double h);

struct ConnectivityReport {
    bool at_infinity = false;
    Vec x;
    double r = 0.0;
    int N = 0;
    std::vector<int> H;
    /// Distance from x to H (finite probes) or outer radius of H (infinity).
    double h_extent = 0.0;
    std::vector<int> N_by_resolution;
    std::vector<double> h_extent_by_resolution;
    bool finitely_connected = true;
};

struct FiniteConnectivity {
    std::vector<ConnectivityReport> reports;
    bool finitely_connected = true;
};

struct ConnectivityOptions {
    /// Resolutions used for finite probes: h0, h0/2, ..., `levels` of them.
    double h0 = 1.0 / 64;
    int levels = 3;
    ComponentOptions infinity{};
    Vec base;  // a, defaults to the origin
};

FiniteConnectivity finitely_connected_at_boundary(const Domain& dom, const std::vector<Vec>& probes,
                                                  const std::vector<double>& radii,
                                                  const std::vector<double>& infinity_radii,
                                                  const ConnectivityOptions& opt);

/// Nested unbounded components Omega_1 > Omega_2 > ... at levels k = 1..K.
struct DirectionAtInfinity {
    std::vector<int> ids;
    std::vector<Vec> representatives;
};

std::vector<DirectionAtInfinity> directions_at_infinity(const Domain& dom, const Vec& a, int K,
                                                        const ComponentOptions& opt);

}  // namespace sph
