#pragma once

#include <optional>

#include "sph/geometry.hpp"
#include "sph/domain.hpp"

namespace sph {

struct MazurkiewiczOptions {
    double h = 1.0 / 32;
    /// Half-width of the search box beyond the bounding box of {x, y}.
    double margin = 4.0;
    /// Candidate centres per axis for the bottleneck searches.
    int centers_per_axis = 12;
};

/// Upper estimate of the Mazurkiewicz distance: the smallest diameter of a grid path
/// joining x and y inside the domain. Euclidean frame unless `ctx` is given, in which
/// case diameters use d_a (the upper end of the chain-metric enclosure).
/// Returns +inf when x and y fall into different grid components.
double mazurkiewicz_distance(const Domain& dom, const Vec& x, const Vec& y, const MazurkiewiczOptions& opt,
                             const std::optional<SphericalizationContext>& ctx = std::nullopt);

}  // namespace sph
