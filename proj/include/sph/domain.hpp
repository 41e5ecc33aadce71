#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sph/point.hpp"

namespace sph {

struct Box {
    Vec lo;
    Vec hi;
    bool finite() const;
    double max_abs() const;
};

struct DomainNode;

/// Immutable CSG description of an open set in R^n.
///
/// Thin primitives (rays, segments) have empty interior; they only matter as
/// removed sets. `contains` is the exact open-set predicate, `contains_grid`
/// thickens thin primitives to tubes of the given radius.
class Domain {
public:
    static Domain space(int n);
    /// {x : normal . x > offset}; the normal is normalized.
    static Domain halfspace(Vec normal, double offset);
    static Domain ball(Vec center, double r);
    /// {base + t dir : t >= t0}; dir is normalized.
    static Domain ray(Vec base, Vec dir, double t0);
    static Domain segment(Vec a, Vec b);
    static Domain unite(std::vector<Domain> parts);
    static Domain intersect(std::vector<Domain> parts);
    /// a minus the closure of b.
    static Domain minus(Domain a, Domain b);
    /// {y : c + y/|y|^2 in inner}, the image under inversion about c.
    static Domain pullback(Domain inner, Vec center, double image_radius);

    Domain with_feature_size(double h) const;

    /// Image under y = (x - c)/|x - c|^2. Half-spaces and balls map to half-spaces,
    /// balls or ball exteriors; thin primitives become pulled-back sets.
    Domain inverted(const Vec& c) const;

    int dim() const;
    bool contains(std::span<const double> x) const;
    bool contains_closure(std::span<const double> x) const;
    bool contains_grid(std::span<const double> x, double tube) const;

    /// Certified (conservative) tests for the open ball B(z, rho).
    bool ball_disjoint(std::span<const double> z, double rho) const;
    bool ball_contained(std::span<const double> z, double rho) const;
    /// Lower bound on dist(z, domain).
    double dist_lower_bound(std::span<const double> z) const;

    Box bbox() const;
    bool bounded() const;
    /// True when some sampled point at radius R lies in the domain.
    bool probe_unbounded(double R = 1e6) const;
    std::optional<double> feature_size() const;
    /// Largest dimension of a removed thin primitive (1 for rays and segments,
    /// 0 for points), or -1 when none is removed.
    int max_thin_dimension() const;
    /// True when some lattice ball in [-64, 64]^n is certified disjoint from the domain.
    bool has_interior_complement() const;

    std::string to_text() const;
    const DomainNode& node() const { return *node_; }

private:
    explicit Domain(std::shared_ptr<const DomainNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const DomainNode> node_;
};

namespace examples {
/// {x_n > offset}
Domain half_space(int n, double offset = 0.0);
Domain exterior_ball(int n, double r = 1.0);
/// The plane minus the segment [(-1, 0), (1, 0)].
Domain slit_plane();
Domain punctured_plane();
/// (0,1)^2 union the towers (2^-j, 2^{1-j}) x (0, 2^j), j = 1..depth.
Domain staircase(int depth);
/// Open quadrant minus the rays x_2 = 2^j x_1 >= 2^j, j = 0..depth.
Domain fingers(int depth);
/// Open quadrant minus the rays x_2 = 2^j x_1 >= 1, j = 0..depth.
Domain fingers_prime(int depth);
/// Upper half-plane minus rays r e^{i alpha pi}, r >= last binary digit position of alpha,
/// for all alpha with at most `depth` binary digits.
Domain uncountable(int depth);
Domain by_name(const std::string& name, int n = 2);
}  // namespace examples

Domain parse_domain(const std::string& text);
Domain load_domain(const std::string& path);

}  // namespace sph
