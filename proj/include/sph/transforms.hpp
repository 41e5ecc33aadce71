#pragma once

#include <functional>
#include <vector>

#include "sph/domain.hpp"
#include "sph/measures.hpp"

namespace sph {

enum class Frame { original, sphericalized, inverted };
const char* to_string(Frame f);

struct FieldNode {
    Vec x;
    double volume;
    double g;
};

/// Sampled upper gradient: nodes carry position, cell volume and value.
struct GradientField {
    Frame frame = Frame::original;
    std::vector<FieldNode> nodes;
};

/// Midpoint nodes of a uniform grid of spacing h over the box [lo, hi].
std::vector<FieldNode> box_nodes(const Vec& lo, const Vec& hi, double h);

GradientField sphericalize_gradient(const SphericalizationContext& ctx, const GradientField& g);
GradientField unsphericalize_gradient(const SphericalizationContext& ctx, const GradientField& g);

double energy(const GradientField& g, const WeightSpec& measure, double p);

struct EnergyComparison {
    double original;
    double transformed;
    double relative_gap;
};

double relative_gap(double a, double b);

EnergyComparison energy_equality_check(const SphericalizationContext& ctx, const GradientField& g,
                                       double p);

bool admissibility_check(double p, int n);

/// x -> c + (x - c)/|x - c|^2 with c <-> infinity.
class InversionMap {
public:
    InversionMap(double p, int n, Vec center = {});
    double p() const { return p_; }
    int n() const { return n_; }
    const Vec& center() const { return c_; }

    /// Image relative to the center: Phi(x) = (x - c)/|x - c|^2, so Phi(c) = infinity and Phi(infinity) = 0.
    PointOrInfinity forward_point(const PointOrInfinity& x) const;
    /// Inverse: y -> c + y/|y|^2.
    PointOrInfinity inverse_point(const PointOrInfinity& y) const;
    Vec forward(std::span<const double> x) const;
    Vec inverse(std::span<const double> y) const;
    /// |y|^{2(p - n)}; requires p > n/2.
    WeightSpec image_weight() const;

private:
    double p_;
    int n_;
    Vec c_;
};

struct InvertedEnergy {
    GradientField image;
    double original;
    double inverted;
    double relative_gap;
};

/// Push nodes through Phi: y = Phi(x), volume times |x - c|^{-2n}, g times |x - c|^2.
InvertedEnergy invert_gradient_and_energy(const InversionMap& map, const GradientField& g);

/// Energies of a radial gradient g(|x|) on r0 < |x| < r1 and of its image on 1/r1 < |y| < 1/r0,
/// each by composite Gauss-Legendre with panels of width about h.
EnergyComparison inversion_energy_radial(int n, double p, const std::function<double(double)>& g,
                                         double r0, double r1, double h, int order = 2);

/// Radial segments crossing the annulus r < |x - a| < R, a the context base point.
struct AnnulusCurveFamily {
    double r;
    double R;
};

struct ModulusComparison {
    double original;
    double sphericalized;
    double relative_gap;
    double admissibility_original;
    double admissibility_sphericalized;
};

ModulusComparison modulus_invariance_check(const SphericalizationContext& ctx,
                                           const AnnulusCurveFamily& family, double p);

/// Image of the domain under the map; the center must lie outside the closure of dom.
Domain invert_domain(const InversionMap& map, const Domain& dom);

/// omega_{n-1} (int_r^R t^{(1-n)/(p-1)} dt)^{1-p}.
double annulus_modulus_closed_form(int n, double p, double r, double R);

}  // namespace sph
