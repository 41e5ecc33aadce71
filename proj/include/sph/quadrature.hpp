#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sph/point.hpp"

namespace sph {

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);
/// Surface area of the unit sphere S^{n-1}.
double unit_sphere_area(int n);

/// Pairwise (tree) summation; result independent of how callers chunk work.
double pairwise_sum(std::span<const double> v);

/// Accumulates values in fixed blocks and reduces the block sums pairwise.
class PairwiseAccumulator {
public:
    void add(double v) {
        block_.push_back(v);
        if (block_.size() == kBlock) flush();
    }
    double total() {
        flush();
        return pairwise_sum(sums_);
    }

private:
    static constexpr std::size_t kBlock = 1024;
    void flush() {
        if (block_.empty()) return;
        sums_.push_back(pairwise_sum(block_));
        block_.clear();
    }
    std::vector<double> block_;
    std::vector<double> sums_;
};

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [a, b]. Supported orders: 1..10, 12, 16, 20, 24, 32.
Rule1D gauss_legendre(int order, double a, double b);

/// Composite Gauss-Legendre on [a, b] with `panels` equal panels.
Rule1D composite_gauss(int order, int panels, double a, double b);

/// Adaptive integral of f over [a, b]; b may be +infinity. Endpoint singularities allowed.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

/// Integral over the annulus r0 < |x - c| < r1 of a radial function f(|x - c|).
double radial_integral(int n, const std::function<double(double)>& f, double r0, double r1,
                       double rel_tol = 1e-12);

struct QuadNode {
    Vec x;
    double w;
};

/// Product rule on the ball B(center, r): Gauss in radius times a uniform
/// (2-d) or Gauss-in-cos(theta) x uniform (3-d) angular rule.
/// Weights sum to the ball volume.
std::vector<QuadNode> ball_rule(std::span<const double> center, double r, int nodes_per_ball);

}  // namespace sph
