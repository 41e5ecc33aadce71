#include "sph/quadrature.hpp"

#include "sph/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace sph {

double unit_ball_volume(int n) {
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

namespace {

template <int N>
Rule1D boost_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    Rule1D r;
    // Boost stores the nonnegative half of a symmetric rule.
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
            r.nodes.push_back(0.0);
            r.weights.push_back(w[i]);
        } else {
            r.nodes.push_back(x[i]);
            r.weights.push_back(w[i]);
            r.nodes.push_back(-x[i]);
            r.weights.push_back(w[i]);
        }
    }
    return r;
}

Rule1D reference_rule(int order) {
    switch (order) {
        case 1: return Rule1D{{0.0}, {2.0}};
        case 2: return boost_rule<2>();
        case 3: return boost_rule<3>();
        case 4: return boost_rule<4>();
        case 5: return boost_rule<5>();
        case 6: return boost_rule<6>();
        case 7: return boost_rule<7>();
        case 8: return boost_rule<8>();
        case 9: return boost_rule<9>();
        case 10: return boost_rule<10>();
        case 12: return boost_rule<12>();
        case 16: return boost_rule<16>();
        case 20: return boost_rule<20>();
        case 24: return boost_rule<24>();
        case 32: return boost_rule<32>();
        default: throw InvalidInput("unsupported Gauss-Legendre order " + std::to_string(order));
    }
}

}  // namespace

Rule1D gauss_legendre(int order, double a, double b) {
    Rule1D ref = reference_rule(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
        ref.nodes[i] = mid + half * ref.nodes[i];
        ref.weights[i] *= half;
    }
    return ref;
}

Rule1D composite_gauss(int order, int panels, double a, double b) {
    if (panels < 1) throw InvalidInput("composite rule needs at least one panel");
    Rule1D out;
    const double w = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        Rule1D r = gauss_legendre(order, a + k * w, a + (k + 1) * w);
        out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
        out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
    }
    return out;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (!(b > a)) return 0.0;
    const double tol = rel_tol;
    if (std::isinf(b)) {
        boost::math::quadrature::exp_sinh<double> es;
        return es.integrate([&](double t) { return f(a + t); }, 0.0,
                            std::numeric_limits<double>::infinity(), tol);
    }
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b, tol);
}

double radial_integral(int n, const std::function<double(double)>& f, double r0, double r1,
                       double rel_tol) {
    const double area = unit_sphere_area(n);
    return area * integrate([&](double t) { return f(t) * std::pow(t, n - 1); }, r0, r1, rel_tol);
}

std::vector<QuadNode> ball_rule(std::span<const double> center, double r, int nodes_per_ball) {
    const int n = static_cast<int>(center.size());
    if (n != 2 && n != 3) throw InvalidInput("ball_rule supports n = 2 or 3");
    if (!(r > 0)) throw InvalidInput("ball radius must be positive");
    std::vector<QuadNode> out;
    if (n == 2) {
        // nr x ntheta with nr * ntheta = nodes_per_ball, nr = ntheta when square.
        int nr = static_cast<int>(std::lround(std::sqrt(nodes_per_ball)));
        int nt = nodes_per_ball / nr;
        if (nr * nt != nodes_per_ball) throw InvalidInput("nodes_per_ball must factor as nr*ntheta");
        const Rule1D rad = gauss_legendre(nr, 0.0, r);
        for (std::size_t i = 0; i < rad.nodes.size(); ++i) {
            const double t = rad.nodes[i];
            for (int k = 0; k < nt; ++k) {
                const double th = 2.0 * std::numbers::pi * (k + 0.5) / nt;
                out.push_back({{center[0] + t * std::cos(th), center[1] + t * std::sin(th)},
                               rad.weights[i] * t * 2.0 * std::numbers::pi / nt});
            }
        }
        return out;
    }
    const int m = static_cast<int>(std::lround(std::cbrt(nodes_per_ball)));
    if (m * m * m != nodes_per_ball) throw InvalidInput("nodes_per_ball must be a cube in 3-d");
    const Rule1D rad = gauss_legendre(m, 0.0, r);
    const Rule1D cz = gauss_legendre(m, -1.0, 1.0);
    for (std::size_t i = 0; i < rad.nodes.size(); ++i) {
        const double t = rad.nodes[i];
        for (std::size_t j = 0; j < cz.nodes.size(); ++j) {
            const double z = cz.nodes[j];
            const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            for (int k = 0; k < m; ++k) {
                const double ph = 2.0 * std::numbers::pi * (k + 0.5) / m;
                out.push_back({{center[0] + t * s * std::cos(ph), center[1] + t * s * std::sin(ph),
                                center[2] + t * z},
                               rad.weights[i] * t * t * cz.weights[j] * 2.0 * std::numbers::pi / m});
            }
        }
    }
    return out;
}

}  // namespace sph
