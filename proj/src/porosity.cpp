#include "sph/porosity.hpp"

#include <cmath>
#include <numbers>

namespace sph {

namespace {

std::vector<Vec> sphere_directions(int n, int count) {
    std::vector<Vec> out;
    for (int k = 0; k < count; ++k) {
        if (n == 2) {
            // Start at -e_2 so the direction below a half-plane comes first.
            const double t = -std::numbers::pi / 2 + 2 * std::numbers::pi * k / count;
            out.push_back({std::cos(t), std::sin(t)});
        } else {
            const double z = 1.0 - 2.0 * (k + 0.5) / count;
            const double s = std::sqrt(1.0 - z * z);
            const double ph = k * std::numbers::pi * (3.0 - std::sqrt(5.0));
            Vec d(n, 0.0);
            d[0] = s * std::cos(ph);
            d[1] = s * std::sin(ph);
            d[n - 1] = -z;
            out.push_back(std::move(d));
        }
    }
    return out;
}

}  // namespace

std::vector<PorosityWitness> porosity_witnesses(const Domain& dom, const Vec& a, double theta,
                                                const PorosityOptions& opt) {
    require_same_dim(a.size(), dom.dim(), "base point");
    if (!(theta > 0.0)) throw InvalidInput("theta must be positive");
    const int n = dom.dim();
    const auto dirs = sphere_directions(n, n == 2 ? opt.directions : 4 * opt.directions);
    std::vector<PorosityWitness> out;
    for (int m = opt.first_shell; m < opt.first_shell + opt.witness_count; ++m) {
        const double r0 = std::ldexp(1.0, m);
        bool found = false;
        for (int i = 0; i < opt.radial_samples && !found; ++i) {
            const double rho = r0 * (1.0 + double(i) / opt.radial_samples);
            for (const auto& u : dirs) {
                const Vec x = axpy(rho, u, a);
                if (dom.ball_disjoint(x, theta * rho)) {
                    out.push_back({m, x, theta});
                    found = true;
                    break;
                }
            }
        }
    }
    return out;
}

PorosityResult porosity_at_infinity(const Domain& dom, const Vec& a, const PorosityOptions& opt) {
    if (opt.witness_count < 1) throw InvalidInput("witness_count must be positive");
    PorosityResult res;
    for (double theta : opt.theta_grid) {
        auto w = porosity_witnesses(dom, a, theta, opt);
        const bool all = static_cast<int>(w.size()) == opt.witness_count;
        res.per_theta.emplace_back(theta, all);
        if (all && theta > res.theta) {
            res.theta = theta;
            res.witnesses = std::move(w);
            res.is_porous = true;
        }
    }
    return res;
}

}  // namespace sph
