#include "sph/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "sph/multigrid.hpp"
#include "sph/quadrature.hpp"

namespace sph {

namespace {

struct Workspace {
    const GridProblem& P;
    int n;
    double h;
    double hn;
    double p;  // may be switched for the linear warm start
    long stride[3];
    std::vector<long> cells;
    std::vector<double> cw;  // w h^n per listed cell
    std::vector<char> unknown;

    explicit Workspace(const GridProblem& prob) : P(prob) {
        n = P.geom.n;
        h = P.geom.h;
        hn = std::pow(h, n);
        p = P.p;
        for (int k = 0; k < 3; ++k) stride[k] = P.geom.stride(k);
        for (long c = 0; c < P.geom.size(); ++c)
            if (P.cell_active(c)) {
                cells.push_back(c);
                cw.push_back(P.cell_weight(c) * hn);
            }
        unknown.resize(P.geom.size());
        for (long i = 0; i < P.geom.size(); ++i) unknown[i] = P.kind[i] == NodeKind::interior;
    }

    void cell_gradient(const std::vector<double>& u, long c, double* g) const {
        const double u0 = u[c];
        for (int k = 0; k < n; ++k) g[k] = (u[c + stride[k]] - u0) / h;
    }

    double energy(const std::vector<double>& u, double eps) const {
        PairwiseAccumulator acc;
        const double e2 = eps * eps;
        double g[3];
        for (std::size_t t = 0; t < cells.size(); ++t) {
            cell_gradient(u, cells[t], g);
            double s = e2;
            for (int k = 0; k < n; ++k) s += g[k] * g[k];
            acc.add(cw[t] * std::pow(s, 0.5 * p));
        }
        return acc.total();
    }

    /// Gradient at interior nodes; returns max |G| / max nodal flux magnitude.
    double gradient(const std::vector<double>& u, double eps, std::vector<double>& G,
                    std::vector<double>* flux = nullptr) const {
        const long N = P.geom.size();
        G.assign(N, 0.0);
        std::vector<double> local;
        std::vector<double>& S = flux ? *flux : local;
        S.assign(N, 0.0);
        const double e2 = eps * eps;
        double g[3];
        for (std::size_t t = 0; t < cells.size(); ++t) {
            const long c = cells[t];
            cell_gradient(u, c, g);
            double s = e2;
            for (int k = 0; k < n; ++k) s += g[k] * g[k];
            const double a = cw[t] * p * std::pow(s, 0.5 * p - 1.0) / h;
            for (int k = 0; k < n; ++k) {
                const double f = a * g[k];
                G[c] -= f;
                G[c + stride[k]] += f;
                S[c] += std::abs(f);
                S[c + stride[k]] += std::abs(f);
            }
        }
        double gmax = 0.0, smax = 0.0;
        for (long i = 0; i < N; ++i) {
            if (!unknown[i]) {
                G[i] = 0.0;
                continue;
            }
            gmax = std::max(gmax, std::abs(G[i]));
            smax = std::max(smax, S[i]);
        }
        return smax > 0.0 ? gmax / smax : gmax;
    }

    void hessian(const std::vector<double>& u, double eps, StencilOperator& A) const {
        std::fill(A.coef.begin(), A.coef.end(), 0.0);
        const int K = A.slots();
        int slot_cross[3][3];
        int slot_axis[3];
        for (int k = 0; k < n; ++k) {
            slot_axis[k] = A.slot_of(stride[k]);
            for (int l = k + 1; l < n; ++l) slot_cross[k][l] = A.slot_of(stride[l] - stride[k]);
        }
        const double e2 = eps * eps;
        const double ih2 = 1.0 / (h * h);
        double g[3], Kg[3][3], K1[3];
        long node[4];
        for (std::size_t t = 0; t < cells.size(); ++t) {
            const long c = cells[t];
            cell_gradient(u, c, g);
            double s = e2;
            for (int k = 0; k < n; ++k) s += g[k] * g[k];
            const double a = cw[t] * p * std::pow(s, 0.5 * p - 1.0);
            const double b = p == 2.0 ? 0.0 : a * (p - 2.0) / s;
            double sum1K1 = 0.0;
            for (int k = 0; k < n; ++k) {
                K1[k] = 0.0;
                for (int l = 0; l < n; ++l) {
                    Kg[k][l] = (k == l ? a : 0.0) + b * g[k] * g[l];
                    K1[k] += Kg[k][l];
                }
                sum1K1 += K1[k];
            }
            node[0] = c;
            for (int k = 0; k < n; ++k) node[k + 1] = c + stride[k];
            if (unknown[c]) {
                double* cc = &A.coef[static_cast<std::size_t>(c) * K];
                cc[0] += sum1K1 * ih2;
                for (int k = 0; k < n; ++k)
                    if (unknown[node[k + 1]]) cc[slot_axis[k]] -= K1[k] * ih2;
            }
            for (int k = 0; k < n; ++k) {
                const long v = node[k + 1];
                if (!unknown[v]) continue;
                double* cv = &A.coef[static_cast<std::size_t>(v) * K];
                cv[0] += Kg[k][k] * ih2;
                for (int l = k + 1; l < n; ++l)
                    if (unknown[node[l + 1]]) cv[slot_cross[k][l]] += Kg[k][l] * ih2;
            }
        }
    }
};

}  // namespace

double discrete_energy(const GridProblem& problem, const std::vector<double>& u, double eps) {
    if (static_cast<long>(u.size()) != problem.geom.size()) throw InvalidInput("nodal vector size mismatch");
    return Workspace(problem).energy(u, eps);
}

NodalResidual energy_residual(const GridProblem& problem, const std::vector<double>& u, double eps) {
    if (static_cast<long>(u.size()) != problem.geom.size()) throw InvalidInput("nodal vector size mismatch");
    NodalResidual r;
    Workspace(problem).gradient(u, eps, r.gradient, &r.flux);
    return r;
}

Solution solve_dirichlet(const GridProblem& problem, const SolverOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    problem.validate();
    if (opt.eps_schedule.empty()) throw InvalidInput("empty eps schedule");
    Workspace ws(problem);
    const long N = problem.geom.size();
    SolveReport rep;
    rep.p = problem.p;
    rep.unknowns = problem.count(NodeKind::interior);
    rep.active_cells = static_cast<long>(ws.cells.size());
    rep.eps_schedule = opt.eps_schedule;
    rep.data_min = std::numeric_limits<double>::infinity();
    rep.data_max = -rep.data_min;
    for (long i = 0; i < N; ++i)
        if (problem.kind[i] == NodeKind::dirichlet) {
            rep.data_min = std::min(rep.data_min, problem.data[i]);
            rep.data_max = std::max(rep.data_max, problem.data[i]);
        }
    std::vector<double> u = problem.data;
    if (!opt.initial.empty()) {
        if (static_cast<long>(opt.initial.size()) != N) throw InvalidInput("initial guess size mismatch");
        for (long i = 0; i < N; ++i)
            if (ws.unknown[i]) u[i] = opt.initial[i];
    }
    auto clamp_to_data = [&] {
        for (long i = 0; i < N; ++i)
            if (ws.unknown[i]) u[i] = std::clamp(u[i], rep.data_min, rep.data_max);
    };
    clamp_to_data();

    StencilOperator A;
    A.reset(problem.geom, forward_difference_deltas(problem.geom.n), ws.unknown);
    Multigrid mg;
    bool rebuild = true;
    std::vector<double> G, d, b, trial;

    auto newton_direction = [&](double eps, double rtol) {
        ws.hessian(u, eps, A);
        for (int attempt = 0; attempt < 2; ++attempt) {
            if (rebuild) {
                mg.build(A);
                ++rep.multigrid_builds;
                rebuild = false;
            }
            b.assign(N, 0.0);
            for (long i = 0; i < N; ++i) b[i] = -G[i];
            d.assign(N, 0.0);
            const PcgResult r = pcg(A, mg, b, d, rtol, opt.max_pcg_iterations);
            rep.pcg_iterations += r.iterations;
            if (r.iterations > 25 || !r.converged) rebuild = true;
            if (r.converged || attempt == 1) return;
        }
    };

    auto dot_unknown = [&](const std::vector<double>& x, const std::vector<double>& y) {
        double s = 0.0;
        for (long i = 0; i < N; ++i)
            if (ws.unknown[i]) s += x[i] * y[i];
        return s;
    };

    if (rep.unknowns > 0 && opt.warm_start_linear && opt.initial.empty() && problem.p != 2.0) {
        ws.p = 2.0;
        ws.gradient(u, 0.0, G);
        newton_direction(0.0, 1e-10);
        for (long i = 0; i < N; ++i) u[i] += d[i];
        clamp_to_data();
        ws.p = problem.p;
        rebuild = true;
    }

    auto forcing = [](double g) { return std::clamp(0.1 * std::sqrt(g), 1e-10, 0.5); };
    double rel = 0.0;
    bool stage_ok = true;
    for (double eps : opt.eps_schedule) {
        int it = 0;
        stage_ok = false;
        if (rep.unknowns == 0) {
            rep.stage_iterations.push_back(0);
            stage_ok = true;
            continue;
        }
        for (; it <= opt.max_iterations; ++it) {
            rel = ws.gradient(u, eps, G);
            rep.grad_norms.push_back(rel);
            if (rel <= opt.grad_tol) {
                stage_ok = true;
                break;
            }
            if (it == opt.max_iterations) break;
            const double E = ws.energy(u, eps);
            newton_direction(eps, forcing(rel));
            double slope = dot_unknown(G, d);
            if (!(slope < 0.0)) {
                for (long i = 0; i < N; ++i) d[i] = -G[i];
                slope = dot_unknown(G, d);
            }
            double t = 1.0;
            bool accepted = false;
            double Et = E;
            for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
                trial = u;
                for (long i = 0; i < N; ++i)
                    if (ws.unknown[i]) trial[i] += t * d[i];
                Et = ws.energy(trial, eps);
                if (Et <= E + 1e-4 * t * slope) {
                    accepted = true;
                    break;
                }
                if (ls == 0 && Et <= E * (1.0 + 1e-13)) {
                    std::vector<double> Gt;
                    if (ws.gradient(trial, eps, Gt) < rel) {
                        accepted = true;
                        break;
                    }
                }
            }
            if (!accepted) break;
            u.swap(trial);
            rep.energies.push_back(Et);
            if (opt.verbose)
                std::fprintf(stderr, "eps %.1e it %d E %.15g rel %.3e t %.3g pcg %d\n", eps, it, Et, rel, t, rep.pcg_iterations);
        }
        rep.stage_iterations.push_back(it);
        rep.iterations += it;
        if (!stage_ok) rep.message += "stage eps=" + std::to_string(eps) + " stopped at relative gradient " +
                                      std::to_string(rel) + "; ";
    }
    rep.grad_norm = rel;
    rep.converged = stage_ok;
    rep.energy = ws.energy(u, 0.0);
    ScalarField field{problem.geom, problem.kind, u};
    for (long i = 0; i < N; ++i)
        if (problem.kind[i] == NodeKind::inactive) field.values[i] = 0.0;
    rep.u_min = rep.unknowns > 0 ? field.min_active() : rep.data_min;
    rep.u_max = rep.unknowns > 0 ? field.max_active() : rep.data_max;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!rep.converged) throw SolveFailure("p-energy minimization did not converge: " + rep.message, rep);
    return Solution{std::move(field), std::move(rep)};
}

}  // namespace sph
