#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sph/grid.hpp"

namespace sph {

struct SolverOptions {
    std::vector<double> eps_schedule{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10};
    /// Stopping threshold on max |dE/du| relative to the largest nodal flux magnitude.
    double grad_tol = 1e-8;
    int max_iterations = 500;  // Newton steps per continuation stage
    int max_pcg_iterations = 400;
    bool warm_start_linear = true;
    bool verbose = false;
    std::vector<double> initial;  // optional nodal initial guess
};

struct SolveReport {
    double p = 2.0;
    long unknowns = 0;
    long active_cells = 0;
    std::vector<double> eps_schedule;
    std::vector<int> stage_iterations;
    std::vector<double> energies;    // regularized energy after each accepted step
    std::vector<double> grad_norms;  // relative gradient before each step
    int iterations = 0;
    int pcg_iterations = 0;
    int multigrid_builds = 0;
    double energy = 0.0;     // unregularized discrete energy of the result
    double grad_norm = 0.0;  // final relative gradient
    bool converged = false;
    double data_min = 0.0;
    double data_max = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    double seconds = 0.0;
    std::string message;
};

class SolveFailure : public std::runtime_error {
public:
    SolveFailure(const std::string& what, SolveReport report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const SolveReport& report() const { return report_; }

private:
    SolveReport report_;
};

struct Solution {
    ScalarField field;
    SolveReport report;
};

/// Sum over active cells of w (|grad_h u|^2 + eps^2)^{p/2} h^n with forward differences.
double discrete_energy(const GridProblem& problem, const std::vector<double>& u, double eps = 0.0);

struct NodalResidual {
    std::vector<double> gradient;  // dE/du_i at interior nodes, 0 elsewhere
    std::vector<double> flux;      // sum of |cell flux| contributions at each node
};

/// Energy gradient of a nodal field; nonnegative entries mean the field is a discrete
/// superminimizer at those nodes.
NodalResidual energy_residual(const GridProblem& problem, const std::vector<double>& u, double eps = 0.0);

/// Minimizes the discrete energy with the Dirichlet data of `problem` by Newton's
/// method with eps-continuation; throws SolveFailure when a stage fails to converge.
Solution solve_dirichlet(const GridProblem& problem, const SolverOptions& options = {});

}  // namespace sph
