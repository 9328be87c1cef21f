#ifndef DCI_CONSTANTS_SOLVER_HPP
#define DCI_CONSTANTS_SOLVER_HPP

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "dci/market_model.hpp"
#include "dci/variational_solver.hpp"

namespace dci {

enum class SolveMethod { fixed_point, newton_fallback };

struct IterationRecord {
    int k;
    double zeta;
    double eta;
    double dzeta;
    double deta;
};

/// Convergence diagnostics of the integral-constant solve.
struct SolveReport {
    double zeta = 0.0;
    double eta = 0.0;
    int iterations = 0;
    bool converged = false;
    double dzeta_final = 0.0;
    double deta_final = 0.0;
    SolveMethod method = SolveMethod::fixed_point;
    double residual_norm = 0.0;
    std::vector<IterationRecord> trace;
};

struct SolverOptions {
    double zeta0 = 1.0;
    double eta0 = 1.0;
    double tol = 1e-8;
    int max_iter = 200;
    std::size_t grid_n = 2001;
    /// Start from eta0 = deterministic_equivalent_eta(P1bar) instead of (zeta0, eta0).
    bool warm_start = false;
};

/// RHS of the zeta equation (independent of the current zeta):
/// (sigma e^{rT} / r) sqrt(eta a1 / theta).
double zeta_from_eta(double eta, const ProblemSpec& spec);

/// Root form of the self-consistency system:
/// (zeta - RHS_zeta(eta), eta - eta[trajectory(zeta, eta)]).
std::pair<double, double> residual(const ProblemSpec& spec, double zeta, double eta,
                                   std::size_t grid_n = 2001);

/// The iterative method for zeta and eta: evaluate boundary coefficients,
/// gammas, the trajectory, then the updated eta and zeta, until both
/// deltas drop below tol. Relaxation eta <- (1-lambda) eta + lambda eta_new
/// with lambda halved when the eta-updates alternate sign.
SolveReport fixed_point_solve(const ProblemSpec& spec, const SolverOptions& opts = {});

/// Damped Newton on the residual map with forward-difference Jacobian
/// (relative step 1e-6), step halving until the residual norm decreases,
/// iterates clipped to stay positive.
SolveReport newton_fallback(const ProblemSpec& spec, const SolverOptions& opts = {});

/// A solved problem: the constants report plus the analytic trajectory
/// evaluator, or the rational-decision fallback at theta = 0 where the
/// Case-2 boundary conditions are incompatible with the variational
/// optimum (the theta = 0 problem is the plain Merton problem).
struct ProblemSolution {
    std::optional<SolveReport> report;           // empty iff theta == 0
    std::shared_ptr<const AnalyticSolution> analytic; // null iff theta == 0
    ProblemSpec spec;

    bool is_rational_fallback() const { return analytic == nullptr; }
    double value(double t) const;
    double rate(double t) const;
    Trajectory trajectory(std::size_t n) const;
};

/// Solve the constants (fixed point, Newton fallback on non-convergence)
/// and build the evaluator. Throws ConvergenceError when both methods fail.
ProblemSolution solve_problem(const ProblemSpec& spec, const SolverOptions& opts = {});

} // namespace dci

#endif
