#include "dci/constants_solver.hpp"

#include <cmath>
#include <sstream>

#include "dci/quadrature.hpp"

namespace dci {

namespace {

// The plain iteration overshoots violently on early iterates (log eta can
// exceed 1e3 from the (1,1) start). Clamp eta into a band around the
// zero-trajectory exponent -a1 x1 e^{rT}, additionally bounded so that the
// consistent zeta = Z(eta) stays below 1e9: scaled-space exponents are
// tracked in doubles, whose absolute rounding at magnitude |e| is
// ulp(|e|), so |e| must stay far below 2^52 for e^{rounding} ~ 1. As long
// as zeta is recomputed consistently from the clamped eta, the evaluated
// trajectory stays near the Merton decision (the interior balance gives
// c2 / zeta = v e^{-rT} / (a1 s^2) identically) and the iteration
// self-corrects.
constexpr double kLogEtaBand = 80.0;
constexpr double kZetaSafe = 1e9;

struct EtaClamp {
    double lo, hi;  // bounds on log(eta)
    double apply(double log_eta, bool& clipped) const {
        if (log_eta > hi) {
            clipped = true;
            return hi;
        }
        if (log_eta < lo) {
            clipped = true;
            return lo;
        }
        return log_eta;
    }
};

EtaClamp eta_clamp(const ProblemSpec& spec) {
    const double base = -spec.retail.alpha * spec.retail.x0 *
                        std::exp(spec.market.r * spec.horizon_T);
    // Z(eta) <= kZetaSafe  <=>  log eta <= 2 log(kZetaSafe r e^{-rT}/sigma)
    //                           + log(theta / alpha1).
    const double zeta_bound =
        2.0 * std::log(kZetaSafe * spec.market.r /
                       (spec.market.sigma *
                        std::exp(spec.market.r * spec.horizon_T))) +
        std::log(spec.theta / spec.retail.alpha);
    return {base - kLogEtaBand, std::min(base + kLogEtaBand, zeta_bound)};
}

void check_inputs(const ProblemSpec& spec, const SolverOptions& opts) {
    spec.validate();
    spec.market.validate_for_solver();
    if (!(spec.theta > 0.0)) {
        throw ContractError("constants solver requires theta > 0");
    }
    if (!(opts.zeta0 > 0.0) || !(opts.eta0 > 0.0)) {
        throw DomainError("constants solver: initial zeta0, eta0 must be > 0");
    }
    if (!(opts.tol > 0.0)) throw DomainError("constants solver: tol must be > 0");
}

double log_eta_of(const Trajectory& traj, const ProblemSpec& spec) {
    const double a1 = spec.retail.alpha;
    const double r = spec.market.r;
    const double T = spec.horizon_T;
    std::vector<double> f1(traj.size()), f2(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double a = std::exp(r * (T - traj.grid[i]));
        f1[i] = a * traj.values[i];
        f2[i] = a * a * traj.values[i] * traj.values[i];
    }
    const double h = traj.step();
    const double log_eta = -a1 * spec.retail.x0 * std::exp(r * T) -
                           a1 * spec.market.v * simpson_uniform(f1, h) +
                           0.5 * a1 * a1 * spec.market.sigma * spec.market.sigma *
                               simpson_uniform(f2, h);
    if (std::isnan(log_eta)) {
        throw NumericError("constants solver: eta exponent is NaN");
    }
    return log_eta;
}

double clamped_eta(const Trajectory& traj, const ProblemSpec& spec, bool& clipped) {
    return std::exp(eta_clamp(spec).apply(log_eta_of(traj, spec), clipped));
}

double eta_update(double zeta, double eta, const ProblemSpec& spec,
                  std::size_t grid_n, bool& clipped) {
    const AnalyticSolution sol(spec, zeta, eta, grid_n);
    return clamped_eta(sol.trajectory(), spec, clipped);
}

// Unclamped eta map for the residual: the clamp is an iteration device,
// not part of the self-consistency system, and leaving it in would turn
// the clamp bound into a spurious root.
double eta_update_raw(double zeta, double eta, const ProblemSpec& spec,
                      std::size_t grid_n) {
    const AnalyticSolution sol(spec, zeta, eta, grid_n);
    return std::exp(std::min(log_eta_of(sol.trajectory(), spec), 700.0));
}

std::string trace_tail(const std::vector<IterationRecord>& trace) {
    std::ostringstream os;
    const std::size_t from = trace.size() > 5 ? trace.size() - 5 : 0;
    for (std::size_t i = from; i < trace.size(); ++i) {
        os << " [k=" << trace[i].k << " zeta=" << trace[i].zeta
           << " eta=" << trace[i].eta << " dzeta=" << trace[i].dzeta
           << " deta=" << trace[i].deta << "]";
    }
    return os.str();
}

} // namespace

double zeta_from_eta(double eta, const ProblemSpec& spec) {
    return spec.market.sigma * std::exp(spec.market.r * spec.horizon_T) /
           spec.market.r * std::sqrt(eta * spec.retail.alpha / spec.theta);
}

std::pair<double, double> residual(const ProblemSpec& spec, double zeta, double eta,
                                   std::size_t grid_n) {
    check_inputs(spec, SolverOptions{});
    if (!(zeta > 0.0) || !(eta > 0.0)) {
        throw DomainError("residual: zeta and eta must be > 0");
    }
    return {zeta - zeta_from_eta(eta, spec),
            eta - eta_update_raw(zeta, eta, spec, grid_n)};
}

SolveReport fixed_point_solve(const ProblemSpec& spec, const SolverOptions& opts) {
    check_inputs(spec, opts);
    SolveReport rep;
    rep.method = SolveMethod::fixed_point;

    double zeta = opts.zeta0;
    double eta = opts.eta0;
    if (opts.warm_start) {
        bool ignore = false;
        eta = clamped_eta(
            rational_trajectory(spec.retail.alpha, spec.market, spec.horizon_T,
                                opts.grid_n),
            spec, ignore);
        zeta = zeta_from_eta(eta, spec);
    }

    double lambda = 1.0;
    double prev_step = 0.0;
    int monotone_run = 0;
    for (int k = 0; k < opts.max_iter; ++k) {
        bool clipped = false;
        const double eta_new = eta_update(zeta, eta, spec, opts.grid_n, clipped);
        const double eta_next = (1.0 - lambda) * eta + lambda * eta_new;
        const double zeta_next = zeta_from_eta(eta_next, spec);
        const double dzeta = std::abs(zeta_next - zeta);
        const double deta = std::abs(eta_next - eta);
        const double step = eta_next - eta;
        if (prev_step != 0.0 && std::isfinite(prev_step) && prev_step * step < 0.0) {
            lambda = std::max(lambda * 0.5, 1.0 / 64.0);
            monotone_run = 0;
        } else if (++monotone_run >= 3) {
            // Sustained same-sign progress: relax the damping again so a
            // transient overshoot cannot freeze lambda far below 1.
            lambda = std::min(1.0, lambda * 2.0);
            monotone_run = 0;
        }
        prev_step = step;
        zeta = zeta_next;
        eta = eta_next;
        rep.trace.push_back({k, zeta, eta, dzeta, deta});
        rep.iterations = k + 1;
        rep.dzeta_final = dzeta;
        rep.deta_final = deta;
        if (dzeta < opts.tol && deta < opts.tol && !clipped) {
            rep.converged = true;
            break;
        }
    }
    rep.zeta = zeta;
    rep.eta = eta;
    if (rep.converged) {
        const auto [r1, r2] = residual(spec, zeta, eta, opts.grid_n);
        rep.residual_norm = std::hypot(r1, r2);
    }
    return rep;
}

SolveReport newton_fallback(const ProblemSpec& spec, const SolverOptions& opts) {
    check_inputs(spec, opts);
    SolveReport rep;
    rep.method = SolveMethod::newton_fallback;

    double zeta = opts.zeta0;
    double eta = opts.eta0;
    if (opts.warm_start) {
        bool ignore = false;
        eta = clamped_eta(
            rational_trajectory(spec.retail.alpha, spec.market, spec.horizon_T,
                                opts.grid_n),
            spec, ignore);
        zeta = zeta_from_eta(eta, spec);
    }

    const auto res = [&](double z, double e) {
        return residual(spec, z, e, opts.grid_n);
    };
    auto [r1, r2] = res(zeta, eta);
    double rnorm = std::hypot(r1, r2);

    for (int k = 0; k < opts.max_iter; ++k) {
        rep.iterations = k + 1;
        if (rnorm < opts.tol) {
            rep.converged = true;
            break;
        }
        // Forward-difference Jacobian with relative step 1e-6.
        const double hz = 1e-6 * std::max(std::abs(zeta), 1e-8);
        const double he = 1e-6 * std::max(std::abs(eta), 1e-12);
        const auto [r1z, r2z] = res(zeta + hz, eta);
        const auto [r1e, r2e] = res(zeta, eta + he);
        const double j11 = (r1z - r1) / hz, j12 = (r1e - r1) / he;
        const double j21 = (r2z - r2) / hz, j22 = (r2e - r2) / he;
        const double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || std::abs(det) < 1e-300) {
            throw ConvergenceError("newton_fallback: singular Jacobian at zeta=" +
                                   std::to_string(zeta) + ", eta=" +
                                   std::to_string(eta));
        }
        double dz = -(j22 * r1 - j12 * r2) / det;
        double de = -(-j21 * r1 + j11 * r2) / det;
        // Positivity by step clipping.
        double damp = 1.0;
        while (zeta + damp * dz <= 0.0 || eta + damp * de <= 0.0) damp *= 0.5;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            const double zt = zeta + damp * dz;
            const double et = eta + damp * de;
            const auto [t1, t2] = res(zt, et);
            const double tn = std::hypot(t1, t2);
            if (tn < rnorm) {
                rep.trace.push_back({k, zt, et, std::abs(zt - zeta),
                                     std::abs(et - eta)});
                rep.dzeta_final = std::abs(zt - zeta);
                rep.deta_final = std::abs(et - eta);
                zeta = zt;
                eta = et;
                r1 = t1;
                r2 = t2;
                rnorm = tn;
                accepted = true;
                break;
            }
            damp *= 0.5;
        }
        if (!accepted) {
            throw ConvergenceError(
                "newton_fallback: line search stalled, |R| = " +
                std::to_string(rnorm) + trace_tail(rep.trace));
        }
    }
    rep.zeta = zeta;
    rep.eta = eta;
    rep.residual_norm = rnorm;
    if (!rep.converged) {
        throw ConvergenceError("newton_fallback: no convergence after " +
                               std::to_string(opts.max_iter) + " iterations, |R| = " +
                               std::to_string(rnorm) + trace_tail(rep.trace));
    }
    return rep;
}

double ProblemSolution::value(double t) const {
    if (analytic) return analytic->value(t);
    return rational_decision(spec.retail.alpha, spec.market, spec.horizon_T, t);
}

double ProblemSolution::rate(double t) const {
    if (analytic) return analytic->rate(t);
    return rational_decision_rate(spec.retail.alpha, spec.market, spec.horizon_T, t);
}

Trajectory ProblemSolution::trajectory(std::size_t n) const {
    if (analytic) return analytic->sample(n);
    return rational_trajectory(spec.retail.alpha, spec.market, spec.horizon_T, n);
}

ProblemSolution solve_problem(const ProblemSpec& spec, const SolverOptions& opts) {
    spec.validate();
    spec.market.validate_for_solver();
    ProblemSolution out;
    out.spec = spec;
    if (spec.theta == 0.0) {
        // Merton problem; for Case 2 the variational boundary conditions are
        // incompatible, the documented fallback is the rational decision.
        return out;
    }
    SolveReport rep = fixed_point_solve(spec, opts);
    if (!rep.converged) {
        SolverOptions warm = opts;
        warm.zeta0 = rep.zeta > 0.0 && std::isfinite(rep.zeta) ? rep.zeta : opts.zeta0;
        warm.eta0 = rep.eta > 0.0 && std::isfinite(rep.eta) ? rep.eta : opts.eta0;
        SolveReport nrep = newton_fallback(spec, warm);
        nrep.trace.insert(nrep.trace.begin(), rep.trace.begin(), rep.trace.end());
        rep = std::move(nrep);
    }
    out.report = rep;
    out.analytic = std::make_shared<AnalyticSolution>(spec, rep.zeta, rep.eta,
                                                      opts.grid_n);
    return out;
}

} // namespace dci
