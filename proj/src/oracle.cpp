#include "dci/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "dci/constants_solver.hpp"
#include "dci/quadrature.hpp"

namespace dci {

namespace {

// Discrete objective machinery shared by the optimizer and the
// comparison: Simpson weights for the eta integrals, midpoint rule for
// the disparity, exactly as the market_model functionals define them.
struct DiscreteObjective {
    DiscreteObjective(const ProblemSpec& spec, std::size_t n) : spec_(spec) {
        if (n < 51) throw ContractError("oracle: grid_points must be >= 51");
        if (n % 2 == 0) throw ContractError("oracle: grid_points must be odd");
        grid = Trajectory::uniform(spec.horizon_T, n).grid;
        h = grid[1] - grid[0];
        const double r = spec.market.r, T = spec.horizon_T;
        w.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double wi = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            w[i] = wi * h / 3.0;
        }
        a.resize(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = std::exp(r * (T - grid[i]));
        qdot.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            qdot[i] = rational_decision_rate(spec.expert_alpha, spec.market, T,
                                             0.5 * (grid[i] + grid[i + 1]));
        }
    }

    double eta(const std::vector<double>& p) const {
        const double a1 = spec_.retail.alpha;
        double q1 = 0.0, q2 = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            q1 += w[i] * a[i] * p[i];
            q2 += w[i] * a[i] * a[i] * p[i] * p[i];
        }
        const double s2 = spec_.market.sigma * spec_.market.sigma;
        return std::exp(-a1 * spec_.retail.x0 * std::exp(spec_.market.r * spec_.horizon_T) -
                        a1 * spec_.market.v * q1 + 0.5 * a1 * a1 * s2 * q2);
    }

    double disparity(const std::vector<double>& p) const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            const double s = (p[i + 1] - p[i]) / h;
            acc += h * (s - qdot[i]) * (s - qdot[i]);
        }
        return 0.5 * acc;
    }

    double value(const std::vector<double>& p) const {
        return -eta(p) / spec_.retail.alpha - spec_.theta * disparity(p);
    }

    // grad_j = eta w_j a_j (v - a1 s^2 a_j p_j) - theta * (second-difference
    // operator applied to the slope mismatches).
    void gradient(const std::vector<double>& p, std::vector<double>& g) const {
        const std::size_t n = p.size();
        const double a1 = spec_.retail.alpha;
        const double s2 = spec_.market.sigma * spec_.market.sigma;
        const double et = eta(p);
        g.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = et * w[i] * a[i] * (spec_.market.v - a1 * s2 * a[i] * p[i]);
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double d = (p[i + 1] - p[i]) / h - qdot[i];
            g[i] += spec_.theta * d;
            g[i + 1] -= spec_.theta * d;
        }
    }

    // H = -(eta/a1)(phi phi^T + diag(dphi)) - theta L restricted to the free
    // nodes; returned as tridiagonal (diag, off) plus the rank-one vector
    // phi and factor rho = eta/a1, so Newton solves in O(n).
    void hessian_parts(const std::vector<double>& p, std::vector<double>& diag,
                       std::vector<double>& off, std::vector<double>& phi,
                       double& rho) const {
        const std::size_t n = p.size();
        const double a1 = spec_.retail.alpha;
        const double s2 = spec_.market.sigma * spec_.market.sigma;
        const double et = eta(p);
        rho = et / a1;
        phi.resize(n);
        diag.assign(n, 0.0);
        off.assign(n - 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            phi[i] = w[i] * a[i] * (-a1 * spec_.market.v + a1 * a1 * s2 * a[i] * p[i]);
            diag[i] = -rho * a1 * a1 * s2 * w[i] * a[i] * a[i];
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            diag[i] -= spec_.theta / h;
            diag[i + 1] -= spec_.theta / h;
            off[i] += spec_.theta / h;
        }
    }

    const ProblemSpec& spec_;
    std::vector<double> grid, w, a, qdot;
    double h = 0.0;
};

// Thomas solve of the tridiagonal system (diag, off) x = b on [lo, hi).
void tridiag_solve(const std::vector<double>& diag, const std::vector<double>& off,
                   std::vector<double>& b, std::size_t lo, std::size_t hi,
                   std::vector<double>& cp) {
    cp.assign(hi - lo, 0.0);
    double piv = diag[lo];
    if (piv == 0.0) throw NumericError("oracle: singular tridiagonal pivot");
    b[lo] /= piv;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        cp[i - lo - 1] = off[i - 1] / piv;
        piv = diag[i] - off[i - 1] * cp[i - lo - 1];
        if (piv == 0.0) throw NumericError("oracle: singular tridiagonal pivot");
        b[i] = (b[i] - off[i - 1] * b[i - 1]) / piv;
    }
    for (std::size_t i = hi - 1; i-- > lo;) b[i] -= cp[i - lo] * b[i + 1];
}

} // namespace

Trajectory optimize_trajectory(const ProblemSpec& spec, const OracleConfig& cfg) {
    spec.validate();
    spec.market.validate_for_solver();
    const DiscreteObjective obj(spec, cfg.grid_points);
    const std::size_t n = cfg.grid_points;

    // Start from the retail rational decision (the theta = 0 optimum).
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = rational_decision(spec.retail.alpha, spec.market, spec.horizon_T,
                                 obj.grid[i]);
    }
    const bool pinned = spec.boundary_case == BoundaryCase::Case1;
    if (pinned) {
        p.front() = spec.case1_initial_holding();
        p.back() = spec.case1_terminal_holding();
    }
    const std::size_t lo = pinned ? 1 : 0;
    const std::size_t hi = pinned ? n - 1 : n;

    std::vector<double> g, diag, off, phi, step, z, cp;
    double fcur = obj.value(p);
    for (int it = 0; it < cfg.max_iter; ++it) {
        obj.gradient(p, g);
        double gn = 0.0;
        for (std::size_t i = lo; i < hi; ++i) gn += g[i] * g[i];
        gn = std::sqrt(gn);
        if (gn <= cfg.grad_tol) {
            Trajectory out;
            out.grid = obj.grid;
            out.values = p;
            return out;
        }

        double rho;
        obj.hessian_parts(p, diag, off, phi, rho);
        // Newton ascent direction d solves H d = g with
        // H = A - rho phi phi^T (A tridiagonal, both negative definite);
        // Sherman-Morrison: d = x + (rho phi^T x / (1 - rho phi^T y)) y,
        // x = A^{ -1} g, y = A^{-1} phi. Then p <- p - d moves uphill.
        step = g;
        z = phi;
        tridiag_solve(diag, off, step, lo, hi, cp);
        tridiag_solve(diag, off, z, lo, hi, cp);
        double pty = 0.0, ptx = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            pty += phi[i] * z[i];
            ptx += phi[i] * step[i];
        }
        const double denom = 1.0 - rho * pty;  // > 1 since A is negative definite
        for (std::size_t i = lo; i < hi; ++i) {
            step[i] += rho * ptx / denom * z[i];
        }

        double tls = 1.0;
        bool ok = false;
        for (int ls = 0; ls < 60; ++ls) {
            std::vector<double> trial(p);
            for (std::size_t i = lo; i < hi; ++i) trial[i] = p[i] - tls * step[i];
            const double ft = obj.value(trial);
            if (ft > fcur) {
                p.swap(trial);
                fcur = ft;
                ok = true;
                break;
            }
            tls *= 0.5;
        }
        if (!ok) {
            // Concave objective: a non-improving Newton step this deep in
            // the line search means we are at the optimum to rounding.
            obj.gradient(p, g);
            double gfin = 0.0;
            for (std::size_t i = lo; i < hi; ++i) gfin += g[i] * g[i];
            if (std::sqrt(gfin) <= 1e4 * cfg.grad_tol) break;
            throw ConvergenceError("optimize_trajectory: line search stalled at "
                                   "gradient norm " + std::to_string(std::sqrt(gfin)));
        }
    }
    obj.gradient(p, g);
    double gn = 0.0;
    for (std::size_t i = lo; i < hi; ++i) gn += g[i] * g[i];
    gn = std::sqrt(gn);
    if (gn > cfg.grad_tol) {
        throw ConvergenceError("optimize_trajectory: no convergence, final "
                               "gradient norm " + std::to_string(gn));
    }
    Trajectory out;
    out.grid = obj.grid;
    out.values = p;
    return out;
}

double oracle_gradient_norm(const Trajectory& p, const ProblemSpec& spec) {
    const DiscreteObjective obj(spec, p.size());
    std::vector<double> g;
    obj.gradient(p.values, g);
    const bool pinned = spec.boundary_case == BoundaryCase::Case1;
    const std::size_t lo = pinned ? 1 : 0;
    const std::size_t hi = pinned ? p.size() - 1 : p.size();
    double gn = 0.0;
    for (std::size_t i = lo; i < hi; ++i) gn += g[i] * g[i];
    return std::sqrt(gn);
}

namespace {

struct McAccumulator {
    double sum = 0.0;
    double sumsq = 0.0;
    long count = 0;
};

// One path of the discounted-wealth Euler-Maruyama scheme:
// Y = X e^{-rt} turns the wealth SDE into dY = e^{-rt}(v P dt + s P dW),
// so the risk-free drift is integrated exactly and a zero control
// reproduces x e^{rT} with no discretization error.
template <typename Rng>
double terminal_wealth_em(const std::vector<double>& pc,
                          const std::vector<double>& disc, double dt,
                          double sqdt, const ProblemSpec& spec, Rng& rng,
                          std::normal_distribution<double>& normal) {
    double y = spec.retail.x0;
    const double v = spec.market.v;
    const double s = spec.market.sigma;
    const long steps = static_cast<long>(pc.size());
    for (long k = 0; k < steps; ++k) {
        y += disc[k] * pc[k] * (v * dt + s * sqdt * normal(rng));
    }
    return y * std::exp(spec.market.r * spec.horizon_T);
}

} // namespace

McEstimate mc_expected_utility(const Trajectory& p, const ProblemSpec& spec,
                               const McConfig& cfg, McScheme scheme) {
    spec.validate();
    p.validate(spec.horizon_T);
    if (cfg.paths < 1 || cfg.steps < 1) {
        throw ContractError("mc_expected_utility: paths and steps must be >= 1");
    }

    const double T = spec.horizon_T;
    const double a1 = spec.retail.alpha;
    const double dt = T / static_cast<double>(cfg.steps);
    const double sqdt = std::sqrt(dt);

    // Control and discount factor sampled at the left endpoint of each step.
    std::vector<double> pc(cfg.steps), disc(cfg.steps);
    {
        std::size_t seg = 0;
        for (long k = 0; k < cfg.steps; ++k) {
            const double t = dt * static_cast<double>(k);
            while (seg + 2 < p.size() && p.grid[seg + 1] <= t) ++seg;
            const double w = (t - p.grid[seg]) / (p.grid[seg + 1] - p.grid[seg]);
            pc[k] = p.values[seg] + w * (p.values[seg + 1] - p.values[seg]);
            disc[k] = std::exp(-spec.market.r * t);
        }
    }

    // Exact Gaussian moments for the secondary scheme.
    double m_exact = 0.0, s2_exact = 0.0;
    if (scheme == McScheme::exact_gaussian) {
        const double r = spec.market.r;
        const double s2 = spec.market.sigma * spec.market.sigma;
        std::vector<double> f1(p.size()), f2(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double a = std::exp(r * (T - p.grid[i]));
            f1[i] = a * p.values[i];
            f2[i] = a * a * p.values[i] * p.values[i];
        }
        m_exact = spec.retail.x0 * std::exp(r * T) +
                  spec.market.v * simpson_uniform(f1, p.step());
        s2_exact = s2 * simpson_uniform(f2, p.step());
    }

    const int nthreads = cfg.threads > 0
                             ? cfg.threads
                             : std::max(1u, std::thread::hardware_concurrency());
    std::vector<McAccumulator> acc(nthreads);
    auto worker = [&](int tid) {
        std::normal_distribution<double> normal(0.0, 1.0);
        McAccumulator local;
        for (long i = tid; i < cfg.paths; i += nthreads) {
            // Per-path substream: reproducible regardless of thread count.
            std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed),
                              static_cast<std::uint64_t>(i)};
            std::mt19937_64 rng(seq);
            normal.reset();
            double xT;
            if (scheme == McScheme::discounted_euler_maruyama) {
                xT = terminal_wealth_em(pc, disc, dt, sqdt, spec, rng, normal);
            } else {
                xT = m_exact + std::sqrt(s2_exact) * normal(rng);
            }
            if (!std::isfinite(xT)) {
                throw NumericError("mc_expected_utility: non-finite path value; "
                                   "step size too coarse");
            }
            const double util = -std::exp(-a1 * xT) / a1;
            local.sum += util;
            local.sumsq += util * util;
            ++local.count;
        }
        acc[tid] = local;
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    double sum = 0.0, sumsq = 0.0;
    long count = 0;
    for (const auto& a : acc) {
        sum += a.sum;
        sumsq += a.sumsq;
        count += a.count;
    }
    const double mean = sum / static_cast<double>(count);
    const double var =
        count > 1 ? std::max(0.0, (sumsq - sum * mean) / static_cast<double>(count - 1))
                  : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(count)), cfg.seed};
}

OracleComparison compare_analytic_oracle(const ProblemSpec& spec,
                                         const OracleConfig& cfg) {
    SolverOptions sopts;
    sopts.grid_n = cfg.grid_points;
    const ProblemSolution sol = solve_problem(spec, sopts);
    const Trajectory oracle = optimize_trajectory(spec, cfg);
    const Trajectory analytic = sol.trajectory(cfg.grid_points);

    const DiscreteObjective obj(spec, cfg.grid_points);
    OracleComparison cmp;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        cmp.sup_norm_gap = std::max(cmp.sup_norm_gap,
                                    std::abs(analytic.values[i] - oracle.values[i]));
        cmp.sup_abs_analytic =
            std::max(cmp.sup_abs_analytic, std::abs(analytic.values[i]));
    }
    cmp.analytic_objective = obj.value(analytic.values);
    cmp.oracle_objective = obj.value(oracle.values);
    cmp.objective_gap = std::abs(cmp.analytic_objective - cmp.oracle_objective);
    if (sol.report) {
        cmp.zeta = sol.report->zeta;
        cmp.eta = sol.report->eta;
    }
    return cmp;
}

} // namespace dci
