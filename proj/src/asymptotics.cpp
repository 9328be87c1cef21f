#include "dci/asymptotics.hpp"

#include <cmath>
#include <string>

namespace dci {

namespace {

double offset_coefficient(const ProblemSpec& spec) {
    return spec.market.v *
           (1.0 / spec.retail.alpha - 1.0 / spec.expert_alpha) /
           (spec.market.sigma * spec.market.sigma);
}

void check_t(const ProblemSpec& spec, double t) {
    if (t < 0.0 || t > spec.horizon_T) {
        throw DomainError("asymptotic decision: t outside [0, T]");
    }
}

} // namespace

double asymptotic_case1(const ProblemSpec& spec, double t) {
    spec.validate();
    check_t(spec, t);
    const double c = offset_coefficient(spec);
    const double emrT = std::exp(-spec.market.r * spec.horizon_T);
    return rational_decision(spec.expert_alpha, spec.market, spec.horizon_T, t) +
           c * (1.0 - emrT) / spec.horizon_T * t + c * emrT;
}

double asymptotic_case2(const ProblemSpec& spec, double t) {
    spec.validate();
    check_t(spec, t);
    const double rT = spec.market.r * spec.horizon_T;
    const double offset = 2.0 * offset_coefficient(spec) * (std::exp(rT) - 1.0) /
                          (std::exp(2.0 * rT) - 1.0);
    return rational_decision(spec.expert_alpha, spec.market, spec.horizon_T, t) +
           offset;
}

Trajectory asymptotic_trajectory(const ProblemSpec& spec, std::size_t n) {
    Trajectory out = Trajectory::uniform(spec.horizon_T, n);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = spec.boundary_case == BoundaryCase::Case1
                            ? asymptotic_case1(spec, out.grid[i])
                            : asymptotic_case2(spec, out.grid[i]);
    }
    return out;
}

double crossing_time(const ProblemSpec& spec) {
    spec.validate();
    const double r = spec.market.r;
    const double T = spec.horizon_T;
    const double rT = r * T;
    const double tau =
        T + std::log((std::exp(rT) - 1.0) / (std::exp(2.0 * rT) - 1.0)) / r +
        std::log(2.0) / r;
    if (tau < -1e-9 || tau > T + 1e-9) {
        throw NumericError("crossing_time: tau = " + std::to_string(tau) +
                           " fell outside [0, T], contradicting its stated range");
    }
    return std::clamp(tau, 0.0, T);
}

double finite_theta_crossing(const Trajectory& p, const ProblemSpec& spec) {
    spec.validate();
    p.validate(spec.horizon_T);
    const auto diff = [&](double t, double pv) {
        return pv - rational_decision(spec.retail.alpha, spec.market, spec.horizon_T, t);
    };
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        const double da = diff(p.grid[j], p.values[j]);
        const double db = diff(p.grid[j + 1], p.values[j + 1]);
        if (da == 0.0) return p.grid[j];
        if (da * db < 0.0) {
            // Bisection on the piecewise-linear interpolant.
            double a = p.grid[j], b = p.grid[j + 1];
            double va = p.values[j], vb = p.values[j + 1];
            double fa = da;
            while (b - a > 1e-6) {
                const double m = 0.5 * (a + b);
                const double vm = va + (vb - va) * (m - a) / (b - a);
                const double fm = diff(m, vm);
                if (fa * fm <= 0.0) {
                    vb = vm;
                    b = m;
                } else {
                    va = vm;
                    fa = fm;
                    a = m;
                }
            }
            return 0.5 * (a + b);
        }
    }
    throw ConvergenceError("finite_theta_crossing: trajectory never crosses the "
                           "retail rational decision");
}

OrderingReport ordering_check(const Trajectory& p, const ProblemSpec& spec) {
    spec.validate();
    p.validate(spec.horizon_T);
    constexpr double kMargin = 1e-12;  // absorbs exact-equality endpoints
    const double a1 = spec.retail.alpha;
    const double a2 = spec.expert_alpha;
    OrderingReport rep;

    if (spec.boundary_case == BoundaryCase::Case2) {
        // Use the analytic crossing when the trajectory is the asymptotic
        // decision; otherwise locate tau(theta) on the trajectory.
        try {
            rep.tau = finite_theta_crossing(p, spec);
            rep.tau_from_trajectory = true;
        } catch (const ConvergenceError&) {
            rep.tau = crossing_time(spec);
        }
    }

    const double flip = a1 < a2 ? 1.0 : (a1 > a2 ? -1.0 : 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double t = p.grid[j];
        const double p1 = rational_decision(a1, spec.market, spec.horizon_T, t);
        const double p2 = rational_decision(a2, spec.market, spec.horizon_T, t);
        const bool after_tau =
            spec.boundary_case == BoundaryCase::Case2 && t > rep.tau;
        // alpha1 < alpha2: P >= P1bar > P2bar, except that after tau in
        // Case 2 the decision falls between the rational pair:
        // P1bar >= P > P2bar. flip reverses every inequality for
        // alpha1 > alpha2; alpha1 == alpha2 degenerates to ties.
        const double slack1 =
            after_tau ? flip * (p1 - p.values[j]) : flip * (p.values[j] - p1);
        const double slack2 =
            after_tau ? flip * (p.values[j] - p2) : flip * (p1 - p2);
        const double worst = std::min(slack1, slack2);
        rep.worst_margin = std::min(rep.worst_margin, worst);
        if (worst < -kMargin) ++rep.violations;
    }
    return rep;
}

} // namespace dci
