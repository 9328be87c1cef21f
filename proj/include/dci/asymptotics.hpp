#ifndef DCI_ASYMPTOTICS_HPP
#define DCI_ASYMPTOTICS_HPP

#include "dci/market_model.hpp"

namespace dci {

/// Closed-form theta -> infinity decision under fixed endpoints: the
/// expert's rational decision plus a linear ramp that meets the retail
/// rational decision at both endpoints.
double asymptotic_case1(const ProblemSpec& spec, double t);

/// Closed-form theta -> infinity decision under matched endpoint rates:
/// the expert's rational decision plus a constant offset
/// 2 v (a1^{-1} - a2^{-1}) / s^2 * (e^{rT}-1)/(e^{2rT}-1).
double asymptotic_case2(const ProblemSpec& spec, double t);

Trajectory asymptotic_trajectory(const ProblemSpec& spec, std::size_t n);

/// The instant where the Case-2 asymptotic decision crosses the retail
/// rational decision: tau = T + ln((e^{rT}-1)/(e^{2rT}-1))/r + ln(2)/r,
/// a function of r and T only, always inside [0, T].
double crossing_time(const ProblemSpec& spec);

/// Pointwise ordering report for the comparison theorems. Case 1 checks
/// P >= P1bar > P2bar (alpha1 < alpha2; reversed otherwise) on the whole
/// grid; Case 2 checks the split orderings before and after the crossing
/// time, which is located on the trajectory itself by bisection for
/// finite theta. Ties within the margin are not violations.
struct OrderingReport {
    long violations = 0;
    double worst_margin = 0.0;  // most negative inequality slack observed
    double tau = 0.0;           // crossing time used (Case 2 only)
    bool tau_from_trajectory = false;
};

OrderingReport ordering_check(const Trajectory& p, const ProblemSpec& spec);

/// Crossing of p against the retail rational decision, located by
/// bisection on the piecewise-linear interpolant (tolerance 1e-6 years).
/// Returns the first crossing; throws ConvergenceError if none exists.
double finite_theta_crossing(const Trajectory& p, const ProblemSpec& spec);

} // namespace dci

#endif
