#ifndef DCI_MARKET_MODEL_HPP
#define DCI_MARKET_MODEL_HPP

#include <optional>
#include <utility>
#include <vector>

#include "dci/errors.hpp"

namespace dci {

/// Two-asset market: risk-free rate r, excess return v and volatility sigma
/// of the risky asset, all annualized.
struct MarketParams {
    double r = 0.04;
    double v = 0.03;
    double sigma = 0.17;

    void validate() const;
    /// Solver entry points additionally need a positive excess return.
    void validate_for_solver() const;
};

/// CARA investor: risk aversion alpha (1/currency) and initial wealth
/// x0 (currency).
struct Investor {
    double alpha = 0.2;
    double x0 = 1.0;

    void validate() const;
};

/// Which pair of variational boundary conditions closes the problem:
/// Case1 pins the initial and terminal holdings to the retail rational
/// decision; Case2 matches the initial and terminal decision-changing
/// rates to the expert's.
enum class BoundaryCase { Case1 = 1, Case2 = 2 };

/// Full problem statement for the retail investor's optimal decision.
struct ProblemSpec {
    MarketParams market;
    Investor retail;            // alpha_1, x_1
    double expert_alpha = 0.4;  // alpha_2
    double horizon_T = 50.0;    // years
    double theta = 1.0;         // imitation coefficient, >= 0
    BoundaryCase boundary_case = BoundaryCase::Case1;

    /// Optional Case-1 endpoint override (P(0), P(T)); defaults to the
    /// retail rational decision at 0 and T.
    std::optional<std::pair<double, double>> case1_endpoints;

    void validate() const;
    double case1_initial_holding() const;
    double case1_terminal_holding() const;
};

/// A decision path sampled on a strictly increasing time grid over [0, T],
/// values in currency held in the risky asset. Uniform grid by default.
struct Trajectory {
    std::vector<double> grid;
    std::vector<double> values;

    static Trajectory uniform(double horizon_T, std::size_t n);
    std::size_t size() const { return grid.size(); }
    double step() const { return grid.size() > 1 ? grid[1] - grid[0] : 0.0; }
    void validate(double horizon_T) const;
    bool same_grid(const Trajectory& other) const;
};

/// Merton-optimal holding (v / (alpha sigma^2)) e^{r(t-T)}.
double rational_decision(double alpha, const MarketParams& market, double horizon_T,
                         double t);

/// Time derivative of the rational decision; equals r * rational_decision.
double rational_decision_rate(double alpha, const MarketParams& market,
                              double horizon_T, double t);

Trajectory rational_trajectory(double alpha, const MarketParams& market,
                               double horizon_T, std::size_t n);

/// Half the integrated squared difference of the two paths'
/// decision-changing rates: forward-difference slopes live on panel
/// midpoints, integrated by the midpoint rule. Zero iff the slopes agree
/// everywhere; symmetric; insensitive to constant shifts.
double integral_disparity(const Trajectory& p, const Trajectory& q);

/// Disparity of p against the expert's rational decision rate (the
/// reference rate is evaluated analytically at the panel midpoints).
double disparity_to_expert(const Trajectory& p, const ProblemSpec& spec);

/// The integral constant eta of the deterministic-equivalent utility:
/// for a deterministic control, E phi_1(X_1(T)) = -eta / alpha_1 with
/// eta = exp(-a1 x1 e^{rT} - a1 v I1[p] + (a1^2 s^2 / 2) I2[p^2]),
/// both integrals by composite Simpson on p's grid.
double deterministic_equivalent_eta(const Trajectory& p, const ProblemSpec& spec);

/// The exact deterministic reduction of the retail objective:
/// -eta(p)/alpha_1 - theta * D(pdot, expert rate).
double objective(const Trajectory& p, const ProblemSpec& spec);

} // namespace dci

#endif
