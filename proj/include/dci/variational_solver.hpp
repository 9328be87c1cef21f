#ifndef DCI_VARIATIONAL_SOLVER_HPP
#define DCI_VARIATIONAL_SOLVER_HPP

#include <cstddef>
#include <vector>

#include "dci/market_model.hpp"
#include "dci/scaled_real.hpp"

namespace dci {

/// The solved constants that fully determine the analytic trajectory:
/// integral constants zeta (argument scale) and eta (utility constant),
/// the boundary parameters gamma1/gamma2 in log-scaled form, and the
/// derived lower argument xi = zeta e^{-rT}.
struct SolutionParams {
    double zeta = 0.0;
    double eta = 0.0;
    double xi = 0.0;
    ScaledReal gamma1{0.0};
    ScaledReal gamma2{0.0};
    BoundaryCase boundary_case = BoundaryCase::Case1;
};

/// The shorthand table evaluated at (zeta, xi): iota = I family,
/// kappa = K family, subscript = order, superscript 0 at zeta / 1 at xi;
/// frak_i / frak_k are the particular integrals anchored at 1 and the
/// tilde entries their differences across [xi, zeta].
struct BoundaryCoefficients {
    ScaledReal iota0_0, iota0_1, iota1_0, iota1_1;
    ScaledReal kappa0_0, kappa0_1, kappa1_0, kappa1_1;
    ScaledReal frak_i_0, frak_i_1;      // at zeta / at xi
    ScaledReal frak_k_0, frak_k_1;
    ScaledReal frak_i_tilde, frak_k_tilde;
};

struct GammaPair {
    ScaledReal gamma1;
    ScaledReal gamma2;
};

struct ParticularIntegralValues {
    ScaledReal frak_i;
    ScaledReal frak_k;
};

/// Oriented particular integrals int_1^x I0(y) g(y) dy and
/// int_1^x K0(y) g(y) dy with g(y) = zeta v e^{-rT}/(a2 s^2 y^2)
/// - eta v e^{rT}/(zeta r^2 theta), by adaptive quadrature on scaled
/// Bessel values. Requires theta > 0 and x > 0.
ParticularIntegralValues particular_integrals(double x, const SolutionParams& params,
                                              const ProblemSpec& spec);

/// The shorthand table for the given constants.
BoundaryCoefficients boundary_coefficients(const SolutionParams& params,
                                           const ProblemSpec& spec);

/// Boundary parameters for fixed endpoints (Problem 3). Requires Case1.
GammaPair gamma_case1(const BoundaryCoefficients& coeffs, const SolutionParams& params,
                      const ProblemSpec& spec);

/// Boundary parameters for matched endpoint rates (Problem 4).
/// Requires Case2 and theta > 0.
GammaPair gamma_case2(const BoundaryCoefficients& coeffs, const SolutionParams& params,
                      const ProblemSpec& spec);

/// The closed-form decision for given integral constants: homogeneous
/// Bessel pair plus variation-of-parameters terms, all evaluated in
/// scaled space. Construction caches the particular integrals on a
/// uniform time grid; evaluation between nodes integrates the short
/// remaining panel exactly.
class AnalyticSolution {
public:
    AnalyticSolution(const ProblemSpec& spec, double zeta, double eta,
                     std::size_t grid_n = 2001);

    double value(double t) const;
    double rate(double t) const;

    /// The trajectory on the construction grid (no re-evaluation).
    const Trajectory& trajectory() const { return traj_; }
    /// Sampled on a fresh uniform grid of n points.
    Trajectory sample(std::size_t n) const;

    double zeta() const { return zeta_; }
    double eta() const { return eta_; }
    double xi() const { return xi_; }
    const ProblemSpec& spec() const { return spec_; }

    /// Anchored evaluation parameters gamma1 + frakK(zeta), gamma2 - frakI(xi).
    GammaPair anchored_gammas() const { return {gh1_, gh2_}; }
    /// Full solved constants including the paper-form gamma1/gamma2
    /// (computes the anchor-1 particular integrals on demand).
    SolutionParams params() const;

private:
    struct Node {
        double u;
        double i0, i1, k0, k1;      // exponentially scaled Bessel values
        double ihat, khat;          // scaled anchored integrals
    };

    void build_cache();
    void compute_gammas();
    double g_at(double y) const;
    // Scaled panel integrals of I0 g (scale e^{-b}) and K0 g (scale e^{-a})
    // over [a, b], a < b.
    double panel_i(double a, double b) const;
    double panel_k(double a, double b) const;
    // Anchored integrals at arbitrary u in [xi, zeta], scaled at u.
    double ihat_at(double u, std::size_t j) const;
    double khat_at(double u, std::size_t j) const;
    std::size_t bracket(double t) const;

    ProblemSpec spec_;
    double zeta_, eta_, xi_;
    double c1_, c2_;                // g(y) = c1/y^2 - c2
    std::size_t n_;
    double dt_;
    std::vector<Node> nodes_;       // node j at t_j = j dt, u decreasing
    ScaledReal gh1_, gh2_;
    Trajectory traj_;
};

/// Maximum absolute stationarity residual of the discretized
/// Euler-Lagrange condition theta (pddot - P2bar_ddot) + eta v e^{r(T-t)}
/// - eta a1 s^2 e^{2r(T-t)} p over interior grid points, second
/// derivatives by central differences. Diagnostic; needs >= 201 points.
double el_residual(const Trajectory& p, const SolutionParams& params,
                   const ProblemSpec& spec);

} // namespace dci

#endif
