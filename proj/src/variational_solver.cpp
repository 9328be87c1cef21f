#include "dci/variational_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dci/quadrature.hpp"
#include "dci/special_functions.hpp"

namespace dci {

using bessel::i0_scaled;
using bessel::i1_scaled;
using bessel::k0_scaled;
using bessel::k1_scaled;

namespace {

struct GCoeffs {
    double c1;
    double c2;
};

GCoeffs g_coeffs(double zeta, double eta, const ProblemSpec& spec) {
    if (!(spec.theta > 0.0)) {
        throw ContractError("particular integrals are undefined at theta = 0");
    }
    const double r = spec.market.r;
    const double v = spec.market.v;
    const double s2 = spec.market.sigma * spec.market.sigma;
    const double T = spec.horizon_T;
    return {zeta * v * std::exp(-r * T) / (spec.expert_alpha * s2),
            eta * v * std::exp(r * T) / (zeta * r * r * spec.theta)};
}

// Panel tolerance for the adaptive quadrature of the particular
// integrals: proportional to panel width and the integrand scale so the
// accumulated error over ~2000 panels stays near 1e-12 relative.
double panel_tol(double width, double integrand_scale) {
    return std::max(1e-300, 1e-13 * std::min(width, 1.0) * integrand_scale);
}

// The weight e^{y-b} (resp. e^{a-y}) confines the scaled integrand to a
// boundary layer of this width; integrating past it only adds noise.
constexpr double kLayerWidth = 60.0;

void check_denominator(const ScaledReal& den, const ScaledReal& lead) {
    if (den.is_zero() || den.log_abs() < std::log(1e-300) ||
        den.log_abs() < lead.log_abs() - 30.0) {
        throw SingularError(
            "boundary system denominator vanished (log|D| = " +
            std::to_string(den.log_abs()) +
            "); the Bessel pair is independent, so upstream state is corrupt");
    }
}

} // namespace

ParticularIntegralValues particular_integrals(double x, const SolutionParams& params,
                                              const ProblemSpec& spec) {
    spec.validate();
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("particular_integrals: x must be > 0, got " +
                          std::to_string(x));
    }
    const auto [c1, c2] = g_coeffs(params.zeta, params.eta, spec);
    const auto g = [c1 = c1, c2 = c2](double y) { return c1 / (y * y) - c2; };

    if (x == 1.0) return {ScaledReal{0.0}, ScaledReal{0.0}};
    const double lo = std::min(1.0, x), hi = std::max(1.0, x);
    const double sign = x >= 1.0 ? 1.0 : -1.0;

    // Split [lo, hi] into panels short enough that the e^{+-y} scale moves
    // only moderately within one panel, then accumulate in scaled space.
    const int npanels = std::max(1, static_cast<int>(std::ceil((hi - lo) / 10.0)));
    const double w = (hi - lo) / npanels;
    ScaledReal acc_i{0.0}, acc_k{0.0};
    for (int p = 0; p < npanels; ++p) {
        const double a = lo + p * w;
        const double b = (p + 1 == npanels) ? hi : a + w;
        const double si =
            std::abs(i0_scaled(a) * g(a)) + std::abs(i0_scaled(b) * g(b));
        const double sk =
            std::abs(k0_scaled(a) * g(a)) + std::abs(k0_scaled(b) * g(b));
        const double vi = adaptive_simpson(
            [&](double s) { return i0_scaled(b + s) * g(b + s) * std::exp(s); },
            std::max(a - b, -kLayerWidth), 0.0, panel_tol(b - a, si));
        const double vk = adaptive_simpson(
            [&](double s) { return k0_scaled(a + s) * g(a + s) * std::exp(-s); },
            0.0, std::min(b - a, kLayerWidth), panel_tol(b - a, sk));
        acc_i = acc_i + ScaledReal{vi, b};
        acc_k = acc_k + ScaledReal{vk, -a};
    }
    return {sign > 0 ? acc_i : -acc_i, sign > 0 ? acc_k : -acc_k};
}

BoundaryCoefficients boundary_coefficients(const SolutionParams& params,
                                           const ProblemSpec& spec) {
    const double zeta = params.zeta;
    const double xi = params.xi;
    if (!(zeta > 0.0) || !(xi > 0.0)) {
        throw DomainError("boundary_coefficients: zeta and xi must be > 0");
    }
    BoundaryCoefficients c;
    c.iota0_0 = bessel::i0s(zeta);
    c.iota0_1 = bessel::i0s(xi);
    c.iota1_0 = bessel::i1s(zeta);
    c.iota1_1 = bessel::i1s(xi);
    c.kappa0_0 = bessel::k0s(zeta);
    c.kappa0_1 = bessel::k0s(xi);
    c.kappa1_0 = bessel::k1s(zeta);
    c.kappa1_1 = bessel::k1s(xi);
    const auto at_zeta = particular_integrals(zeta, params, spec);
    const auto at_xi = particular_integrals(xi, params, spec);
    c.frak_i_0 = at_zeta.frak_i;
    c.frak_i_1 = at_xi.frak_i;
    c.frak_k_0 = at_zeta.frak_k;
    c.frak_k_1 = at_xi.frak_k;
    c.frak_i_tilde = c.frak_i_1 - c.frak_i_0;
    c.frak_k_tilde = c.frak_k_1 - c.frak_k_0;
    return c;
}

GammaPair gamma_case1(const BoundaryCoefficients& c, const SolutionParams& params,
                      const ProblemSpec& spec) {
    if (params.boundary_case != BoundaryCase::Case1) {
        throw ContractError("gamma_case1: params carry a different boundary case");
    }
    const double emrT = std::exp(-spec.market.r * spec.horizon_T);
    // Endpoint targets; Eq-form uses the rational-decision values but the
    // terminal one may be overridden.
    const ScaledReal p0{spec.case1_initial_holding()};
    const ScaledReal pT{spec.case1_terminal_holding()};

    const ScaledReal den = c.iota0_0 * c.kappa0_1 - c.iota0_1 * c.kappa0_0;
    check_denominator(den, c.iota0_0 * c.kappa0_1);
    const ScaledReal cross = c.kappa0_1 * c.frak_i_tilde - c.iota0_1 * c.frak_k_tilde;
    // With the default endpoints both reduce to (.. - .. e^{-rT}) * v/(a1 s^2);
    // the general form keeps P(0) and P(T) separate.
    const ScaledReal g1 =
        -c.frak_k_0 -
        (c.kappa0_0 * cross + c.kappa0_0 * pT - c.kappa0_1 * p0) / den;
    const ScaledReal g2 =
        c.frak_i_0 + (c.iota0_0 * cross + c.iota0_0 * pT - c.iota0_1 * p0) / den;
    (void)emrT;
    return {g1, g2};
}

GammaPair gamma_case2(const BoundaryCoefficients& c, const SolutionParams& params,
                      const ProblemSpec& spec) {
    if (params.boundary_case != BoundaryCase::Case2) {
        throw ContractError("gamma_case2: params carry a different boundary case");
    }
    if (!(spec.theta > 0.0)) {
        throw ContractError(
            "gamma_case2: theta = 0 is incompatible with the Case-2 boundary "
            "conditions; the solver returns the retail rational decision instead");
    }
    const double r = spec.market.r;
    const double T = spec.horizon_T;
    const double erT = std::exp(r * T), emrT = std::exp(-r * T);
    const ScaledReal C{spec.market.v /
                       (params.zeta * spec.expert_alpha * spec.market.sigma *
                        spec.market.sigma)};
    const ScaledReal den = c.iota1_0 * c.kappa1_1 - c.iota1_1 * c.kappa1_0;
    check_denominator(den, c.iota1_0 * c.kappa1_1);
    const ScaledReal cross = c.kappa1_1 * c.frak_i_tilde + c.iota1_1 * c.frak_k_tilde;
    const ScaledReal g1 =
        -c.frak_k_0 +
        (c.kappa1_0 * cross + (c.kappa1_0 * ScaledReal{erT} -
                               c.kappa1_1 * ScaledReal{emrT}) *
                                  C) /
            den;
    const ScaledReal g2 =
        c.frak_i_0 +
        (c.iota1_0 * cross +
         (c.iota1_0 * ScaledReal{erT} - c.iota1_1 * ScaledReal{emrT}) * C) /
            den;
    return {g1, g2};
}

// ---------------------------------------------------------------------------
// AnalyticSolution
// ---------------------------------------------------------------------------

AnalyticSolution::AnalyticSolution(const ProblemSpec& spec, double zeta, double eta,
                                   std::size_t grid_n)
    : spec_(spec), zeta_(zeta), eta_(eta) {
    spec_.validate();
    spec_.market.validate_for_solver();
    if (!(zeta > 0.0) || !(eta > 0.0)) {
        throw DomainError("AnalyticSolution: zeta and eta must be > 0");
    }
    if (grid_n < 3) throw ContractError("AnalyticSolution: grid_n must be >= 3");
    xi_ = zeta_ * std::exp(-spec_.market.r * spec_.horizon_T);
    const auto [c1, c2] = g_coeffs(zeta_, eta_, spec_);
    c1_ = c1;
    c2_ = c2;
    n_ = grid_n;
    dt_ = spec_.horizon_T / static_cast<double>(n_ - 1);
    build_cache();
    compute_gammas();

    traj_ = Trajectory::uniform(spec_.horizon_T, n_);
    for (std::size_t j = 0; j < n_; ++j) {
        const Node& nd = nodes_[j];
        // I0(u) Khat(u) and K0(u) Ihat(u) have unit scale: the e^{+-u}
        // factors of the Bessel value and the anchored integral cancel.
        const ScaledReal val = gh1_ * ScaledReal{nd.i0, nd.u} +
                               gh2_ * ScaledReal{nd.k0, -nd.u} +
                               ScaledReal{nd.i0 * nd.khat} -
                               ScaledReal{nd.k0 * nd.ihat};
        traj_.values[j] = val.to_double();
    }
}

double AnalyticSolution::g_at(double y) const { return c1_ / (y * y) - c2_; }

// Both panels substitute w = e^{+-(y - anchor)} so the exponential weight
// becomes the integration measure: the remaining factor varies on scale u,
// which keeps the quadrature cheap and immune to the ulp quantization of
// y - anchor at huge arguments (one ulp of u can exceed the whole layer).
double AnalyticSolution::panel_i(double a, double b) const {
    if (b <= a) return 0.0;
    const double w_lo = std::exp(std::max(a - b, -kLayerWidth));
    const double scale =
        std::abs(i0_scaled(b) * g_at(b)) + std::abs(i0_scaled(a) * g_at(a));
    return adaptive_simpson(
        [&](double w) {
            const double y = b + std::log(w);
            return i0_scaled(y) * g_at(y);
        },
        w_lo, 1.0, panel_tol(1.0 - w_lo, scale));
}

double AnalyticSolution::panel_k(double a, double b) const {
    if (b <= a) return 0.0;
    const double w_lo = std::exp(-std::min(b - a, kLayerWidth));
    const double scale =
        std::abs(k0_scaled(a) * g_at(a)) + std::abs(k0_scaled(b) * g_at(b));
    return adaptive_simpson(
        [&](double w) {
            const double y = a - std::log(w);
            return k0_scaled(y) * g_at(y);
        },
        w_lo, 1.0, panel_tol(1.0 - w_lo, scale));
}

void AnalyticSolution::build_cache() {
    nodes_.resize(n_);
    const double r = spec_.market.r;
    for (std::size_t j = 0; j < n_; ++j) {
        const double t = (j + 1 == n_) ? spec_.horizon_T : dt_ * static_cast<double>(j);
        Node& nd = nodes_[j];
        nd.u = zeta_ * std::exp(-r * t);
        nd.i0 = i0_scaled(nd.u);
        nd.i1 = i1_scaled(nd.u);
        nd.k0 = k0_scaled(nd.u);
        nd.k1 = k1_scaled(nd.u);
    }
    nodes_.front().u = zeta_;
    nodes_.back().u = xi_;

    // Ihat(u) = int_xi^u I0 g dy, accumulated upward, scaled at each node;
    // Khat(u) = -int_u^zeta K0 g dy, accumulated downward.
    nodes_.back().ihat = 0.0;
    for (std::size_t j = n_ - 1; j-- > 0;) {
        const double a = nodes_[j + 1].u, b = nodes_[j].u;
        nodes_[j].ihat = nodes_[j + 1].ihat * std::exp(a - b) + panel_i(a, b);
    }
    nodes_.front().khat = 0.0;
    for (std::size_t j = 1; j < n_; ++j) {
        const double a = nodes_[j].u, b = nodes_[j - 1].u;
        nodes_[j].khat = nodes_[j - 1].khat * std::exp(a - b) - panel_k(a, b);
    }
}

void AnalyticSolution::compute_gammas() {
    const double r = spec_.market.r;
    const double T = spec_.horizon_T;
    const double erT = std::exp(r * T), emrT = std::exp(-r * T);

    const ScaledReal i00{nodes_.front().i0, zeta_}, i01{nodes_.back().i0, xi_};
    const ScaledReal i10{nodes_.front().i1, zeta_}, i11{nodes_.back().i1, xi_};
    const ScaledReal k00{nodes_.front().k0, -zeta_}, k01{nodes_.back().k0, -xi_};
    const ScaledReal k10{nodes_.front().k1, -zeta_}, k11{nodes_.back().k1, -xi_};
    // itld = frakI(xi) - frakI(zeta) = -Ihat(zeta); ktld = Khat(xi).
    const ScaledReal itld = -ScaledReal{nodes_.front().ihat, zeta_};
    const ScaledReal ktld{nodes_.back().khat, -xi_};

    if (spec_.boundary_case == BoundaryCase::Case1) {
        const ScaledReal p0{spec_.case1_initial_holding()};
        const ScaledReal pT{spec_.case1_terminal_holding()};
        const ScaledReal den = i00 * k01 - i01 * k00;
        check_denominator(den, i00 * k01);
        const ScaledReal cross = k01 * itld - i01 * ktld;
        // gh1 = gamma1 + frakK(zeta), gh2 = gamma2 - frakI(xi); the anchor
        // terms cancel analytically, leaving cancellation-free forms.
        gh1_ = -(k00 * cross + k00 * pT - k01 * p0) / den;
        gh2_ = (itld * i01 * k00 - i00 * i01 * ktld + i00 * pT - i01 * p0) / den;
        (void)emrT;
    } else {
        if (!(spec_.theta > 0.0)) {
            throw ContractError("AnalyticSolution: Case2 requires theta > 0");
        }
        const ScaledReal C{spec_.market.v /
                           (zeta_ * spec_.expert_alpha * spec_.market.sigma *
                            spec_.market.sigma)};
        const ScaledReal den = i10 * k11 - i11 * k10;
        check_denominator(den, i10 * k11);
        const ScaledReal cross = k11 * itld + i11 * ktld;
        gh1_ = (k10 * cross +
                (k10 * ScaledReal{erT} - k11 * ScaledReal{emrT}) * C) /
               den;
        gh2_ = (itld * i11 * k10 + i10 * i11 * ktld +
                (i10 * ScaledReal{erT} - i11 * ScaledReal{emrT}) * C) /
               den;
    }
}

std::size_t AnalyticSolution::bracket(double t) const {
    const auto j = static_cast<std::size_t>(std::floor(t / dt_));
    return std::min(j, n_ - 2);
}

double AnalyticSolution::ihat_at(double u, std::size_t j) const {
    // u lies in [u_{j+1}, u_j]; extend upward from node j+1.
    const double a = nodes_[j + 1].u;
    return nodes_[j + 1].ihat * std::exp(a - u) + panel_i(a, u);
}

double AnalyticSolution::khat_at(double u, std::size_t j) const {
    // Extend downward from node j.
    const double b = nodes_[j].u;
    return nodes_[j].khat * std::exp(u - b) - panel_k(u, b);
}

double AnalyticSolution::value(double t) const {
    if (t < 0.0 || t > spec_.horizon_T) {
        throw DomainError("AnalyticSolution::value: t outside [0, T]");
    }
    const std::size_t j = bracket(t);
    const double u =
        std::clamp(zeta_ * std::exp(-spec_.market.r * t), nodes_[j + 1].u, nodes_[j].u);
    const ScaledReal val = gh1_ * ScaledReal{i0_scaled(u), u} +
                           gh2_ * ScaledReal{k0_scaled(u), -u} +
                           ScaledReal{i0_scaled(u) * khat_at(u, j)} -
                           ScaledReal{k0_scaled(u) * ihat_at(u, j)};
    return val.to_double();
}

double AnalyticSolution::rate(double t) const {
    if (t < 0.0 || t > spec_.horizon_T) {
        throw DomainError("AnalyticSolution::rate: t outside [0, T]");
    }
    const std::size_t j = bracket(t);
    const double u =
        std::clamp(zeta_ * std::exp(-spec_.market.r * t), nodes_[j + 1].u, nodes_[j].u);
    // dP/dt = -r u [g1 I1 - g2 K1 + I1 Khat + K1 Ihat]; the g-terms of the
    // particular derivatives cancel through the Wronskian.
    const ScaledReal inner = gh1_ * ScaledReal{i1_scaled(u), u} -
                             gh2_ * ScaledReal{k1_scaled(u), -u} +
                             ScaledReal{i1_scaled(u) * khat_at(u, j)} +
                             ScaledReal{k1_scaled(u) * ihat_at(u, j)};
    return (-spec_.market.r * u * inner).to_double();
}

Trajectory AnalyticSolution::sample(std::size_t n) const {
    if (n == n_) return traj_;
    Trajectory out = Trajectory::uniform(spec_.horizon_T, n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = value(out.grid[i]);
    return out;
}

SolutionParams AnalyticSolution::params() const {
    SolutionParams p;
    p.zeta = zeta_;
    p.eta = eta_;
    p.xi = xi_;
    p.boundary_case = spec_.boundary_case;
    // Paper-form gammas: shift the anchors back to 1.
    const auto at_zeta = particular_integrals(zeta_, p, spec_);
    const auto at_xi = particular_integrals(xi_, p, spec_);
    p.gamma1 = gh1_ - at_zeta.frak_k;
    p.gamma2 = gh2_ + at_xi.frak_i;
    return p;
}

double el_residual(const Trajectory& p, const SolutionParams& params,
                   const ProblemSpec& spec) {
    spec.validate();
    p.validate(spec.horizon_T);
    if (p.size() < 201) {
        throw ContractError("el_residual: need >= 201 grid points for second "
                            "differences");
    }
    const double r = spec.market.r;
    const double v = spec.market.v;
    const double s2 = spec.market.sigma * spec.market.sigma;
    const double T = spec.horizon_T;
    const double a1 = spec.retail.alpha;
    const double h = p.step();
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < p.size(); ++j) {
        const double t = p.grid[j];
        const double pdd = (p.values[j + 1] - 2.0 * p.values[j] + p.values[j - 1]) /
                           (h * h);
        const double p2dd =
            r * r * rational_decision(spec.expert_alpha, spec.market, T, t);
        const double res = spec.theta * (pdd - p2dd) +
                           params.eta * v * std::exp(r * (T - t)) -
                           params.eta * a1 * s2 * std::exp(2.0 * r * (T - t)) *
                               p.values[j];
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

} // namespace dci
