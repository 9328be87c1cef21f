#include "dci/market_model.hpp"

#include <cmath>
#include <string>

#include "dci/quadrature.hpp"

namespace dci {

void MarketParams::validate() const {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("MarketParams: interest rate r must be > 0, got " +
                          std::to_string(r));
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("MarketParams: volatility sigma must be > 0, got " +
                          std::to_string(sigma));
    }
    if (!std::isfinite(v)) {
        throw DomainError("MarketParams: excess return v must be finite");
    }
}

void MarketParams::validate_for_solver() const {
    validate();
    if (!(v > 0.0)) {
        throw DomainError("MarketParams: solver requires excess return v > 0, got " +
                          std::to_string(v));
    }
}

void Investor::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("Investor: risk aversion alpha must be > 0, got " +
                          std::to_string(alpha));
    }
    if (!std::isfinite(x0)) throw DomainError("Investor: initial wealth must be finite");
}

void ProblemSpec::validate() const {
    market.validate();
    retail.validate();
    if (!(expert_alpha > 0.0) || !std::isfinite(expert_alpha)) {
        throw DomainError("ProblemSpec: expert_alpha must be > 0");
    }
    if (!(horizon_T > 0.0) || !std::isfinite(horizon_T)) {
        throw DomainError("ProblemSpec: horizon_T must be > 0");
    }
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
        throw DomainError("ProblemSpec: theta must be >= 0");
    }
}

double ProblemSpec::case1_initial_holding() const {
    if (case1_endpoints) return case1_endpoints->first;
    return rational_decision(retail.alpha, market, horizon_T, 0.0);
}

double ProblemSpec::case1_terminal_holding() const {
    if (case1_endpoints) return case1_endpoints->second;
    return rational_decision(retail.alpha, market, horizon_T, horizon_T);
}

Trajectory Trajectory::uniform(double horizon_T, std::size_t n) {
    if (n < 3) throw ContractError("Trajectory: need at least 3 grid points");
    Trajectory out;
    out.grid.resize(n);
    out.values.assign(n, 0.0);
    const double h = horizon_T / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out.grid[i] = static_cast<double>(i) * h;
    out.grid.back() = horizon_T;
    return out;
}

void Trajectory::validate(double horizon_T) const {
    if (grid.size() < 3) throw ContractError("Trajectory: length must be >= 3");
    if (grid.size() != values.size()) {
        throw ContractError("Trajectory: grid/value length mismatch");
    }
    if (grid.front() != 0.0) throw ContractError("Trajectory: grid must start at 0");
    if (std::abs(grid.back() - horizon_T) > 1e-12 * std::max(1.0, horizon_T)) {
        throw ContractError("Trajectory: grid must end at T");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ContractError("Trajectory: grid must be strictly increasing");
        }
    }
    for (double x : values) {
        if (!std::isfinite(x)) throw NumericError("Trajectory: non-finite value");
    }
}

bool Trajectory::same_grid(const Trajectory& other) const {
    return grid == other.grid;
}

double rational_decision(double alpha, const MarketParams& market, double horizon_T,
                         double t) {
    market.validate();
    if (!(alpha > 0.0)) throw DomainError("rational_decision: alpha must be > 0");
    if (t < 0.0 || t > horizon_T) {
        throw DomainError("rational_decision: t = " + std::to_string(t) +
                          " outside [0, " + std::to_string(horizon_T) + "]");
    }
    return market.v / (alpha * market.sigma * market.sigma) *
           std::exp(market.r * (t - horizon_T));
}

double rational_decision_rate(double alpha, const MarketParams& market,
                              double horizon_T, double t) {
    return market.r * rational_decision(alpha, market, horizon_T, t);
}

Trajectory rational_trajectory(double alpha, const MarketParams& market,
                               double horizon_T, std::size_t n) {
    Trajectory out = Trajectory::uniform(horizon_T, n);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = rational_decision(alpha, market, horizon_T, out.grid[i]);
    }
    return out;
}

double integral_disparity(const Trajectory& p, const Trajectory& q) {
    if (!p.same_grid(q)) {
        throw ContractError("integral_disparity: trajectories must share one grid");
    }
    if (p.size() < 3) throw ContractError("integral_disparity: need >= 3 points");
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        const double h = p.grid[j + 1] - p.grid[j];
        const double sp = (p.values[j + 1] - p.values[j]) / h;
        const double sq = (q.values[j + 1] - q.values[j]) / h;
        acc += h * (sp - sq) * (sp - sq);
    }
    return 0.5 * acc;
}

double disparity_to_expert(const Trajectory& p, const ProblemSpec& spec) {
    spec.validate();
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        const double h = p.grid[j + 1] - p.grid[j];
        const double mid = 0.5 * (p.grid[j] + p.grid[j + 1]);
        const double sp = (p.values[j + 1] - p.values[j]) / h;
        const double qdot =
            rational_decision_rate(spec.expert_alpha, spec.market, spec.horizon_T, mid);
        acc += h * (sp - qdot) * (sp - qdot);
    }
    return 0.5 * acc;
}

double deterministic_equivalent_eta(const Trajectory& p, const ProblemSpec& spec) {
    spec.validate();
    p.validate(spec.horizon_T);
    const double a1 = spec.retail.alpha;
    const double x1 = spec.retail.x0;
    const double r = spec.market.r;
    const double v = spec.market.v;
    const double s2 = spec.market.sigma * spec.market.sigma;
    const double T = spec.horizon_T;

    std::vector<double> f1(p.size()), f2(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double a = std::exp(r * (T - p.grid[i]));
        f1[i] = a * p.values[i];
        f2[i] = a * a * p.values[i] * p.values[i];
    }
    const double h = p.step();
    const double q1 = simpson_uniform(f1, h);
    const double q2 = simpson_uniform(f2, h);
    const double log_eta =
        -a1 * x1 * std::exp(r * T) - a1 * v * q1 + 0.5 * a1 * a1 * s2 * q2;
    if (!std::isfinite(log_eta)) {
        throw NumericError("deterministic_equivalent_eta: non-finite exponent " +
                           std::to_string(log_eta));
    }
    return std::exp(log_eta);
}

double objective(const Trajectory& p, const ProblemSpec& spec) {
    const double eta = deterministic_equivalent_eta(p, spec);
    return -eta / spec.retail.alpha - spec.theta * disparity_to_expert(p, spec);
}

} // namespace dci
