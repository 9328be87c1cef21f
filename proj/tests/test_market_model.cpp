#include "doctest.h"

#include <cmath>

#include "dci/market_model.hpp"

using namespace dci;

namespace {

ProblemSpec paper_spec() {
    ProblemSpec s;  // defaults carry the calibrated market parameters
    s.market = {0.04, 0.03, 0.17};
    s.retail = {0.2, 1.0};
    s.expert_alpha = 0.4;
    s.horizon_T = 50.0;
    s.theta = 1.0;
    return s;
}

} // namespace

TEST_CASE("rational decision values") {
    const MarketParams m{0.04, 0.03, 0.17};
    CHECK(rational_decision(0.4, m, 50.0, 50.0) ==
          doctest::Approx(2.5951557093425606).epsilon(1e-12));
    CHECK(rational_decision(0.4, m, 50.0, 0.0) ==
          doctest::Approx(0.3512161329669880).epsilon(1e-12));
    // inverse proportionality in alpha
    CHECK(rational_decision(0.2, m, 50.0, 50.0) ==
          doctest::Approx(2.0 * rational_decision(0.4, m, 50.0, 50.0)));
    // strictly increasing in t
    CHECK(rational_decision(0.4, m, 50.0, 30.0) >
          rational_decision(0.4, m, 50.0, 10.0));
    CHECK_THROWS_AS((void)rational_decision(0.4, m, 50.0, -1.0), DomainError);
    CHECK_THROWS_AS((void)rational_decision(0.4, m, 50.0, 50.01), DomainError);
}

TEST_CASE("rational decision rate") {
    const MarketParams m{0.04, 0.03, 0.17};
    CHECK(rational_decision_rate(0.4, m, 50.0, 50.0) ==
          doctest::Approx(0.1038062283737024).epsilon(1e-12));
    CHECK(rational_decision_rate(0.4, m, 50.0, 0.0) ==
          doctest::Approx(0.0140486453186795).epsilon(1e-10));
    for (double t : {0.0, 17.3, 50.0}) {
        CHECK(rational_decision_rate(0.31, m, 50.0, t) ==
              doctest::Approx(m.r * rational_decision(0.31, m, 50.0, t)));
    }
}

TEST_CASE("scale check: alpha times decision is alpha-free") {
    const MarketParams m{0.04, 0.03, 0.17};
    for (double t : {0.0, 20.0, 50.0}) {
        const double ref = 0.1 * rational_decision(0.1, m, 50.0, t);
        for (double a : {0.2, 0.7, 3.0}) {
            CHECK(a * rational_decision(a, m, 50.0, t) == doctest::Approx(ref));
        }
    }
}

TEST_CASE("integral disparity examples") {
    auto p = Trajectory::uniform(1.0, 2001);
    auto q = Trajectory::uniform(1.0, 2001);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p.values[i] = 2.0 * p.grid[i];
        q.values[i] = q.grid[i];
    }
    CHECK(integral_disparity(p, p) == 0.0);
    CHECK(integral_disparity(p, q) == doctest::Approx(0.5).epsilon(1e-12));

    auto p2 = Trajectory::uniform(1.0, 2001);
    auto z = Trajectory::uniform(1.0, 2001);
    for (std::size_t i = 0; i < p2.size(); ++i) {
        p2.values[i] = p2.grid[i] * p2.grid[i];
    }
    CHECK(integral_disparity(p2, z) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("integral disparity is symmetric and shift-invariant") {
    auto p = Trajectory::uniform(3.0, 501);
    auto q = Trajectory::uniform(3.0, 501);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p.values[i] = std::sin(p.grid[i]);
        q.values[i] = q.grid[i] * 0.3;
    }
    const double d = integral_disparity(p, q);
    CHECK(integral_disparity(q, p) == doctest::Approx(d));
    auto shifted = q;
    for (auto& v : shifted.values) v += 17.5;
    CHECK(integral_disparity(p, shifted) == doctest::Approx(d));
}

TEST_CASE("mismatched grids are a contract error") {
    auto p = Trajectory::uniform(1.0, 101);
    auto q = Trajectory::uniform(1.0, 201);
    CHECK_THROWS_AS((void)integral_disparity(p, q), ContractError);
}

TEST_CASE("deterministic-equivalent eta for the zero control") {
    auto spec = paper_spec();
    const auto zero = Trajectory::uniform(50.0, 2001);
    // exp(-0.2 e^2), no integrals contribute
    CHECK(deterministic_equivalent_eta(zero, spec) ==
          doctest::Approx(0.2281364829287600).epsilon(1e-12));
    spec.theta = 0.0;
    CHECK(objective(zero, spec) ==
          doctest::Approx(-1.1406824146438001).epsilon(1e-12));
}

TEST_CASE("small-alpha expansion recovers the mean terminal wealth") {
    auto spec = paper_spec();
    spec.retail.alpha = 1e-6;
    const auto p = rational_trajectory(0.2, spec.market, 50.0, 2001);
    const double eta = deterministic_equivalent_eta(p, spec);
    // -(eta - 1)/alpha -> x1 e^{rT} + v int e^{r(T-t)} p dt as alpha -> 0
    const double mean_wealth = -(eta - 1.0) / spec.retail.alpha;
    double q1 = 0.0;
    {
        const double h = p.step();
        double s4 = 0.0, s2 = 0.0;
        auto f = [&](std::size_t i) {
            return std::exp(spec.market.r * (50.0 - p.grid[i])) * p.values[i];
        };
        for (std::size_t i = 1; i + 1 < p.size(); i += 2) s4 += f(i);
        for (std::size_t i = 2; i + 1 < p.size(); i += 2) s2 += f(i);
        q1 = (f(0) + f(p.size() - 1) + 4.0 * s4 + 2.0 * s2) * h / 3.0;
    }
    const double expected = spec.retail.x0 * std::exp(0.04 * 50.0) + 0.03 * q1;
    CHECK(mean_wealth == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("quadrature convergence: doubling the grid moves eta below 1e-8") {
    auto spec = paper_spec();
    const auto p1 = rational_trajectory(0.2, spec.market, 50.0, 2001);
    const auto p2 = rational_trajectory(0.2, spec.market, 50.0, 4001);
    const double e1 = deterministic_equivalent_eta(p1, spec);
    const double e2 = deterministic_equivalent_eta(p2, spec);
    CHECK(std::abs(e1 - e2) / e2 <= 1e-8);
}

TEST_CASE("objective: the Merton decision is optimal at theta = 0") {
    auto spec = paper_spec();
    spec.theta = 0.0;
    const auto best = rational_trajectory(0.2, spec.market, 50.0, 1001);
    const double jbest = objective(best, spec);
    for (double bump : {-0.05, 0.02, 0.1}) {
        auto perturbed = best;
        for (std::size_t i = 0; i < perturbed.size(); ++i) {
            perturbed.values[i] +=
                bump * std::sin(3.0 * perturbed.grid[i] / 50.0 * 3.14159);
        }
        CHECK(objective(perturbed, spec) < jbest);
    }
}

TEST_CASE("objective is linear in theta through the disparity term") {
    auto spec = paper_spec();
    const auto p = rational_trajectory(0.2, spec.market, 50.0, 1001);
    spec.theta = 0.0;
    const double j0 = objective(p, spec);
    const double d = disparity_to_expert(p, spec);
    CHECK(d > 0.0);
    for (double th : {1.0, 10.0, 1e4}) {
        spec.theta = th;
        CHECK(objective(p, spec) == doctest::Approx(j0 - th * d).epsilon(1e-12));
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(MarketParams(-0.01, 0.03, 0.17).validate(), DomainError);
    CHECK_THROWS_AS(MarketParams(0.04, 0.03, 0.0).validate(), DomainError);
    CHECK_THROWS_AS(MarketParams(0.04, -0.03, 0.17).validate_for_solver(),
                    DomainError);
    CHECK_NOTHROW(MarketParams(0.04, -0.03, 0.17).validate());
    ProblemSpec bad;
    bad.theta = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    Trajectory t = Trajectory::uniform(1.0, 11);
    t.values[3] = std::nan("");
    CHECK_THROWS_AS(t.validate(1.0), NumericError);
}
