#include "doctest.h"

#include <cmath>
#include <random>

#include "dci/scaled_real.hpp"

using dci::ScaledReal;

TEST_CASE("scaled arithmetic matches double arithmetic in range") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> mant(-5.0, 5.0);
    std::uniform_real_distribution<double> expo(-30.0, 30.0);
    for (int i = 0; i < 2000; ++i) {
        const double a = mant(rng) * std::exp(expo(rng));
        const double b = mant(rng) * std::exp(expo(rng));
        const ScaledReal sa{a}, sb{b};
        CHECK((sa + sb).to_double() == doctest::Approx(a + b).epsilon(1e-14));
        CHECK((sa - sb).to_double() == doctest::Approx(a - b).epsilon(1e-14));
        CHECK((sa * sb).to_double() == doctest::Approx(a * b).epsilon(1e-14));
        if (b != 0.0) {
            CHECK((sa / sb).to_double() == doctest::Approx(a / b).epsilon(1e-14));
        }
    }
}

TEST_CASE("huge scales combine without overflow") {
    // e^{1000} * e^{-1000} = 1 exactly in the exponent bookkeeping.
    const ScaledReal big{2.0, 1000.0};
    const ScaledReal small{3.0, -1000.0};
    CHECK((big * small).to_double() == doctest::Approx(6.0));
    // Sum dominated by the larger scale.
    const ScaledReal s = big + small;
    CHECK(s.log_abs() == doctest::Approx(1000.0 + std::log(2.0)));
    // Division across ~1e3 orders of magnitude.
    CHECK((small / big).log_abs() == doctest::Approx(-2000.0 + std::log(1.5)));
}

TEST_CASE("to_double reports overflow, unchecked saturates") {
    const ScaledReal huge{1.5, 800.0};
    CHECK_THROWS_AS((void)huge.to_double(), dci::NumericError);
    CHECK(std::isinf(huge.to_double_unchecked()));
    const ScaledReal tiny{1.5, -800.0};
    CHECK(tiny.to_double() == 0.0);
}

TEST_CASE("zero behaves as the additive identity") {
    const ScaledReal z{0.0};
    const ScaledReal x{3.5, 12.0};
    CHECK((z + x).to_double() == doctest::Approx(x.to_double()));
    CHECK((x + z).to_double() == doctest::Approx(x.to_double()));
    CHECK((x * z).is_zero());
    CHECK(z.sign() == 0);
    CHECK(std::isinf(z.log_abs()));
}

TEST_CASE("normalization keeps mantissas bounded through long products") {
    ScaledReal p{1.0};
    for (int i = 0; i < 500; ++i) p = p * ScaledReal{9.7, 3.0};
    CHECK(std::abs(p.mantissa()) < 1e151);
    CHECK(std::abs(p.mantissa()) > 1e-151);
    CHECK(p.log_abs() == doctest::Approx(500 * (std::log(9.7) + 3.0)));
}

TEST_CASE("from_log and scaled_by_exp") {
    const ScaledReal x = ScaledReal::from_log(5.0);
    CHECK(x.to_double() == doctest::Approx(std::exp(5.0)));
    CHECK(x.scaled_by_exp(-5.0).to_double() == doctest::Approx(1.0));
}
