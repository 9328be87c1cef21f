#include "doctest.h"

#include <cmath>
#include <vector>

#include "bessel_reference.hpp"
#include "dci/errors.hpp"
#include "dci/special_functions.hpp"

using namespace dci::bessel;

namespace {

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) {
        out[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
    }
    return out;
}

} // namespace

TEST_CASE("reference values at x = 1 to 1e-12") {
    // Frozen from the MPFR oracles (series for I, cosh-integral for K).
    CHECK(bessel_i0(1.0).natural ==
          doctest::Approx(1.2660658777520083).epsilon(1e-12));
    CHECK(bessel_i1(1.0).natural ==
          doctest::Approx(0.5651591039924850).epsilon(1e-12));
    CHECK(bessel_k0(1.0).natural ==
          doctest::Approx(0.4210244382407083).epsilon(1e-12));
    CHECK(bessel_k1(1.0).natural ==
          doctest::Approx(0.6019072301972346).epsilon(1e-12));
}

TEST_CASE("i0 special points") {
    CHECK(bessel_i0(0.0).natural == 1.0);  // exactly, by contract
    CHECK(bessel_i1(0.0).natural == 0.0);
    // e^{-10} I0(10), frozen from the series oracle
    CHECK(bessel_i0(10.0).scaled() ==
          doctest::Approx(0.12783333716342861).epsilon(1e-12));
}

TEST_CASE("agreement with the arbitrary-precision oracles over the domain") {
    for (double x : log_spaced(1e-3, 700.0, 25)) {
        CAPTURE(x);
        CHECK(i0_scaled(x) == doctest::Approx(dci::testref::i0_scaled(x)).epsilon(1e-12));
        CHECK(i1_scaled(x) == doctest::Approx(dci::testref::i1_scaled(x)).epsilon(1e-12));
        CHECK(k0_scaled(x) == doctest::Approx(dci::testref::k0_scaled(x)).epsilon(1e-12));
        CHECK(k1_scaled(x) == doctest::Approx(dci::testref::k1_scaled(x)).epsilon(1e-12));
    }
    // natural forms where representable
    for (double x : {1e-3, 0.1, 2.0, 25.0, 300.0}) {
        CAPTURE(x);
        CHECK(bessel_i0(x).natural ==
              doctest::Approx(dci::testref::i0_natural(x)).epsilon(1e-12));
        CHECK(bessel_k1(x).natural ==
              doctest::Approx(dci::testref::k1_natural(x)).epsilon(1e-12));
    }
}

TEST_CASE("scaled forms stay valid far past the overflow point") {
    for (double x : {1e3, 1e4, 1e6}) {
        CAPTURE(x);
        const auto i0 = bessel_i0(x);
        const auto k0 = bessel_k0(x);
        CHECK(std::isinf(i0.natural));  // natural overflows, by design
        CHECK(std::isfinite(i0.log_scaled));
        CHECK(std::isfinite(k0.log_scaled));
        CHECK(k0_scaled(x) ==
              doctest::Approx(dci::testref::k0_scaled(x)).epsilon(1e-12));
        // K-oracle doubles as an I cross-check through the Wronskian.
        const double wr = x * (i0_scaled(x) * k1_scaled(x) +
                               i1_scaled(x) * k0_scaled(x));
        CHECK(std::abs(wr - 1.0) <= 1e-11);
    }
}

TEST_CASE("invariant: natural = exp(log_scaled +- x)") {
    for (double x : {0.5, 3.0, 42.0, 250.0}) {
        CAPTURE(x);
        const auto i1 = bessel_i1(x);
        const auto k0 = bessel_k0(x);
        CHECK(i1.natural == doctest::Approx(std::exp(i1.log_scaled + x)).epsilon(1e-13));
        CHECK(k0.natural == doctest::Approx(std::exp(k0.log_scaled - x)).epsilon(1e-13));
        CHECK(i1.natural > 0.0);
        CHECK(k0.natural > 0.0);
    }
}

TEST_CASE("Wronskian x (I0 K1 + I1 K0) = 1 over the working range") {
    double worst = 0.0;
    for (double x : log_spaced(1e-3, 700.0, 2000)) {
        const double wr =
            x * (i0_scaled(x) * k1_scaled(x) + i1_scaled(x) * k0_scaled(x));
        worst = std::max(worst, std::abs(wr - 1.0));
    }
    CHECK(worst <= 1e-11);
}

TEST_CASE("derivative relations I0' = I1 and K0' = -K1") {
    for (double x : {0.5, 2.0, 10.0, 50.0}) {
        CAPTURE(x);
        const double h = 1e-5 * x;
        const double di0 =
            (bessel_i0(x + h).natural - bessel_i0(x - h).natural) / (2.0 * h);
        const double dk0 =
            (bessel_k0(x + h).natural - bessel_k0(x - h).natural) / (2.0 * h);
        CHECK(di0 == doctest::Approx(bessel_i1(x).natural).epsilon(1e-6));
        CHECK(dk0 == doctest::Approx(-bessel_k1(x).natural).epsilon(1e-6));
    }
}

TEST_CASE("monotonicity: I increasing, K decreasing") {
    const auto xs = log_spaced(1e-3, 600.0, 300);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        // compare in log space so growth past overflow still checks
        CHECK(bessel_i0(xs[i]).log_scaled + xs[i] >
              bessel_i0(xs[i - 1]).log_scaled + xs[i - 1]);
        CHECK(bessel_i1(xs[i]).log_scaled + xs[i] >
              bessel_i1(xs[i - 1]).log_scaled + xs[i - 1]);
        CHECK(bessel_k0(xs[i]).log_scaled - xs[i] <
              bessel_k0(xs[i - 1]).log_scaled - xs[i - 1]);
        CHECK(bessel_k1(xs[i]).log_scaled - xs[i] <
              bessel_k1(xs[i - 1]).log_scaled - xs[i - 1]);
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS((void)bessel_i0(-1.0), dci::DomainError);
    CHECK_THROWS_AS((void)bessel_i1(-0.5), dci::DomainError);
    CHECK_THROWS_AS((void)bessel_k0(0.0), dci::DomainError);
    CHECK_THROWS_AS((void)bessel_k1(-2.0), dci::DomainError);
    CHECK_THROWS_AS((void)bessel_i0(std::nan("")), dci::DomainError);
    CHECK_THROWS_AS((void)bessel_k0(std::numeric_limits<double>::infinity()),
                    dci::DomainError);
}
