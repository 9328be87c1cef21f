#ifndef DCI_TESTS_BESSEL_REFERENCE_HPP
#define DCI_TESTS_BESSEL_REFERENCE_HPP

// Arbitrary-precision reference values for the modified Bessel functions,
// independent of the library implementation: the I family from the
// ascending power series, the K family from the integral representation
// K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt, both evaluated with
// MPFR and rounded once at the end. Test-only code.

namespace dci::testref {

double i0_natural(double x);
double i1_natural(double x);
double k0_natural(double x);
double k1_natural(double x);

// e^{-x} I(x) and e^{x} K(x), computed in extended precision throughout.
double i0_scaled(double x);
double i1_scaled(double x);
double k0_scaled(double x);
double k1_scaled(double x);

} // namespace dci::testref

#endif
