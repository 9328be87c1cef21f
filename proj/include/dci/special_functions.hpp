#ifndef DCI_SPECIAL_FUNCTIONS_HPP
#define DCI_SPECIAL_FUNCTIONS_HPP

#include "dci/scaled_real.hpp"

namespace dci::bessel {

/// Value of a modified Bessel function in natural and scaled form.
///
/// log_scaled is log of the exponentially scaled value: log(e^{-x} I(x))
/// for the I family and log(e^{x} K(x)) for the K family, so
/// natural = exp(log_scaled + x) resp. exp(log_scaled - x). The scaled form
/// stays representable far past the point where the natural value
/// overflows (I) or underflows (K).
struct BesselValue {
    double natural;
    double log_scaled;

    /// The exponentially scaled value itself, e^{-x} I(x) or e^{x} K(x).
    double scaled() const { return std::exp(log_scaled); }
};

/// I0(x). x = 0 returns exactly 1; x < 0 or non-finite throws DomainError.
BesselValue bessel_i0(double x);
/// I1(x). x = 0 returns exactly 0.
BesselValue bessel_i1(double x);
/// K0(x). Requires x > 0 (diverges at 0).
BesselValue bessel_k0(double x);
/// K1(x). Requires x > 0.
BesselValue bessel_k1(double x);

// Scaled fast paths used in the solver's inner loops; same domain rules.
double i0_scaled(double x); // e^{-x} I0(x)
double i1_scaled(double x); // e^{-x} I1(x)
double k0_scaled(double x); // e^{x} K0(x)
double k1_scaled(double x); // e^{x} K1(x)

/// I0(x) as a ScaledReal (mantissa = scaled value, log_scale = x).
ScaledReal i0s(double x);
ScaledReal i1s(double x);
/// K0(x) as a ScaledReal (mantissa = scaled value, log_scale = -x).
ScaledReal k0s(double x);
ScaledReal k1s(double x);

} // namespace dci::bessel

#endif
