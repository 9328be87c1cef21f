#include "dci/special_functions.hpp"

#include <cmath>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include "dci/errors.hpp"

namespace dci::bessel {

namespace {

// GSL's default error handler aborts the process; all domains are validated
// here before calling in, so switch it off once.
const bool kHandlerOff = [] {
    gsl_set_error_handler_off();
    return true;
}();

void require_finite(double x, const char* fn) {
    (void)kHandlerOff;
    if (!std::isfinite(x)) {
        throw DomainError(std::string(fn) + ": argument must be finite, got " +
                          std::to_string(x));
    }
}

double eval_scaled(int (*f)(double, gsl_sf_result*), double x, const char* fn) {
    gsl_sf_result res;
    const int status = f(x, &res);
    if (status != GSL_SUCCESS) {
        throw NumericError(std::string(fn) + " failed at x = " + std::to_string(x) +
                           ": " + gsl_strerror(status));
    }
    return res.val;
}

} // namespace

double i0_scaled(double x) {
    require_finite(x, "bessel_i0");
    if (x < 0.0) throw DomainError("bessel_i0: x must be >= 0");
    return eval_scaled(gsl_sf_bessel_I0_scaled_e, x, "bessel_i0");
}

double i1_scaled(double x) {
    require_finite(x, "bessel_i1");
    if (x < 0.0) throw DomainError("bessel_i1: x must be >= 0");
    return eval_scaled(gsl_sf_bessel_I1_scaled_e, x, "bessel_i1");
}

double k0_scaled(double x) {
    require_finite(x, "bessel_k0");
    if (x <= 0.0) throw DomainError("bessel_k0: x must be > 0 (K0 diverges at 0)");
    return eval_scaled(gsl_sf_bessel_K0_scaled_e, x, "bessel_k0");
}

double k1_scaled(double x) {
    require_finite(x, "bessel_k1");
    if (x <= 0.0) throw DomainError("bessel_k1: x must be > 0 (K1 diverges at 0)");
    return eval_scaled(gsl_sf_bessel_K1_scaled_e, x, "bessel_k1");
}

namespace {

BesselValue from_scaled_i(double x, double scaled) {
    const double log_scaled = std::log(scaled);
    // natural = e^{x} * scaled; overflows to inf when x is large enough,
    // the scaled field stays valid.
    return {std::exp(log_scaled + x), log_scaled};
}

BesselValue from_scaled_k(double x, double scaled) {
    const double log_scaled = std::log(scaled);
    return {std::exp(log_scaled - x), log_scaled};
}

} // namespace

BesselValue bessel_i0(double x) {
    if (x == 0.0) return {1.0, 0.0};
    return from_scaled_i(x, i0_scaled(x));
}

BesselValue bessel_i1(double x) {
    if (x == 0.0) return {0.0, -std::numeric_limits<double>::infinity()};
    return from_scaled_i(x, i1_scaled(x));
}

BesselValue bessel_k0(double x) { return from_scaled_k(x, k0_scaled(x)); }

BesselValue bessel_k1(double x) { return from_scaled_k(x, k1_scaled(x)); }

ScaledReal i0s(double x) { return {i0_scaled(x), x}; }
ScaledReal i1s(double x) { return {i1_scaled(x), x}; }
ScaledReal k0s(double x) { return {k0_scaled(x), -x}; }
ScaledReal k1s(double x) { return {k1_scaled(x), -x}; }

} // namespace dci::bessel
