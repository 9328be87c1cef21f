#include "bessel_reference.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>

namespace dci::testref {

namespace {

constexpr mpfr_prec_t kPrec = 384;

class Mp {
public:
    Mp() { mpfr_init2(v, kPrec); }
    explicit Mp(double x) {
        mpfr_init2(v, kPrec);
        mpfr_set_d(v, x, MPFR_RNDN);
    }
    Mp(const Mp& o) {
        mpfr_init2(v, kPrec);
        mpfr_set(v, o.v, MPFR_RNDN);
    }
    Mp& operator=(const Mp& o) {
        mpfr_set(v, o.v, MPFR_RNDN);
        return *this;
    }
    ~Mp() { mpfr_clear(v); }
    mpfr_t v;
};

// Ascending series I_nu(x) = sum_k (x/2)^{2k+nu} / (k! (k+nu)!), nu in {0,1}.
// All terms positive, no cancellation at any x.
Mp i_series(double x, int nu) {
    Mp half(x);
    mpfr_div_ui(half.v, half.v, 2, MPFR_RNDN);
    Mp q;
    mpfr_mul(q.v, half.v, half.v, MPFR_RNDN);  // (x/2)^2
    Mp term;
    if (nu == 0) {
        mpfr_set_ui(term.v, 1, MPFR_RNDN);
    } else {
        mpfr_set(term.v, half.v, MPFR_RNDN);
    }
    Mp sum = term;
    Mp tmp;
    for (unsigned long k = 1; k < 4000000; ++k) {
        // term *= q / (k (k + nu))
        mpfr_mul(term.v, term.v, q.v, MPFR_RNDN);
        mpfr_div_ui(term.v, term.v, k, MPFR_RNDN);
        mpfr_div_ui(term.v, term.v, k + static_cast<unsigned long>(nu), MPFR_RNDN);
        mpfr_add(sum.v, sum.v, term.v, MPFR_RNDN);
        mpfr_div(tmp.v, term.v, sum.v, MPFR_RNDN);
        if (mpfr_cmp_d(tmp.v, 1e-100) < 0) return sum;
    }
    throw std::runtime_error("i_series: no convergence");
}

// Trapezoid on t of e^{-x cosh t} cosh(nu t): the integrand is even and
// analytic, so the trapezoid rule converges geometrically in 1/h; halve h
// until two successive answers agree.
Mp k_integral(double x, int nu) {
    if (!(x > 0.0)) throw std::runtime_error("k_integral: x must be > 0");
    // e^{-x cosh t} < 2^-440 once x cosh t > 310.
    const double tmax = std::acosh(std::max(310.0 / x, 2.0)) + 1.0;
    Mp prev;
    mpfr_set_d(prev.v, -1.0, MPFR_RNDN);
    Mp xm(x);
    for (double h = 0.5;; h *= 0.5) {
        if (h < 1e-4) throw std::runtime_error("k_integral: no convergence");
        const long n = static_cast<long>(tmax / h) + 1;
        Mp sum, t, w, e;
        mpfr_set_ui(sum.v, 0, MPFR_RNDN);
        for (long j = 0; j <= n; ++j) {
            mpfr_set_d(t.v, h * static_cast<double>(j), MPFR_RNDN);
            mpfr_cosh(w.v, t.v, MPFR_RNDN);
            mpfr_mul(e.v, w.v, xm.v, MPFR_RNDN);
            mpfr_neg(e.v, e.v, MPFR_RNDN);
            mpfr_exp(e.v, e.v, MPFR_RNDN);
            if (nu == 1) {
                mpfr_mul(e.v, e.v, w.v, MPFR_RNDN);
            }
            if (j == 0) mpfr_div_ui(e.v, e.v, 2, MPFR_RNDN);
            mpfr_add(sum.v, sum.v, e.v, MPFR_RNDN);
        }
        Mp hm(h);
        mpfr_mul(sum.v, sum.v, hm.v, MPFR_RNDN);
        Mp diff = sum;
        mpfr_sub(diff.v, diff.v, prev.v, MPFR_RNDN);
        mpfr_div(diff.v, diff.v, sum.v, MPFR_RNDN);
        mpfr_abs(diff.v, diff.v, MPFR_RNDN);
        if (mpfr_cmp_d(diff.v, 1e-40) < 0) return sum;
        prev = sum;
    }
}

double scaled_i(double x, int nu) {
    Mp s = i_series(x, nu);
    Mp e(x);
    mpfr_neg(e.v, e.v, MPFR_RNDN);
    mpfr_exp(e.v, e.v, MPFR_RNDN);
    mpfr_mul(s.v, s.v, e.v, MPFR_RNDN);
    return mpfr_get_d(s.v, MPFR_RNDN);
}

double scaled_k(double x, int nu) {
    Mp s = k_integral(x, nu);
    Mp e(x);
    mpfr_exp(e.v, e.v, MPFR_RNDN);
    mpfr_mul(s.v, s.v, e.v, MPFR_RNDN);
    return mpfr_get_d(s.v, MPFR_RNDN);
}

} // namespace

double i0_natural(double x) {
    Mp s = i_series(x, 0);
    return mpfr_get_d(s.v, MPFR_RNDN);
}

double i1_natural(double x) {
    Mp s = i_series(x, 1);
    return mpfr_get_d(s.v, MPFR_RNDN);
}

double k0_natural(double x) {
    Mp s = k_integral(x, 0);
    return mpfr_get_d(s.v, MPFR_RNDN);
}

double k1_natural(double x) {
    Mp s = k_integral(x, 1);
    return mpfr_get_d(s.v, MPFR_RNDN);
}

double i0_scaled(double x) { return scaled_i(x, 0); }
double i1_scaled(double x) { return scaled_i(x, 1); }
double k0_scaled(double x) { return scaled_k(x, 0); }
double k1_scaled(double x) { return scaled_k(x, 1); }

} // namespace dci::testref
