#ifndef DCI_QUADRATURE_HPP
#define DCI_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <span>

#include "dci/errors.hpp"

namespace dci {

/// Composite Simpson rule over equally spaced samples (odd count >= 3).
inline double simpson_uniform(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    if (n < 3 || n % 2 == 0) {
        throw ContractError("simpson_uniform: needs an odd sample count >= 3, got " +
                            std::to_string(n));
    }
    double s4 = 0.0, s2 = 0.0;
    for (std::size_t i = 1; i + 1 < n; i += 2) s4 += f[i];
    for (std::size_t i = 2; i + 1 < n; i += 2) s2 += f[i];
    return (f[0] + f[n - 1] + 4.0 * s4 + 2.0 * s2) * h / 3.0;
}

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb,
                            double m, double fm, double whole, double tol,
                            int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson (bisection with Richardson acceptance) to absolute
/// tolerance abs_tol. Integrand must be finite on [a, b].
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double abs_tol,
                        int max_depth = 40) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) {
        throw NumericError("adaptive_simpson: non-finite integrand");
    }
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, abs_tol,
                                        max_depth);
}

} // namespace dci

#endif
