#ifndef DCI_SCALED_REAL_HPP
#define DCI_SCALED_REAL_HPP

#include <cmath>
#include <limits>

#include "dci/errors.hpp"

namespace dci {

/// A real number held as mantissa * exp(log_scale).
///
/// The Bessel terms of the closed-form decision span hundreds of orders of
/// magnitude (I0(zeta) with zeta ~ 1e3 and beyond), so every coefficient
/// combination is carried in this representation and scale factors are
/// combined analytically; exponentiation happens only at the final O(1)
/// result. Relative precision is that of the double mantissa.
class ScaledReal {
public:
    constexpr ScaledReal() = default;
    constexpr ScaledReal(double mantissa, double log_scale)
        : m_(mantissa), e_(log_scale) {}

    /// Implicit lift of an ordinary double (log_scale = 0).
    constexpr ScaledReal(double value) : m_(value), e_(0.0) {}

    /// Value exp(log_value), sign > 0.
    static ScaledReal from_log(double log_value) { return {1.0, log_value}; }

    double mantissa() const { return m_; }
    double log_scale() const { return e_; }
    bool is_zero() const { return m_ == 0.0; }
    int sign() const { return m_ > 0.0 ? 1 : (m_ < 0.0 ? -1 : 0); }

    /// log(|value|); -inf for zero.
    double log_abs() const {
        if (m_ == 0.0) return -std::numeric_limits<double>::infinity();
        return e_ + std::log(std::abs(m_));
    }

    /// Collapse to double, allowing overflow to +-inf / underflow to 0.
    double to_double_unchecked() const {
        if (m_ == 0.0) return 0.0;
        const double la = log_abs();
        if (la > 710.0) {
            return m_ > 0.0 ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
        }
        if (la < -745.0) return m_ > 0.0 ? 0.0 : -0.0;
        return m_ * std::exp(e_);
    }

    /// Collapse to double; throws NumericError if the value overflows.
    double to_double() const {
        const double v = to_double_unchecked();
        if (std::isinf(v)) {
            throw NumericError("scaled value overflows double: log|x| = " +
                               std::to_string(log_abs()));
        }
        return v;
    }

    /// Multiply by exp(delta) without touching the mantissa.
    ScaledReal scaled_by_exp(double delta) const { return {m_, e_ + delta}; }

    ScaledReal operator-() const { return {-m_, e_}; }

    friend ScaledReal operator*(const ScaledReal& a, const ScaledReal& b) {
        ScaledReal r{a.m_ * b.m_, a.e_ + b.e_};
        r.normalize();
        return r;
    }

    friend ScaledReal operator/(const ScaledReal& a, const ScaledReal& b) {
        if (b.m_ == 0.0) throw NumericError("scaled division by zero");
        ScaledReal r{a.m_ / b.m_, a.e_ - b.e_};
        r.normalize();
        return r;
    }

    friend ScaledReal operator+(const ScaledReal& a, const ScaledReal& b) {
        if (a.m_ == 0.0) return b;
        if (b.m_ == 0.0) return a;
        // Align both terms on the larger scale so the mantissa sum cannot
        // overflow; the smaller term may underflow to 0, which is exact
        // enough at double precision.
        ScaledReal r;
        if (a.e_ >= b.e_) {
            r = ScaledReal{a.m_ + b.m_ * std::exp(b.e_ - a.e_), a.e_};
        } else {
            r = ScaledReal{b.m_ + a.m_ * std::exp(a.e_ - b.e_), b.e_};
        }
        r.normalize();
        return r;
    }

    friend ScaledReal operator-(const ScaledReal& a, const ScaledReal& b) {
        return a + (-b);
    }

    /// Magnitude comparison helper: |a| < |b|.
    static bool abs_less(const ScaledReal& a, const ScaledReal& b) {
        return a.log_abs() < b.log_abs();
    }

private:
    void normalize() {
        if (m_ == 0.0 || !std::isfinite(m_)) {
            if (std::isnan(m_)) throw NumericError("scaled arithmetic produced NaN");
            if (std::isinf(m_)) {
                // Mantissa overflow can only come from addition of two
                // near-max mantissas; renormalizing earlier prevents it.
                throw NumericError("scaled mantissa overflow");
            }
            e_ = 0.0;
            return;
        }
        const double am = std::abs(m_);
        if (am > 1e150 || am < 1e-150) {
            const double l = std::log(am);
            e_ += l;
            m_ = m_ > 0.0 ? 1.0 : -1.0;
        }
    }

    double m_ = 0.0;
    double e_ = 0.0;
};

} // namespace dci

#endif
