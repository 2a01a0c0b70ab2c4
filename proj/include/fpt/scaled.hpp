#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace fpt {

using Complex = std::complex<double>;

/// Complex value kept as mant * exp(logw). Exponents of products and
/// quotients of exponentials are combined in logw before any exp() call, so
/// intermediate factors like exp(lambda * c) never overflow even when the
/// assembled quantity is of order one.
struct Scaled {
    Complex mant{0.0, 0.0};
    double logw = 0.0;

    Complex value() const {
        if (mant == Complex(0.0, 0.0)) return {0.0, 0.0};
        return mant * std::exp(logw);
    }

    Scaled operator*(const Scaled& o) const { return {mant * o.mant, logw + o.logw}; }
    Scaled operator*(Complex z) const { return {mant * z, logw}; }
    Scaled operator/(const Scaled& o) const { return {mant / o.mant, logw - o.logw}; }

    static Scaled from(Complex mant, Complex exponent) {
        return {mant * std::exp(Complex(0.0, exponent.imag())), exponent.real()};
    }
};

/// Sum of Scaled terms with a running rescale against the largest exponent
/// seen so far. Terms far below the current scale underflow harmlessly.
class ScaledSum {
public:
    void add(const Scaled& s) { add(s.mant, s.logw); }

    void add(Complex mant, double logw) {
        if (mant == Complex(0.0, 0.0)) return;
        if (empty_) {
            base_ = logw;
            acc_ = mant;
            empty_ = false;
            return;
        }
        if (logw > base_) {
            acc_ *= std::exp(base_ - logw);
            base_ = logw;
            acc_ += mant;
        } else {
            acc_ += mant * std::exp(logw - base_);
        }
    }

    Scaled scaled() const { return empty_ ? Scaled{} : Scaled{acc_, base_}; }
    Complex value() const { return scaled().value(); }

private:
    Complex acc_{0.0, 0.0};
    double base_ = -std::numeric_limits<double>::infinity();
    bool empty_ = true;
};

/// sinh(z)/z, continuous at 0. No cancellation: sinh is odd with leading
/// term z.
inline Complex sinch(Complex z) {
    if (z == Complex(0.0, 0.0)) return {1.0, 0.0};
    if (std::abs(z) < 1e-6) return 1.0 + z * z / 6.0;
    return std::sinh(z) / z;
}

/// integral_l^u exp(q y) dy as a Scaled value; exact antiderivative with the
/// sinch form so nearly-zero rates do not cancel catastrophically.
inline Scaled exp_integral(Complex q, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const Complex z = q * half;
    const Complex mant = (hi - lo) * sinch(z);
    return Scaled::from(mant, q * mid);
}

/// integral_l^inf exp(q y) dy = -exp(q l)/q, valid for Re(q) < 0.
inline Scaled exp_integral_upper(Complex q, double lo) {
    return Scaled::from(-1.0 / q, q * lo);
}

/// integral_{-inf}^u exp(q y) dy = exp(q u)/q, valid for Re(q) > 0.
inline Scaled exp_integral_lower(Complex q, double hi) {
    return Scaled::from(1.0 / q, q * hi);
}

}  // namespace fpt
