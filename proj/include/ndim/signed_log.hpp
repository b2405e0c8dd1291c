#ifndef NDIM_SIGNED_LOG_HPP
#define NDIM_SIGNED_LOG_HPP

#include "ndim/errors.hpp"
#include "ndim/precision.hpp"

namespace ndim {

// Nonzero-safe numeric value stored as (sign, natural log of magnitude).
// Exact zero is sign == 0 with the log ignored.  Multiplication and
// division are exact on the log; addition goes through log-sum-exp so two
// same-signed values never cancel and opposite-signed values cancel only
// as far as the working precision allows.
struct SignedLogReal {
    int sign = 0;
    real log_mag = 0;

    static SignedLogReal zero() { return {}; }

    static SignedLogReal one() { return {1, real(0)}; }

    static SignedLogReal from_log(int sign, const real& log_mag) {
        SignedLogReal v;
        v.sign = sign;
        if (sign != 0)
            v.log_mag = log_mag;
        return v;
    }

    static SignedLogReal from_real(const real& x) {
        if (x == 0)
            return zero();
        return from_log(x > 0 ? 1 : -1, log(abs(x)));
    }

    bool is_zero() const { return sign == 0; }

    real value() const {
        if (sign == 0)
            return real(0);
        return sign * exp(log_mag);
    }

    SignedLogReal operator-() const { return from_log(-sign, log_mag); }

    SignedLogReal operator*(const SignedLogReal& o) const {
        if (sign == 0 || o.sign == 0)
            return zero();
        return from_log(sign * o.sign, log_mag + o.log_mag);
    }

    SignedLogReal operator/(const SignedLogReal& o) const {
        if (o.sign == 0)
            throw EvalError("SignedLogReal: division by exact zero");
        if (sign == 0)
            return zero();
        return from_log(sign * o.sign, log_mag - o.log_mag);
    }

    SignedLogReal operator+(const SignedLogReal& o) const {
        if (sign == 0)
            return o;
        if (o.sign == 0)
            return *this;
        const SignedLogReal& big = (log_mag >= o.log_mag) ? *this : o;
        const SignedLogReal& small = (log_mag >= o.log_mag) ? o : *this;
        real d = small.log_mag - big.log_mag; // <= 0
        if (sign == o.sign)
            return from_log(sign, big.log_mag + log1p(exp(d)));
        if (d == 0)
            return zero(); // exact cancellation
        real m = exp(d);
        if (m >= 1)
            return zero(); // rounding collapsed the gap; treat as cancelled
        return from_log(big.sign, big.log_mag + log1p(-m));
    }

    SignedLogReal operator-(const SignedLogReal& o) const { return *this + (-o); }
};

inline SignedLogReal pow_int(const SignedLogReal& b, long n) {
    if (b.sign == 0)
        return n == 0 ? SignedLogReal::one() : SignedLogReal::zero();
    int s = (n % 2 == 0) ? 1 : b.sign;
    return SignedLogReal::from_log(s, b.log_mag * n);
}

// |v| relative difference on the log scale is awkward; tests compare values
// through this helper which works at the current precision.
inline real rel_diff(const SignedLogReal& a, const SignedLogReal& b) {
    if (a.sign == 0 && b.sign == 0)
        return real(0);
    if (a.sign == 0 || b.sign == 0)
        return real(1);
    if (a.sign != b.sign)
        return real(2);
    // |a-b|/|a| = |1 - exp(log b - log a)|
    return abs(1 - exp(b.log_mag - a.log_mag));
}

} // namespace ndim

#endif
