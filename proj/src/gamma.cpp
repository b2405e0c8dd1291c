#include "ndim/gamma.hpp"

#include <mpfr.h>

#include "ndim/loop_value.hpp"

namespace ndim {

namespace {

// log|Gamma(x)| for x >= 0.5 straight from mpfr.  Gamma is positive there.
real lgamma_pos(const real& x) {
    real lg;
    int sign = 0;
    mpfr_lgamma(lg.backend().data(), &sign, x.backend().data(), MPFR_RNDN);
    return lg;
}

} // namespace

GammaEval gamma_signed(const real& x, const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    real tol = prec.pole_tolerance();
    if (is_nonpos_int(x, tol))
        return GammaEval::at_pole();
    if (x >= real(0.5))
        return GammaEval::finite(SignedLogReal::from_log(1, lgamma_pos(x)));
    // Reflection Gamma(x) = pi / (sin(pi x) Gamma(1-x)).  sin(pi x) is
    // evaluated through the reduced argument u = x - round(x), |u| <= 1/2:
    // sin(pi x) = (-1)^round(x) sin(pi u), which keeps full relative
    // accuracy when x sits just off a negative integer.
    real r = round_to_int(x);
    real u = x - r;
    real pi = pi_value();
    real s = sin(pi * u);
    int sign = s > 0 ? 1 : -1;
    if (to_long(r) % 2 != 0)
        sign = -sign;
    real log_mag = log(pi) - log(abs(s)) - lgamma_pos(1 - x);
    return GammaEval::finite(SignedLogReal::from_log(sign, log_mag));
}

GammaEval pochhammer(const real& a, const real& n, const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    real tol = prec.pole_tolerance();
    if (is_integer(n, tol)) {
        long nn = to_long(n);
        SignedLogReal acc = SignedLogReal::one();
        if (nn >= 0) {
            // (a)_n = a (a+1) ... (a+n-1); a factor at zero makes the
            // whole product an exact (finite) zero.
            for (long k = 0; k < nn; ++k) {
                real factor = a + k;
                if (abs(factor) < tol)
                    return GammaEval::finite(SignedLogReal::zero());
                acc = acc * SignedLogReal::from_real(factor);
            }
            return GammaEval::finite(acc);
        }
        // (a)_{-m} = 1 / ((a-1)(a-2)...(a-m)); a vanishing factor sits in
        // the denominator, so the ratio is infinite: pole marker.
        for (long k = 1; k <= -nn; ++k) {
            real factor = a - k;
            if (abs(factor) < tol)
                return GammaEval::at_pole();
            acc = acc * SignedLogReal::from_real(factor);
        }
        return GammaEval::finite(SignedLogReal::one() / acc);
    }
    GammaEval num = gamma_signed(a + n, prec);
    GammaEval den = gamma_signed(a, prec);
    if (num.pole && den.pole)
        throw DoublePole("pochhammer: Gamma(a+n) and Gamma(a) both singular at non-integer n");
    if (num.pole)
        return GammaEval::at_pole();
    if (den.pole)
        return GammaEval::finite(SignedLogReal::zero());
    return GammaEval::finite(num.val / den.val);
}

GammaEval pochhammer_ac(const real& a, const real& n, const Precision& prec) {
    real tol = prec.pole_tolerance();
    if (!is_integer(n, tol))
        throw InvalidSpec("pochhammer_ac: shift must be an integer, the sign factor "
                          "(-1)^n has no single real value otherwise");
    long nn = to_long(n);
    GammaEval inner = pochhammer(1 - a, -n, prec);
    SignedLogReal sign = SignedLogReal::from_log(nn % 2 == 0 ? 1 : -1, real(0));
    // (-1)^n / (1-a)_{-n}: the reciprocal swaps the pole and zero roles.
    if (inner.pole)
        return GammaEval::finite(SignedLogReal::zero());
    if (inner.val.is_zero())
        return GammaEval::at_pole();
    return GammaEval::finite(sign / inner.val);
}

SignedLogReal rgamma(const real& x, const Precision& prec) {
    GammaEval g = gamma_signed(x, prec);
    if (g.pole)
        return SignedLogReal::zero();
    return SignedLogReal::from_log(g.val.sign, -g.val.log_mag);
}

} // namespace ndim
