#ifndef NDIM_GAMMA_HPP
#define NDIM_GAMMA_HPP

#include "ndim/precision.hpp"
#include "ndim/signed_log.hpp"

namespace ndim {

// Result of evaluating a gamma function or Pochhammer symbol: either a
// finite signed value or a marker that the evaluation hit a pole of the
// gamma function (argument at a nonpositive integer within pole
// tolerance).  A pole in a denominator position is a legitimate exact
// zero; a pole in a numerator position must be tracked, not silently
// turned into a large float.
struct GammaEval {
    SignedLogReal val;
    bool pole = false;

    static GammaEval finite(const SignedLogReal& v) { return {v, false}; }
    static GammaEval at_pole() { return {SignedLogReal::zero(), true}; }
};

// Signed log-gamma on the real line.  For x >= 0.5 this is mpfr's lgamma
// directly; for x < 0.5 the reflection formula is applied with the sine
// evaluated at the reduced argument x - round(x), which keeps relative
// accuracy when x sits close to a negative integer.  Arguments within
// pole tolerance of a nonpositive integer give GammaEval::at_pole().
GammaEval gamma_signed(const real& x, const Precision& prec);

// Rising factorial (a)_n = Gamma(a+n)/Gamma(a).
//   - n an integer within pole tolerance: exact finite product (or its
//     reciprocal for negative n), valid for every a.  (a)_{-n} with a
//     factor hitting zero means Gamma ratio infinite: reported as pole.
//   - otherwise: quotient of gamma_signed values.  Numerator pole alone
//     is a pole, denominator pole alone an exact zero, both at once is
//     the ambiguous 0*inf case and raises DoublePole at resolve time
//     when combined through Product; here it is reported with both
//     markers via the DoublePole exception.
GammaEval pochhammer(const real& a, const real& n, const Precision& prec);

// Integer-shift reflection (-1)^n / (1 - a)_{-n}.  n must be within pole
// tolerance of an integer; anything else throws InvalidSpec since the sign
// factor has no single value there.  Agrees with pochhammer(a, n) wherever
// both are finite; pole and zero markers swap roles across the reflection.
GammaEval pochhammer_ac(const real& a, const real& n, const Precision& prec);

// Accumulator for a product of GammaEval factors with bookkeeping of how
// many landed on a pole (numerator side) and how many are exact zeros
// (denominator-side poles).  resolve() gives the net value:
//   poles == zeros == 0  -> finite value
//   zeros > poles        -> exact zero
//   poles > zeros        -> pole marker
//   poles > 0 && zeros > 0 -> DoublePole (0 * inf, caller must shift)
struct Product {
    SignedLogReal acc = SignedLogReal::one();
    unsigned poles = 0;
    unsigned zeros = 0;

    Product& mul(const GammaEval& g) {
        if (g.pole)
            ++poles;
        else if (g.val.is_zero())
            ++zeros;
        else
            acc = acc * g.val;
        return *this;
    }

    Product& div(const GammaEval& g) {
        if (g.pole)
            ++zeros;
        else if (g.val.is_zero())
            ++poles;
        else
            acc = acc / g.val;
        return *this;
    }

    Product& mul(const SignedLogReal& v) { return mul(GammaEval::finite(v)); }

    GammaEval resolve() const {
        if (poles > 0 && zeros > 0)
            throw DoublePole("product mixes gamma poles with exact zeros");
        if (poles > 0)
            return GammaEval::at_pole();
        if (zeros > 0)
            return GammaEval::finite(SignedLogReal::zero());
        return GammaEval::finite(acc);
    }
};

// Reciprocal gamma as a plain value: exact zero at the poles, 1/Gamma
// elsewhere.  Entire on the real line, so never a GammaEval pole.
SignedLogReal rgamma(const real& x, const Precision& prec);

} // namespace ndim

#endif
