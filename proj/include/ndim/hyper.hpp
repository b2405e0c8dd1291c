#ifndef NDIM_HYPER_HPP
#define NDIM_HYPER_HPP

#include <array>
#include <functional>
#include <vector>

#include "ndim/gamma.hpp"
#include "ndim/precision.hpp"
#include "ndim/signed_log.hpp"

namespace ndim {

// Parameter lists of a pFq evaluated at unit argument:
//   sum_m  prod_i (num_i)_m / (prod_j (den_j)_m * m!).
// The implicit m! denominator is never stored.
struct PFQParams {
    std::vector<real> num;
    std::vector<real> den;
};

// Removes numerator/denominator pairs equal within pole tolerance; those
// Pochhammer ratios cancel exactly for every m.  Idempotent, and never
// changes the value where the series is defined.
PFQParams coalesce(const PFQParams& p, const Precision& prec);

// s = sum(den) - sum(num).  A non-terminating unit-argument series
// converges iff s > 0; its terms decay like m^(-1-s).
real convergence_margin(const PFQParams& p);

// pFq(...| 1).  Terminating series (some numerator a nonpositive integer)
// are summed exactly.  Otherwise the margin s must be positive; the head
// of the series is summed directly and the remainder, whose terms behave
// as a Gamma-ratio asymptotic in m, is resummed through Hurwitz zeta
// values.  That makes small margins (s near 0) as cheap as large ones.
// Margin <= 0.05 additionally records a slow-convergence warning because
// the tail estimate degrades toward the boundary.
SignedLogReal pfq_unit(const PFQParams& p, const Precision& prec);

// Gauss summation 2F1(a, b; c | 1) = Gamma(c)Gamma(c-a-b) /
// (Gamma(c-a)Gamma(c-b)).  Valid for c-a-b > 0 and for terminating
// series; anything else is NonConvergent.  A pole surviving the gamma
// ratio raises DenominatorPole.
SignedLogReal gauss_2f1_unit(const real& a, const real& b, const real& c,
                             const Precision& prec);

// One layer of the double-series structure
//   sum_m (a)_m(b)_m(c)_m(d)_m / ((x)_m(y)_m(z)_m m!) * inner(m)
// where inner(m) is a unit-argument pFq with m-shifted parameters.  The
// outer sum must terminate: at least one of (a,b,c,d) a nonpositive
// integer, else InvalidSpec.  The inner series go through pfq_unit.
struct OuterSumSpec {
    std::array<real, 4> num;
    std::array<real, 3> den;
    std::function<PFQParams(unsigned long)> inner;
};

SignedLogReal outer_sum(const OuterSumSpec& spec, const Precision& prec);

} // namespace ndim

#endif
