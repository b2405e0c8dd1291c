#ifndef NDIM_MASTER_HPP
#define NDIM_MASTER_HPP

#include <array>
#include <optional>
#include <string>

#include "ndim/loop_value.hpp"
#include "ndim/precision.hpp"
#include "ndim/signed_log.hpp"

namespace ndim {

// Propagator exponents of the two-loop master self-energy.  Physical
// values are negative integers; generic reals are accepted, and the
// three-loop composition feeds a non-integer l.
struct MasterExponents {
    real g, h, i, j, l;
};

// The recurring exponent-plus-dimension combinations.  Recomputed from
// the exponents on construction, never stored stale.
struct SigmaSet {
    real sigma, sigma_prime, omega;

    SigmaSet(const MasterExponents& me, const real& D)
        : sigma(me.i + me.j + me.l + D / 2),
          sigma_prime(me.g + me.h + D / 2),
          omega(sigma + sigma_prime) {}
};

// One-loop two-point function with general propagator exponents e, f.
// Coefficient (-e)_{sigma1} (-f)_{sigma1} / (-sigma1)_{2 sigma1 + D/2}
// with sigma1 = e + f + D/2; pi_exponent D/2, p2_exponent sigma1.  This
// is the continued form of the negative-dimension expression with all
// phases already absorbed into the measure, so it holds for every (e, f).
LoopValue bubble(const real& e, const real& f, const real& D, const Precision& prec);

// The three coefficients multiplying the series F_n before continuation
// to positive dimension, exactly as displayed: products of (1 + ...)-type
// Pochhammers with explicit (-1)^l and (-1)^i phases in the second and
// third.  Those phases demand integer l (resp. i) within pole tolerance;
// otherwise NonIntegerPhase.  Exponent sets driving a denominator factor
// to zero (negative-integer i or l) raise DenominatorPole: these
// coefficients are finite only before continuation.
std::array<SignedLogReal, 3> master_coefficients_preac(const MasterExponents& me, const real& D,
                                                       const Precision& prec);

// Series F_n, n in {1,2,3}: an outer sum of Pochhammer prefactors times
// m-shifted 4F3(...|1) inner functions.  The double sum is summed over
// whichever index terminates: the displayed m-sum when one of its
// numerator parameters is a nonpositive integer, else the transposed
// n-sum (same double series, summation order exchanged).  Neither
// terminating is InvalidSpec; a non-terminating inner series with
// nonpositive margin is NonConvergent.
SignedLogReal master_F_series(int n, const MasterExponents& me, const real& D,
                              const Precision& prec);

// The continued coefficients multiplying F_n in positive dimension.
// Every factor of the pre-continuation coefficient is reflected through
// (a)_n = (-1)^n / (1-a)_{-n}; the collected phases total exactly (-1)^D
// and are consumed by the (-pi)^D measure factor, leaving plain
// Pochhammer products valid at generic real exponents (including the
// non-integer l of the three-loop composition).
std::array<SignedLogReal, 3> master_coefficients_ac(const MasterExponents& me, const real& D,
                                                    const Precision& prec);

// Checks the series preconditions of all three F_n at these exponents:
// each outer sum must terminate one way or the other, and every
// non-terminating inner series must have positive convergence margin.
// Returns a reason string when some F_n fails, nullopt when all pass.
std::optional<std::string> master_preconditions(const MasterExponents& me, const real& D);

// Full assembly sum_n C_n^AC * F_n as a LoopValue with pi_exponent D and
// p2_exponent omega.
LoopValue assemble_master(const MasterExponents& me, const real& D, const Precision& prec);

// The all-exponents-(-1) specialization written as three Gamma-weighted
// Gauss functions 2F1(...|1), each evaluated by Gauss summation.  Agrees
// with master_closed_form and with assemble_master at all -1.
LoopValue master_2f1_form(const real& D, const Precision& prec);

// The all-exponents-(-1) master in closed gamma form,
//   pi^D (p2)^(D-5) G(D/2-2)^2 G(2-D/2) G(D/2-1)/G(D-2)
//     * [G(3-D/2)G(D/2-1)/G(D-3) - G(D-3)G(5-D)/(G(3-D/2)G(3D/2-5))].
// D must lie in (2, 6) and not be an even integer.  Near D in
// {3, 10/3, 4, 5} individual factors degenerate while the product stays
// finite; such points get a pole-adjacent flag but are still evaluated.
LoopValue master_closed_form(const real& D, const Precision& prec);

} // namespace ndim

#endif
