#ifndef NDIM_LOOP_VALUE_HPP
#define NDIM_LOOP_VALUE_HPP

#include <string>
#include <vector>

#include "ndim/precision.hpp"
#include "ndim/signed_log.hpp"

namespace ndim {

// Exponent that is affine in the dimension: c0 + c1 * D.  Keeping the two
// coefficients instead of the evaluated number lets reports state "pi^(D/2)"
// and lets products add exponents without losing the D dependence.
struct AffineD {
    real c0 = 0;
    real c1 = 0;

    AffineD() = default;
    AffineD(const real& c0, const real& c1) : c0(c0), c1(c1) {}

    real at(const real& D) const { return c0 + c1 * D; }

    AffineD operator+(const AffineD& o) const { return {c0 + o.c0, c1 + o.c1}; }
};

// Pi at the current working precision.
inline real pi_value() {
    real p;
    mpfr_const_pi(p.backend().data(), MPFR_RNDN);
    return p;
}

// Value of a loop integral split into a dimensionless numeric coefficient
// and symbolic powers of pi and p^2.  The coefficient already contains the
// kinematic ratios of the evaluation point; the p2_exponent records the
// overall scale power only.
struct LoopValue {
    SignedLogReal coefficient;
    AffineD pi_exponent;
    AffineD p2_exponent;
    std::vector<std::string> flags;
    unsigned long terms = 0;
    real tail_bound = 0;

    // Full numeric value at dimension D and scale p2.
    real value_at(const real& D, const real& p2) const {
        return coefficient.value() * pow(pi_value(), pi_exponent.at(D)) *
               pow(p2, p2_exponent.at(D));
    }

    LoopValue operator*(const LoopValue& o) const {
        LoopValue r;
        r.coefficient = coefficient * o.coefficient;
        r.pi_exponent = pi_exponent + o.pi_exponent;
        r.p2_exponent = p2_exponent + o.p2_exponent;
        r.flags = flags;
        r.flags.insert(r.flags.end(), o.flags.begin(), o.flags.end());
        r.terms = terms + o.terms;
        r.tail_bound = tail_bound + o.tail_bound;
        return r;
    }
};

} // namespace ndim

#endif
