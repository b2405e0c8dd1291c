#ifndef NDIM_APPELL_HPP
#define NDIM_APPELL_HPP

#include <string>
#include <vector>

#include "ndim/loop_value.hpp"
#include "ndim/precision.hpp"

namespace ndim {

// Appell F4 double series parameters and arguments.
struct F4Params {
    real alpha, beta, gamma1, gamma2;
    real x, y;
};

// Squared Euclidean external momenta.  r2 is an independent positive
// input: the representations are functions of the three invariants only,
// and independent control makes region sampling straightforward.
struct Kinematics {
    real p2 = 1, q2 = 1, r2 = 1;
};

// Propagator exponents of the one-loop triangle (physical values are
// negative; generic reals are accepted everywhere).
struct TriangleExponents {
    real i, j, l;

    real sigma(const real& D) const { return i + j + l + D / 2; }
};

// The four hypergeometric solutions of the triangle.  FourTerm is the
// standard sum of four F4 functions in (r2/p2, q2/p2); each three-term
// set replaces part of it by one term in a different variable pair and is
// the convergent choice in a different kinematic region.
enum class TriangleRep { FourTerm, ThreeTermUnprimed, ThreeTermPrimed, ThreeTermDoublePrimed };

// Admissibility of one term of a representation: its F4 argument pair and
// whether that pair sits inside the convergence region sqrt(x)+sqrt(y)<1.
// Terms can still be evaluated outside when their series terminates; the
// evaluators check termination before giving up.
struct TermRegion {
    std::string term;
    real x, y;
    bool admissible;
};

// F4(alpha, beta; gamma1, gamma2 | x, y) = sum over (a,b) of
//   (alpha)_{a+b} (beta)_{a+b} / ((gamma1)_a (gamma2)_b a! b!) x^a y^b,
// summed along anti-diagonals a+b = n.  Terminates when alpha or beta is
// a nonpositive integer (every anti-diagonal beyond it vanishes).
// Non-terminating evaluation requires sqrt|x|+sqrt|y| < 1, where the
// anti-diagonal row sums decay geometrically; the stopping rule asks for
// three consecutive rows below tolerance plus a doubled geometric tail
// estimate below tolerance.
real f4(const F4Params& p, const Precision& prec);

// Reports, term by term, which F4 arguments the chosen representation
// uses at these kinematics and whether each pair is inside the region.
std::vector<TermRegion> region_check(const Kinematics& kin, TriangleRep rep);

// The four-term solution.  Momentum powers of the individual terms are
// folded into the numeric coefficient at the given kinematics; the
// returned LoopValue carries pi_exponent D/2 and p2_exponent sigma.
// Terms whose gamma coefficient is an exact zero are dropped before any
// region consideration; a surviving term that neither terminates nor sits
// inside the region raises OutsideRegion.
LoopValue triangle_4term(const TriangleExponents& te, const Kinematics& kin, const real& D,
                         const Precision& prec);

// One of the three-term solutions, same conventions as triangle_4term.
// FourTerm is not a valid tag here.
LoopValue triangle_3term(TriangleRep tag, const TriangleExponents& te, const Kinematics& kin,
                         const real& D, const Precision& prec);

} // namespace ndim

#endif
