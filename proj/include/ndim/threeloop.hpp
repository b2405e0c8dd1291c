#ifndef NDIM_THREELOOP_HPP
#define NDIM_THREELOOP_HPP

#include "ndim/loop_value.hpp"
#include "ndim/precision.hpp"

namespace ndim {

// Propagator exponents of the three-loop two-point function built as a
// bubble insertion into the master diagram.  e, f belong to the inner
// bubble; g..j to the outer master, whose fifth exponent becomes
// sigma1 = e + f + D/2 (non-integer for generic D).
struct ThreeLoopExponents {
    real e, f, g, h, i, j;

    real sigma1(const real& D) const { return e + f + D / 2; }
};

// Composition: bubble(e, f) reduces the inner loop to a propagator with
// exponent sigma1, so the value is the bubble prefactor times
// assemble_master(g, h, i, j, l = sigma1).  Combined pi_exponent 3D/2 and
// p2_exponent e+f+g+h+i+j+3D/2.  Master series preconditions must hold at
// the shifted exponent; failures surface as InvalidSpec.  Shares the
// pole-adjacency rejection of threeloop_closed_form.
LoopValue compose_threeloop(const ThreeLoopExponents& te, const real& D, const Precision& prec);

// Closed form of the all-exponents-(-1) three-loop function:
//   2 pi^(3D/2) (p2)^(3D/2-6) G(D/2-1)^3 G(5-3D/2)/(D-3)
//     * { cos(pi D) G(2-D/2) G(3-D)
//         - G(D/2-1)/((3D/2-4) G(2D-5)) * 3F2(1, D-2, 3D/2-4; 2D-5, 3D/2-3 | 1) }.
// cos(pi D) is evaluated directly at real D; it is the surviving real
// part of the phase bookkeeping, no further phase rule applies here.
// D within 10^-3 of {5/2, 8/3, 3, 10/3, 4} is rejected with PoleAdjacent:
// the bracket cancellation there needs more digits than requested.
LoopValue threeloop_closed_form(const real& D, const Precision& prec);

} // namespace ndim

#endif
