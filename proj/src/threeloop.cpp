#include "ndim/threeloop.hpp"

#include "ndim/gamma.hpp"
#include "ndim/hyper.hpp"
#include "ndim/master.hpp"

namespace ndim {

namespace {

// Dimensions where the closed-form bracket cancels between divergent
// pieces; both entry points reject their neighborhoods identically so
// the cross-check never compares against a degraded value.
const double kPoles[] = {2.5, 8.0 / 3.0, 3.0, 10.0 / 3.0, 4.0};

void reject_near_pole(const real& D, const char* where) {
    for (const double p : kPoles) {
        if (abs(D - real(p)) < 1e-3)
            throw PoleAdjacent(std::string(where) + ": D within 1e-3 of " + real(p).str(6) +
                               "; the bracket cancellation there needs more digits than "
                               "requested");
    }
}

struct DiagDelta {
    Diagnostics& dg;
    unsigned long terms0;
    std::size_t warn0;
    real tail0;

    DiagDelta() : dg(diagnostics()), terms0(dg.terms_used), warn0(dg.warnings.size()),
                  tail0(dg.tail_bound) {}

    void fill(LoopValue& v) const {
        v.terms = dg.terms_used - terms0;
        v.tail_bound = dg.tail_bound - tail0;
        for (std::size_t k = warn0; k < dg.warnings.size(); ++k)
            v.flags.push_back(dg.warnings[k]);
    }
};

} // namespace

LoopValue compose_threeloop(const ThreeLoopExponents& te, const real& D, const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    reject_near_pole(D, "compose_threeloop");
    DiagDelta dd;
    real s1 = te.sigma1(D);

    // Bubble prefactor only; its (p2)^sigma1 merges with the master's
    // p2 power into the affine exponent below.
    Product pref;
    pref.mul(pochhammer(-te.e, s1, prec));
    pref.mul(pochhammer(-te.f, s1, prec));
    pref.div(pochhammer(-s1, 2 * s1 + D / 2, prec));
    GammaEval coeff = pref.resolve();
    if (coeff.pole)
        throw DenominatorPole("compose_threeloop: bubble prefactor gamma pole at sigma1 = " +
                              s1.str(8));

    MasterExponents me{te.g, te.h, te.i, te.j, s1};
    LoopValue mv = assemble_master(me, D, prec);

    LoopValue v;
    v.coefficient = coeff.val * mv.coefficient;
    v.pi_exponent = AffineD(real(0), real(3) / 2);
    v.p2_exponent = AffineD(te.e + te.f + te.g + te.h + te.i + te.j, real(3) / 2);
    // The delta below already covers everything the master evaluation
    // appended to the shared diagnostics; merging mv.flags as well would
    // duplicate each warning.
    dd.fill(v);
    return v;
}

LoopValue threeloop_closed_form(const real& D, const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    reject_near_pole(D, "threeloop_closed_form");
    DiagDelta dd;
    const char* pole_msg = "threeloop_closed_form: gamma pole at this dimension";

    Product pref;
    pref.mul(gamma_signed(D / 2 - 1, prec));
    pref.mul(gamma_signed(D / 2 - 1, prec));
    pref.mul(gamma_signed(D / 2 - 1, prec));
    pref.mul(gamma_signed(5 - 3 * D / 2, prec));
    GammaEval pg = pref.resolve();
    if (pg.pole)
        throw DenominatorPole(pole_msg);
    SignedLogReal outer = SignedLogReal::from_real(real(2)) * pg.val /
                          SignedLogReal::from_real(D - 3);

    real pi = pi_value();
    Product b1;
    b1.mul(gamma_signed(2 - D / 2, prec));
    b1.mul(gamma_signed(3 - D, prec));
    GammaEval b1g = b1.resolve();
    if (b1g.pole)
        throw DenominatorPole(pole_msg);
    SignedLogReal t1 = SignedLogReal::from_real(cos(pi * D)) * b1g.val;

    Product b2;
    b2.mul(gamma_signed(D / 2 - 1, prec));
    b2.div(gamma_signed(2 * D - 5, prec));
    GammaEval b2g = b2.resolve();
    if (b2g.pole)
        throw DenominatorPole(pole_msg);
    PFQParams p;
    p.num = {real(1), D - 2, 3 * D / 2 - 4};
    p.den = {2 * D - 5, 3 * D / 2 - 3};
    SignedLogReal t2 =
        b2g.val / SignedLogReal::from_real(3 * D / 2 - 4) * pfq_unit(p, prec);

    LoopValue v;
    v.coefficient = outer * (t1 - t2);
    v.pi_exponent = AffineD(real(0), real(3) / 2);
    v.p2_exponent = AffineD(real(-6), real(3) / 2);
    dd.fill(v);
    return v;
}

} // namespace ndim
