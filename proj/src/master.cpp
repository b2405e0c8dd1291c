#include "ndim/master.hpp"

#include <string>

#include "ndim/gamma.hpp"
#include "ndim/hyper.hpp"

namespace ndim {

namespace {

// Radius of the pole-adjacency warning around the degenerate dimensions
// of the closed forms.
const double kPoleAdjacentRadius = 1e-3;

bool near_value(const real& x, const real& target) {
    return abs(x - target) < kPoleAdjacentRadius;
}

// Argument within the warning radius of a nonpositive integer but not on
// the pole itself: the evaluation goes through, with degraded digits.
bool near_nonpos_int(const real& x, const real& pole_tol) {
    real r = round_to_int(x);
    if (r > 0)
        return false;
    real d = abs(x - r);
    return d >= pole_tol && d < kPoleAdjacentRadius;
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

// The ten parameters of the double series behind F_n:
//   sum_{m,k} (a)_{m+k}(b)_{m+k}(c)_m(d)_m(e)_k(f)_k
//             / ((x)_{m+k}(y)_{m+k}(z)_m(w)_k m! k!).
// The displayed form sums m outside; exchanging the roles of (c,d,z| m)
// and (e,f,w| k) gives the transposed order over k.
struct FTuple {
    real a, b, c, d, x, y, z, w, e, f;
};

FTuple f_tuple(int n, const MasterExponents& me, const real& D) {
    SigmaSet ss(me, D);
    const real& s = ss.sigma;
    const real& sp = ss.sigma_prime;
    const real& om = ss.omega;
    switch (n) {
    case 1:
        return {-me.j, -s, 1 + me.h, -me.g + sp,
                1 + me.h - om, -me.g - s, 1 + me.i - s, 1 + me.l - s,
                1 - om - D / 2, -om};
    case 2:
        return {-me.l, -me.j - me.l + s, 1 + me.h, -me.g + sp,
                1 + me.h - sp - me.l, -me.g - me.l, 1 + me.i - s, 1 - me.l + s,
                1 - sp - me.l - D / 2, -sp - me.l};
    case 3:
        return {-me.i, -me.i - me.l + s, 1 + me.h + s - me.i, -me.g + om - me.i,
                1 + om - me.i, om - me.i + D / 2, 1 - me.i + s, 1 + me.j - s,
                1 + me.g, -me.h + sp};
    default:
        throw InvalidSpec("master_F_series: n must be 1, 2 or 3");
    }
}

GammaEval resolve_or_throw(const Product& pr, const std::string& what) {
    GammaEval g = pr.resolve();
    if (g.pole)
        throw DenominatorPole(what);
    return g;
}

} // namespace

LoopValue bubble(const real& e, const real& f, const real& D, const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    DiagDelta dd;
    real tol = prec.pole_tolerance();
    real s1 = e + f + D / 2;

    Product pr;
    pr.mul(pochhammer(-e, s1, prec));
    pr.mul(pochhammer(-f, s1, prec));
    pr.div(pochhammer(-s1, 2 * s1 + D / 2, prec));
    GammaEval coeff =
        resolve_or_throw(pr, "bubble: coefficient gamma pole at sigma1 = " + s1.str(8));

    LoopValue v;
    v.coefficient = coeff.val;
    v.pi_exponent = AffineD(real(0), real(1) / 2);
    v.p2_exponent = AffineD(e + f, real(1) / 2);
    dd.fill(v);
    if (near_nonpos_int(-e + s1, tol) || near_nonpos_int(-f + s1, tol) ||
        near_nonpos_int(s1 + D / 2, tol) || near_nonpos_int(-s1, tol) ||
        near_nonpos_int(-e, tol) || near_nonpos_int(-f, tol))
        v.flags.push_back("pole-adjacent: bubble coefficient degenerates within 1e-3");
    return v;
}

std::array<SignedLogReal, 3> master_coefficients_preac(const MasterExponents& me, const real& D,
                                                       const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    real tol = prec.pole_tolerance();
    if (!is_integer(me.l, tol))
        throw NonIntegerPhase("master_coefficients_preac: the (-1)^l phase in C2 demands "
                              "integer l");
    if (!is_integer(me.i, tol))
        throw NonIntegerPhase("master_coefficients_preac: the (-1)^i phase in C3 demands "
                              "integer i");
    SigmaSet ss(me, D);
    const real& s = ss.sigma;
    const real& sp = ss.sigma_prime;
    const real& om = ss.omega;
    SignedLogReal phase_l = SignedLogReal::from_log(to_long(me.l) % 2 == 0 ? 1 : -1, real(0));
    SignedLogReal phase_i = SignedLogReal::from_log(to_long(me.i) % 2 == 0 ? 1 : -1, real(0));
    const char* pole_msg = "master_coefficients_preac: coefficient singular; these "
                           "coefficients are finite only before continuation";

    Product c1;
    c1.mul(pochhammer(1 + s, -2 * s - D / 2, prec));
    c1.div(pochhammer(1 + me.i, -s, prec));
    c1.div(pochhammer(1 + me.l, -s, prec));
    c1.mul(pochhammer(1 + om, -2 * om - D / 2, prec));
    c1.div(pochhammer(1 + me.g + s, -om, prec));
    c1.div(pochhammer(1 + me.h, -om, prec));

    Product c2;
    c2.mul(phase_l);
    c2.mul(pochhammer(1 + s, -2 * s - D / 2, prec));
    c2.div(pochhammer(1 + me.i, -s, prec));
    c2.div(pochhammer(1 + me.j, -s, prec));
    c2.mul(pochhammer(-s, me.l, prec));
    c2.div(pochhammer(1 + me.j - s, me.l, prec));
    c2.mul(pochhammer(1 + sp + me.l, -2 * sp - 2 * me.l - D / 2, prec));
    c2.div(pochhammer(1 + me.g + me.l, -sp - me.l, prec));
    c2.div(pochhammer(1 + me.h, -sp - me.l, prec));

    Product c3;
    c3.mul(phase_i);
    c3.mul(pochhammer(1 + s, -2 * s - D / 2, prec));
    c3.div(pochhammer(1 + me.j, -s, prec));
    c3.div(pochhammer(1 + me.l, -s, prec));
    c3.mul(pochhammer(-s, me.i, prec));
    c3.div(pochhammer(1 + me.l - s, me.i, prec));
    c3.mul(pochhammer(1 + om - me.i, -2 * om + 2 * me.i - D / 2, prec));
    c3.div(pochhammer(1 + me.g, -om + me.i, prec));
    c3.div(pochhammer(1 + me.h + s - me.i, -om + me.i, prec));

    return {resolve_or_throw(c1, pole_msg).val, resolve_or_throw(c2, pole_msg).val,
            resolve_or_throw(c3, pole_msg).val};
}

SignedLogReal master_F_series(int n, const MasterExponents& me, const real& D,
                              const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    real tol = prec.pole_tolerance();
    FTuple t = f_tuple(n, me, D);
    auto nonpos = [&](const real& v) { return is_nonpos_int(v, tol); };

    if (nonpos(t.a) || nonpos(t.b) || nonpos(t.c) || nonpos(t.d)) {
        OuterSumSpec spec;
        spec.num = {t.a, t.b, t.c, t.d};
        spec.den = {t.x, t.y, t.z};
        spec.inner = [t](unsigned long m) {
            PFQParams p;
            p.num = {t.a + static_cast<long>(m), t.b + static_cast<long>(m), t.e, t.f};
            p.den = {t.w, t.x + static_cast<long>(m), t.y + static_cast<long>(m)};
            return p;
        };
        return outer_sum(spec, prec);
    }
    if (nonpos(t.e) || nonpos(t.f)) {
        OuterSumSpec spec;
        spec.num = {t.a, t.b, t.e, t.f};
        spec.den = {t.w, t.x, t.y};
        spec.inner = [t](unsigned long k) {
            PFQParams p;
            p.num = {t.a + static_cast<long>(k), t.b + static_cast<long>(k), t.c, t.d};
            p.den = {t.x + static_cast<long>(k), t.y + static_cast<long>(k), t.z};
            return p;
        };
        return outer_sum(spec, prec);
    }
    throw InvalidSpec("master_F_series: F_" + std::to_string(n) +
                      " terminates in neither summation order at these exponents");
}

std::array<SignedLogReal, 3> master_coefficients_ac(const MasterExponents& me, const real& D,
                                                    const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    SigmaSet ss(me, D);
    const real& s = ss.sigma;
    const real& sp = ss.sigma_prime;
    const real& om = ss.omega;
    const char* pole_msg = "master_coefficients_ac: continued coefficient hits a gamma pole";

    Product c1;
    c1.mul(pochhammer(-me.i, s, prec));
    c1.mul(pochhammer(-me.l, s, prec));
    c1.div(pochhammer(-s, 2 * s + D / 2, prec));
    c1.mul(pochhammer(-me.g - s, om, prec));
    c1.mul(pochhammer(-me.h, om, prec));
    c1.div(pochhammer(-om, 2 * om + D / 2, prec));

    Product c2;
    c2.mul(pochhammer(-me.i, s, prec));
    c2.mul(pochhammer(-me.j, s, prec));
    c2.div(pochhammer(-s, 2 * s + D / 2, prec));
    c2.mul(pochhammer(-s, me.l, prec));
    c2.div(pochhammer(s - me.j - me.l, me.l, prec));
    c2.mul(pochhammer(-me.g - me.l, sp + me.l, prec));
    c2.mul(pochhammer(-me.h, sp + me.l, prec));
    c2.div(pochhammer(-sp - me.l, 2 * sp + 2 * me.l + D / 2, prec));

    Product c3;
    c3.mul(pochhammer(-me.j, s, prec));
    c3.mul(pochhammer(-me.l, s, prec));
    c3.div(pochhammer(-s, 2 * s + D / 2, prec));
    c3.mul(pochhammer(-s, me.i, prec));
    c3.div(pochhammer(s - me.l - me.i, me.i, prec));
    c3.mul(pochhammer(-me.g, om - me.i, prec));
    c3.mul(pochhammer(-me.h - s + me.i, om - me.i, prec));
    c3.div(pochhammer(-om + me.i, 2 * om - 2 * me.i + D / 2, prec));

    return {resolve_or_throw(c1, pole_msg).val, resolve_or_throw(c2, pole_msg).val,
            resolve_or_throw(c3, pole_msg).val};
}

std::optional<std::string> master_preconditions(const MasterExponents& me, const real& D) {
    // Integer classification only; exponents are caller-provided values,
    // not results of cancellation-prone arithmetic.
    real tol = pow(real(10), -9);
    auto nonpos = [&](const real& v) { return is_nonpos_int(v, tol); };
    std::string reasons;
    for (int n = 1; n <= 3; ++n) {
        FTuple t = f_tuple(n, me, D);
        std::string why;
        if (nonpos(t.a) || nonpos(t.b) || nonpos(t.c) || nonpos(t.d)) {
            if (!(nonpos(t.a) || nonpos(t.b) || nonpos(t.e) || nonpos(t.f))) {
                real margin = t.w + t.x + t.y - t.a - t.b - t.e - t.f;
                if (margin <= 0)
                    why = "inner series margin " + margin.str(8) + " <= 0";
            }
        } else if (nonpos(t.e) || nonpos(t.f)) {
            if (!(nonpos(t.c) || nonpos(t.d))) {
                real margin = t.x + t.y + t.z - t.a - t.b - t.c - t.d;
                if (margin <= 0)
                    why = "inner series margin " + margin.str(8) + " <= 0";
            }
        } else {
            why = "outer sum terminates in neither index";
        }
        if (!why.empty()) {
            if (!reasons.empty())
                reasons += "; ";
            reasons += "F_" + std::to_string(n) + ": " + why;
        }
    }
    if (reasons.empty())
        return std::nullopt;
    return reasons;
}

LoopValue assemble_master(const MasterExponents& me, const real& D, const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    DiagDelta dd;
    if (auto why = master_preconditions(me, D))
        throw InvalidSpec("assemble_master: " + *why);
    std::array<SignedLogReal, 3> c = master_coefficients_ac(me, D, prec);
    SignedLogReal acc = SignedLogReal::zero();
    for (int n = 1; n <= 3; ++n) {
        if (c[n - 1].is_zero())
            continue;
        acc = acc + c[n - 1] * master_F_series(n, me, D, prec);
    }
    LoopValue v;
    v.coefficient = acc;
    v.pi_exponent = AffineD(real(0), real(1));
    v.p2_exponent = AffineD(me.g + me.h + me.i + me.j + me.l, real(1));
    dd.fill(v);
    return v;
}

LoopValue master_2f1_form(const real& D, const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    DiagDelta dd;
    if (D <= 2 || D >= 6)
        throw InvalidSpec("master_2f1_form: D must lie in (2, 6)");
    real s = D / 2 - 3;
    real sp = D / 2 - 2;
    real om = D - 5;
    const char* pole_msg = "master_2f1_form: gamma prefactor pole";

    Product pref;
    pref.mul(gamma_signed(1 + s, prec));
    pref.mul(gamma_signed(1 + s, prec));
    pref.mul(gamma_signed(-s, prec));
    pref.div(gamma_signed(s + D / 2, prec));

    Product w1;
    w1.mul(gamma_signed(1 + sp, prec));
    w1.mul(gamma_signed(1 + om, prec));
    w1.mul(gamma_signed(-om, prec));
    w1.div(gamma_signed(1 - s, prec));
    w1.div(gamma_signed(om + D / 2, prec));
    SignedLogReal t1 =
        resolve_or_throw(w1, pole_msg).val * gauss_2f1_unit(real(1), 1 - om - D / 2, 1 - s, prec);

    Product w2;
    w2.mul(gamma_signed(1 + sp, prec));
    w2.mul(gamma_signed(sp, prec));
    w2.mul(gamma_signed(1 - sp, prec));
    w2.div(gamma_signed(sp - 1 + D / 2, prec));
    SignedLogReal t2 =
        resolve_or_throw(w2, pole_msg).val * gauss_2f1_unit(real(1), 2 - sp - D / 2, real(2), prec);

    Product w3;
    w3.mul(gamma_signed(2 + om, prec));
    w3.mul(gamma_signed(1 + sp, prec));
    w3.mul(gamma_signed(-om - 1, prec));
    w3.div(gamma_signed(-s, prec));
    w3.div(gamma_signed(om + 1 + D / 2, prec));
    SignedLogReal t3 =
        resolve_or_throw(w3, pole_msg).val * gauss_2f1_unit(real(1), 1 + s, om + 1 + D / 2, prec);

    LoopValue v;
    v.coefficient = resolve_or_throw(pref, pole_msg).val * (t1 - t2 - t3);
    v.pi_exponent = AffineD(real(0), real(1));
    v.p2_exponent = AffineD(real(-5), real(1));
    dd.fill(v);
    return v;
}

LoopValue master_closed_form(const real& D, const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    DiagDelta dd;
    if (D <= 2 || D >= 6)
        throw InvalidSpec("master_closed_form: D must lie in (2, 6)");
    const char* pole_msg = "master_closed_form: gamma pole at this dimension";

    Product pref;
    pref.mul(gamma_signed(D / 2 - 2, prec));
    pref.mul(gamma_signed(D / 2 - 2, prec));
    pref.mul(gamma_signed(2 - D / 2, prec));
    pref.mul(gamma_signed(D / 2 - 1, prec));
    pref.div(gamma_signed(D - 2, prec));

    Product b1;
    b1.mul(gamma_signed(3 - D / 2, prec));
    b1.mul(gamma_signed(D / 2 - 1, prec));
    b1.div(gamma_signed(D - 3, prec));

    Product b2;
    b2.mul(gamma_signed(D - 3, prec));
    b2.mul(gamma_signed(5 - D, prec));
    b2.div(gamma_signed(3 - D / 2, prec));
    b2.div(gamma_signed(3 * D / 2 - 5, prec));

    SignedLogReal bracket =
        resolve_or_throw(b1, pole_msg).val - resolve_or_throw(b2, pole_msg).val;
    LoopValue v;
    v.coefficient = resolve_or_throw(pref, pole_msg).val * bracket;
    v.pi_exponent = AffineD(real(0), real(1));
    v.p2_exponent = AffineD(real(-5), real(1));
    dd.fill(v);
    for (const double p : {3.0, 10.0 / 3.0, 4.0, 5.0}) {
        if (near_value(D, real(p))) {
            v.flags.push_back("pole-adjacent: individual gamma factors degenerate near D = " +
                              real(p).str(6));
            break;
        }
    }
    return v;
}

} // namespace ndim
