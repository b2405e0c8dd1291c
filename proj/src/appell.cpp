#include "ndim/appell.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "ndim/gamma.hpp"

namespace ndim {

namespace {

real region_sum(const real& x, const real& y) { return sqrt(abs(x)) + sqrt(abs(y)); }

// One-variable specialization: F4 with one argument exactly zero is a
// 2F1-type series in the other.  gamma_other is the denominator
// parameter belonging to the live variable.
real f4_single(const real& alpha, const real& beta, const real& gamma_live, const real& var,
               bool terminating, long nmax, const Precision& prec) {
    real tol = prec.pole_tolerance();
    real trunc = prec.truncation_tolerance();
    real tiny = pow(real(10), -static_cast<int>(prec.digits));
    real rho = region_sum(var, real(0));
    if (!terminating && rho >= 1)
        throw OutsideRegion("f4: sqrt|x|+sqrt|y| = " + rho.str(8) +
                            " >= 1 and the series does not terminate");
    real t = 1, sum = 1;
    unsigned long used = 1;
    int below = 0;
    for (long n = 1;; ++n) {
        if (terminating && n > nmax)
            break;
        real dg = gamma_live + (n - 1);
        if (abs(dg) < tol)
            throw DenominatorPole("f4: denominator parameter reaches a nonpositive integer");
        t *= (alpha + (n - 1)) * (beta + (n - 1)) * var / (dg * n);
        sum += t;
        ++used;
        if (used > prec.max_terms)
            throw MaxTermsExceeded("f4: term budget exhausted");
        if (terminating)
            continue;
        real scale = trunc * (abs(sum) + tiny);
        if (abs(t) < scale)
            ++below;
        else
            below = 0;
        real tail = 2 * abs(t) * rho / (1 - rho);
        if (n > 8 && below >= 3 && tail < scale) {
            diagnostics().tail_bound += tail;
            break;
        }
    }
    diagnostics().terms_used += used;
    return sum;
}

} // namespace

real f4(const F4Params& p, const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    real tol = prec.pole_tolerance();
    real trunc = prec.truncation_tolerance();
    real tiny = pow(real(10), -static_cast<int>(prec.digits));

    bool term_a = is_nonpos_int(p.alpha, tol);
    bool term_b = is_nonpos_int(p.beta, tol);
    bool terminating = term_a || term_b;
    long nmax = 0;
    if (terminating) {
        long na = term_a ? -to_long(p.alpha) : 0;
        long nb = term_b ? -to_long(p.beta) : 0;
        nmax = (term_a && term_b) ? std::min(na, nb) : (term_a ? na : nb);
    }

    if (p.x == 0 && p.y == 0)
        return real(1);
    if (p.y == 0)
        return f4_single(p.alpha, p.beta, p.gamma1, p.x, terminating, nmax, prec);
    if (p.x == 0)
        return f4_single(p.alpha, p.beta, p.gamma2, p.y, terminating, nmax, prec);

    real rho = region_sum(p.x, p.y);
    if (!terminating && rho >= 1)
        throw OutsideRegion("f4: sqrt|x|+sqrt|y| = " + rho.str(8) +
                            " >= 1 and the series does not terminate");

    // Anti-diagonal n holds the terms with a + b = n.  The first entry
    // (a=0) follows from the previous row start; walking a upward trades
    // one power of y for one of x.
    real rowstart = 1; // term (a,b) = (0,n)
    real sum = 1;
    unsigned long used = 1;
    int below = 0;
    for (long n = 1;; ++n) {
        if (terminating && n > nmax)
            break;
        real d2 = p.gamma2 + (n - 1);
        if (abs(d2) < tol)
            throw DenominatorPole("f4: gamma2 parameter reaches a nonpositive integer");
        rowstart *= (p.alpha + (n - 1)) * (p.beta + (n - 1)) * p.y / (d2 * n);
        real t = rowstart, rowsum = rowstart;
        for (long a = 0; a < n; ++a) {
            real d1 = p.gamma1 + a;
            if (abs(d1) < tol)
                throw DenominatorPole("f4: gamma1 parameter reaches a nonpositive integer");
            t *= p.x * (p.gamma2 + n - a - 1) * (n - a) / (p.y * d1 * (a + 1));
            rowsum += t;
        }
        sum += rowsum;
        used += static_cast<unsigned long>(n) + 1;
        if (used > prec.max_terms)
            throw MaxTermsExceeded("f4: term budget exhausted");
        if (terminating)
            continue;
        real scale = trunc * (abs(sum) + tiny);
        if (abs(rowsum) < scale)
            ++below;
        else
            below = 0;
        real tail = 2 * abs(rowsum) * rho / (1 - rho);
        if (n > 8 && below >= 3 && tail < scale) {
            diagnostics().tail_bound += tail;
            break;
        }
    }
    diagnostics().terms_used += used;
    return sum;
}

namespace {

// One fully instantiated term of a triangle representation: gamma-ratio
// coefficient, F4 arguments, and the momentum-power prefactor with the
// term's family scale re-expressed relative to p2.
struct TermSpec {
    std::string name;
    std::array<real, 3> gargs; // Gamma factors
    std::array<real, 3> rargs; // reciprocal-Gamma factors
    F4Params f4p;
    SignedLogReal kin;
};

SignedLogReal power_of(const real& base, const real& expo) {
    return SignedLogReal::from_log(1, expo * log(base));
}

// The nine distinct terms across all representations, keyed by the family
// of the scale they are quoted at: T terms carry (p2)^sigma, P terms
// (q2)^sigma, R terms (r2)^sigma; the fold parameter carries
// (family scale / p2)^sigma so every assembled set reports p2_exponent
// sigma.
struct TermTables {
    real i, j, l, s, D;
    real xT, yT, xP, yP, xR, yR;
    SignedLogReal foldP, foldR;

    TermTables(const TriangleExponents& te, const Kinematics& kin, const real& D_)
        : i(te.i), j(te.j), l(te.l), s(te.sigma(D_)), D(D_) {
        xT = kin.r2 / kin.p2;
        yT = kin.q2 / kin.p2;
        xP = kin.r2 / kin.q2;
        yP = kin.p2 / kin.q2;
        xR = kin.q2 / kin.r2;
        yR = kin.p2 / kin.r2;
        foldP = power_of(kin.q2 / kin.p2, s);
        foldR = power_of(kin.r2 / kin.p2, s);
    }

    TermSpec t1(const std::string& name) const {
        return {name, {-s, s - i, s - j}, {-i, -j, s + D / 2},
                {-l, -s, 1 + i - s, 1 + j - s, xT, yT}, SignedLogReal::one()};
    }
    TermSpec t2(const std::string& name) const {
        return {name, {j - s, s - i, s - j - l}, {-i, -l, s + D / 2},
                {-j, s - j - l, 1 + i - s, 1 - j + s, xT, yT}, power_of(yT, s - j)};
    }
    TermSpec t3(const std::string& name) const {
        return {name, {i - s, s - j, s - i - l}, {-j, -l, s + D / 2},
                {-i, s - i - l, 1 - i + s, 1 + j - s, xT, yT}, power_of(xT, s - i)};
    }
    TermSpec t4(const std::string& name) const {
        return {name, {i - s, j - s, s - i - j}, {-i, -j, -l},
                {l + D / 2, s + D / 2, 1 - i + s, 1 - j + s, xT, yT},
                power_of(xT, s - i) * power_of(yT, s - j)};
    }
    TermSpec p1(const std::string& name) const {
        return {name, {-s, s - i, s - l}, {-i, -l, s + D / 2},
                {-j, -s, 1 + i - s, 1 + l - s, xP, yP}, foldP};
    }
    TermSpec p2(const std::string& name) const {
        return {name, {l - s, s - i, s - j - l}, {-i, -j, s + D / 2},
                {-l, s - j - l, 1 + i - s, 1 - l + s, xP, yP}, power_of(yP, s - l) * foldP};
    }
    TermSpec p3(const std::string& name) const {
        return {name, {i - s, s - l, s - i - j}, {-j, -l, s + D / 2},
                {-i, s - i - j, 1 - i + s, 1 + l - s, xP, yP}, power_of(xP, s - i) * foldP};
    }
    TermSpec r1(const std::string& name) const {
        return {name, {-s, s - j, s - l}, {-j, -l, s + D / 2},
                {-i, -s, 1 + j - s, 1 + l - s, xR, yR}, foldR};
    }
    TermSpec r3(const std::string& name) const {
        return {name, {l - s, s - j, s - i - l}, {-i, -j, s + D / 2},
                {-l, s - i - l, 1 + j - s, 1 - l + s, xR, yR}, power_of(yR, s - l) * foldR};
    }
};

std::vector<TermSpec> representation_terms(TriangleRep tag, const TriangleExponents& te,
                                           const Kinematics& kin, const real& D) {
    TermTables t(te, kin, D);
    switch (tag) {
    case TriangleRep::FourTerm:
        return {t.t1("term1"), t.t2("term2"), t.t3("term3"), t.t4("term4")};
    case TriangleRep::ThreeTermUnprimed:
        return {t.t1("term1"), t.t2("term2"), t.p3("term3-tilde")};
    case TriangleRep::ThreeTermPrimed:
        return {t.p1("term1"), t.p2("term2"), t.t3("term3-tilde")};
    case TriangleRep::ThreeTermDoublePrimed:
        return {t.r1("term1"), t.r3("term2"), t.t2("term3-tilde")};
    }
    throw InvalidSpec("representation_terms: unknown tag");
}

LoopValue triangle_sum(const std::vector<TermSpec>& terms, const TriangleExponents& te,
                       const real& D, const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    real tol = prec.pole_tolerance();
    Diagnostics& dg = diagnostics();
    unsigned long terms0 = dg.terms_used;
    std::size_t warn0 = dg.warnings.size();
    real tail0 = dg.tail_bound;

    SignedLogReal total = SignedLogReal::zero();
    for (const TermSpec& term : terms) {
        Product pr;
        for (const real& g : term.gargs)
            pr.mul(gamma_signed(g, prec));
        for (const real& r : term.rargs)
            pr.mul(rgamma(r, prec));
        GammaEval coeff = pr.resolve();
        if (coeff.pole)
            throw DoublePole("triangle " + term.name +
                             ": coefficient gamma pole; shift the exponents off the "
                             "degenerate point");
        // Structural zero: the term is absent, regardless of where its F4
        // arguments sit.
        if (coeff.val.is_zero())
            continue;
        bool terminates = is_nonpos_int(term.f4p.alpha, tol) || is_nonpos_int(term.f4p.beta, tol);
        if (!terminates) {
            real rho = region_sum(term.f4p.x, term.f4p.y);
            if (rho >= 1)
                throw OutsideRegion("triangle " + term.name + " at (x,y) = (" +
                                    term.f4p.x.str(8) + ", " + term.f4p.y.str(8) +
                                    "): sqrt(x)+sqrt(y) >= 1 and the series does not terminate");
        }
        real fv = f4(term.f4p, prec);
        total = total + coeff.val * term.kin * SignedLogReal::from_real(fv);
    }

    LoopValue v;
    v.coefficient = total;
    v.pi_exponent = AffineD(real(0), real(1) / 2);
    v.p2_exponent = AffineD(te.i + te.j + te.l, real(1) / 2);
    v.terms = dg.terms_used - terms0;
    v.tail_bound = dg.tail_bound - tail0;
    for (std::size_t k = warn0; k < dg.warnings.size(); ++k)
        v.flags.push_back(dg.warnings[k]);
    return v;
}

} // namespace

std::vector<TermRegion> region_check(const Kinematics& kin, TriangleRep rep) {
    TriangleExponents dummy{real(-1), real(-1), real(-1)};
    std::vector<TermSpec> terms = representation_terms(rep, dummy, kin, real(4));
    std::vector<TermRegion> out;
    for (const TermSpec& t : terms)
        out.push_back({t.name, t.f4p.x, t.f4p.y, region_sum(t.f4p.x, t.f4p.y) < 1});
    return out;
}

LoopValue triangle_4term(const TriangleExponents& te, const Kinematics& kin, const real& D,
                         const Precision& prec) {
    return triangle_sum(representation_terms(TriangleRep::FourTerm, te, kin, D), te, D, prec);
}

LoopValue triangle_3term(TriangleRep tag, const TriangleExponents& te, const Kinematics& kin,
                         const real& D, const Precision& prec) {
    if (tag == TriangleRep::FourTerm)
        throw InvalidSpec("triangle_3term: tag must name one of the three-term sets");
    return triangle_sum(representation_terms(tag, te, kin, D), te, D, prec);
}

} // namespace ndim
