#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "ndim/appell.hpp"
#include "ndim/precision.hpp"

using namespace ndim;

namespace {

const Precision kPrec = Precision::with_digits(50);

struct PrecisionInit {
    PrecisionInit() { real::default_precision(kPrec.digits + kGuardDigits); }
} g_precision_init;

real tol10(int e) { return pow(real(10), e); }

real rel(const real& a, const real& b) { return abs(a / b - 1); }

LoopValue eval_rep(TriangleRep r, const TriangleExponents& te, const Kinematics& kin,
                   const real& D) {
    return r == TriangleRep::FourTerm ? triangle_4term(te, kin, D, kPrec)
                                      : triangle_3term(r, te, kin, D, kPrec);
}

const std::vector<TriangleRep> kAllReps = {
    TriangleRep::FourTerm, TriangleRep::ThreeTermUnprimed, TriangleRep::ThreeTermPrimed,
    TriangleRep::ThreeTermDoublePrimed};

} // namespace

TEST_CASE("f4 elementary values") {
    F4Params unit{real("0.7"), real("1.3"), real("0.9"), real("1.1"), real(0), real(0)};
    CHECK(f4(unit, kPrec) == 1);

    // alpha = -1 truncates after the linear terms:
    // F4 = 1 + beta x / gamma1 + beta y / gamma2 (with alpha = -1 sign).
    F4Params lin{real(-1), real("0.6"), real("1.4"), real("0.8"), real("0.2"), real("0.3")};
    real expected = 1 - real("0.6") * real("0.2") / real("1.4") -
                    real("0.6") * real("0.3") / real("0.8");
    CHECK(abs(f4(lin, kPrec) - expected) < tol10(-50));
}

TEST_CASE("f4 with one vanishing argument is a gauss series") {
    F4Params p{real("0.55"), real("0.85"), real("1.25"), real("0.95"), real("0.2"), real(0)};
    real got = f4(p, kPrec);
    // Direct series for 2F1(alpha, beta; gamma1 | 0.2); converges
    // geometrically, 250 terms give far more than 50 digits.
    real sum = 0, term = 1;
    for (int m = 0; m < 250; ++m) {
        sum += term;
        term *= (p.alpha + m) * (p.beta + m) / ((p.gamma1 + m) * (m + 1)) * p.x;
    }
    // At 50 requested digits the series truncates at the 1e-40 level, so
    // the comparison cannot be tighter than that.
    CHECK(rel(got, sum) < tol10(-38));
    // Same check through the y slot.
    F4Params q{p.alpha, p.beta, real("3.3"), p.gamma1, real(0), real("0.2")};
    CHECK(rel(f4(q, kPrec), sum) < tol10(-38));
}

TEST_CASE("f4 outside the convergence region is rejected") {
    // sqrt(0.36) + sqrt(0.16) = 1 exactly: boundary counts as outside.
    F4Params edge{real("0.5"), real("0.7"), real("1.3"), real("1.1"), real("0.36"), real("0.16")};
    CHECK_THROWS_AS(f4(edge, kPrec), OutsideRegion);
    F4Params in{real("0.5"), real("0.7"), real("1.3"), real("1.1"), real("0.25"), real("0.16")};
    CHECK(f4(in, kPrec) > 1);
    // A terminating series ignores the region entirely.
    F4Params term{real(-2), real("0.7"), real("1.3"), real("1.1"), real(4), real(9)};
    real v = f4(term, kPrec);
    CHECK(abs(v) < 1e6);
}

TEST_CASE("f4 denominator parameter pole throws") {
    F4Params p{real(-5), real("0.3"), real(-2), real("0.8"), real("0.01"), real("0.01")};
    CHECK_THROWS_AS(f4(p, kPrec), DenominatorPole);
}

TEST_CASE("f4 tail bound dominates the discarded remainder") {
    // Non-terminating convergent series: the loose tolerance stops rows
    // earlier than the tight one, and the recorded tail bound must cover
    // everything the loose run dropped.
    F4Params p{real("0.7"), real("0.3"), real("1.2"), real("0.8"), real("0.04"), real("0.04")};
    Precision loose = Precision::make(50, -20);
    reset_diagnostics();
    real stopped = f4(p, loose);
    real bound = diagnostics().tail_bound;
    unsigned long terms_loose = diagnostics().terms_used;
    reset_diagnostics();
    real full = f4(p, kPrec);
    unsigned long terms_full = diagnostics().terms_used;
    CHECK(terms_loose < terms_full);
    CHECK(stopped != full);
    CHECK(abs(full - stopped) <= bound);
}

TEST_CASE("region check reports argument pairs per term") {
    // All four four-term entries share (r2/p2, q2/p2).
    auto all_in = region_check({real(1), real("0.04"), real("0.09")}, TriangleRep::FourTerm);
    CHECK(all_in.size() == 4);
    for (const auto& t : all_in) {
        CHECK(t.x == real("0.09"));
        CHECK(t.y == real("0.04"));
        CHECK(t.admissible);
    }
    auto some_out = region_check({real(1), real(4), real("0.09")}, TriangleRep::FourTerm);
    int out = 0;
    for (const auto& t : some_out)
        out += t.admissible ? 0 : 1;
    CHECK(out == 4);
    // Unprimed third term switches to (r2/q2, p2/q2).
    auto unprimed = region_check({real(1), real(25), real(4)}, TriangleRep::ThreeTermUnprimed);
    CHECK(unprimed.size() == 3);
    CHECK(unprimed[2].term == "term3-tilde");
    CHECK(unprimed[2].x == real("0.16"));
    CHECK(unprimed[2].y == real("0.04"));
    CHECK(unprimed[2].admissible);
    CHECK(!unprimed[0].admissible);
}

TEST_CASE("four-term value matches its frozen reference") {
    TriangleExponents te{real("-1.15"), real("-0.87"), real("-1.03")};
    Kinematics kin{real(1), real("0.04"), real("0.09")};
    LoopValue v = triangle_4term(te, kin, real("4.6"), kPrec);
    const real reference("5.869691728034485369882771758098579666684");
    CHECK(rel(v.coefficient.value(), reference) < tol10(-35));
    CHECK(v.pi_exponent.at(real("4.6")) == real("2.3"));
    // p2 exponent is sigma = i + j + l + D/2.
    CHECK(abs(v.p2_exponent.at(real("4.6")) - te.sigma(real("4.6"))) < tol10(-60));
}

TEST_CASE("four-term solution is symmetric under (i,j) with (q2,r2)") {
    real D("4.6");
    TriangleExponents te{real("-1.1"), real("-0.9"), real("-1.05")};
    Kinematics k1{real(1), real("0.04"), real("0.09")};
    LoopValue va = triangle_4term(te, k1, D, kPrec);
    TriangleExponents ts{te.j, te.i, te.l};
    Kinematics k2{real(1), real("0.09"), real("0.04")};
    LoopValue vb = triangle_4term(ts, k2, D, kPrec);
    CHECK(rel_diff(va.coefficient, vb.coefficient) < tol10(-38));
}

TEST_CASE("exchange of (p2, j) with (q2, l) maps onto the same value") {
    real D("4.6");
    // j = 1 makes the left side terminate; the mapped side has l = 1.
    TriangleExponents lhs_e{real("-1.15"), real(1), real("-0.9")};
    Kinematics lhs_k{real(1), real(5), real("0.3")};
    TriangleExponents rhs_e{real("-1.15"), real("-0.9"), real(1)};
    Kinematics rhs_k{real(5), real(1), real("0.3")};
    real lhs = triangle_4term(lhs_e, lhs_k, D, kPrec).value_at(D, lhs_k.p2);
    real rhs = triangle_4term(rhs_e, rhs_k, D, kPrec).value_at(D, rhs_k.p2);
    CHECK(rel(lhs, rhs) < tol10(-38));
}

TEST_CASE("vanishing third exponent reduces to the two-propagator value") {
    // At l = 0 the four-term solution collapses to a single terminating
    // term that cannot depend on q2 or r2; it must equal the general
    // two-propagator coefficient with the same (i, j).
    real D("4.6");
    TriangleExponents te{real("-1.1"), real("-0.9"), real(0)};
    LoopValue small = triangle_4term(te, {real(1), real("0.04"), real("0.09")}, D, kPrec);
    LoopValue large = triangle_4term(te, {real(1), real(7), real("3.1")}, D, kPrec);
    CHECK(rel_diff(small.coefficient, large.coefficient) < tol10(-46));
}

TEST_CASE("all representations agree at single-integer patterns") {
    real D("4.6");
    std::vector<TriangleExponents> patterns = {
        {real(1), real("-0.87"), real("-1.03")},
        {real("-1.15"), real(1), real("-1.03")},
        {real("-1.15"), real("-0.87"), real(1)},
        {real(0), real("-0.87"), real("-1.03")},
        {real(2), real("-0.87"), real("-1.03")},
    };
    std::vector<Kinematics> kins = {{real(1), real(25), real(36)},
                                    {real(1), real("0.5"), real("2.3")}};
    for (const auto& te : patterns) {
        for (const auto& kin : kins) {
            LoopValue first = eval_rep(kAllReps[0], te, kin, D);
            for (std::size_t r = 1; r < kAllReps.size(); ++r) {
                LoopValue other = eval_rep(kAllReps[r], te, kin, D);
                CHECK(rel_diff(first.coefficient, other.coefficient) < tol10(-38));
            }
        }
    }
}

TEST_CASE("generic exponents outside every term region are rejected") {
    TriangleExponents te{real("-1.1"), real("-0.9"), real("-1.05")};
    Kinematics kin{real(1), real(4), real("0.09")};
    CHECK_THROWS_AS(triangle_4term(te, kin, real("4.6"), kPrec), OutsideRegion);
}

TEST_CASE("degenerate integer exponents surface as a double pole") {
    // i + j integer with integer l leaves a gamma pole against an exact
    // zero; the evaluator refuses to cancel them numerically.
    TriangleExponents te{real("-1.3"), real("-0.7"), real(-1)};
    Kinematics kin{real(1), real("0.04"), real("0.09")};
    CHECK_THROWS_AS(triangle_4term(te, kin, real("4.6"), kPrec), DoublePole);
}

TEST_CASE("three-term evaluator rejects the four-term tag") {
    TriangleExponents te{real("-1.1"), real("-0.9"), real("-1.05")};
    Kinematics kin{real(1), real("0.04"), real("0.09")};
    CHECK_THROWS_AS(triangle_3term(TriangleRep::FourTerm, te, kin, real("4.6"), kPrec),
                    InvalidSpec);
}

TEST_CASE("large-q2 argument pairs drive the series value to one") {
    // As q2 grows, both tilde arguments shrink and the series tends to 1,
    // monotonically over decades.
    real prev = 1;
    bool first = true;
    for (const char* q2s : {"100", "10000", "1000000"}) {
        real q2(q2s);
        F4Params p{real("0.7"), real("-0.45"), real("1.3"), real("0.9"),
                   real("0.09") / q2, real(1) / q2};
        real dev = abs(f4(p, kPrec) - 1);
        if (!first)
            CHECK(dev < prev);
        first = false;
        prev = dev;
    }
    CHECK(prev < tol10(-4));
}
