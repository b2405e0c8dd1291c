#include "ndim/hyper.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <mutex>
#include <sstream>
#include <vector>

namespace ndim {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

std::mutex g_bernoulli_mutex;
std::vector<cpp_rational> g_bernoulli;              // B_0, B_1(-1/2), B_2, ...
std::vector<std::vector<cpp_rational>> g_bpoly;     // row n: coeff of x^(n-k), k = 0..n

// Exact Bernoulli numbers via the defining recurrence
//   B_n = -1/(n+1) * sum_{k<n} C(n+1, k) B_k.
void ensure_bernoulli_locked(std::size_t n) {
    if (g_bernoulli.empty())
        g_bernoulli.push_back(1);
    while (g_bernoulli.size() <= n) {
        std::size_t m = g_bernoulli.size();
        cpp_rational sum = 0;
        cpp_int binom = 1; // C(m+1, k), starting at k = 0
        for (std::size_t k = 0; k < m; ++k) {
            sum += cpp_rational(binom) * g_bernoulli[k];
            binom = binom * cpp_int(m + 1 - k) / cpp_int(k + 1);
        }
        g_bernoulli.push_back(-sum / cpp_rational(m + 1));
    }
}

// Coefficient row of the Bernoulli polynomial
//   B_n(x) = sum_k C(n, k) B_k x^(n-k).
const std::vector<cpp_rational>& bpoly_row(std::size_t n) {
    std::lock_guard<std::mutex> lock(g_bernoulli_mutex);
    ensure_bernoulli_locked(n);
    while (g_bpoly.size() <= n) {
        std::size_t m = g_bpoly.size();
        std::vector<cpp_rational> row(m + 1);
        cpp_int binom = 1;
        for (std::size_t k = 0; k <= m; ++k) {
            row[k] = cpp_rational(binom) * g_bernoulli[k];
            if (k < m)
                binom = binom * cpp_int(m - k) / cpp_int(k + 1);
        }
        g_bpoly.push_back(std::move(row));
    }
    return g_bpoly[n];
}

std::vector<cpp_rational> g_bfrac; // B_{2r}/(2r)!, r = 0, 1, ...
cpp_int g_bfrac_factorial = 1;     // (2r)! for the last cached r

// B_{2r}/(2r)!: the Euler-Maclaurin weight, cached with a running
// factorial so extending the table is linear.
cpp_rational bernoulli_fraction(std::size_t r) {
    std::lock_guard<std::mutex> lock(g_bernoulli_mutex);
    ensure_bernoulli_locked(2 * r);
    while (g_bfrac.size() <= r) {
        std::size_t m = g_bfrac.size();
        if (m > 0)
            g_bfrac_factorial *= cpp_int(2 * m - 1) * cpp_int(2 * m);
        g_bfrac.push_back(g_bernoulli[2 * m] / cpp_rational(g_bfrac_factorial));
    }
    return g_bfrac[r];
}

// Exact integer/rational to working-precision real.  Numerator and
// denominator convert exactly; the one division rounds correctly.
real to_real(const cpp_rational& q) {
    real num(numerator(q).str());
    real den(denominator(q).str());
    return num / den;
}

real bernoulli_polynomial(std::size_t n, const real& x) {
    const std::vector<cpp_rational>& row = bpoly_row(n);
    real acc = 0;
    for (const cpp_rational& c : row)
        acc = acc * x + to_real(c);
    return acc;
}

// Hurwitz zeta(s, M) for s > 1 and integer offset M >= 1 by
// Euler-Maclaurin on the tail sum_{m >= M} (m + 0)^(-s):
//   M^(1-s)/(s-1) + M^(-s)/2
//     + sum_r B_{2r}/(2r)! (s)_{2r-1} M^(-s-2r+1).
real hurwitz_zeta(const real& s, unsigned long M, unsigned digits) {
    real Mr(M);
    real acc = pow(Mr, 1 - s) / (s - 1) + pow(Mr, -s) / 2;
    real eps = pow(real(10), -static_cast<int>(digits) - 5);
    real minv2 = 1 / (Mr * Mr);
    real cur = pow(Mr, 1 - s);
    real rising = 1; // (s)_{2r-1}, updated incrementally
    unsigned long R = std::max<unsigned long>(30, digits * 4 / 5);
    for (unsigned long r = 1; r <= R; ++r) {
        if (r == 1)
            rising = s;
        else
            rising *= (s + (2 * r - 3)) * (s + (2 * r - 2));
        cur *= minv2;
        real term = to_real(bernoulli_fraction(r)) * rising * cur;
        acc += term;
        if (abs(term) < eps * abs(acc))
            break;
    }
    return acc;
}

// Smallest term count after which every term vanishes, when some
// numerator is a nonpositive integer: min over those of (-a) + 1 terms.
// Returns false when the series does not terminate.
bool termination_length(const PFQParams& p, const real& tol, unsigned long& len) {
    bool found = false;
    long best = 0;
    for (const real& a : p.num) {
        if (is_nonpos_int(a, tol)) {
            long m = -to_long(a);
            if (!found || m < best)
                best = m;
            found = true;
        }
    }
    if (found)
        len = static_cast<unsigned long>(best) + 1;
    return found;
}

// term_{m+1} / term_m at unit argument.  Throws when a denominator
// parameter reaches a nonpositive integer at this index.
real term_ratio(const PFQParams& p, unsigned long m, const real& tol) {
    real num = 1, den = real(m) + 1;
    for (const real& a : p.num)
        num *= a + static_cast<long>(m);
    for (const real& b : p.den) {
        real factor = b + static_cast<long>(m);
        if (abs(factor) < tol)
            throw DenominatorPole("pfq_unit: denominator parameter " + b.str(8) +
                                  " reaches a nonpositive integer at term " + std::to_string(m));
        den *= factor;
    }
    return num / den;
}

} // namespace

PFQParams coalesce(const PFQParams& p, const Precision& prec) {
    real tol = prec.pole_tolerance();
    PFQParams out;
    std::vector<real> den = p.den;
    for (const real& a : p.num) {
        bool cancelled = false;
        for (auto it = den.begin(); it != den.end(); ++it) {
            if (abs(a - *it) < tol) {
                den.erase(it);
                cancelled = true;
                break;
            }
        }
        if (!cancelled)
            out.num.push_back(a);
    }
    out.den = std::move(den);
    return out;
}

real convergence_margin(const PFQParams& p) {
    real s = 0;
    for (const real& b : p.den)
        s += b;
    for (const real& a : p.num)
        s -= a;
    return s;
}

SignedLogReal pfq_unit(const PFQParams& params, const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    real tol = prec.pole_tolerance();
    PFQParams p = coalesce(params, prec);

    unsigned long nterms = 0;
    if (termination_length(p, tol, nterms)) {
        if (nterms > prec.max_terms)
            throw MaxTermsExceeded("pfq_unit: terminating series longer than max_terms");
        real term = 1, sum = 1;
        for (unsigned long m = 0; m + 1 < nterms; ++m) {
            term *= term_ratio(p, m, tol);
            sum += term;
        }
        diagnostics().terms_used += nterms;
        return SignedLogReal::from_real(sum);
    }

    real s = convergence_margin(p);
    if (s <= 0)
        throw NonConvergent("pfq_unit: margin " + s.str(8) +
                            " <= 0 and the series does not terminate");
    if (s <= real(1) / 20)
        diagnostics().warn("slow-convergence: unit-argument margin <= 0.05");
    for (const real& b : p.den)
        if (is_nonpos_int(b, tol))
            throw DenominatorPole("pfq_unit: nonpositive-integer denominator parameter " +
                                  b.str(8) + " in a non-terminating series");

    // Head: direct summation far enough that every parameter shift is
    // positive and the term asymptotics have settled.
    real maxp = 0;
    for (const real& a : p.num)
        maxp = std::max(maxp, real(abs(a)));
    for (const real& b : p.den)
        maxp = std::max(maxp, real(abs(b)));
    unsigned long M = std::max<unsigned long>(60, (prec.digits * 16 + 9) / 10);
    M = std::max(M, static_cast<unsigned long>(to_long(ceil(4 * maxp))));
    if (M > prec.max_terms)
        throw MaxTermsExceeded("pfq_unit: head length exceeds max_terms");
    real term = 1, head = 1;
    for (unsigned long m = 0; m + 1 < M; ++m) {
        term *= term_ratio(p, m, tol);
        head += term;
    }

    // Tail, exactly resummed through Hurwitz zeta: for m >= M the term is
    //   G * m^(-1-s) * exp(sum_k c_k m^-k),  G = prod Gamma(den)/prod Gamma(num)
    // (the implicit m! contributes a denominator parameter 1), with
    //   c_k = (-1)^(k+1) [sum B_{k+1}(num_i) - sum B_{k+1}(den_j)] / (k(k+1)).
    // Expanding the exponential gives coefficients e_k, and the tail sum
    // becomes G * sum_k e_k zeta(1+s+k, M).
    unsigned K = std::max(24u, prec.digits);
    std::vector<real> c(K + 1, real(0));
    for (unsigned k = 1; k <= K; ++k) {
        real acc = 0;
        for (const real& a : p.num)
            acc += bernoulli_polynomial(k + 1, a);
        for (const real& b : p.den)
            acc -= bernoulli_polynomial(k + 1, b);
        acc -= bernoulli_polynomial(k + 1, real(1));
        c[k] = (k % 2 == 0 ? -1 : 1) * acc / (real(k) * (k + 1));
    }
    std::vector<real> e(K + 1, real(0));
    e[0] = 1;
    for (unsigned n = 1; n <= K; ++n) {
        real acc = 0;
        for (unsigned k = 1; k <= n; ++k)
            acc += k * c[k] * e[n - k];
        e[n] = acc / n;
    }
    Product gp;
    for (const real& b : p.den)
        gp.mul(gamma_signed(b, prec));
    for (const real& a : p.num)
        gp.div(gamma_signed(a, prec));
    // Poles cannot reach here: numerator nonpositive integers terminate,
    // denominator ones were rejected above.
    SignedLogReal G = gp.resolve().val;
    real zsum = 0;
    for (unsigned k = 0; k <= K; ++k)
        zsum += e[k] * hurwitz_zeta(1 + s + k, M, prec.digits + kGuardDigits);
    SignedLogReal tail = G * SignedLogReal::from_real(zsum);
    SignedLogReal est = G * SignedLogReal::from_real(
                                e[K] * hurwitz_zeta(1 + s + K, M, prec.digits + kGuardDigits));

    diagnostics().terms_used += M;
    if (!est.is_zero())
        diagnostics().tail_bound += exp(est.log_mag);
    return SignedLogReal::from_real(head) + tail;
}

SignedLogReal gauss_2f1_unit(const real& a, const real& b, const real& c,
                             const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    real tol = prec.pole_tolerance();
    if (is_nonpos_int(a, tol) || is_nonpos_int(b, tol)) {
        // Terminating: the finite sum is exact and never degenerate,
        // unlike the gamma ratio which can hit 0/0 here.
        PFQParams p;
        p.num = {a, b};
        p.den = {c};
        return pfq_unit(p, prec);
    }
    if (c - a - b <= 0)
        throw NonConvergent("gauss_2f1_unit: c-a-b <= 0 and the series does not terminate");
    Product pr;
    pr.mul(gamma_signed(c, prec));
    pr.mul(gamma_signed(c - a - b, prec));
    pr.div(gamma_signed(c - a, prec));
    pr.div(gamma_signed(c - b, prec));
    GammaEval g = pr.resolve();
    if (g.pole)
        throw DenominatorPole("gauss_2f1_unit: gamma ratio pole survives summation");
    return g.val;
}

SignedLogReal outer_sum(const OuterSumSpec& spec, const Precision& prec) {
    ScopedPrecision scope(prec.digits + kGuardDigits);
    real tol = prec.pole_tolerance();
    bool terminates = false;
    long last = 0;
    for (const real& a : spec.num) {
        if (is_nonpos_int(a, tol)) {
            long m = -to_long(a);
            if (!terminates || m < last)
                last = m;
            terminates = true;
        }
    }
    if (!terminates)
        throw InvalidSpec("outer_sum: no nonpositive-integer numerator terminates the sum");

    SignedLogReal coef = SignedLogReal::one();
    SignedLogReal total = SignedLogReal::zero();
    for (long m = 0; m <= last; ++m) {
        if (!coef.is_zero())
            total = total + coef * pfq_unit(spec.inner(static_cast<unsigned long>(m)), prec);
        if (m < last) {
            real num = 1, den = real(m) + 1;
            for (const real& a : spec.num)
                num *= a + m;
            for (const real& b : spec.den) {
                real factor = b + m;
                if (abs(factor) < tol)
                    throw DenominatorPole("outer_sum: denominator parameter " + b.str(8) +
                                          " reaches a nonpositive integer at term " +
                                          std::to_string(m));
                den *= factor;
            }
            coef = coef * SignedLogReal::from_real(num / den);
        }
    }
    diagnostics().terms_used += static_cast<unsigned long>(last) + 1;
    return total;
}

} // namespace ndim
