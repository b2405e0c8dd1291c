#ifndef NDIM_PRECISION_HPP
#define NDIM_PRECISION_HPP

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <vector>

#include "ndim/errors.hpp"

namespace ndim {

// Variable-precision real.  The working precision is the thread's current
// default; ScopedPrecision below moves it.
using real = boost::multiprecision::mpfr_float;

// Working-precision request shared by every operation.  digits is the
// precision the caller wants delivered; internally operations add guard
// digits on top of it.
struct Precision {
    unsigned digits = 50;
    // Relative truncation tolerance as a power of ten.  Cannot be tighter
    // than 10^(10 - digits): below that the arithmetic itself cannot keep up.
    int tol_exp = -40;
    unsigned long max_terms = 200000;

    static Precision make(unsigned digits, int tol_exp, unsigned long max_terms = 200000) {
        if (digits < 20)
            throw InvalidSpec("Precision: digits must be >= 20");
        if (tol_exp < 10 - static_cast<int>(digits))
            throw InvalidSpec("Precision: tolerance below 10^(10-digits)");
        if (max_terms < 1)
            throw InvalidSpec("Precision: max_terms must be >= 1");
        Precision p;
        p.digits = digits;
        p.tol_exp = tol_exp;
        p.max_terms = max_terms;
        return p;
    }

    static Precision with_digits(unsigned digits) {
        return make(digits, 10 - static_cast<int>(digits));
    }

    real truncation_tolerance() const { return pow(real(10), tol_exp); }

    // Arguments closer than this to a nonpositive integer are classified as
    // sitting on the pole.  Wider than the truncation tolerance on purpose:
    // a near-pole gamma ratio loses exactly the digits this margin protects.
    real pole_tolerance() const { return pow(real(10), 5 - static_cast<int>(digits)); }
};

// RAII move of the process default mpfr precision (decimal digits).
// Restores the previous value on scope exit.  Existing variables keep the
// precision they were constructed with; construct locals after this.
class ScopedPrecision {
  public:
    explicit ScopedPrecision(unsigned digits) : saved_(real::default_precision()) {
        real::default_precision(digits);
    }
    ~ScopedPrecision() { real::default_precision(saved_); }
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

  private:
    unsigned saved_;
};

// Guard digits added inside operations so that results are good to the
// requested digits after internal cancellation.
inline constexpr unsigned kGuardDigits = 15;

inline real round_to_int(const real& x) {
    real r;
    mpfr_round(r.backend().data(), x.backend().data());
    return r;
}

inline bool is_integer(const real& x, const real& tol) {
    return abs(x - round_to_int(x)) < tol;
}

inline bool is_nonpos_int(const real& x, const real& tol) {
    return is_integer(x, tol) && round_to_int(x) <= 0;
}

inline long to_long(const real& x) { return static_cast<long>(round_to_int(x)); }

// Per-thread evaluation diagnostics.  Series routines accumulate into the
// active record; report builders read and reset it around each command.
struct Diagnostics {
    unsigned long terms_used = 0;
    real tail_bound = 0;
    std::vector<std::string> warnings;

    void warn(const std::string& w) {
        for (const auto& existing : warnings)
            if (existing == w)
                return;
        warnings.push_back(w);
    }
};

Diagnostics& diagnostics();
void reset_diagnostics();

} // namespace ndim

#endif
