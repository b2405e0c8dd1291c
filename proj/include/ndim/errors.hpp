#ifndef NDIM_ERRORS_HPP
#define NDIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ndim {

// Base class for every evaluation failure the engine can raise on purpose.
// Callers that need to distinguish categories catch the subtypes; anything
// else escaping an operation is a genuine bug.
struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// Series has nonpositive convergence margin and does not terminate.
struct NonConvergent : EvalError {
    explicit NonConvergent(const std::string& what) : EvalError(what) {}
};

// Requested double-series evaluation at a point outside its convergence
// region with no terminating index to save it.
struct OutsideRegion : EvalError {
    explicit OutsideRegion(const std::string& what) : EvalError(what) {}
};

// A denominator parameter reaches a nonpositive integer before the series
// terminates.
struct DenominatorPole : EvalError {
    explicit DenominatorPole(const std::string& what) : EvalError(what) {}
};

// Gamma poles collide (0/0 or pole*zero); the value needs a limit the
// direct evaluation cannot take.  The shifted-exponent fallback handles it.
struct DoublePole : EvalError {
    explicit DoublePole(const std::string& what) : EvalError(what) {}
};

// Structurally invalid request: missing termination index, malformed
// parameter list, inconsistent configuration.
struct InvalidSpec : EvalError {
    explicit InvalidSpec(const std::string& what) : EvalError(what) {}
};

// A formal (-1)^e phase is demanded at non-integer e.  Value-true
// continuations absorb phases; an unpaired one is always a usage error.
struct NonIntegerPhase : EvalError {
    explicit NonIntegerPhase(const std::string& what) : EvalError(what) {}
};

// Term budget exhausted before the stopping rule was satisfied.
struct MaxTermsExceeded : EvalError {
    explicit MaxTermsExceeded(const std::string& what) : EvalError(what) {}
};

// Evaluation point sits within the rejection radius of a known pole of the
// target formula; results there would need more digits than requested.
struct PoleAdjacent : EvalError {
    explicit PoleAdjacent(const std::string& what) : EvalError(what) {}
};

} // namespace ndim

#endif
