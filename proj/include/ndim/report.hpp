#ifndef NDIM_REPORT_HPP
#define NDIM_REPORT_HPP

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "ndim/loop_value.hpp"
#include "ndim/precision.hpp"

namespace ndim {

enum class OutputFormat { Json, Csv, Text };

// Everything a command needs beyond its own arguments.  Precedence is
// resolved by the CLI before this is built: flags over the NDIM_DIGITS
// environment variable over a config file over defaults.
struct RunConfig {
    Precision prec;
    real p2 = 1;
    OutputFormat format = OutputFormat::Text;
};

// One check of a verification suite.
struct Comparison {
    std::string name;
    std::string status; // pass, fail, skipped
    real rel_error = 0;
    std::string detail;
};

// Machine-readable outcome of one command.  result holds a single
// evaluation, rows a sweep (one LoopValue per grid dimension in
// row_dims), comparisons a verification run.  error is empty on success,
// "Category: message" otherwise.
struct Report {
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    // Dimension the result was evaluated at; affine exponents are also
    // reported folded at this value when present.
    std::optional<real> dim;
    std::optional<LoopValue> result;
    std::vector<real> row_dims;
    std::vector<LoopValue> rows;
    std::vector<Comparison> comparisons;
    std::vector<std::string> warnings;
    std::string error;
    unsigned digits = 50;
};

// Decimal string at the given precision.  All reals are serialized this
// way, never as binary floats, so reports reproduce across precisions.
std::string format_real(const real& x, unsigned digits);

// When the coefficient is a half-integer power of pi to within the
// serialization precision (|k| <= 6 quarter turns of the bubble family),
// move that power into pi_exponent and leave a +-1 coefficient.  Keeps
// reports in the shape the closed forms are quoted in.
void fold_pi(LoopValue& v, unsigned digits);

std::string to_json(const Report& r);
std::string to_csv(const Report& r);
std::string to_text(const Report& r);
std::string render(const Report& r, OutputFormat format);

} // namespace ndim

#endif
