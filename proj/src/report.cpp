#include "ndim/report.hpp"

#include <cstddef>
#include <sstream>

namespace ndim {

namespace {

using ojson = nlohmann::ordered_json;

ojson num_json(const real& x, unsigned digits) {
    ojson j;
    j["value"] = format_real(x, digits);
    j["digits"] = digits;
    return j;
}

std::string affine_text(const AffineD& a, unsigned digits) {
    return format_real(a.c0, digits) + " + " + format_real(a.c1, digits) + "*D";
}

ojson affine_json(const AffineD& a, const std::optional<real>& dim, unsigned digits) {
    ojson j;
    j["c0"] = num_json(a.c0, digits);
    j["c1"] = num_json(a.c1, digits);
    if (dim)
        j["at_dim"] = num_json(a.at(*dim), digits);
    return j;
}

ojson value_json(const LoopValue& v, const std::optional<real>& dim, unsigned digits) {
    ojson j;
    ojson coeff;
    coeff["sign"] = v.coefficient.sign;
    coeff["log_mag"] = num_json(v.coefficient.log_mag, digits);
    coeff["value"] = num_json(v.coefficient.value(), digits);
    j["coefficient"] = coeff;
    j["pi_exponent"] = affine_json(v.pi_exponent, dim, digits);
    j["p2_exponent"] = affine_json(v.p2_exponent, dim, digits);
    j["terms"] = v.terms;
    j["tail_bound"] = num_json(v.tail_bound, digits);
    j["flags"] = v.flags;
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (k > 0)
            out += sep;
        out += parts[k];
    }
    return out;
}

} // namespace

std::string format_real(const real& x, unsigned digits) { return x.str(digits); }

void fold_pi(LoopValue& v, unsigned digits) {
    if (v.coefficient.is_zero())
        return;
    real q = v.coefficient.log_mag / log(pi_value());
    real half_steps = round_to_int(2 * q);
    if (abs(half_steps) > 12)
        return;
    // Acceptance window sits well above the serialization granularity so
    // a folded report re-parsed at the same digits folds identically.
    if (abs(2 * q - half_steps) >= pow(real(10), 12 - static_cast<int>(digits)))
        return;
    v.pi_exponent.c0 += half_steps / 2;
    v.coefficient = SignedLogReal::from_log(v.coefficient.sign, real(0));
}

std::string to_json(const Report& r) {
    ojson root;
    root["schema_version"] = 1;
    root["command"] = r.command;
    root["digits"] = r.digits;
    root["inputs"] = r.inputs;
    if (r.dim)
        root["dim"] = num_json(*r.dim, r.digits);
    if (r.result)
        root["result"] = value_json(*r.result, r.dim, r.digits);
    if (!r.rows.empty()) {
        ojson rows = ojson::array();
        for (std::size_t k = 0; k < r.rows.size(); ++k) {
            ojson row;
            row["D"] = num_json(r.row_dims[k], r.digits);
            ojson body = value_json(r.rows[k], r.row_dims[k], r.digits);
            for (auto& item : body.items())
                row[item.key()] = item.value();
            rows.push_back(row);
        }
        root["rows"] = rows;
    }
    if (!r.comparisons.empty()) {
        ojson comps = ojson::array();
        for (const Comparison& c : r.comparisons) {
            ojson obj;
            obj["name"] = c.name;
            obj["status"] = c.status;
            obj["rel_error"] = num_json(c.rel_error, r.digits);
            obj["detail"] = c.detail;
            comps.push_back(obj);
        }
        root["comparisons"] = comps;
    }
    if (!r.warnings.empty())
        root["warnings"] = r.warnings;
    if (!r.error.empty())
        root["error"] = r.error;
    return root.dump(2) + "\n";
}

std::string to_csv(const Report& r) {
    std::ostringstream out;
    out << "# schema_version=1\n";
    out << "# command=" << r.command << "\n";
    out << "# digits=" << r.digits << "\n";
    auto emit_row = [&](const std::optional<real>& dim, const LoopValue& v) {
        out << (dim ? format_real(*dim, r.digits) : "") << ","
            << csv_field(format_real(v.coefficient.value(), r.digits)) << ","
            << csv_field(dim ? format_real(v.pi_exponent.at(*dim), r.digits)
                             : affine_text(v.pi_exponent, r.digits))
            << ","
            << csv_field(dim ? format_real(v.p2_exponent.at(*dim), r.digits)
                             : affine_text(v.p2_exponent, r.digits))
            << "," << v.terms << "," << format_real(v.tail_bound, r.digits) << ","
            << csv_field(join(v.flags, "|")) << "\n";
    };
    if (r.result || !r.rows.empty()) {
        out << "D,coefficient,pi_exponent,p2_exponent,terms,tail_bound,flags\n";
        if (r.result)
            emit_row(r.dim, *r.result);
        for (std::size_t k = 0; k < r.rows.size(); ++k)
            emit_row(r.row_dims[k], r.rows[k]);
    }
    if (!r.comparisons.empty()) {
        out << "# comparisons\n";
        out << "name,status,rel_error,detail\n";
        for (const Comparison& c : r.comparisons)
            out << csv_field(c.name) << "," << c.status << ","
                << format_real(c.rel_error, r.digits) << "," << csv_field(c.detail) << "\n";
    }
    for (const std::string& w : r.warnings)
        out << "# warning=" << w << "\n";
    if (!r.error.empty())
        out << "# error=" << r.error << "\n";
    return out.str();
}

std::string to_text(const Report& r) {
    std::ostringstream out;
    out << r.command << " at " << r.digits << " digits\n";
    if (!r.inputs.empty())
        out << "inputs: " << r.inputs.dump() << "\n";
    auto show = [&](const std::optional<real>& dim, const LoopValue& v) {
        if (dim)
            out << "D = " << format_real(*dim, r.digits) << "\n";
        out << "coefficient = " << format_real(v.coefficient.value(), r.digits) << "\n";
        out << "pi exponent = " << affine_text(v.pi_exponent, r.digits);
        if (dim)
            out << " = " << format_real(v.pi_exponent.at(*dim), r.digits);
        out << "\n";
        out << "p2 exponent = " << affine_text(v.p2_exponent, r.digits);
        if (dim)
            out << " = " << format_real(v.p2_exponent.at(*dim), r.digits);
        out << "\n";
        out << "terms = " << v.terms << ", tail bound = " << format_real(v.tail_bound, 3)
            << "\n";
        for (const std::string& f : v.flags)
            out << "flag: " << f << "\n";
    };
    if (r.result)
        show(r.dim, *r.result);
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        out << "-- row " << k << "\n";
        show(r.row_dims[k], r.rows[k]);
    }
    for (const Comparison& c : r.comparisons) {
        out << "[" << c.status << "] " << c.name << "  rel_error = "
            << format_real(c.rel_error, 3);
        if (!c.detail.empty())
            out << "  (" << c.detail << ")";
        out << "\n";
    }
    for (const std::string& w : r.warnings)
        out << "warning: " << w << "\n";
    if (!r.error.empty())
        out << "error: " << r.error << "\n";
    return out.str();
}

std::string render(const Report& r, OutputFormat format) {
    switch (format) {
    case OutputFormat::Json:
        return to_json(r);
    case OutputFormat::Csv:
        return to_csv(r);
    default:
        return to_text(r);
    }
}

} // namespace ndim
