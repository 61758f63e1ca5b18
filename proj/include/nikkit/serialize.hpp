#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "nikkit/identities.hpp"
#include "nikkit/probe.hpp"

// Deterministic serialization of the report types. Key order is fixed by
// construction, numbers are printed with an explicit format, and no
// timestamps or environment data ever enter the output, so repeated runs
// with the same inputs are byte-identical.

namespace nikkit {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15e", v);
    return buf;
}

namespace detail {

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (const char ch : s) {
        switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(ch) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                out += buf;
            } else {
                out += ch;
            }
        }
    }
    return out;
}

inline std::string json_int_array(const std::vector<int>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out + "]";
}

inline std::string json_double_array(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out + "]";
}

} // namespace detail

inline std::string to_json(const residual_report& r, double tolerance) {
    std::ostringstream os;
    os << "{\"identity\":\"" << to_string(r.identity) << "\""
       << ",\"resolved_signs\":" << detail::json_int_array(r.resolved_signs)
       << ",\"max_residual\":" << format_double(r.max_residual)
       << ",\"node_count\":" << r.node_count
       << ",\"grid_size\":" << r.grid.size()
       << ",\"pass\":" << (r.max_residual <= tolerance ? "true" : "false")
       << ",\"residual_at_half_nodes\":" << format_double(r.residual_at_half_nodes)
       << ",\"corrected_max_residual\":" << format_double(r.corrected_max_residual)
       << ",\"flip_residuals\":" << detail::json_double_array(r.flip_residuals)
       << ",\"note\":\"" << detail::json_escape(r.note) << "\"}";
    return os.str();
}

inline std::string to_json(const std::vector<residual_report>& reports, double tolerance) {
    std::string out = "[";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (i) out += ",";
        out += to_json(reports[i], tolerance);
    }
    return out + "]";
}

inline std::string to_json(const sign_entry& e) {
    std::ostringstream os;
    os << "{\"identity\":\"" << to_string(e.identity) << "\""
       << ",\"terms\":[";
    for (std::size_t i = 0; i < e.term_names.size(); ++i) {
        if (i) os << ",";
        os << "{\"name\":\"" << detail::json_escape(e.term_names[i]) << "\",\"sign\":"
           << (i < e.resolved_signs.size() ? e.resolved_signs[i] : 0) << "}";
    }
    os << "],\"positive_form\":\"" << detail::json_escape(e.positive_form) << "\"}";
    return os.str();
}

inline std::string to_json(const std::vector<sign_entry>& entries) {
    std::string out = "[";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) out += ",";
        out += to_json(entries[i]);
    }
    return out + "]";
}

inline std::string to_json(const level1_result& r) {
    std::ostringstream os;
    os << "{\"k\":" << r.k
       << ",\"verdict\":\"" << to_string(r.verdict) << "\""
       << ",\"violation_count\":" << r.violation_count
       << ",\"worst_value\":" << format_double(r.worst_value)
       << ",\"worst_location\":" << format_double(r.worst_location)
       << ",\"near_zero_count\":" << r.near_zero_count << "}";
    return os.str();
}

inline std::string to_json(const level2_result& r) {
    std::ostringstream os;
    os << "{\"k\":" << r.k
       << ",\"sign_verdict\":\"" << to_string(r.sign_verdict) << "\""
       << ",\"jump_sign\":" << r.jump_sign
       << ",\"sign_violation_count\":" << r.sign_violation_count
       << ",\"worst_jump_value\":" << format_double(r.worst_jump_value)
       << ",\"worst_jump_location\":" << format_double(r.worst_jump_location)
       << ",\"constant_at_infinity\":" << format_double(r.constant_at_infinity)
       << ",\"reconstruction_residual\":" << format_double(r.reconstruction_residual)
       << ",\"reconstruction_verdict\":\"" << to_string(r.reconstruction_verdict) << "\""
       << ",\"excluded_count\":" << r.excluded_count
       << ",\"note\":\"" << detail::json_escape(r.note) << "\"}";
    return os.str();
}

inline std::string to_json(const probe_report& r) {
    std::ostringstream os;
    os << "{\"exponents\":[" << format_double(r.exponents.alpha1) << ","
       << format_double(r.exponents.alpha2) << "]"
       << ",\"n\":" << r.n
       << ",\"level1_violation_count\":" << r.level1_violation_count
       << ",\"level1_worst_value\":" << format_double(r.level1_worst_value)
       << ",\"level1_worst_location\":" << format_double(r.level1_worst_location)
       << ",\"level1_worst_k\":" << r.level1_worst_k
       << ",\"level1\":[";
    for (std::size_t i = 0; i < r.level1.size(); ++i) {
        if (i) os << ",";
        os << to_json(r.level1[i]);
    }
    os << "],\"level2\":[";
    for (std::size_t i = 0; i < r.level2.size(); ++i) {
        if (i) os << ",";
        os << to_json(r.level2[i]);
    }
    os << "],\"all_pass\":" << (r.all_pass() ? "true" : "false") << "}";
    return os.str();
}

// CSV emitters: UTF-8, header row, %.15e numerics, '\n' line endings.

inline std::string csv_reports(const std::vector<residual_report>& reports, double tolerance) {
    std::string out =
        "identity,max_residual,residual_at_half_nodes,corrected_max_residual,node_count,"
        "grid_size,resolved_signs,pass\n";
    for (const auto& r : reports) {
        out += to_string(r.identity);
        out += ",";
        out += format_double(r.max_residual);
        out += ",";
        out += format_double(r.residual_at_half_nodes);
        out += ",";
        out += std::isnan(r.corrected_max_residual) ? "" : format_double(r.corrected_max_residual);
        out += ",";
        out += std::to_string(r.node_count);
        out += ",";
        out += std::to_string(r.grid.size());
        out += ",";
        for (std::size_t i = 0; i < r.resolved_signs.size(); ++i) {
            if (i) out += ";";
            out += (r.resolved_signs[i] > 0 ? "+1" : "-1");
        }
        out += ",";
        out += (r.max_residual <= tolerance ? "true" : "false");
        out += "\n";
    }
    return out;
}

} // namespace nikkit
