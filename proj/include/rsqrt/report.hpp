#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kernels.hpp"
#include "scanner.hpp"
#include "solver.hpp"

// Serialization: CSV tables and JSON reports for scans, blur statistics and
// derivations. Machine formats keep full precision (shortest decimal that
// round-trips); human summaries round to six significant digits.
namespace rsqrt {

inline constexpr const char* tool_name = "rsqrt";
inline constexpr const char* tool_version = "1.0.0";
inline constexpr const char* rounding_description =
    "binary32 kernels, iteration statements evaluated in double with one rounding "
    "per assignment, no FMA";

inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_float(float v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_bits_hex(std::uint32_t bits) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08X", bits);
    return std::string(buf);
}

inline std::string format_sig6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
}

// Listing spelling of a kernel coefficient: the eight-significant-digit
// decimal nearest to the exact value among those that still parse back to
// the rounded binary32 constant.
inline std::string format_listing(double exact, float rounded) {
    if (exact == 0.0) return "0";
    const double unit = std::pow(10.0, std::floor(std::log10(std::fabs(exact))) - 7.0);
    const double base = std::round(exact / unit);
    for (int k = 0; k <= 8; ++k) {
        for (int sign : {1, -1}) {
            if (k == 0 && sign < 0) continue;
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.8g", (base + sign * k) * unit);
            if (std::strtof(buf, nullptr) == rounded) return std::string(buf);
        }
    }
    return format_float(rounded);
}

// A named check: pass iff |actual - expected| <= tolerance, except for
// exact checks (tolerance 0), which compare representations directly.
struct Verdict {
    std::string name;
    bool pass = false;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;

    double delta() const { return actual - expected; }

    static Verdict approx(std::string name_, double expected_, double actual_, double tol) {
        Verdict v;
        v.name = std::move(name_);
        v.expected = expected_;
        v.actual = actual_;
        v.tolerance = tol;
        v.pass = std::abs(v.delta()) <= tol;
        return v;
    }

    static Verdict exact_bits(std::string name_, std::uint32_t expected_, std::uint32_t actual_) {
        Verdict v;
        v.name = std::move(name_);
        v.expected = expected_;
        v.actual = actual_;
        v.tolerance = 0.0;
        v.pass = expected_ == actual_;
        return v;
    }

    static Verdict bound(std::string name_, double limit, double actual_, bool upper) {
        Verdict v;
        v.name = std::move(name_);
        v.expected = limit;
        v.actual = actual_;
        v.tolerance = 0.0;
        v.pass = upper ? actual_ <= limit : actual_ >= limit;
        return v;
    }
};

inline nlohmann::json verdict_json(const Verdict& v) {
    return {{"name", v.name},
            {"pass", v.pass},
            {"expected", v.expected},
            {"actual", v.actual},
            {"delta", v.delta()},
            {"tolerance", v.tolerance}};
}

struct Report {
    nlohmann::json metadata;
    nlohmann::json payload;
    std::vector<Verdict> verdicts;

    bool all_pass() const {
        for (const Verdict& v : verdicts)
            if (!v.pass) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json vs = nlohmann::json::array();
        for (const Verdict& v : verdicts) vs.push_back(verdict_json(v));
        return {{"metadata", metadata}, {"payload", payload}, {"verdicts", vs}};
    }
};

inline nlohmann::json metadata_json() {
    return {{"tool", tool_name}, {"version", tool_version}, {"rounding", rounding_description}};
}

inline nlohmann::json stats_json(const ErrorStats& s) {
    return {{"count", s.count},
            {"min", s.min},
            {"argmin_bits", format_bits_hex(s.argmin_bits)},
            {"max", s.max},
            {"argmax_bits", format_bits_hex(s.argmax_bits)},
            {"mean", s.mean()},
            {"sum", s.sum_raw() + s.comp_raw()}};
}

inline nlohmann::json scan_json(const ScanResult& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [e, s] : r.per_exponent) {
        nlohmann::json row = stats_json(s);
        row["exponent"] = e;
        rows.push_back(row);
    }
    return {{"iterations", r.config.iterations},
            {"sampled", r.config.sample_count != 0},
            {"sample_count", r.config.sample_count},
            {"sample_seed", r.config.sample_seed},
            {"per_exponent", rows},
            {"global", stats_json(r.global)}};
}

inline nlohmann::json blur_json(const BlurStats& b) {
    nlohmann::json bins = nlohmann::json::array();
    for (std::size_t i = 0; i < b.bins.size(); ++i) {
        const double lo = i < 64 ? 1.0 + static_cast<double>(i) / 64.0
                                 : 2.0 + static_cast<double>(i - 64) / 32.0;
        const double hi = i < 64 ? 1.0 + static_cast<double>(i + 1) / 64.0
                                 : 2.0 + static_cast<double>(i - 63) / 32.0;
        bins.push_back({{"x_lo", lo}, {"x_hi", hi}, {"min", b.bins[i].min}, {"max", b.bins[i].max}});
    }
    return {{"count", b.count},
            {"mean", b.mean},
            {"sum", b.sum},
            {"min", b.min},
            {"argmin_bits", format_bits_hex(b.argmin_bits)},
            {"max", b.max},
            {"argmax_bits", format_bits_hex(b.argmax_bits)},
            {"bins", bins}};
}

inline nlohmann::json spec_json(const KernelSpec& spec) {
    nlohmann::json iters = nlohmann::json::array();
    for (const IterationCoeffs& c : spec.iterations)
        iters.push_back({{"add_term", format_float(c.add_term)},
                         {"add_term_bits", format_bits_hex(std::bit_cast<std::uint32_t>(c.add_term))},
                         {"mul_term", format_float(c.mul_term)},
                         {"mul_term_bits", format_bits_hex(std::bit_cast<std::uint32_t>(c.mul_term))}});
    return {{"magic", format_bits_hex(spec.magic.bits())},
            {"slope", spec.magic.slope()},
            {"half_factor", format_float(spec.half_factor)},
            {"half_factor_bits", format_bits_hex(std::bit_cast<std::uint32_t>(spec.half_factor))},
            {"iterations", iters}};
}

inline nlohmann::json solution_json(const MinimaxSolution& s) {
    return {{"scheme", s.scheme},
            {"t", s.t},
            {"magic", format_bits_hex(s.magic)},
            {"d1", s.d1},
            {"d2", s.d2},
            {"max_error", {s.max_error[0], s.max_error[1], s.max_error[2]}},
            {"extremal_x", s.extremal_x}};
}

inline std::string scan_csv(const ScanResult& r) {
    std::string out = "exponent,count,min,argmin_bits_hex,max,argmax_bits_hex,mean\n";
    const auto row = [&out](const std::string& label, const ErrorStats& s) {
        out += label;
        out += ',';
        out += std::to_string(s.count);
        out += ',';
        out += format_double(s.min);
        out += ',';
        out += format_bits_hex(s.argmin_bits);
        out += ',';
        out += format_double(s.max);
        out += ',';
        out += format_bits_hex(s.argmax_bits);
        out += ',';
        out += format_double(s.mean());
        out += '\n';
    };
    for (const auto& [e, s] : r.per_exponent) row(std::to_string(e), s);
    row("global", r.global);
    return out;
}

inline std::string curve_csv(const std::vector<std::pair<double, double>>& points) {
    std::string out = "x,error\n";
    for (const auto& [x, err] : points) {
        out += format_double(x);
        out += ',';
        out += format_double(err);
        out += '\n';
    }
    return out;
}

inline std::string blur_csv(const BlurStats& b) {
    std::string out = "bin,x_lo,x_hi,min,max\n";
    for (std::size_t i = 0; i < b.bins.size(); ++i) {
        const double lo = i < 64 ? 1.0 + static_cast<double>(i) / 64.0
                                 : 2.0 + static_cast<double>(i - 64) / 32.0;
        const double hi = i < 64 ? 1.0 + static_cast<double>(i + 1) / 64.0
                                 : 2.0 + static_cast<double>(i - 63) / 32.0;
        out += std::to_string(i);
        out += ',';
        out += format_double(lo);
        out += ',';
        out += format_double(hi);
        out += ',';
        out += format_double(b.bins[i].min);
        out += ',';
        out += format_double(b.bins[i].max);
        out += '\n';
    }
    return out;
}

}  // namespace rsqrt
