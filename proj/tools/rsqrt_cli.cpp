#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <rsqrt/report.hpp>
#include <rsqrt/verify.hpp>

using namespace rsqrt;

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path);
}

void write_json(const std::string& path, const nlohmann::json& doc) {
    write_file(path, doc.dump(2) + "\n");
}

SchemeId kernel_scheme(const std::string& name) {
    if (name == "classic") return SchemeId::Classic;
    if (name == "scheme1") return SchemeId::Scheme1;
    return SchemeId::Scheme2;
}

void print_verdict(const Verdict& v) {
    std::printf("  [%s] %-34s actual %-14s expected %-14s delta %-10s tol %s\n",
                v.pass ? " ok " : "FAIL", v.name.c_str(), format_sig6(v.actual).c_str(),
                format_sig6(v.expected).c_str(), format_sig6(v.delta()).c_str(),
                format_sig6(v.tolerance).c_str());
}

int finish(Report& report, const std::string& json_path) {
    if (!json_path.empty()) write_json(json_path, report.to_json());
    return report.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------- derive

struct DeriveRow {
    std::string name;
    std::string derived;
    std::string published;
    std::string delta;
    bool pass;
};

void approx_row(std::vector<DeriveRow>& rows, std::vector<Verdict>& verdicts,
                const std::string& name, double published, double derived, double tol) {
    Verdict v = Verdict::approx(name, published, derived, tol);
    rows.push_back({name, format_double(derived), format_double(published),
                    format_sig6(v.delta()), v.pass});
    verdicts.push_back(v);
}

void hex_row(std::vector<DeriveRow>& rows, std::vector<Verdict>& verdicts,
             const std::string& name, std::uint32_t published, std::uint32_t derived) {
    Verdict v = Verdict::exact_bits(name, published, derived);
    rows.push_back({name, format_bits_hex(derived), format_bits_hex(published),
                    v.pass ? "0" : "-", v.pass});
    verdicts.push_back(v);
}

void float_row(std::vector<DeriveRow>& rows, std::vector<Verdict>& verdicts,
               const std::string& name, float published, float derived) {
    Verdict v = Verdict::exact_bits(name, std::bit_cast<std::uint32_t>(published),
                                    std::bit_cast<std::uint32_t>(derived));
    rows.push_back({name, format_float(derived), format_float(published),
                    v.pass ? "0" : "-", v.pass});
    verdicts.push_back(v);
}

int cmd_derive(const std::string& selection, const std::string& json_path) {
    namespace ref = reference;
    const rsqrt::detail::SolvedSet& s = rsqrt::detail::solved();
    std::vector<DeriveRow> rows;
    Report report;
    report.metadata = metadata_json();
    report.metadata["command"] = "derive";
    report.metadata["selection"] = selection;
    nlohmann::json solutions = nlohmann::json::array();

    const bool all = selection == "all";
    if (all || selection == "seed") {
        approx_row(rows, report.verdicts, "seed slope t", ref::seed_t, s.seed_opt.t,
                   ref::seed_t_tol);
        hex_row(rows, report.verdicts, "seed magic", ref::seed_magic, s.seed_opt.magic);
        approx_row(rows, report.verdicts, "seed max error", ref::seed_max0,
                   s.seed_opt.max_error[0], ref::seed_max0_tol);
        solutions.push_back(solution_json(s.seed_opt));
    }
    if (all || selection == "classic") {
        approx_row(rows, report.verdicts, "classic slope t", ref::classic_t, s.classic.t,
                   ref::classic_t_tol);
        hex_row(rows, report.verdicts, "classic magic", ref::classic_magic, s.classic.magic);
        approx_row(rows, report.verdicts, "classic one-step bound", ref::classic_max1,
                   s.classic.max_error[1], ref::classic_max1_tol);
        approx_row(rows, report.verdicts, "classic two-step bound", ref::classic_max2,
                   s.classic.max_error[2], ref::classic_max2_tol);
        solutions.push_back(solution_json(s.classic));
    }
    if (all || selection == "modified") {
        approx_row(rows, report.verdicts, "flat-bias one-step bound", ref::flat_max1,
                   s.flat.max_error1, ref::flat_max1_tol);
        approx_row(rows, report.verdicts, "flat-bias two-step bound", ref::flat_max2,
                   s.flat.max_error2, ref::flat_max2_tol);
        approx_row(rows, report.verdicts, "interval lower slope", ref::interval_t_lo,
                   s.interval.t_lo, ref::interval_t_tol);
        approx_row(rows, report.verdicts, "interval upper slope", ref::interval_t_hi,
                   s.interval.t_hi, ref::interval_t_tol);
        hex_row(rows, report.verdicts, "interval first magic", ref::interval_magic_lo,
                s.interval.magic_lo);
        hex_row(rows, report.verdicts, "interval last magic", ref::interval_magic_hi,
                s.interval.magic_hi);
        hex_row(rows, report.verdicts, "interval size", ref::interval_count, s.interval.count);
    }
    if (all || selection == "joint") {
        approx_row(rows, report.verdicts, "joint one-step half-bias", ref::joint_half_d1,
                   s.joint.max_error1, ref::joint_half_d1_tol);
        approx_row(rows, report.verdicts, "joint two-step half-bias", ref::joint_half_d2,
                   s.joint.max_error2, ref::joint_half_d2_tol);
        approx_row(rows, report.verdicts, "joint gap vs flat bias",
                   ref::flat_max2 - ref::joint_half_d2, s.joint.gap_vs_flat,
                   ref::flat_max2_tol + ref::joint_half_d2_tol);
    }
    if (all || selection == "scheme1") {
        approx_row(rows, report.verdicts, "scheme1 one-step bound", ref::scheme1_max1,
                   s.scheme1.max_error[1], ref::scheme1_max1_tol);
        approx_row(rows, report.verdicts, "scheme1 second bias", ref::scheme1_d2, s.scheme1.d2,
                   ref::scheme1_d2_tol);
        approx_row(rows, report.verdicts, "scheme1 two-step bound", ref::scheme1_max2,
                   s.scheme1.max_error[2], ref::scheme1_max2_tol);
        const KernelSpec spec = emit_code_constants(s.scheme1);
        float_row(rows, report.verdicts, "scheme1 half factor", ref::listing_scheme1_half,
                  spec.half_factor);
        float_row(rows, report.verdicts, "scheme1 first add term", ref::listing_scheme1_add1,
                  spec.iterations[0].add_term);
        float_row(rows, report.verdicts, "scheme1 second add term", ref::listing_scheme1_add2,
                  spec.iterations[1].add_term);
        float_row(rows, report.verdicts, "scheme1 second mul term", ref::listing_scheme1_mul2,
                  spec.iterations[1].mul_term);
        solutions.push_back(solution_json(s.scheme1));
    }
    if (all || selection == "scheme2") {
        approx_row(rows, report.verdicts, "scheme2 slope t", ref::scheme2_t, s.scheme2.t,
                   ref::scheme2_t_tol);
        hex_row(rows, report.verdicts, "scheme2 magic", ref::scheme2_magic, s.scheme2.magic);
        approx_row(rows, report.verdicts, "scheme2 first bias", ref::scheme2_d1, s.scheme2.d1,
                   ref::scheme2_d1_tol);
        approx_row(rows, report.verdicts, "scheme2 one-step bound", ref::scheme2_max1,
                   s.scheme2.max_error[1], ref::scheme2_max1_tol);
        approx_row(rows, report.verdicts, "scheme2 second bias", ref::scheme2_d2, s.scheme2.d2,
                   ref::scheme2_d2_tol);
        approx_row(rows, report.verdicts, "scheme2 two-step bound", ref::scheme2_max2,
                   s.scheme2.max_error[2], ref::scheme2_max2_tol);
        const KernelSpec spec = emit_code_constants(s.scheme2);
        float_row(rows, report.verdicts, "scheme2 first add term", ref::listing_scheme2_add1,
                  spec.iterations[0].add_term);
        float_row(rows, report.verdicts, "scheme2 second add term", ref::listing_scheme2_add2,
                  spec.iterations[1].add_term);
        solutions.push_back(solution_json(s.scheme2));
    }

    std::printf("%-28s %-22s %-22s %-12s %s\n", "name", "derived", "published", "delta", "pass");
    for (const DeriveRow& r : rows)
        std::printf("%-28s %-22s %-22s %-12s %s\n", r.name.c_str(), r.derived.c_str(),
                    r.published.c_str(), r.delta.c_str(), r.pass ? "yes" : "NO");

    report.payload = {{"solutions", solutions}};
    return finish(report, json_path);
}

// ------------------------------------------------------------------ scan

void attach_scan_verdicts(Report& report, const std::string& scheme, const ScanResult& r) {
    namespace ref = reference;
    const ErrorStats* bottom = nullptr;
    for (const auto& [e, stats] : r.per_exponent)
        if (e == -126) bottom = &stats;
    double worst = std::max(-r.global.min, r.global.max);
    for (const auto& [e, stats] : r.per_exponent)
        worst = std::max({worst, -stats.min, stats.max});

    auto& v = report.verdicts;
    if (r.config.iterations == 2) {
        if (scheme == "scheme1") {
            v.push_back(Verdict::approx("scheme1 global min", ref::scheme1_scan_min, r.global.min,
                                        ref::scan_envelope_tol));
            v.push_back(Verdict::approx("scheme1 global max", ref::scheme1_scan_max, r.global.max,
                                        ref::scan_envelope_tol));
            if (bottom) {
                v.push_back(Verdict::approx("scheme1 bottom-exponent min",
                                            ref::scheme1_scan_min_low_exp, bottom->min,
                                            ref::scan_envelope_tol));
                v.push_back(Verdict::approx("scheme1 bottom-exponent max",
                                            ref::scheme1_scan_max_low_exp, bottom->max,
                                            ref::scan_envelope_tol));
            }
        } else if (scheme == "scheme2") {
            v.push_back(Verdict::approx("scheme2 global min", ref::scheme2_scan_min, r.global.min,
                                        ref::scan_envelope_tol));
            v.push_back(Verdict::approx("scheme2 global max", ref::scheme2_scan_max, r.global.max,
                                        ref::scan_envelope_tol));
            if (bottom) {
                v.push_back(Verdict::approx("scheme2 bottom-exponent min",
                                            ref::scheme2_scan_min_low_exp, bottom->min,
                                            ref::scan_envelope_tol));
                v.push_back(Verdict::approx("scheme2 bottom-exponent max",
                                            ref::scheme2_scan_max_low_exp, bottom->max,
                                            ref::scan_envelope_tol));
            }
            v.push_back(Verdict::bound("scheme2 max |error| hard bound", ref::scheme2_hard_bound,
                                       worst, true));
        } else if (scheme == "classic") {
            v.push_back(Verdict::bound("classic max |error| hard floor", ref::classic_hard_floor,
                                       std::max(-r.global.min, r.global.max), false));
        }
    } else if (r.config.iterations == 1) {
        if (scheme == "scheme1") {
            v.push_back(Verdict::approx("scheme1 one-iteration |min|", ref::scheme1_scan_abs1,
                                        -r.global.min, ref::scan_envelope1_tol));
            v.push_back(Verdict::approx("scheme1 one-iteration max", ref::scheme1_scan_abs1,
                                        r.global.max, ref::scan_envelope1_tol));
        } else if (scheme == "scheme2") {
            v.push_back(Verdict::approx("scheme2 one-iteration |min|", ref::scheme2_scan_abs1,
                                        -r.global.min, ref::scan_envelope1_tol));
            v.push_back(Verdict::approx("scheme2 one-iteration max", ref::scheme2_scan_abs1,
                                        r.global.max, ref::scan_envelope1_tol));
        }
    }
}

int cmd_scan(const std::string& scheme, int iterations, const std::string& exponents, bool full,
             std::uint64_t samples, std::uint64_t seed_value, const std::string& csv_path,
             const std::string& json_path) {
    ScanConfig cfg;
    bool default_domain = false;
    if (full) {
        cfg = ScanConfig::range(FloatFormat::min_exponent, FloatFormat::max_exponent, iterations);
    } else if (!exponents.empty()) {
        int lo = 0, hi = 0;
        std::sscanf(exponents.c_str(), "%d:%d", &lo, &hi);  // validated at parse time
        cfg = ScanConfig::range(lo, hi, iterations);
    } else {
        cfg = ScanConfig::default_set(iterations);
        default_domain = true;
    }
    cfg.sample_count = samples;
    cfg.sample_seed = seed_value;

    const ScanResult r = scan(builtin_spec(kernel_scheme(scheme)), cfg);

    Report report;
    report.metadata = metadata_json();
    report.metadata["command"] = "scan";
    report.metadata["scheme"] = scheme;
    if (samples == 0 && (full || default_domain)) attach_scan_verdicts(report, scheme, r);
    report.payload = scan_json(r);

    std::printf("%s, %d iteration%s, %s, %zu exponents\n", scheme.c_str(), cfg.iterations,
                cfg.iterations == 1 ? "" : "s", samples ? "sampled" : "exhaustive",
                cfg.exponents.size());
    std::printf("%9s %12s %14s %14s %14s\n", "exponent", "count", "min", "max", "mean");
    const auto print_row = [](const char* label, const ErrorStats& s) {
        std::printf("%9s %12llu %14s %14s %14s\n", label,
                    static_cast<unsigned long long>(s.count), format_sig6(s.min).c_str(),
                    format_sig6(s.max).c_str(), format_sig6(s.mean()).c_str());
    };
    for (const auto& [e, stats] : r.per_exponent)
        print_row(std::to_string(e).c_str(), stats);
    print_row("global", r.global);
    std::printf("global argmin bits %s, argmax bits %s\n",
                format_bits_hex(r.global.argmin_bits).c_str(),
                format_bits_hex(r.global.argmax_bits).c_str());
    for (const Verdict& v : report.verdicts) print_verdict(v);

    if (!csv_path.empty()) write_file(csv_path, scan_csv(r));
    return finish(report, json_path);
}

// ------------------------------------------------------------------ blur

int cmd_blur(const std::string& scheme, const std::string& csv_path,
             const std::string& json_path) {
    namespace ref = reference;
    const rsqrt::detail::SolvedSet& s = rsqrt::detail::solved();
    ErrorCurve curve{};
    if (scheme == "classic") {
        curve = ErrorCurve{CurveKind::Classic, 2, s.classic.t};
    } else if (scheme == "scheme1") {
        curve = ErrorCurve{CurveKind::Scheme1, 2, s.scheme1.t, s.scheme1.d1, s.scheme1.d2};
    } else {
        curve = ErrorCurve{CurveKind::Scheme2, 2, s.scheme2.t, s.scheme2.d1, s.scheme2.d2};
    }
    const BlurStats b = blur(builtin_spec(kernel_scheme(scheme)),
                             [&](double x) { return model_value(curve, x); });

    Report report;
    report.metadata = metadata_json();
    report.metadata["command"] = "blur";
    report.metadata["scheme"] = scheme;
    report.payload = blur_json(b);
    if (scheme == "scheme1") {
        report.verdicts.push_back(
            Verdict::approx("scheme1 blur mean", ref::scheme1_blur_mean, b.mean, ref::blur_mean_tol));
        report.verdicts.push_back(
            Verdict::approx("scheme1 blur min", ref::scheme1_blur_min, b.min, ref::blur_range_tol));
        report.verdicts.push_back(
            Verdict::approx("scheme1 blur max", ref::scheme1_blur_max, b.max, ref::blur_range_tol));
    } else if (scheme == "scheme2") {
        report.verdicts.push_back(
            Verdict::approx("scheme2 blur mean", ref::scheme2_blur_mean, b.mean, ref::blur_mean_tol));
        report.verdicts.push_back(
            Verdict::approx("scheme2 blur min", ref::scheme2_blur_min, b.min, ref::blur_range_tol));
        report.verdicts.push_back(
            Verdict::approx("scheme2 blur max", ref::scheme2_blur_max, b.max, ref::blur_range_tol));
    }

    std::printf("%s model-vs-code deviation over [1,4): count %llu\n", scheme.c_str(),
                static_cast<unsigned long long>(b.count));
    std::printf("mean %s  sum %s\n", format_sig6(b.mean).c_str(), format_sig6(b.sum).c_str());
    std::printf("min %s at bits %s\n", format_sig6(b.min).c_str(),
                format_bits_hex(b.argmin_bits).c_str());
    std::printf("max %s at bits %s\n", format_sig6(b.max).c_str(),
                format_bits_hex(b.argmax_bits).c_str());
    for (const Verdict& v : report.verdicts) print_verdict(v);

    if (!csv_path.empty()) write_file(csv_path, blur_csv(b));
    return finish(report, json_path);
}

// ----------------------------------------------------------------- curve

int cmd_curve(const std::string& scheme, int iterations, int points,
              const std::string& csv_path, const std::string& json_path) {
    const rsqrt::detail::SolvedSet& s = rsqrt::detail::solved();
    std::function<double(double)> f;
    if (scheme == "seed") {
        f = ErrorCurve{CurveKind::Seed, 0, s.seed_opt.t};
    } else if (scheme == "classic") {
        f = ErrorCurve{CurveKind::Classic, iterations, s.classic.t};
    } else if (scheme == "modified") {
        f = ErrorCurve{CurveKind::Biased, iterations, s.classic.t, s.flat.d1, s.flat.d2};
    } else if (scheme == "scheme1") {
        f = ErrorCurve{CurveKind::Scheme1, iterations, s.scheme1.t, s.scheme1.d1, s.scheme1.d2};
    } else if (scheme == "scheme2") {
        f = ErrorCurve{CurveKind::Scheme2, iterations, s.scheme2.t, s.scheme2.d1, s.scheme2.d2};
    } else {  // diff: first-correction gap between the schemes, as a fraction
              // of the scheme1 one-step bound
        const ErrorCurve a{CurveKind::Scheme1, 1, s.scheme1.t, s.scheme1.d1, s.scheme1.d2};
        const ErrorCurve b{CurveKind::Scheme2, 1, s.scheme2.t, s.scheme2.d1, s.scheme2.d2};
        const double scale = s.scheme1.max_error[1];
        f = [a, b, scale](double x) { return (a(x) - b(x)) / scale; };
    }

    std::vector<std::pair<double, double>> pts;
    pts.reserve(static_cast<std::size_t>(points));
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = 1.0 + 3.0 * i / points;  // uniform over [1, 4)
        const double e = f(x);
        pts.emplace_back(x, e);
        lo = i ? std::min(lo, e) : e;
        hi = i ? std::max(hi, e) : e;
    }

    Report report;
    report.metadata = metadata_json();
    report.metadata["command"] = "curve";
    report.metadata["scheme"] = scheme;
    report.metadata["iterations"] = iterations;
    report.payload = {{"points", points}, {"min", lo}, {"max", hi}};

    std::printf("%s curve, %d iteration%s, %d points on [1,4): min %s  max %s\n", scheme.c_str(),
                iterations, iterations == 1 ? "" : "s", points, format_sig6(lo).c_str(),
                format_sig6(hi).c_str());

    if (!csv_path.empty()) write_file(csv_path, curve_csv(pts));
    return finish(report, json_path);
}

// ------------------------------------------------------------------ emit

std::string emit_c_like(const KernelSpec& spec, const CodeConstants& exact,
                        const std::string& scheme) {
    const auto lit = [](double e, float r) { return format_listing(e, r) + "f"; };
    std::string out;
    out += "float rsqrt_" + scheme + "(float x) {\n";
    out += "    float h = " + lit(exact.half, spec.half_factor) + " * x;\n";
    out += "    std::uint32_t i = std::bit_cast<std::uint32_t>(x);\n";
    out += "    i = " + format_bits_hex(spec.magic.bits()) + "u - (i >> 1);\n";
    out += "    float y = std::bit_cast<float>(i);\n";
    const double adds[2] = {exact.add1, exact.add2};
    const double muls[2] = {exact.mul1, exact.mul2};
    for (std::size_t k = 0; k < spec.iterations.size(); ++k) {
        const IterationCoeffs& c = spec.iterations[k];
        out += "    y = y * (" + lit(adds[k], c.add_term) + " - ";
        if (c.mul_term != 1.0f) out += lit(muls[k], c.mul_term) + " * ";
        out += "h * y * y);\n";
    }
    out += "    return y;\n";
    out += "}\n";
    return out;
}

std::string emit_table(const KernelSpec& spec, const CodeConstants& exact) {
    const auto bits = [](float v) { return std::bit_cast<std::uint32_t>(v); };
    char line[128];
    std::string out = "constant              value            bits\n";
    std::snprintf(line, sizeof line, "%-21s %-16s %s\n", "magic", "-",
                  format_bits_hex(spec.magic.bits()).c_str());
    out += line;
    std::snprintf(line, sizeof line, "%-21s %-16s %s\n", "half_factor",
                  format_listing(exact.half, spec.half_factor).c_str(),
                  format_bits_hex(bits(spec.half_factor)).c_str());
    out += line;
    const double adds[2] = {exact.add1, exact.add2};
    const double muls[2] = {exact.mul1, exact.mul2};
    for (std::size_t k = 0; k < spec.iterations.size(); ++k) {
        const IterationCoeffs& c = spec.iterations[k];
        const std::string base = "iter" + std::to_string(k + 1);
        std::snprintf(line, sizeof line, "%-21s %-16s %s\n", (base + " add_term").c_str(),
                      format_listing(adds[k], c.add_term).c_str(),
                      format_bits_hex(bits(c.add_term)).c_str());
        out += line;
        std::snprintf(line, sizeof line, "%-21s %-16s %s\n", (base + " mul_term").c_str(),
                      format_listing(muls[k], c.mul_term).c_str(),
                      format_bits_hex(bits(c.mul_term)).c_str());
        out += line;
    }
    return out;
}

int cmd_emit(const std::string& scheme, const std::string& format) {
    const rsqrt::detail::SolvedSet& s = rsqrt::detail::solved();
    const MinimaxSolution& sol = scheme == "classic"   ? s.classic
                                 : scheme == "scheme1" ? s.scheme1
                                                       : s.scheme2;
    const KernelSpec spec = emit_code_constants(sol);
    const CodeConstants exact = code_constant_values(sol);
    if (format == "table")
        std::fputs(emit_table(spec, exact).c_str(), stdout);
    else
        std::fputs(emit_c_like(spec, exact, scheme).c_str(), stdout);
    return 0;
}

// ------------------------------------------------------------ verify-all

int cmd_verify_all(bool full, const std::string& json_path) {
    const std::vector<CriterionResult> results = run_all_verifications({full});

    Report report;
    report.metadata = metadata_json();
    report.metadata["command"] = "verify-all";
    report.metadata["full_scan"] = full;
    nlohmann::json criteria = nlohmann::json::array();

    bool all_pass = true;
    for (const CriterionResult& r : results) {
        std::printf("[%s] %d. %s (%zu checks, %.2f s)\n", r.passed ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.details.size(), r.seconds);
        for (const Verdict& v : r.details)
            if (!v.pass) print_verdict(v);
        all_pass = all_pass && r.passed;

        nlohmann::json vs = nlohmann::json::array();
        for (const Verdict& v : r.details) vs.push_back(verdict_json(v));
        criteria.push_back({{"id", r.id},
                            {"name", r.name},
                            {"passed", r.passed},
                            {"seconds", r.seconds},
                            {"checks", vs}});
        for (const Verdict& v : r.details) report.verdicts.push_back(v);
    }
    std::printf("%s: %d/%zu criteria passed\n", all_pass ? "PASS" : "FAIL",
                static_cast<int>(std::count_if(results.begin(), results.end(),
                                               [](const CriterionResult& r) { return r.passed; })),
                results.size());

    report.payload = {{"criteria", criteria}};
    if (!json_path.empty()) write_json(json_path, report.to_json());
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"derive, verify and export the fast reciprocal square root constants"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_name) + " " + tool_version);

    std::string derive_sel = "all";
    std::string derive_json;
    CLI::App* derive = app.add_subcommand("derive", "re-derive constants and compare");
    derive->add_option("selection", derive_sel, "all|seed|classic|modified|joint|scheme1|scheme2")
        ->check(CLI::IsMember(
            {"all", "seed", "classic", "modified", "joint", "scheme1", "scheme2"}));
    derive->add_option("--json", derive_json, "write a JSON report");

    std::string scan_scheme;
    int scan_iter = 2;
    std::string scan_exponents;
    bool scan_full = false;
    std::uint64_t scan_samples = 0;
    std::uint64_t scan_seed = 0;
    std::string scan_csv_path, scan_json_path;
    CLI::App* scan_cmd = app.add_subcommand("scan", "measure kernel error envelopes");
    scan_cmd->add_option("scheme", scan_scheme, "classic|scheme1|scheme2")
        ->required()
        ->check(CLI::IsMember({"classic", "scheme1", "scheme2"}));
    scan_cmd->add_option("--iter", scan_iter, "iteration count (default 2)")
        ->check(CLI::Range(0, 2));
    const CLI::Validator exponent_range(
        [](std::string& s) -> std::string {
            int lo = 0, hi = 0;
            char tail = 0;
            if (std::sscanf(s.c_str(), "%d:%d%c", &lo, &hi, &tail) != 2)
                return "expected the form lo:hi";
            if (lo > hi) return "range is descending";
            if (lo < FloatFormat::min_exponent || hi > FloatFormat::max_exponent)
                return "exponents must lie in [-126, 127]";
            return {};
        },
        "LO:HI");
    CLI::Option* opt_exp =
        scan_cmd->add_option("--exponents", scan_exponents, "exponent range lo:hi")
            ->check(exponent_range);
    scan_cmd->add_flag("--full", scan_full, "scan every exponent in [-126,127]")
        ->excludes(opt_exp);
    scan_cmd->add_option("--sample", scan_samples, "random samples per exponent (0 = exhaustive)");
    scan_cmd->add_option("--seed", scan_seed, "sampling seed");
    scan_cmd->add_option("--csv", scan_csv_path, "write per-exponent CSV");
    scan_cmd->add_option("--json", scan_json_path, "write a JSON report");

    std::string blur_scheme;
    std::string blur_csv_path, blur_json_path;
    CLI::App* blur_cmd =
        app.add_subcommand("blur", "model-vs-code deviation statistics over [1,4)");
    blur_cmd->add_option("scheme", blur_scheme, "classic|scheme1|scheme2")
        ->required()
        ->check(CLI::IsMember({"classic", "scheme1", "scheme2"}));
    blur_cmd->add_option("--csv", blur_csv_path, "write the 128-bin envelope CSV");
    blur_cmd->add_option("--json", blur_json_path, "write a JSON report");

    std::string curve_scheme;
    int curve_iter = 1;
    int curve_points = 4096;
    std::string curve_csv_path, curve_json_path;
    CLI::App* curve_cmd = app.add_subcommand("curve", "sample an analytic error curve");
    curve_cmd->add_option("scheme", curve_scheme, "seed|classic|modified|scheme1|scheme2|diff")
        ->required()
        ->check(CLI::IsMember({"seed", "classic", "modified", "scheme1", "scheme2", "diff"}));
    curve_cmd->add_option("--iter", curve_iter, "iteration count (default 1)")
        ->check(CLI::Range(0, 2));
    curve_cmd->add_option("--points", curve_points, "number of samples (default 4096)")
        ->check(CLI::Range(2, 100000000));
    curve_cmd->add_option("--csv", curve_csv_path, "write x,error CSV");
    curve_cmd->add_option("--json", curve_json_path, "write a JSON report");

    std::string emit_scheme;
    std::string emit_format = "c-like";
    CLI::App* emit_cmd = app.add_subcommand("emit", "print ready-to-paste kernel constants");
    emit_cmd->add_option("scheme", emit_scheme, "classic|scheme1|scheme2")
        ->required()
        ->check(CLI::IsMember({"classic", "scheme1", "scheme2"}));
    emit_cmd->add_option("--format", emit_format, "c-like|table")
        ->check(CLI::IsMember({"c-like", "table"}));

    bool verify_full = false;
    std::string verify_json;
    CLI::App* verify_cmd = app.add_subcommand("verify-all", "run the whole verification battery");
    verify_cmd->add_flag("--full", verify_full, "exhaustive scans over every exponent");
    verify_cmd->add_option("--json", verify_json, "write a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (derive->parsed()) return cmd_derive(derive_sel, derive_json);
        if (scan_cmd->parsed())
            return cmd_scan(scan_scheme, scan_iter, scan_exponents, scan_full, scan_samples,
                            scan_seed, scan_csv_path, scan_json_path);
        if (blur_cmd->parsed()) return cmd_blur(blur_scheme, blur_csv_path, blur_json_path);
        if (curve_cmd->parsed())
            return cmd_curve(curve_scheme, curve_iter, curve_points, curve_csv_path,
                             curve_json_path);
        if (emit_cmd->parsed()) return cmd_emit(emit_scheme, emit_format);
        if (verify_cmd->parsed()) return cmd_verify_all(verify_full, verify_json);
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
