#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "error_model.hpp"
#include "reference.hpp"
#include "report.hpp"
#include "scanner.hpp"
#include "solver.hpp"

// The verification battery: re-derives every constant, emits the listing
// coefficients, and measures the kernels exhaustively, checking each result
// against the published value at its stated tolerance.
namespace rsqrt {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::vector<Verdict> details;
};

struct VerificationOptions {
    bool full_scan = false;  // two-iteration scans over every exponent instead of the default set
};

namespace detail {

struct SolvedSet {
    MinimaxSolution seed_opt;
    MinimaxSolution classic;
    ModifiedBiases flat;
    JointBiases joint;
    EqualErrorInterval interval;
    MinimaxSolution scheme1;
    MinimaxSolution scheme2;
};

inline const SolvedSet& solved() {
    static const SolvedSet s = [] {
        SolvedSet out{};
        out.seed_opt = solve_seed_optimum();
        out.classic = solve_classic_optimum();
        out.flat = solve_modified_biases(out.classic);
        out.joint = solve_joint_minimizer(out.classic, out.flat);
        out.interval = equal_error_interval(out.classic, out.flat);
        out.scheme1 = solve_scheme1(out.classic);
        out.scheme2 = solve_scheme2();
        return out;
    }();
    return s;
}

template <typename Fn>
CriterionResult timed_criterion(int id, std::string name, const Fn& fill) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    const auto start = std::chrono::steady_clock::now();
    fill(r.details);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = true;
    for (const Verdict& v : r.details) r.passed = r.passed && v.pass;
    return r;
}

}  // namespace detail

inline CriterionResult verify_constants() {
    namespace ref = reference;
    return detail::timed_criterion(1, "constant reproduction", [](std::vector<Verdict>& out) {
        const detail::SolvedSet& s = detail::solved();
        out.push_back(Verdict::approx("seed slope t", ref::seed_t, s.seed_opt.t, ref::seed_t_tol));
        out.push_back(Verdict::exact_bits("seed magic", ref::seed_magic, s.seed_opt.magic));
        out.push_back(Verdict::approx("seed max error", ref::seed_max0, s.seed_opt.max_error[0],
                                      ref::seed_max0_tol));
        out.push_back(
            Verdict::approx("classic slope t", ref::classic_t, s.classic.t, ref::classic_t_tol));
        out.push_back(Verdict::exact_bits("classic magic", ref::classic_magic, s.classic.magic));
        out.push_back(Verdict::approx("classic one-step bound", ref::classic_max1,
                                      s.classic.max_error[1], ref::classic_max1_tol));
        out.push_back(Verdict::approx("classic two-step bound", ref::classic_max2,
                                      s.classic.max_error[2], ref::classic_max2_tol));
        out.push_back(Verdict::approx("flat-bias one-step bound", ref::flat_max1,
                                      s.flat.max_error1, ref::flat_max1_tol));
        out.push_back(Verdict::approx("flat-bias two-step bound", ref::flat_max2,
                                      s.flat.max_error2, ref::flat_max2_tol));
        out.push_back(Verdict::approx("joint one-step half-bias", ref::joint_half_d1,
                                      s.joint.max_error1, ref::joint_half_d1_tol));
        out.push_back(Verdict::approx("joint two-step half-bias", ref::joint_half_d2,
                                      s.joint.max_error2, ref::joint_half_d2_tol));
        out.push_back(Verdict::approx("scheme1 one-step bound", ref::scheme1_max1,
                                      s.scheme1.max_error[1], ref::scheme1_max1_tol));
        out.push_back(Verdict::approx("scheme1 second bias", ref::scheme1_d2, s.scheme1.d2,
                                      ref::scheme1_d2_tol));
        out.push_back(Verdict::approx("scheme1 two-step bound", ref::scheme1_max2,
                                      s.scheme1.max_error[2], ref::scheme1_max2_tol));
        out.push_back(
            Verdict::approx("scheme2 slope t", ref::scheme2_t, s.scheme2.t, ref::scheme2_t_tol));
        out.push_back(Verdict::exact_bits("scheme2 magic", ref::scheme2_magic, s.scheme2.magic));
        out.push_back(Verdict::approx("scheme2 first bias", ref::scheme2_d1, s.scheme2.d1,
                                      ref::scheme2_d1_tol));
        out.push_back(Verdict::approx("scheme2 one-step bound", ref::scheme2_max1,
                                      s.scheme2.max_error[1], ref::scheme2_max1_tol));
        out.push_back(Verdict::approx("scheme2 second bias", ref::scheme2_d2, s.scheme2.d2,
                                      ref::scheme2_d2_tol));
        out.push_back(Verdict::approx("scheme2 two-step bound", ref::scheme2_max2,
                                      s.scheme2.max_error[2], ref::scheme2_max2_tol));
    });
}

inline CriterionResult verify_code_constants() {
    namespace ref = reference;
    return detail::timed_criterion(2, "code constant emission", [](std::vector<Verdict>& out) {
        const detail::SolvedSet& s = detail::solved();
        const auto bits = [](float v) { return std::bit_cast<std::uint32_t>(v); };
        const KernelSpec classic = emit_code_constants(s.classic);
        out.push_back(Verdict::exact_bits("classic half factor", bits(0.5f),
                                          bits(classic.half_factor)));
        out.push_back(Verdict::exact_bits("classic add term", bits(1.5f),
                                          bits(classic.iterations[0].add_term)));
        const KernelSpec s1 = emit_code_constants(s.scheme1);
        out.push_back(Verdict::exact_bits("scheme1 half factor", bits(ref::listing_scheme1_half),
                                          bits(s1.half_factor)));
        out.push_back(Verdict::exact_bits("scheme1 first add term",
                                          bits(ref::listing_scheme1_add1),
                                          bits(s1.iterations[0].add_term)));
        out.push_back(Verdict::exact_bits("scheme1 second add term",
                                          bits(ref::listing_scheme1_add2),
                                          bits(s1.iterations[1].add_term)));
        out.push_back(Verdict::exact_bits("scheme1 second mul term",
                                          bits(ref::listing_scheme1_mul2),
                                          bits(s1.iterations[1].mul_term)));
        const KernelSpec s2 = emit_code_constants(s.scheme2);
        out.push_back(Verdict::exact_bits("scheme2 half factor", bits(0.5f),
                                          bits(s2.half_factor)));
        out.push_back(Verdict::exact_bits("scheme2 first add term",
                                          bits(ref::listing_scheme2_add1),
                                          bits(s2.iterations[0].add_term)));
        out.push_back(Verdict::exact_bits("scheme2 second add term",
                                          bits(ref::listing_scheme2_add2),
                                          bits(s2.iterations[1].add_term)));
    });
}

inline CriterionResult verify_interval() {
    namespace ref = reference;
    return detail::timed_criterion(3, "equal-error interval", [](std::vector<Verdict>& out) {
        const EqualErrorInterval& iv = detail::solved().interval;
        out.push_back(
            Verdict::approx("interval lower slope", ref::interval_t_lo, iv.t_lo, ref::interval_t_tol));
        out.push_back(
            Verdict::approx("interval upper slope", ref::interval_t_hi, iv.t_hi, ref::interval_t_tol));
        out.push_back(Verdict::exact_bits("interval first magic", ref::interval_magic_lo, iv.magic_lo));
        out.push_back(Verdict::exact_bits("interval last magic", ref::interval_magic_hi, iv.magic_hi));
        out.push_back(Verdict::exact_bits("interval size", ref::interval_count, iv.count));
    });
}

inline CriterionResult verify_seed_conformance() {
    return detail::timed_criterion(4, "seed model conformance", [](std::vector<Verdict>& out) {
        const detail::SolvedSet& s = detail::solved();
        for (const auto& [label, magic_bits] :
             {std::pair<const char*, std::uint32_t>{"classic", s.classic.magic},
              std::pair<const char*, std::uint32_t>{"scheme2", s.scheme2.magic}}) {
            const MagicConstant magic(magic_bits);
            const double t = magic.slope();
            const std::uint32_t first = std::bit_cast<std::uint32_t>(1.0f);
            const std::uint32_t last = std::bit_cast<std::uint32_t>(4.0f);
            double abs_max = 0.0;
            double rel_max = 0.0;
            for (std::uint32_t ib = first; ib < last; ++ib) {
                const float x = std::bit_cast<float>(ib);
                const double model = seed_model(static_cast<double>(x), t);
                const double diff = std::abs(model - static_cast<double>(seed(magic, x)));
                abs_max = std::max(abs_max, diff);
                rel_max = std::max(rel_max, diff / model);
            }
            out.push_back(Verdict::bound(std::string(label) + " max |model - seed|",
                                         std::ldexp(1.0, -25), abs_max, true));
            out.push_back(Verdict::bound(std::string(label) + " max relative deviation",
                                         std::ldexp(1.0, -24), rel_max, true));
        }
    });
}

inline CriterionResult verify_envelopes(const VerificationOptions& opt = {}) {
    namespace ref = reference;
    return detail::timed_criterion(5, "empirical envelopes", [&](std::vector<Verdict>& out) {
        const ScanConfig cfg2 =
            opt.full_scan ? ScanConfig::range(-126, 127, 2) : ScanConfig::default_set(2);
        const KernelSpec classic = builtin_spec(SchemeId::Classic);
        const KernelSpec s1 = builtin_spec(SchemeId::Scheme1);
        const KernelSpec s2 = builtin_spec(SchemeId::Scheme2);

        const auto bottom_row = [](const ScanResult& r) -> const ErrorStats& {
            for (const auto& [e, stats] : r.per_exponent)
                if (e == -126) return stats;
            return r.global;
        };
        const auto abs_envelope = [](const ScanResult& r) {
            double worst = std::max(-r.global.min, r.global.max);
            for (const auto& [e, stats] : r.per_exponent)
                worst = std::max({worst, -stats.min, stats.max});
            return worst;
        };

        const ScanResult r1 = scan(s1, cfg2);
        out.push_back(Verdict::approx("scheme1 global min", ref::scheme1_scan_min, r1.global.min,
                                      ref::scan_envelope_tol));
        out.push_back(Verdict::approx("scheme1 global max", ref::scheme1_scan_max, r1.global.max,
                                      ref::scan_envelope_tol));
        out.push_back(Verdict::approx("scheme1 bottom-exponent min", ref::scheme1_scan_min_low_exp,
                                      bottom_row(r1).min, ref::scan_envelope_tol));
        out.push_back(Verdict::approx("scheme1 bottom-exponent max", ref::scheme1_scan_max_low_exp,
                                      bottom_row(r1).max, ref::scan_envelope_tol));

        const ScanResult r2 = scan(s2, cfg2);
        out.push_back(Verdict::approx("scheme2 global min", ref::scheme2_scan_min, r2.global.min,
                                      ref::scan_envelope_tol));
        out.push_back(Verdict::approx("scheme2 global max", ref::scheme2_scan_max, r2.global.max,
                                      ref::scan_envelope_tol));
        out.push_back(Verdict::approx("scheme2 bottom-exponent min", ref::scheme2_scan_min_low_exp,
                                      bottom_row(r2).min, ref::scan_envelope_tol));
        out.push_back(Verdict::approx("scheme2 bottom-exponent max", ref::scheme2_scan_max_low_exp,
                                      bottom_row(r2).max, ref::scan_envelope_tol));

        const ScanConfig cfg1 = ScanConfig::default_set(1);
        const ScanResult r11 = scan(s1, cfg1);
        out.push_back(Verdict::approx("scheme1 one-iteration |min|", ref::scheme1_scan_abs1,
                                      -r11.global.min, ref::scan_envelope1_tol));
        out.push_back(Verdict::approx("scheme1 one-iteration max", ref::scheme1_scan_abs1,
                                      r11.global.max, ref::scan_envelope1_tol));
        const ScanResult r21 = scan(s2, cfg1);
        out.push_back(Verdict::approx("scheme2 one-iteration |min|", ref::scheme2_scan_abs1,
                                      -r21.global.min, ref::scan_envelope1_tol));
        out.push_back(Verdict::approx("scheme2 one-iteration max", ref::scheme2_scan_abs1,
                                      r21.global.max, ref::scan_envelope1_tol));

        const ScanResult rc = scan(classic, cfg2);
        out.push_back(Verdict::bound("scheme2 max |error| hard bound", ref::scheme2_hard_bound,
                                     abs_envelope(r2), true));
        out.push_back(Verdict::bound("classic max |error| hard floor", ref::classic_hard_floor,
                                     abs_envelope(rc), false));
    });
}

inline CriterionResult verify_blur() {
    namespace ref = reference;
    return detail::timed_criterion(6, "blur statistics", [](std::vector<Verdict>& out) {
        const detail::SolvedSet& s = detail::solved();
        const ErrorCurve c1{CurveKind::Scheme1, 2, s.scheme1.t, s.scheme1.d1, s.scheme1.d2};
        const BlurStats b1 = blur(builtin_spec(SchemeId::Scheme1),
                                  [&](double x) { return model_value(c1, x); });
        out.push_back(
            Verdict::approx("scheme1 blur mean", ref::scheme1_blur_mean, b1.mean, ref::blur_mean_tol));
        out.push_back(
            Verdict::approx("scheme1 blur min", ref::scheme1_blur_min, b1.min, ref::blur_range_tol));
        out.push_back(
            Verdict::approx("scheme1 blur max", ref::scheme1_blur_max, b1.max, ref::blur_range_tol));

        const ErrorCurve c2{CurveKind::Scheme2, 2, s.scheme2.t, s.scheme2.d1, s.scheme2.d2};
        const BlurStats b2 = blur(builtin_spec(SchemeId::Scheme2),
                                  [&](double x) { return model_value(c2, x); });
        out.push_back(
            Verdict::approx("scheme2 blur mean", ref::scheme2_blur_mean, b2.mean, ref::blur_mean_tol));
        out.push_back(
            Verdict::approx("scheme2 blur min", ref::scheme2_blur_min, b2.min, ref::blur_range_tol));
        out.push_back(
            Verdict::approx("scheme2 blur max", ref::scheme2_blur_max, b2.max, ref::blur_range_tol));
    });
}

inline CriterionResult verify_properties() {
    return detail::timed_criterion(7, "property suites", [](std::vector<Verdict>& out) {
        const detail::SolvedSet& s = detail::solved();

        // Bit-exact scaling invariance of every kernel on random (x, n) pairs.
        std::mt19937 rng(20240915u);
        std::uniform_int_distribution<std::uint32_t> mant(0, FloatFormat::mantissa_scale - 1);
        std::uniform_int_distribution<int> expo(-40, 40);
        std::uniform_int_distribution<int> shift(-20, 20);
        std::uint64_t violations = 0;
        const KernelSpec specs[3] = {builtin_spec(SchemeId::Classic),
                                     builtin_spec(SchemeId::Scheme1),
                                     builtin_spec(SchemeId::Scheme2)};
        for (std::uint64_t i = 0; i < 1000000; ++i) {
            const std::uint32_t ib =
                (static_cast<std::uint32_t>(expo(rng) + FloatFormat::exponent_bias) << 23) |
                mant(rng);
            const float x = std::bit_cast<float>(ib);
            const int n = shift(rng);
            const KernelSpec& spec = specs[i % 3];
            const float a = run_kernel(spec, std::ldexp(x, -2 * n), 2);
            const float b = std::ldexp(run_kernel(spec, x, 2), n);
            violations += std::bit_cast<std::uint32_t>(a) != std::bit_cast<std::uint32_t>(b);
        }
        out.push_back(Verdict::bound("kernel scaling invariance violations", 0.0,
                                     static_cast<double>(violations), true));

        // Equioscillation |max + min| for every solved two-sided curve.
        const auto equi = [&out](const char* name, const ErrorCurve& curve) {
            const CurveExtrema e = curve_extrema(curve, 1.0, 4.0);
            out.push_back(Verdict::bound(name, 1e-9, std::abs(e.max_value + e.min_value), true));
        };
        equi("seed curve equioscillation", ErrorCurve{CurveKind::Seed, 0, s.seed_opt.t});
        equi("flat-bias one-step equioscillation",
             ErrorCurve{CurveKind::Biased, 1, s.classic.t, s.flat.d1, s.flat.d2});
        equi("flat-bias two-step equioscillation",
             ErrorCurve{CurveKind::Biased, 2, s.classic.t, s.flat.d1, s.flat.d2});
        equi("scheme1 one-step equioscillation",
             ErrorCurve{CurveKind::Scheme1, 1, s.scheme1.t, s.scheme1.d1, s.scheme1.d2});
        equi("scheme1 two-step equioscillation",
             ErrorCurve{CurveKind::Scheme1, 2, s.scheme1.t, s.scheme1.d1, s.scheme1.d2});
        equi("scheme2 one-step equioscillation",
             ErrorCurve{CurveKind::Scheme2, 1, s.scheme2.t, s.scheme2.d1, s.scheme2.d2});
        equi("scheme2 two-step equioscillation",
             ErrorCurve{CurveKind::Scheme2, 2, s.scheme2.t, s.scheme2.d1, s.scheme2.d2});
        // The unbiased curve is one-sided; its minimax condition is that the
        // two competing minima agree.
        const ErrorCurve classic1{CurveKind::Classic, 1, s.classic.t};
        out.push_back(Verdict::bound(
            "classic one-step balanced minima", 1e-9,
            std::abs(classic1(s.classic.t) - classic1((4.0 + s.classic.t) / 3.0)), true));

        // Nonpositivity of the unbiased one- and two-step errors on a grid.
        std::uint64_t positives = 0;
        constexpr int grid = 100000;
        for (int i = 0; i < grid; ++i) {
            const double x = 1.0 + 3.0 * i / (grid - 1);
            positives += classic_error(x, s.classic.t, 1) > 0.0;
            positives += classic_error(x, s.classic.t, 2) > 0.0;
        }
        out.push_back(Verdict::bound("unbiased error positivity violations", 0.0,
                                     static_cast<double>(positives), true));

        // Error recursion against the direct value-space walk.
        std::uniform_real_distribution<double> xs(1.0, 4.0);
        std::uniform_real_distribution<double> ts(3.6, 3.8);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double x = xs(rng);
            const double t = ts(rng);
            const double y0 = seed_model(x, t);
            const double y1 = y0 * (1.5 - 0.5 * x * y0 * y0);
            const double y2 = y1 * (1.5 - 0.5 * x * y1 * y1);
            const double direct = std::sqrt(x) * y2 - 1.0;
            worst = std::max(std::abs(direct - classic_error(x, t, 2)), worst);
        }
        out.push_back(Verdict::bound("two-step recursion vs direct walk", 1e-14, worst, true));

        // Residual of the quadratic defining the joint first bias.
        out.push_back(Verdict::bound("joint bias quadratic residual", 1e-14,
                                     std::abs(s.joint.quadratic_residual), true));
    });
}

inline std::vector<CriterionResult> run_all_verifications(const VerificationOptions& opt = {}) {
    std::vector<CriterionResult> out;
    out.push_back(verify_constants());
    out.push_back(verify_code_constants());
    out.push_back(verify_interval());
    out.push_back(verify_seed_conformance());
    out.push_back(verify_envelopes(opt));
    out.push_back(verify_blur());
    out.push_back(verify_properties());
    return out;
}

}  // namespace rsqrt
