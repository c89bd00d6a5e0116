#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bits.hpp"
#include "error_model.hpp"
#include "kernels.hpp"

// Re-derivation of every magic constant and bias from first principles.
// Each optimum is the root of a balance equation (two competing extrema of
// an error curve made equal in magnitude) solved by deterministic bisection.
namespace rsqrt {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Bisection to full double precision. Brackets that do not straddle a sign
// change are widened geometrically up to the given limits first.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double lo_limit, double hi_limit) {
    double flo = f(lo), fhi = f(hi);
    for (int guard = 0; flo != 0.0 && fhi != 0.0 && (flo < 0.0) == (fhi < 0.0); ++guard) {
        if (guard >= 60 || (lo <= lo_limit && hi >= hi_limit))
            throw SolverError("bisect: no sign change inside the admissible bracket");
        const double w = 0.5 * (hi - lo);
        lo = std::max(lo_limit, lo - w);
        hi = std::min(hi_limit, hi + w);
        flo = f(lo);
        fhi = f(hi);
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double bisect_slope(const std::function<double(double)>& f) {
    return bisect(f, 3.70, 3.75, 2.0 + 1e-9, 4.0 - 1e-9);
}

// Branch-wise interior peaks of the seed error curve.
inline double seed_peak_low(double t) { return 0.5 * std::pow(1.0 + t / 6.0, 1.5) - 1.0; }
inline double seed_peak_mid(double t) {
    return 2.0 * std::pow((1.0 + t / 4.0) / 3.0, 1.5) - 1.0;
}

inline double newton_step_magnitude(double u) { return 0.5 * u * u * (3.0 + u); }

}  // namespace detail

struct MinimaxSolution {
    std::string scheme;
    double t = 0.0;
    std::uint32_t magic = 0;
    double d1 = 0.0;
    double d2 = 0.0;
    // max_error[k] is the largest |error| of the curve after k iterations.
    std::array<double, 3> max_error{};
    // Abscissae in [1, 4] where the bound is attained.
    std::vector<double> extremal_x;
};

// Both candidate seed optima: the slope that balances the lower-branch peak
// against the x == t minimum, and the one using the middle-branch peak. The
// middle-branch peak dominates, so its balance gives the real optimum.
struct SeedSolveDetail {
    double t_low_peak;
    double err_low_peak;
    double t_mid_peak;
    double err_mid_peak;
};

inline SeedSolveDetail solve_seed_detail() {
    const auto balance_low = [](double t) {
        return detail::seed_peak_low(t) + seed_error_min(t);
    };
    const auto balance_mid = [](double t) {
        return detail::seed_peak_mid(t) + seed_error_min(t);
    };
    SeedSolveDetail out{};
    out.t_low_peak = detail::bisect_slope(balance_low);
    out.err_low_peak = -seed_error_min(out.t_low_peak);
    out.t_mid_peak = detail::bisect_slope(balance_mid);
    out.err_mid_peak = -seed_error_min(out.t_mid_peak);
    return out;
}

// Slope minimizing the raw seed error max |delta_0|.
inline MinimaxSolution solve_seed_optimum() {
    const SeedSolveDetail d = solve_seed_detail();
    if (!(d.err_low_peak < d.err_mid_peak))
        throw SolverError("solve_seed_optimum: low-branch balance unexpectedly dominates");
    MinimaxSolution s;
    s.scheme = "seed";
    s.t = d.t_mid_peak;
    s.magic = t_to_magic(s.t);
    s.max_error[0] = d.err_mid_peak;
    s.extremal_x = {(4.0 + s.t) / 3.0, s.t};
    return s;
}

// Slope minimizing max |delta_1| after one (or, equivalently, any further)
// unbiased Newton step: the one-step images of the middle-branch peak and
// of the x == t minimum are balanced.
inline MinimaxSolution solve_classic_optimum() {
    const auto balance = [](double t) {
        return detail::newton_step_magnitude(detail::seed_peak_mid(t)) -
               detail::newton_step_magnitude(seed_error_min(t));
    };
    MinimaxSolution s;
    s.scheme = "classic";
    s.t = detail::bisect_slope(balance);
    s.magic = t_to_magic(s.t);
    if (!(detail::seed_peak_mid(s.t) > detail::seed_peak_low(s.t)))
        throw SolverError("solve_classic_optimum: middle-branch peak is not the seed maximum");
    s.max_error[0] = -seed_error_min(s.t);
    s.max_error[1] = detail::newton_step_magnitude(seed_error_min(s.t));
    s.max_error[2] = detail::newton_step_magnitude(-s.max_error[1]);
    s.extremal_x = {(4.0 + s.t) / 3.0, s.t};
    return s;
}

// Flat-lift biases: d1 recenters the one-step error band [-max, 0] to
// [-max/2, max/2]; d2 does the same for the second step.
struct ModifiedBiases {
    double d1;
    double d2;
    double max_error1;   // d1 / 2
    double max_error2;   // d2 / 2
    double improvement;  // unbiased two-step bound divided by max_error2
};

inline ModifiedBiases solve_modified_biases(const MinimaxSolution& classic) {
    ModifiedBiases b{};
    b.d1 = classic.max_error[1];
    b.max_error1 = 0.5 * b.d1;
    // The second-step drop from the band edge is largest at +d1/2.
    b.max_error2 = 0.25 * b.max_error1 * b.max_error1 * (3.0 + b.max_error1);
    b.d2 = 2.0 * b.max_error2;
    b.improvement = classic.max_error[2] / b.max_error2;
    return b;
}

// Biases minimizing the two-step bound alone: the first-step band is allowed
// to sit asymmetrically, chosen so its two edges map to equal second-step
// drops. That balance is the positive root of
//   d1^2 - 2 d1 (m - 2) - (4/3) m (3 - m) = 0,   m = unbiased one-step max.
struct JointBiases {
    double d1;
    double d2;
    double max_error1;        // d1 / 2, the upper edge of the first-step band
    double min_error1;        // -(m - d1 / 2), its lower edge
    double max_error2;        // d2 / 2
    double quadratic_residual;
    double gap_vs_flat;       // flat-lift two-step bound minus max_error2
};

inline JointBiases solve_joint_minimizer(const MinimaxSolution& classic,
                                         const ModifiedBiases& flat) {
    const double m = classic.max_error[1];
    JointBiases j{};
    j.d1 = m - 2.0 + 2.0 * std::sqrt(1.0 - m * m / 12.0);
    j.quadratic_residual = j.d1 * j.d1 - 2.0 * j.d1 * (m - 2.0) - (4.0 / 3.0) * m * (3.0 - m);
    j.max_error1 = 0.5 * j.d1;
    j.min_error1 = -(m - 0.5 * j.d1);
    j.max_error2 = (1.0 / 16.0) * j.d1 * j.d1 * (3.0 + 0.5 * j.d1);
    j.d2 = 2.0 * j.max_error2;
    j.gap_vs_flat = flat.max_error2 - j.max_error2;
    return j;
}

// Magic constants whose flat-lift two-step error bound matches the optimum
// to within its own oscillation: the slopes where the deepest second-step
// excursion (from the x == t minimum on the low side, from the middle-branch
// peak on the high side) again touches -d2/2, quantized to integers.
struct EqualErrorInterval {
    double t_lo;
    double t_hi;
    std::uint32_t magic_lo;
    std::uint32_t magic_hi;
    std::uint32_t count;
};

inline EqualErrorInterval equal_error_interval(const MinimaxSolution& classic,
                                               const ModifiedBiases& flat) {
    const double d1 = flat.d1, d2 = flat.d2;
    const auto edge_drop = [&](double seed_err) {
        const double u1 = newton_step_error(seed_err) + 0.5 * d1;
        return detail::newton_step_magnitude(u1) - d2;
    };
    const auto low_side = [&](double t) { return edge_drop(seed_error_min(t)); };
    const auto high_side = [&](double t) { return edge_drop(detail::seed_peak_mid(t)); };
    EqualErrorInterval out{};
    out.t_lo = detail::bisect(low_side, 3.70, classic.t, 2.0 + 1e-9, classic.t);
    out.t_hi = detail::bisect(high_side, classic.t, 3.75, classic.t, 4.0 - 1e-9);
    out.magic_lo = t_to_magic(out.t_lo);
    out.magic_hi = t_to_magic(out.t_hi);
    out.count = out.magic_hi - out.magic_lo + 1;
    return out;
}

// First scheme: both biases folded into rescaled kernel constants at the
// classic slope. d1 is the unbiased one-step max itself; d2 balances the
// rescaled second step around zero.
inline MinimaxSolution solve_scheme1(const MinimaxSolution& classic) {
    const double m = classic.max_error[1];
    MinimaxSolution s;
    s.scheme = "scheme1";
    s.t = classic.t;
    s.magic = classic.magic;
    s.d1 = m;
    s.d2 = m * m * (3.0 - m) / std::pow(2.0 - m, 3.0);
    s.max_error[0] = classic.max_error[0];
    s.max_error[1] = m / (2.0 - m);
    s.max_error[2] = s.d2 / (2.0 - s.d2);
    s.extremal_x = classic.extremal_x;
    return s;
}

// Second scheme: biases kept as additive lifts of the 3/2 constants, exact
// cross term retained. The closed form for d1(t) balances the stationary
// maximum against the x == t minimum; the slope is then chosen to pull the
// middle-branch-peak minimum up to the same depth.
inline MinimaxSolution solve_scheme2() {
    const auto minima_balance = [](double t) {
        const double d1 = scheme2_bias_closed_form(t).d1;
        return lifted_step_error(seed_error_min(t), d1) -
               lifted_step_error(detail::seed_peak_mid(t), d1);
    };
    MinimaxSolution s;
    s.scheme = "scheme2";
    s.t = detail::bisect_slope(minima_balance);
    s.magic = t_to_magic(s.t);

    const Scheme2BiasForm form = scheme2_bias_closed_form(s.t);
    if (std::abs(form.stationary - bias_stationary_error(form.d1)) > 1e-12)
        throw SolverError("solve_scheme2: closed form is inconsistent with the stationary point");
    s.d1 = form.d1;
    s.max_error[0] = std::max(detail::seed_peak_mid(s.t), -seed_error_min(s.t));
    s.max_error[1] = lifted_step_error(form.stationary, s.d1);

    const double band = s.max_error[1];
    const auto second_balance = [&](double d2) {
        return lifted_step_error(bias_stationary_error(d2), d2) +
               lifted_step_error(-band, d2);
    };
    s.d2 = detail::bisect(second_balance, 0.0, 1e-5, 0.0, 1e-3);
    s.max_error[2] = lifted_step_error(bias_stationary_error(s.d2), s.d2);
    s.extremal_x = {(4.0 + s.t) / 3.0, s.t};
    return s;
}

// Exact kernel coefficients implied by a solution, before binary32 rounding.
struct CodeConstants {
    double half;
    double add1;
    double mul1;
    double add2;
    double mul2;
};

inline CodeConstants code_constant_values(const MinimaxSolution& s) {
    if (s.scheme == "classic") return {0.5, 1.5, 1.0, 1.5, 1.0};
    if (s.scheme == "scheme1") {
        const double a = 2.0 - s.d1, b = 2.0 - s.d2;
        return {1.0 / a, 3.0 / a, 1.0, 3.0 / b, a / b};
    }
    if (s.scheme == "scheme2") return {0.5, 0.5 * (3.0 + s.d1), 1.0, 0.5 * (3.0 + s.d2), 1.0};
    throw SolverError("code_constant_values: scheme '" + s.scheme + "' has no kernel form");
}

// Binary32 kernel constants implied by a solution, rounded to nearest-even.
inline KernelSpec emit_code_constants(const MinimaxSolution& s) {
    const CodeConstants c = code_constant_values(s);
    return KernelSpec{MagicConstant(s.magic),
                      static_cast<float>(c.half),
                      {{static_cast<float>(c.add1), static_cast<float>(c.mul1)},
                       {static_cast<float>(c.add2), static_cast<float>(c.mul2)}}};
}

}  // namespace rsqrt
