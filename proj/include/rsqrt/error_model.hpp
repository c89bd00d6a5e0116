#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

// Analytic model of the kernel's relative error delta = sqrt(x) * y - 1 on
// the reduced argument interval [1, 4], evaluated in double (or longer)
// precision. The seed is modelled by a piecewise-linear function of x with
// breakpoints at 2 and at the slope parameter t; each Newton-like iteration
// maps the error through a fixed rational recursion.
namespace rsqrt {

namespace detail {
inline void check_reduced_argument(double x) {
    if (!(x >= 1.0) || !(x <= 4.0))
        throw std::domain_error("error model: reduced argument must lie in [1, 4]");
}
inline void check_slope(double t) {
    if (!(t > 2.0) || !(t < 4.0))
        throw std::domain_error("error model: slope parameter must lie in (2, 4)");
}
}  // namespace detail

// Piecewise-linear seed model. The three branches cover [1, 2), [2, t) and
// [t, 4]; both middle and upper branch evaluate to 1/2 at x == t.
inline double seed_model(double x, double t) {
    detail::check_reduced_argument(x);
    detail::check_slope(t);
    if (x < 2.0) return -x / 4.0 + 0.75 + t / 8.0;
    if (x < t) return -x / 8.0 + 0.5 + t / 8.0;
    return -x / 16.0 + 0.5 + t / 16.0;
}

inline double seed_model_error(double x, double t) {
    return std::sqrt(x) * seed_model(x, t) - 1.0;
}

// One Newton step maps a relative error u to -u^2 (3 + u) / 2.
inline double newton_step_error(double u) { return -0.5 * u * u * (3.0 + u); }

// Newton step with the error curve lifted by a flat d/2. This is the model
// in which the biases d1, d2 and the equal-error magic interval are defined;
// the exact lifted map, which keeps the d(1+u)/2 cross term, is what
// scheme2_error below implements.
inline double biased_step_error(double u, double d) {
    return newton_step_error(u) + 0.5 * d;
}

// Exact error map of one lifted Newton step, cross term included.
inline double lifted_step_error(double u, double d) {
    return newton_step_error(u) + 0.5 * d * (1.0 + u);
}

// Input error u at which the exact lifted step's output is stationary:
// the positive root of -3u - 3u^2/2 + d/2 = 0, i.e. sqrt(1 + d/3) - 1.
inline double bias_stationary_error(double d) {
    if (!(d > -3.0))
        throw std::domain_error("bias_stationary_error: bias must exceed -3");
    return std::sqrt(1.0 + d / 3.0) - 1.0;
}

struct Extremum {
    double x;
    double value;
    bool is_maximum;
};

// Closed-form interior maxima and boundary/breakpoint minima of the seed
// error curve. The interior maxima sit one per branch at (6+t)/6, (4+t)/3
// and (8+t)/3; the minima sit at the interval ends and at the breakpoints.
inline std::vector<Extremum> seed_error_extrema(double t) {
    detail::check_slope(t);
    const double x1 = (6.0 + t) / 6.0;
    const double x2 = (4.0 + t) / 3.0;
    const double x3 = (8.0 + t) / 3.0;
    const double m1 = 0.5 * std::pow(1.0 + t / 6.0, 1.5) - 1.0;
    const double m2 = 2.0 * std::pow((1.0 + t / 4.0) / 3.0, 1.5) - 1.0;
    const double m3 = std::pow((2.0 / 3.0) * (1.0 + t / 8.0), 1.5) - 1.0;
    return {
        {1.0, (t - 4.0) / 8.0, false},
        {x1, m1, true},
        {2.0, (std::sqrt(2.0) / 4.0) * (1.0 + t / 2.0) - 1.0, false},
        {x2, m2, true},
        {t, std::sqrt(t) / 2.0 - 1.0, false},
        {x3, m3, true},
        {4.0, (t - 4.0) / 8.0, false},
    };
}

// Largest seed error; attained at (6+t)/6 or (4+t)/3 (never at (8+t)/3,
// whose value stays below the other two on (2, 4)).
inline double seed_error_max(double t) {
    const double m1 = 0.5 * std::pow(1.0 + t / 6.0, 1.5) - 1.0;
    const double m2 = 2.0 * std::pow((1.0 + t / 4.0) / 3.0, 1.5) - 1.0;
    return std::max(m1, m2);
}

// Most negative seed error; attained at the x == t breakpoint.
inline double seed_error_min(double t) { return std::sqrt(t) / 2.0 - 1.0; }

// Classic kernel model error after k unbiased Newton steps.
inline double classic_error(double x, double t, int k) {
    double u = seed_model_error(x, t);
    for (int i = 0; i < k; ++i) u = newton_step_error(u);
    return u;
}

// Model error after two biased Newton steps (first bias d1, second d2).
inline double biased_error(double x, double t, double d1, double d2, int k) {
    double u = seed_model_error(x, t);
    if (k >= 1) u = biased_step_error(u, d1);
    if (k >= 2) u = biased_step_error(u, d2);
    return u;
}

// First-iteration error of the scheme that folds the bias into a rescaled
// half-factor: u1 = (d1 + 2 u) / (2 - d1) where u is the unbiased
// one-step error.
inline double folded_correction(double u, double d) {
    if (!(d < 2.0))
        throw std::domain_error("folded_correction: bias must be below 2");
    return (d + 2.0 * u) / (2.0 - d);
}

inline double scheme1_error(double x, double t, double d1, double d2, int k) {
    const double u1 = folded_correction(newton_step_error(seed_model_error(x, t)), d1);
    if (k <= 1) return u1;
    if (!(d2 < 2.0))
        throw std::domain_error("scheme1_error: bias must be below 2");
    return d2 / (2.0 - d2) - u1 * u1 * (3.0 + u1) / (2.0 - d2);
}

inline double scheme2_error(double x, double t, double d1, double d2, int k) {
    const double u0 = seed_model_error(x, t);
    const double u1 = lifted_step_error(u0, d1);
    if (k <= 1) return u1;
    return lifted_step_error(u1, d2);
}

// Bias d1 for which the rounded-constant-free second scheme balances its
// stationary maximum against the value at x == t, as a closed form in t.
// Evaluated in long double: the constant term cancels against the rest to
// three decades and double alone would lose a digit near the tolerance.
struct Scheme2BiasForm {
    double stationary;  // error value at the stationary point, sqrt(1 + d1/3) - 1
    double d1;
};

inline Scheme2BiasForm scheme2_bias_closed_form(double t) {
    detail::check_slope(t);
    const long double lt = t;
    const long double st = sqrtl(lt);          // t^(1/2)
    const long double t32 = lt * st;           // t^(3/2)
    const long double f =
        cbrtl(8.0L + t32 / 8.0L + 4.0L * sqrtl(4.0L + t32 / 8.0L));
    const long double stat = -1.0L - st / 4.0L + lt / (8.0L * f) + f / 2.0L;
    const long double d1 = -3.0L + (9.0L / 16.0L) * lt + (3.0L / 64.0L) * lt * lt / (f * f) -
                           (3.0L / 16.0L) * t32 / f - (3.0L / 4.0L) * st * f +
                           (3.0L / 4.0L) * f * f;
    return {static_cast<double>(stat), static_cast<double>(d1)};
}

enum class CurveKind { Seed, Classic, Biased, Scheme1, Scheme2 };

// A concrete error curve x -> delta(x) on [1, 4] for one scheme and
// iteration count, with all parameters resolved to numbers.
struct ErrorCurve {
    CurveKind kind;
    int iterations;  // ignored for Seed
    double t;
    double d1 = 0.0;
    double d2 = 0.0;

    double operator()(double x) const {
        switch (kind) {
            case CurveKind::Seed: return seed_model_error(x, t);
            case CurveKind::Classic: return classic_error(x, t, iterations);
            case CurveKind::Biased: return biased_error(x, t, d1, d2, iterations);
            case CurveKind::Scheme1: return scheme1_error(x, t, d1, d2, iterations);
            case CurveKind::Scheme2: return scheme2_error(x, t, d1, d2, iterations);
        }
        throw std::invalid_argument("ErrorCurve: unknown curve kind");
    }
};

// Model of the kernel output itself: y = (1 + delta(x)) / sqrt(x).
inline double model_value(const ErrorCurve& curve, double x) {
    return (1.0 + curve(x)) / std::sqrt(x);
}

struct CurveExtrema {
    double min_x;
    double min_value;
    double max_x;
    double max_value;
};

namespace detail {
// Golden-section polish of an extremum bracketed by [lo, hi]. sign = +1
// refines a minimum, -1 a maximum. Handles kinks (the curves are piecewise
// smooth with V-shaped minima at breakpoints) since it only needs
// unimodality on the bracket.
inline void golden_refine(const std::function<double(double)>& f, double sign, double& arg,
                          double& value, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = sign * f(c), fd = sign * f(d);
    for (int i = 0; i < 160 && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = sign * f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = sign * f(d);
        }
    }
    const double xb = 0.5 * (a + b);
    const double fb = f(xb);
    if (sign * fb < sign * value) {
        arg = xb;
        value = fb;
    }
}
}  // namespace detail

// Extrema of f over [lo, hi]: scan a uniform grid of n intervals, then
// polish the best minimum and maximum by golden sections around the
// winning grid points.
inline CurveExtrema curve_extrema(const std::function<double(double)>& f, double lo, double hi,
                                  int n = 200000) {
    if (!(hi > lo) || n < 2)
        throw std::invalid_argument("curve_extrema: bad interval or grid size");
    const double step = (hi - lo) / n;
    CurveExtrema ext{lo, f(lo), lo, f(lo)};
    int imin = 0, imax = 0;
    for (int i = 1; i <= n; ++i) {
        const double x = (i == n) ? hi : lo + step * i;
        const double v = f(x);
        if (v < ext.min_value) { ext.min_value = v; ext.min_x = x; imin = i; }
        if (v > ext.max_value) { ext.max_value = v; ext.max_x = x; imax = i; }
    }
    const auto bracket_lo = [&](int i) { return std::max(lo, lo + step * (i - 1)); };
    const auto bracket_hi = [&](int i) { return std::min(hi, lo + step * (i + 1)); };
    detail::golden_refine(f, +1.0, ext.min_x, ext.min_value, bracket_lo(imin), bracket_hi(imin));
    detail::golden_refine(f, -1.0, ext.max_x, ext.max_value, bracket_lo(imax), bracket_hi(imax));
    return ext;
}

}  // namespace rsqrt
