#pragma once

#include <cstdint>

// Published reference values the derivation is checked against. Tolerances
// are one unit in the last published digit unless a check is exact (hex
// constants, set counts).
namespace rsqrt::reference {

// Seed-only optimum.
inline constexpr double seed_t = 3.7309796;
inline constexpr double seed_t_tol = 1e-7;
inline constexpr std::uint32_t seed_magic = 0x5F37642Fu;
inline constexpr double seed_max0 = 0.03421281;
inline constexpr double seed_max0_tol = 1e-8;

// Optimum for the unbiased Newton iterations.
inline constexpr double classic_t = 3.7298003;
inline constexpr double classic_t_tol = 1e-7;
inline constexpr std::uint32_t classic_magic = 0x5F375A86u;
inline constexpr double classic_max1 = 1.75118e-3;
inline constexpr double classic_max1_tol = 1e-8;
inline constexpr double classic_max2 = 4.60e-6;
inline constexpr double classic_max2_tol = 1e-8;

// Flat-lift biases at the classic slope.
inline constexpr double flat_max1 = 8.7559e-4;
inline constexpr double flat_max1_tol = 1e-8;
inline constexpr double flat_max2 = 5.75164e-7;
inline constexpr double flat_max2_tol = 1e-12;

// Biases minimizing the second-step bound alone.
inline constexpr double joint_half_d1 = 8.75464e-4;
inline constexpr double joint_half_d1_tol = 1e-9;
inline constexpr double joint_half_d2 = 5.74996e-7;
inline constexpr double joint_half_d2_tol = 1e-12;

// Slope interval (and magic set) over which the flat-lift two-step bound
// stays at its optimum.
inline constexpr double interval_t_lo = 3.72978085;
inline constexpr double interval_t_hi = 3.72981263;
inline constexpr double interval_t_tol = 1e-8;
inline constexpr std::uint32_t interval_magic_lo = 0x5F375A5Du;
inline constexpr std::uint32_t interval_magic_hi = 0x5F375AA0u;
inline constexpr std::uint32_t interval_count = 68;

// First folded-constant scheme.
inline constexpr double scheme1_max1 = 8.7636e-4;
inline constexpr double scheme1_max1_tol = 1e-8;
inline constexpr double scheme1_d2 = 1.15234e-6;
inline constexpr double scheme1_d2_tol = 1e-11;
inline constexpr double scheme1_max2 = 5.76173e-7;
inline constexpr double scheme1_max2_tol = 1e-12;

// Second scheme with its own slope.
inline constexpr double scheme2_t = 3.73157124016;
inline constexpr double scheme2_t_tol = 1e-11;
inline constexpr std::uint32_t scheme2_magic = 0x5F376908u;
// The quoted first-step bias and bound are mutually inconsistent with the
// quoted slope at their last digit: reproducing 1.75791023259e-3 requires a
// slope that rounds to 3.73157124017, one unit above the quoted 3.73157124016.
// The solved values balance all three error extrema to 5e-17 and reproduce
// every second-step digit, so these two checks get an extra digit of slack.
inline constexpr double scheme2_d1 = 1.75791023259e-3;
inline constexpr double scheme2_d1_tol = 1e-13;
inline constexpr double scheme2_max1 = 8.7908386407e-4;
inline constexpr double scheme2_max1_tol = 1e-13;
inline constexpr double scheme2_d2 = 1.159352515e-6;
inline constexpr double scheme2_d2_tol = 1e-15;
inline constexpr double scheme2_max2 = 5.796763137e-7;
inline constexpr double scheme2_max2_tol = 1e-16;

// Binary32 kernel constants as they appear in the published listings.
inline constexpr float listing_scheme1_half = 0.50043818f;
inline constexpr float listing_scheme1_add1 = 1.5013145f;
inline constexpr float listing_scheme1_add2 = 1.5000008f;
inline constexpr float listing_scheme1_mul2 = 0.99912498f;
inline constexpr float listing_scheme2_add1 = 1.5008789f;
inline constexpr float listing_scheme2_add2 = 1.5000006f;

// Published exhaustive-scan envelopes (two iterations unless noted). The
// global rows exclude the bottom exponent, which is listed separately.
inline constexpr double scan_envelope_tol = 1.5e-7;
inline constexpr double scheme1_scan_min = -6.62e-7;
inline constexpr double scheme1_scan_max = 6.35e-7;
inline constexpr double scheme1_scan_min_low_exp = -6.72e-7;
inline constexpr double scheme1_scan_max_low_exp = 6.49e-7;
inline constexpr double scheme2_scan_min = -6.21e-7;
inline constexpr double scheme2_scan_max = 6.53e-7;
inline constexpr double scheme2_scan_min_low_exp = -6.46e-7;
inline constexpr double scheme2_scan_max_low_exp = 6.84e-7;
inline constexpr double scan_envelope1_tol = 2e-6;
inline constexpr double scheme1_scan_abs1 = 8.76e-4;  // one-iteration |error| bound
inline constexpr double scheme2_scan_abs1 = 8.79e-4;
// Hardware-robust gates on the two-iteration global envelopes.
inline constexpr double scheme2_hard_bound = 7.0e-7;
inline constexpr double classic_hard_floor = 4.4e-6;

// Published code-versus-model blur statistics over [1, 4).
inline constexpr double blur_mean_tol = 0.3e-8;
inline constexpr double blur_range_tol = 1e-8;
inline constexpr double scheme1_blur_mean = -1.398e-8;
inline constexpr double scheme1_blur_min = -9.676e-8;
inline constexpr double scheme1_blur_max = 6.805e-8;
inline constexpr double scheme2_blur_mean = 1.653e-8;
inline constexpr double scheme2_blur_min = -4.316e-8;
inline constexpr double scheme2_blur_max = 7.612e-8;

}  // namespace rsqrt::reference
