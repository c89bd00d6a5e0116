#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bits.hpp"

// Reciprocal-sqrt kernels: a seed step followed by up to two Newton-like
// iterations with per-iteration coefficients. Each iteration statement is
// evaluated with double intermediates and rounded to binary32 once at the
// assignment, the way extended-precision statement evaluation executes the
// listings. The published error envelopes assume exactly this rounding
// profile; per-operation binary32 rounding widens them by roughly 1e-7.
namespace rsqrt {

struct IterationCoeffs {
    float add_term;  // constant the product is subtracted from (1.5f in the classic kernel)
    float mul_term;  // extra factor on halfnumber * y * y; 1.0f when absent from the listing
};

struct KernelSpec {
    MagicConstant magic;
    float half_factor;  // halfnumber = half_factor * x
    std::vector<IterationCoeffs> iterations;
};

enum class SchemeId { Classic, Scheme1, Scheme2 };

inline const char* scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::Classic: return "classic";
        case SchemeId::Scheme1: return "scheme1";
        case SchemeId::Scheme2: return "scheme2";
    }
    throw std::invalid_argument("scheme_name: unknown scheme id");
}

inline KernelSpec builtin_spec(SchemeId id) {
    switch (id) {
        case SchemeId::Classic:
            return KernelSpec{MagicConstant(0x5F375A86u), 0.5f,
                              {{1.5f, 1.0f}, {1.5f, 1.0f}}};
        case SchemeId::Scheme1:
            return KernelSpec{MagicConstant(0x5F375A86u), 0.50043818f,
                              {{1.5013145f, 1.0f}, {1.5000008f, 0.99912498f}}};
        case SchemeId::Scheme2:
            return KernelSpec{MagicConstant(0x5F376908u), 0.5f,
                              {{1.5008789f, 1.0f}, {1.5000006f, 1.0f}}};
    }
    throw std::invalid_argument("builtin_spec: unknown scheme id");
}

// Runs the kernel with the first n_iter iterations. Products associate left
// to right as in the source listings, y * (add - mul * h * y * y), with the
// whole statement carried in double and rounded to binary32 on assignment.
inline float run_kernel(const KernelSpec& spec, float x, int n_iter) {
    if (n_iter < 0 || n_iter > static_cast<int>(spec.iterations.size()))
        throw std::out_of_range("run_kernel: iteration count out of range");
    const float h = static_cast<float>(static_cast<double>(spec.half_factor) *
                                       static_cast<double>(x));
    float y = seed(spec.magic, x);
    for (int k = 0; k < n_iter; ++k) {
        const IterationCoeffs& c = spec.iterations[static_cast<std::size_t>(k)];
        const double yd = y;
        const double p = static_cast<double>(c.mul_term) * static_cast<double>(h) * yd * yd;
        y = static_cast<float>(yd * (static_cast<double>(c.add_term) - p));
    }
    return y;
}

// Same steps carried out in double precision: identical seed bits and
// coefficient values, but per-step rounding at 2^-53 instead of 2^-24.
// Serves as an extended-precision reference for the binary32 code path.
inline double run_kernel_extended(const KernelSpec& spec, float x, int n_iter) {
    if (n_iter < 0 || n_iter > static_cast<int>(spec.iterations.size()))
        throw std::out_of_range("run_kernel_extended: iteration count out of range");
    const double h = static_cast<double>(spec.half_factor) * static_cast<double>(x);
    double y = seed(spec.magic, x);
    for (int k = 0; k < n_iter; ++k) {
        const IterationCoeffs& c = spec.iterations[static_cast<std::size_t>(k)];
        y = y * (c.add_term - c.mul_term * h * y * y);
    }
    return y;
}

// Relative error sqrt(x) * y - 1, accumulated in double precision.
inline double relative_error(float x, float y) {
    return std::sqrt(static_cast<double>(x)) * static_cast<double>(y) - 1.0;
}

}  // namespace rsqrt
