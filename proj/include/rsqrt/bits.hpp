#pragma once

#include <bit>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>

// Bit-level model of IEEE-754 binary32 restricted to positive normal values,
// plus the integer seed map I(y0) = R - (I(x) >> 1) and the conversions
// between a magic constant R and its slope parameter t.
namespace rsqrt {

struct FloatFormat {
    // Size of one exponent step in integer space: 2^23.
    static constexpr std::uint32_t mantissa_scale = 0x00800000u;
    static constexpr int exponent_bias = 127;
    static constexpr std::uint32_t mantissa_mask = mantissa_scale - 1;
    static constexpr int min_exponent = -126;
    static constexpr int max_exponent = 127;
};

// Exponent and mantissa fraction of a positive normal binary32 value:
// x = (1 + mantissa) * 2^exponent with mantissa in [0, 1).
struct DecodedFloat {
    int exponent;
    double mantissa;
};

inline std::uint32_t encode_bits(float x) {
    if (!(x > 0.0f) || !std::isnormal(x))
        throw std::domain_error("encode_bits: value must be a positive normal binary32");
    return std::bit_cast<std::uint32_t>(x);
}

inline DecodedFloat decode_bits(std::uint32_t i) {
    const std::uint32_t biased = i >> 23;  // includes the sign bit as bit 8
    if (biased < 1 || biased > 254)
        throw std::domain_error("decode_bits: bits do not encode a positive normal value");
    return DecodedFloat{
        static_cast<int>(biased) - FloatFormat::exponent_bias,
        static_cast<double>(i & FloatFormat::mantissa_mask) /
            static_cast<double>(FloatFormat::mantissa_scale),
    };
}

// A reciprocal-sqrt seed constant R together with its derived parameters.
// Valid constants have biased exponent field 190 (0x5F) and a mantissa
// fraction m_R < 1/2, which keeps the slope parameter t inside (2, 4).
class MagicConstant {
public:
    explicit MagicConstant(std::uint32_t bits) : bits_(bits) {
        if ((bits >> 23) != 190u)
            throw std::domain_error("MagicConstant: exponent field must be 190 (bits 0x5F...)");
        if ((bits & FloatFormat::mantissa_mask) >= FloatFormat::mantissa_scale / 2)
            throw std::domain_error("MagicConstant: mantissa fraction must be below 1/2");
    }

    std::uint32_t bits() const { return bits_; }

    double mantissa() const {
        return static_cast<double>(bits_ & FloatFormat::mantissa_mask) /
               static_cast<double>(FloatFormat::mantissa_scale);
    }

    // Slope parameter t = 2 + 4 m_R + 2 / 2^23.
    double slope() const {
        return 2.0 + 4.0 * mantissa() + 2.0 / static_cast<double>(FloatFormat::mantissa_scale);
    }

private:
    std::uint32_t bits_;
};

inline double magic_to_t(std::uint32_t r) { return MagicConstant(r).slope(); }

// Nearest magic constant for a slope parameter t in (2, 4); halves round up.
inline std::uint32_t t_to_magic(double t) {
    if (!(t > 2.0) || !(t < 4.0))
        throw std::domain_error("t_to_magic: slope parameter must lie in (2, 4)");
    const double n_m = static_cast<double>(FloatFormat::mantissa_scale);
    const double mantissa_real = (t - 2.0 - 2.0 / n_m) * n_m / 4.0;
    const auto mantissa = static_cast<std::uint32_t>(std::floor(mantissa_real + 0.5));
    return (190u << 23) | mantissa;
}

// Integer seed y0 = bits^-1(R - (bits(x) >> 1)). The shift is a logical
// shift; x is positive so the sign bit is clear and the distinction from an
// arithmetic shift never arises.
inline float seed(const MagicConstant& magic, float x) {
    const std::uint32_t iy = magic.bits() - (encode_bits(x) >> 1);
    const std::uint32_t biased = iy >> 23;
    if (biased < 1 || biased > 254)
        throw std::domain_error("seed: result is not a positive normal value");
    return std::bit_cast<float>(iy);
}

}  // namespace rsqrt
