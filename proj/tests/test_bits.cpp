#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>

#include <rsqrt/bits.hpp>

using namespace rsqrt;

TEST_CASE("float format constants", "[bits]") {
    STATIC_REQUIRE(FloatFormat::mantissa_scale == 8388608u);
    STATIC_REQUIRE(FloatFormat::mantissa_scale == (1u << 23));
    STATIC_REQUIRE(FloatFormat::exponent_bias == 127);
}

TEST_CASE("encode_bits on known values", "[bits]") {
    CHECK(encode_bits(1.0f) == 0x3F800000u);
    CHECK(encode_bits(2.0f) == 0x40000000u);
    // 0.15625 = 1.25 * 2^-3: biased exponent 124, mantissa fraction 1/4.
    CHECK(encode_bits(0.15625f) == 0x3E200000u);
    CHECK(encode_bits(std::numeric_limits<float>::min()) == 0x00800000u);
}

TEST_CASE("encode_bits rejects non positive-normal input", "[bits]") {
    CHECK_THROWS_AS(encode_bits(0.0f), std::domain_error);
    CHECK_THROWS_AS(encode_bits(-1.0f), std::domain_error);
    CHECK_THROWS_AS(encode_bits(1e-40f), std::domain_error);  // subnormal
    CHECK_THROWS_AS(encode_bits(std::numeric_limits<float>::infinity()), std::domain_error);
    CHECK_THROWS_AS(encode_bits(std::nanf("")), std::domain_error);
}

TEST_CASE("decode_bits on known values", "[bits]") {
    const DecodedFloat d = decode_bits(0x3E200000u);
    CHECK(d.exponent == -3);
    CHECK(d.mantissa == 0.25);
    CHECK(decode_bits(0x3F800000u).exponent == 0);
    CHECK(decode_bits(0x3F800000u).mantissa == 0.0);
}

TEST_CASE("decode_bits rejects special encodings", "[bits]") {
    CHECK_THROWS_AS(decode_bits(0x00000000u), std::domain_error);
    CHECK_THROWS_AS(decode_bits(0x00400000u), std::domain_error);  // subnormal
    CHECK_THROWS_AS(decode_bits(0x7F800000u), std::domain_error);  // infinity
    CHECK_THROWS_AS(decode_bits(0x7FC00000u), std::domain_error);  // NaN
    CHECK_THROWS_AS(decode_bits(0xBF800000u), std::domain_error);  // negative
}

TEST_CASE("decode/encode round-trip is exhaustive on [1,4)", "[bits]") {
    for (std::uint32_t i = 0x3F800000u; i < 0x40800000u; ++i) {
        const DecodedFloat d = decode_bits(i);
        // Independent reconstruction from the definition x = (1+m) 2^e.
        const float x = static_cast<float>(std::ldexp(1.0 + d.mantissa, d.exponent));
        if (encode_bits(x) != i) {
            FAIL("round-trip mismatch at bits " << std::hex << i);
        }
    }
    SUCCEED("all 2^24 values round-trip");
}

TEST_CASE("MagicConstant validation and parameters", "[bits]") {
    const MagicConstant r(0x5F375A86u);
    CHECK(r.bits() == 0x5F375A86u);
    // Mantissa integer is 0x375A86 = 3627654.
    CHECK(r.mantissa() == 3627654.0 / 8388608.0);
    CHECK_THROWS_AS(MagicConstant(0x5F800000u), std::domain_error);  // wrong exponent field
    CHECK_THROWS_AS(MagicConstant(0x5E375A86u), std::domain_error);
    CHECK_THROWS_AS(MagicConstant(0x5F400000u), std::domain_error);  // mantissa >= 1/2
}

TEST_CASE("magic_to_t near published slopes", "[bits]") {
    // The published slopes are real-valued optima; the quantized constants
    // reproduce them to within half a quantization step, 2/2^23.
    CHECK(magic_to_t(0x5F375A86u) == Catch::Approx(3.7298003).margin(2.4e-7).epsilon(0.0));
    CHECK(magic_to_t(0x5F37642Fu) == Catch::Approx(3.7309796).margin(2.4e-7).epsilon(0.0));
    CHECK(magic_to_t(0x5F376908u) == Catch::Approx(3.73157124016).margin(2.4e-7).epsilon(0.0));
}

TEST_CASE("t_to_magic reproduces published constants", "[bits]") {
    CHECK(t_to_magic(3.7298003) == 0x5F375A86u);
    CHECK(t_to_magic(3.7309796) == 0x5F37642Fu);
    CHECK(t_to_magic(3.73157124016) == 0x5F376908u);
}

TEST_CASE("t_to_magic rejects slopes outside (2,4)", "[bits]") {
    CHECK_THROWS_AS(t_to_magic(2.0), std::domain_error);
    CHECK_THROWS_AS(t_to_magic(4.0), std::domain_error);
    CHECK_THROWS_AS(t_to_magic(1.5), std::domain_error);
}

TEST_CASE("slope/magic conversion is an exact inverse pair", "[bits]") {
    // Every valid mantissa: t carries at most 25 significant bits, so the
    // double arithmetic in both directions is exact.
    for (std::uint32_t m = 0; m < FloatFormat::mantissa_scale / 2; ++m) {
        const std::uint32_t r = (190u << 23) | m;
        if (t_to_magic(magic_to_t(r)) != r) {
            FAIL("round-trip mismatch at mantissa " << m);
        }
    }
    SUCCEED("all 2^22 magic constants round-trip");
}

TEST_CASE("t_to_magic rounds halves up", "[bits]") {
    const double n_m = 8388608.0;
    const std::uint32_t k = 3627654u;
    // Midpoint between mantissas k and k+1 maps to k+1.
    const double t_mid = 2.0 + (4.0 * k + 2.0 + 2.0) / n_m;
    CHECK(t_to_magic(t_mid) == ((190u << 23) | (k + 1)));
    // Just below the midpoint maps to k.
    CHECK(t_to_magic(std::nextafter(t_mid, 2.0)) == ((190u << 23) | k));
}

TEST_CASE("magic_to_t is strictly increasing", "[bits]") {
    std::mt19937 rng(20240815u);
    std::uniform_int_distribution<std::uint32_t> dist(0, FloatFormat::mantissa_scale / 2 - 2);
    for (int i = 0; i < 100000; ++i) {
        const std::uint32_t m = dist(rng);
        const std::uint32_t r = (190u << 23) | m;
        if (!(magic_to_t(r) < magic_to_t(r + 1))) {
            FAIL("monotonicity violated at mantissa " << m);
        }
    }
    SUCCEED("monotone on sampled adjacent pairs");
}

TEST_CASE("seed on known inputs", "[bits]") {
    // bits(1.0) >> 1 = 0x1FC00000.
    CHECK(encode_bits(seed(MagicConstant(0x5F375A86u), 1.0f)) == 0x3F775A86u);
    CHECK(encode_bits(seed(MagicConstant(0x5F37642Fu), 1.0f)) == 0x3F77642Fu);
    // bits(4.0) = 0x40800000, >> 1 = 0x20400000.
    CHECK(encode_bits(seed(MagicConstant(0x5F375A86u), 4.0f)) == 0x3EF75A86u);
}

TEST_CASE("seed scales by 2^n when the argument scales by 2^-2n", "[bits]") {
    const MagicConstant r(0x5F375A86u);
    std::mt19937 rng(987654321u);
    std::uniform_int_distribution<std::uint32_t> mant(0, FloatFormat::mantissa_scale - 1);
    std::uniform_int_distribution<int> expo(-40, 40);
    std::uniform_int_distribution<int> shift(-20, 20);
    for (int i = 0; i < 100000; ++i) {
        const std::uint32_t ib =
            (static_cast<std::uint32_t>(expo(rng) + FloatFormat::exponent_bias) << 23) | mant(rng);
        const float x = std::bit_cast<float>(ib);
        const int n = shift(rng);
        const float lhs = seed(r, std::ldexp(x, -2 * n));
        const float rhs = std::ldexp(seed(r, x), n);
        if (std::bit_cast<std::uint32_t>(lhs) != std::bit_cast<std::uint32_t>(rhs)) {
            FAIL("seed scaling violated at bits " << std::hex << ib << " n " << n);
        }
    }
    SUCCEED("seed scaling holds on sampled pairs");
}

TEST_CASE("seed rejects arguments that leave the normal range", "[bits]") {
    CHECK_THROWS_AS(seed(MagicConstant(0x5F375A86u), 0.0f), std::domain_error);
    CHECK_THROWS_AS(seed(MagicConstant(0x5F375A86u), -2.0f), std::domain_error);
}
