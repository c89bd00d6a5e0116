#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <cstdint>

#include <rsqrt/reference.hpp>
#include <rsqrt/scanner.hpp>

using namespace rsqrt;
namespace ref = rsqrt::reference;

TEST_CASE("scan rejects bad exponent lists", "[scanner]") {
    const KernelSpec classic = builtin_spec(SchemeId::Classic);
    ScanConfig cfg;
    CHECK_THROWS_AS(scan(classic, cfg), std::invalid_argument);
    cfg.exponents = {0, 0};
    CHECK_THROWS_AS(scan(classic, cfg), std::invalid_argument);
    cfg.exponents = {3, 2};
    CHECK_THROWS_AS(scan(classic, cfg), std::invalid_argument);
    cfg.exponents = {-127};
    CHECK_THROWS_AS(scan(classic, cfg), std::out_of_range);
    cfg.exponents = {128};
    CHECK_THROWS_AS(scan(classic, cfg), std::out_of_range);
    CHECK_THROWS_AS(ScanConfig::range(2, 1, 2), std::invalid_argument);
}

TEST_CASE("default exponent set is strictly ascending and spans the edges", "[scanner]") {
    const ScanConfig cfg = ScanConfig::default_set(2);
    REQUIRE(!cfg.exponents.empty());
    CHECK(cfg.exponents.front() == -126);
    CHECK(cfg.exponents.back() == 127);
    for (std::size_t i = 1; i < cfg.exponents.size(); ++i)
        CHECK(cfg.exponents[i] > cfg.exponents[i - 1]);
    CHECK(std::count(cfg.exponents.begin(), cfg.exponents.end(), 0) == 1);
}

TEST_CASE("scan rows repeat when the exponent shifts by two", "[scanner]") {
    const KernelSpec s2 = builtin_spec(SchemeId::Scheme2);
    const auto row = [&](int e) {
        ScanConfig cfg;
        cfg.exponents = {e};
        return scan(s2, cfg).per_exponent.front().second;
    };
    const std::pair<int, int> pairs[] = {{0, 2}, {1, 3}, {-4, -2}, {124, 126}, {-125, -123}};
    for (const auto& [a, b] : pairs) {
        const ErrorStats ra = row(a);
        const ErrorStats rb = row(b);
        CHECK(ra.min == rb.min);
        CHECK(ra.max == rb.max);
        CHECK(ra.mean() == rb.mean());
        CHECK((ra.argmin_bits & FloatFormat::mantissa_mask) ==
              (rb.argmin_bits & FloatFormat::mantissa_mask));
        CHECK((ra.argmax_bits & FloatFormat::mantissa_mask) ==
              (rb.argmax_bits & FloatFormat::mantissa_mask));
    }
}

TEST_CASE("scan argmin and argmax reproduce the recorded extremes", "[scanner]") {
    const KernelSpec s1 = builtin_spec(SchemeId::Scheme1);
    ScanConfig cfg;
    cfg.exponents = {-1, 0};
    const ScanResult r = scan(s1, cfg);
    for (const auto& [e, stats] : r.per_exponent) {
        const float xm = std::bit_cast<float>(stats.argmin_bits);
        const float xM = std::bit_cast<float>(stats.argmax_bits);
        CHECK(relative_error(xm, run_kernel(s1, xm, 2)) == stats.min);
        CHECK(relative_error(xM, run_kernel(s1, xM, 2)) == stats.max);
        CHECK(stats.count == FloatFormat::mantissa_scale);
    }
}

TEST_CASE("global row excludes the bottom exponent unless alone", "[scanner]") {
    const KernelSpec classic = builtin_spec(SchemeId::Classic);
    ScanConfig cfg;
    cfg.exponents = {-126, -1};
    cfg.sample_count = 4096;
    const ScanResult r = scan(classic, cfg);
    REQUIRE(r.per_exponent.size() == 2);
    CHECK(r.global.count == 4096);
    CHECK(r.global.min == r.per_exponent[1].second.min);
    CHECK(r.global.max == r.per_exponent[1].second.max);

    ScanConfig solo;
    solo.exponents = {-126};
    solo.sample_count = 4096;
    const ScanResult rs = scan(classic, solo);
    CHECK(rs.global.count == 4096);
    CHECK(rs.global.min == rs.per_exponent[0].second.min);
}

TEST_CASE("sampled scans are reproducible and sit inside the exhaustive envelope", "[scanner]") {
    const KernelSpec s2 = builtin_spec(SchemeId::Scheme2);
    ScanConfig full;
    full.exponents = {0};
    const ErrorStats whole = scan(s2, full).per_exponent.front().second;

    ScanConfig sampled = full;
    sampled.sample_count = 50000;
    sampled.sample_seed = 11;
    const ScanResult a = scan(s2, sampled);
    const ScanResult b = scan(s2, sampled);
    const ErrorStats& sa = a.per_exponent.front().second;
    const ErrorStats& sb = b.per_exponent.front().second;
    CHECK(sa.min == sb.min);
    CHECK(sa.max == sb.max);
    CHECK(sa.argmin_bits == sb.argmin_bits);
    CHECK(sa.mean() == sb.mean());
    CHECK(sa.count == 50000);
    CHECK(sa.min >= whole.min);
    CHECK(sa.max <= whole.max);
}

TEST_CASE("stats merging keeps the first extreme argument on ties", "[scanner]") {
    ErrorStats a;
    a.add(-1.0, 10u);
    a.add(0.5, 11u);
    ErrorStats b;
    b.add(-1.0, 20u);
    b.add(0.5, 21u);
    a.merge(b);
    CHECK(a.count == 4);
    CHECK(a.argmin_bits == 10u);
    CHECK(a.argmax_bits == 11u);
}

TEST_CASE("compensated mean survives many tiny contributions", "[scanner]") {
    ErrorStats s;
    for (int i = 0; i < 1000000; ++i) s.add(1e-8, static_cast<std::uint32_t>(i));
    CHECK(s.mean() == Catch::Approx(1e-8).epsilon(1e-12));
}

TEST_CASE("default-set scan reproduces the published scheme2 envelope", "[scanner]") {
    const KernelSpec s2 = builtin_spec(SchemeId::Scheme2);
    const ScanResult r = scan(s2, ScanConfig::default_set(2));
    CHECK(r.global.min == Catch::Approx(ref::scheme2_scan_min).margin(ref::scan_envelope_tol).epsilon(0.0));
    CHECK(r.global.max == Catch::Approx(ref::scheme2_scan_max).margin(ref::scan_envelope_tol).epsilon(0.0));
    CHECK(std::max(std::abs(r.global.min), r.global.max) <= ref::scheme2_hard_bound);
    const ErrorStats& bottom = r.per_exponent.front().second;
    CHECK(bottom.min ==
          Catch::Approx(ref::scheme2_scan_min_low_exp).margin(ref::scan_envelope_tol).epsilon(0.0));
    CHECK(bottom.max ==
          Catch::Approx(ref::scheme2_scan_max_low_exp).margin(ref::scan_envelope_tol).epsilon(0.0));
}

TEST_CASE("verify_bound measures deltas against a claim", "[scanner]") {
    ErrorStats s;
    s.add(-2.0e-7, 1u);
    s.add(1.5e-7, 2u);
    const BoundCheck ok = verify_bound(s, -2.1e-7, 1.4e-7, 2e-8);
    CHECK(ok.pass);
    CHECK(ok.min_delta == Catch::Approx(1e-8).margin(1e-20).epsilon(0.0));
    CHECK(ok.max_delta == Catch::Approx(1e-8).margin(1e-20).epsilon(0.0));
    const BoundCheck bad = verify_bound(s, -2.1e-7, 1.4e-7, 5e-9);
    CHECK(!bad.pass);
}

TEST_CASE("blur against the kernel's own extended walk is pure rounding", "[scanner]") {
    const KernelSpec classic = builtin_spec(SchemeId::Classic);
    const BlurStats b = blur(classic, [&](double x) {
        return run_kernel_extended(classic, static_cast<float>(x), 2);
    });
    CHECK(b.count == FloatFormat::mantissa_scale * 2);
    CHECK(std::abs(b.mean) <= 1e-10);
    CHECK(b.min >= -6.5e-8);
    CHECK(b.max <= 6.5e-8);
    // Extremes must be reachable from the recorded arguments.
    const float xm = std::bit_cast<float>(b.argmin_bits);
    const double code = run_kernel(classic, xm, 2);
    const double m = run_kernel_extended(classic, xm, 2);
    CHECK((code - m) / m == b.min);
}

TEST_CASE("blur bins tile [1,4) and bound the global envelope", "[scanner]") {
    const KernelSpec s1 = builtin_spec(SchemeId::Scheme1);
    const BlurStats b = blur(s1, [&](double x) {
        return run_kernel_extended(s1, static_cast<float>(x), 2);
    });
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const BlurBin& bin : b.bins) {
        REQUIRE(bin.min <= bin.max);
        lo = std::min(lo, bin.min);
        hi = std::max(hi, bin.max);
    }
    CHECK(lo == b.min);
    CHECK(hi == b.max);
}

TEST_CASE("blur is deterministic across runs", "[scanner]") {
    const KernelSpec s2 = builtin_spec(SchemeId::Scheme2);
    const auto model = [&](double x) {
        return run_kernel_extended(s2, static_cast<float>(x), 1);
    };
    const BlurStats a = blur(s2, model, 1);
    const BlurStats b = blur(s2, model, 1);
    CHECK(a.sum == b.sum);
    CHECK(a.min == b.min);
    CHECK(a.argmin_bits == b.argmin_bits);
    CHECK(a.argmax_bits == b.argmax_bits);
}
