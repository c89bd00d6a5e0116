#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>

#include <rsqrt/report.hpp>

using namespace rsqrt;

TEST_CASE("double formatting round-trips exactly", "[report]") {
    const double values[] = {-6.6220515212774624e-07, 6.3504428239052e-07, 0.0,  1.0,
                             -0.00087908386407,       3.73157124016,       0.25, 1e-300};
    for (double v : values) {
        const std::string s = format_double(v);
        const double back = std::strtod(s.c_str(), nullptr);
        CHECK(std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(v));
    }
}

TEST_CASE("float formatting is shortest and round-trips", "[report]") {
    CHECK(format_float(1.5f) == "1.5");
    CHECK(format_float(1.0f) == "1");
    CHECK(format_float(0.50043818f) == "0.50043815");  // shortest, not the listing spelling
    CHECK(format_float(1.5013145f) == "1.5013145");
    CHECK(format_float(0.99912498f) == "0.999125");  // shortest, not the listing spelling
    CHECK(format_float(1.5008789f) == "1.5008789");
    CHECK(format_float(1.5000008f) == "1.5000008");
    CHECK(format_float(1.5000006f) == "1.5000006");
    const float values[] = {0.1f, 3.0000002f, -2.5f, 1e-20f};
    for (float v : values) {
        const float back = std::strtof(format_float(v).c_str(), nullptr);
        CHECK(std::bit_cast<std::uint32_t>(back) == std::bit_cast<std::uint32_t>(v));
    }
}

TEST_CASE("listing spellings match the published code constants", "[report]") {
    const MinimaxSolution classic = solve_classic_optimum();
    const MinimaxSolution s1 = solve_scheme1(classic);
    const MinimaxSolution s2 = solve_scheme2();

    const CodeConstants c1 = code_constant_values(s1);
    const KernelSpec k1 = emit_code_constants(s1);
    CHECK(format_listing(c1.half, k1.half_factor) == "0.50043818");
    CHECK(format_listing(c1.add1, k1.iterations[0].add_term) == "1.5013145");
    CHECK(format_listing(c1.add2, k1.iterations[1].add_term) == "1.5000008");
    CHECK(format_listing(c1.mul2, k1.iterations[1].mul_term) == "0.99912498");

    const CodeConstants c2 = code_constant_values(s2);
    const KernelSpec k2 = emit_code_constants(s2);
    CHECK(format_listing(c2.add1, k2.iterations[0].add_term) == "1.5008789");
    CHECK(format_listing(c2.add2, k2.iterations[1].add_term) == "1.5000006");

    CHECK(format_listing(0.5, 0.5f) == "0.5");
    CHECK(format_listing(1.5, 1.5f) == "1.5");
    CHECK(format_listing(1.0, 1.0f) == "1");
}

TEST_CASE("bit patterns print as fixed-width uppercase hex", "[report]") {
    CHECK(format_bits_hex(0x5F375A86u) == "0x5F375A86");
    CHECK(format_bits_hex(0x5F376908u) == "0x5F376908");
    CHECK(format_bits_hex(1u) == "0x00000001");
    CHECK(format_bits_hex(0u) == "0x00000000");
}

TEST_CASE("human summaries use six significant digits", "[report]") {
    CHECK(format_sig6(1.23456789) == "1.23457");
    CHECK(format_sig6(-6.6220515e-07) == "-6.62205e-07");
}

TEST_CASE("verdicts compare against tolerances", "[report]") {
    const Verdict ok = Verdict::approx("x", 1.0, 1.0 + 5e-9, 1e-8);
    CHECK(ok.pass);
    CHECK(ok.delta() == Catch::Approx(5e-9).margin(1e-15).epsilon(0.0));
    CHECK_FALSE(Verdict::approx("x", 1.0, 1.0 + 2e-8, 1e-8).pass);

    CHECK(Verdict::exact_bits("m", 0x10u, 0x10u).pass);
    CHECK_FALSE(Verdict::exact_bits("m", 0x10u, 0x11u).pass);

    CHECK(Verdict::bound("upper", 7.0e-7, 6.5e-7, true).pass);
    CHECK_FALSE(Verdict::bound("upper", 7.0e-7, 7.1e-7, true).pass);
    CHECK(Verdict::bound("lower", 4.4e-6, 4.5e-6, false).pass);
    CHECK_FALSE(Verdict::bound("lower", 4.4e-6, 4.3e-6, false).pass);
}

TEST_CASE("reports serialize with the three fixed sections", "[report]") {
    Report r;
    r.metadata = metadata_json();
    r.payload = {{"k", 1}};
    r.verdicts.push_back(Verdict::approx("a", 1.0, 1.0, 1e-9));
    const nlohmann::json doc = r.to_json();
    REQUIRE(doc.contains("metadata"));
    REQUIRE(doc.contains("payload"));
    REQUIRE(doc.contains("verdicts"));
    CHECK(doc["metadata"]["tool"] == tool_name);
    CHECK(r.all_pass());
    r.verdicts.push_back(Verdict::approx("b", 1.0, 2.0, 1e-9));
    CHECK_FALSE(r.all_pass());
}

TEST_CASE("scan CSV starts with the documented header and ends global", "[report]") {
    ScanConfig cfg = ScanConfig::range(0, 1, 2);
    cfg.sample_count = 256;
    cfg.sample_seed = 5;
    const ScanResult res = scan(builtin_spec(SchemeId::Scheme2), cfg);
    const std::string csv = scan_csv(res);
    CHECK(csv.rfind("exponent,count,min,argmin_bits_hex,max,argmax_bits_hex,mean\n", 0) == 0);
    CHECK(csv.find("\nglobal,") != std::string::npos);
    CHECK(csv.back() == '\n');
}

TEST_CASE("curve CSV uses the x,error header", "[report]") {
    const std::string csv = curve_csv({{1.0, -1e-3}, {2.5, 2e-3}});
    CHECK(csv.rfind("x,error\n", 0) == 0);
    CHECK(csv.find("2.5,0.002") != std::string::npos);
}

TEST_CASE("blur JSON bins tile the interval from one to four", "[report]") {
    BlurStats b{};
    b.count = 1;
    b.sum = 0.0;
    b.mean = 0.0;
    const nlohmann::json doc = blur_json(b);
    REQUIRE(doc["bins"].size() == 128);
    CHECK(doc["bins"][0]["x_lo"].get<double>() == Catch::Approx(1.0));
    CHECK(doc["bins"][63]["x_hi"].get<double>() == Catch::Approx(2.0));
    CHECK(doc["bins"][64]["x_lo"].get<double>() == Catch::Approx(2.0));
    CHECK(doc["bins"][127]["x_hi"].get<double>() == Catch::Approx(4.0));
}
