// Acceptance gate: runs every verification criterion at its pinned tolerance
// and prints one PASS/FAIL line per criterion. Nonzero exit on any failure.
#include <cstdio>
#include <cstring>
#include <exception>

#include <rsqrt/verify.hpp>

int main(int argc, char** argv) {
    bool full = false;
    bool verbose = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--full") == 0) full = true;
        if (std::strcmp(argv[i], "--verbose") == 0) verbose = true;
    }

    try {
        const auto results = rsqrt::run_all_verifications({full});
        int failed = 0;
        for (const auto& r : results) {
            std::printf("[%s] criterion %d: %s (%zu checks, %.2f s)\n",
                        r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.details.size(),
                        r.seconds);
            for (const auto& v : r.details) {
                if (v.pass && !verbose) continue;
                std::printf("    [%s] %s: actual %.17g, expected %.17g, tolerance %.3g\n",
                            v.pass ? "ok" : "FAIL", v.name.c_str(), v.actual, v.expected,
                            v.tolerance);
            }
            if (!r.passed) ++failed;
        }
        std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed,
                    results.size());
        return failed == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
        return 3;
    }
}
