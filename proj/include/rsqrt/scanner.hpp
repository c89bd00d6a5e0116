#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "bits.hpp"
#include "kernels.hpp"

// Empirical error measurement over IEEE-754 binary32 arguments: exhaustive
// or sampled envelope scans per exponent, and "blur" statistics comparing
// the binary32 kernel against an extended-precision model on [1, 4).
// Work is split into independent tasks merged in a fixed order, so results
// do not depend on thread scheduling.
namespace rsqrt {

struct ScanConfig {
    std::vector<int> exponents;        // ascending, within [-126, 127]
    int iterations = 2;
    std::uint64_t sample_count = 0;    // 0 = exhaustive, else random draws per exponent
    std::uint64_t sample_seed = 0;

    // Low edge, a band around zero, and the top: the error envelope repeats
    // with period two in the exponent, so this set already exercises every
    // distinct case except the subnormal-halfnumber edge, which it includes.
    static ScanConfig default_set(int iterations_) {
        ScanConfig cfg;
        cfg.exponents = {-126, -125, -4, -3, -2, -1, 0, 1, 2, 3, 4, 126, 127};
        cfg.iterations = iterations_;
        return cfg;
    }

    static ScanConfig range(int lo, int hi, int iterations_) {
        if (lo > hi)
            throw std::invalid_argument("ScanConfig::range: empty exponent range");
        ScanConfig cfg;
        for (int e = lo; e <= hi; ++e) cfg.exponents.push_back(e);
        cfg.iterations = iterations_;
        return cfg;
    }
};

namespace detail {
// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double total() const { return sum + comp; }
};
}  // namespace detail

struct ErrorStats {
    std::uint64_t count = 0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    std::uint32_t argmin_bits = 0;  // first argument attaining min, in bit order
    std::uint32_t argmax_bits = 0;
    detail::CompensatedSum acc;

    double mean() const { return count ? acc.total() / static_cast<double>(count) : 0.0; }

    void add(double err, std::uint32_t bits) {
        ++count;
        if (err < min) { min = err; argmin_bits = bits; }
        if (err > max) { max = err; argmax_bits = bits; }
        acc.add(err);
    }

    // Order-sensitive: callers merge lower exponents first so that ties keep
    // the first argument in the fixed enumeration order.
    void merge(const ErrorStats& o) {
        if (o.count == 0) return;
        count += o.count;
        if (o.min < min) { min = o.min; argmin_bits = o.argmin_bits; }
        if (o.max > max) { max = o.max; argmax_bits = o.argmax_bits; }
        acc.add(o.sum_raw());
        acc.add(o.comp_raw());
    }

    double sum_raw() const { return acc.sum; }
    double comp_raw() const { return acc.comp; }
};

struct ScanResult {
    ScanConfig config;
    std::vector<std::pair<int, ErrorStats>> per_exponent;  // ascending exponent
    // Aggregate of every scanned exponent except -126; the subnormal
    // halfnumber at the bottom exponent widens its envelope, so that row is
    // kept out of the headline figure and reported on its own.
    ErrorStats global;
};

namespace detail {
template <typename Task>
inline void run_indexed_tasks(std::size_t n, const Task& task) {
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) task(i);
        });
    for (auto& th : pool) th.join();
}

inline ErrorStats scan_one_exponent(const KernelSpec& spec, int exponent, int iterations,
                                    std::uint64_t sample_count, std::uint64_t sample_seed) {
    const auto biased = static_cast<std::uint32_t>(exponent + FloatFormat::exponent_bias);
    const std::uint32_t base = biased << 23;
    ErrorStats stats;
    const auto measure = [&](std::uint32_t mantissa) {
        const std::uint32_t ib = base | mantissa;
        const float x = std::bit_cast<float>(ib);
        stats.add(relative_error(x, run_kernel(spec, x, iterations)), ib);
    };
    if (sample_count == 0) {
        for (std::uint32_t m = 0; m < FloatFormat::mantissa_scale; ++m) measure(m);
    } else {
        // Seeded per exponent so each row is reproducible on its own.
        std::mt19937_64 rng(sample_seed ^ (0x9E3779B97F4A7C15ull *
                                           static_cast<std::uint64_t>(exponent + 300)));
        std::uniform_int_distribution<std::uint32_t> dist(0, FloatFormat::mantissa_scale - 1);
        for (std::uint64_t i = 0; i < sample_count; ++i) measure(dist(rng));
    }
    return stats;
}
}  // namespace detail

inline ScanResult scan(const KernelSpec& spec, const ScanConfig& cfg) {
    if (cfg.exponents.empty())
        throw std::invalid_argument("scan: no exponents requested");
    for (std::size_t i = 0; i < cfg.exponents.size(); ++i) {
        if (cfg.exponents[i] < FloatFormat::min_exponent ||
            cfg.exponents[i] > FloatFormat::max_exponent)
            throw std::out_of_range("scan: exponent outside the normal range");
        if (i > 0 && cfg.exponents[i] <= cfg.exponents[i - 1])
            throw std::invalid_argument("scan: exponents must be strictly ascending");
    }
    ScanResult result;
    result.config = cfg;
    std::vector<ErrorStats> parts(cfg.exponents.size());
    detail::run_indexed_tasks(cfg.exponents.size(), [&](std::size_t i) {
        parts[i] = detail::scan_one_exponent(spec, cfg.exponents[i], cfg.iterations,
                                             cfg.sample_count, cfg.sample_seed);
    });
    bool have_other = false;
    for (std::size_t i = 0; i < cfg.exponents.size(); ++i)
        have_other = have_other || cfg.exponents[i] != -126;
    for (std::size_t i = 0; i < cfg.exponents.size(); ++i) {
        result.per_exponent.emplace_back(cfg.exponents[i], parts[i]);
        if (cfg.exponents[i] != -126 || !have_other) result.global.merge(parts[i]);
    }
    return result;
}

struct BlurBin {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
};

// Relative deviation of the binary32 kernel from an extended-precision model
// over all 2^24 binary32 values in [1, 4): mean (and raw sum), envelope, the
// attaining arguments, and 128 per-interval envelopes (64 bins on [1, 2),
// 64 on [2, 4)).
struct BlurStats {
    std::uint64_t count = 0;
    double sum = 0.0;
    double mean = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    std::uint32_t argmin_bits = 0;
    std::uint32_t argmax_bits = 0;
    std::array<BlurBin, 128> bins{};
};

inline BlurStats blur(const KernelSpec& spec, const std::function<double(double)>& model,
                      int iterations = 2) {
    const std::uint32_t first = std::bit_cast<std::uint32_t>(1.0f);
    const std::uint32_t last = std::bit_cast<std::uint32_t>(4.0f);  // exclusive
    constexpr std::size_t n_chunks = 64;
    const std::uint32_t chunk = (last - first) / n_chunks;

    struct Partial {
        detail::CompensatedSum acc;
        ErrorStats env;
        std::array<BlurBin, 128> bins{};
    };
    std::vector<Partial> parts(n_chunks);
    detail::run_indexed_tasks(n_chunks, [&](std::size_t c) {
        Partial& p = parts[c];
        const std::uint32_t lo = first + chunk * static_cast<std::uint32_t>(c);
        const std::uint32_t hi = (c + 1 == n_chunks) ? last : lo + chunk;
        for (std::uint32_t ib = lo; ib < hi; ++ib) {
            const float x = std::bit_cast<float>(ib);
            const double code = run_kernel(spec, x, iterations);
            const double m = model(x);
            const double eps = (code - m) / m;
            p.acc.add(eps);
            p.env.add(eps, ib);
            const double xd = x;
            const int bin = xd < 2.0 ? static_cast<int>((xd - 1.0) * 64.0)
                                     : 64 + static_cast<int>((xd - 2.0) * 32.0);
            BlurBin& b = p.bins[static_cast<std::size_t>(bin)];
            b.min = std::min(b.min, eps);
            b.max = std::max(b.max, eps);
        }
    });

    BlurStats out;
    detail::CompensatedSum total;
    ErrorStats env;
    for (const Partial& p : parts) {
        total.add(p.acc.sum);
        total.add(p.acc.comp);
        env.merge(p.env);
        for (std::size_t b = 0; b < out.bins.size(); ++b) {
            out.bins[b].min = std::min(out.bins[b].min, p.bins[b].min);
            out.bins[b].max = std::max(out.bins[b].max, p.bins[b].max);
        }
    }
    out.count = env.count;
    out.sum = total.total();
    out.mean = out.sum / static_cast<double>(out.count);
    out.min = env.min;
    out.max = env.max;
    out.argmin_bits = env.argmin_bits;
    out.argmax_bits = env.argmax_bits;
    return out;
}

struct BoundCheck {
    bool pass;
    double min_delta;  // observed min - claimed min
    double max_delta;  // observed max - claimed max
};

inline BoundCheck verify_bound(const ErrorStats& stats, double claimed_min, double claimed_max,
                               double tolerance) {
    BoundCheck c{};
    c.min_delta = stats.min - claimed_min;
    c.max_delta = stats.max - claimed_max;
    c.pass = std::abs(c.min_delta) <= tolerance && std::abs(c.max_delta) <= tolerance;
    return c;
}

}  // namespace rsqrt
