#pragma once

#include "upset/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace upset {

enum class UTestMethod { ExactPermutation, NormalApprox };

struct UTestConfig {
    /// Pooled sizes up to this use exact enumeration of group assignments.
    std::size_t exact_cutoff = 20;
    bool tie_correction = true;
};

struct UTestResult {
    double u_statistic = 0.0;  // U of the first sample
    double p_value = 1.0;      // two-sided
    UTestMethod method = UTestMethod::NormalApprox;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    bool tie_corrected = false;
};

inline constexpr double kMinPValue = 1e-300;

/// Midranks (1-based); tied values share the mean of the positions they span.
inline std::vector<double> rank_with_ties(std::span<const double> values) {
    if (values.empty()) throw Error(Errc::EmptyInput, "cannot rank an empty list");
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        // positions i+1 .. j share rank (i+1+j)/2
        double r = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
        i = j;
    }
    return ranks;
}

namespace detail {

/// Two-sided exact p over all C(n, n_a) assignments of the pooled midranks to
/// the first group. Works on doubled ranks so every comparison is integral.
inline double exact_u_pvalue(std::span<const double> ranks, std::size_t n_a, double rank_sum_a) {
    const std::size_t n = ranks.size();
    std::vector<std::int64_t> twice(n);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        twice[i] = static_cast<std::int64_t>(std::llround(2.0 * ranks[i]));
        total += twice[i];
    }
    // dp[k][s]: number of k-subsets whose doubled rank sum is s
    const std::size_t smax = static_cast<std::size_t>(total);
    std::vector<std::vector<double>> dp(n_a + 1, std::vector<double>(smax + 1, 0.0));
    dp[0][0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto w = static_cast<std::size_t>(twice[i]);
        for (std::size_t k = std::min(i + 1, n_a); k >= 1; --k) {
            auto& row = dp[k];
            const auto& prev = dp[k - 1];
            for (std::size_t s = smax; s >= w; --s) row[s] += prev[s - w];
        }
    }
    // twice the expected rank sum of group a: n_a (n + 1)
    const auto center = static_cast<std::int64_t>(n_a * (n + 1));
    const auto observed = static_cast<std::int64_t>(std::llround(2.0 * rank_sum_a));
    const std::int64_t dev_obs = std::llabs(observed - center);
    double extreme = 0.0;
    double all = 0.0;
    for (std::size_t s = 0; s <= smax; ++s) {
        double c = dp[n_a][s];
        if (c == 0.0) continue;
        all += c;
        if (std::llabs(static_cast<std::int64_t>(s) - center) >= dev_obs) extreme += c;
    }
    return extreme / all;
}

inline double standard_normal_upper_two_sided(double z) { return std::erfc(z / std::sqrt(2.0)); }

}  // namespace detail

/// Two-sided Mann-Whitney U test. U_a = R_a - n_a(n_a+1)/2 from pooled midranks.
/// Exact permutation p for pooled size <= exact_cutoff, otherwise the normal
/// approximation with optional tie-corrected variance and a 0.5 continuity correction.
inline UTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                  const UTestConfig& cfg = {}) {
    if (a.empty() || b.empty()) throw Error(Errc::EmptySample, "U test needs both samples non-empty");
    const std::size_t n_a = a.size(), n_b = b.size(), n = n_a + n_b;

    std::vector<double> pooled;
    pooled.reserve(n);
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto ranks = rank_with_ties(pooled);
    double rank_sum_a = 0.0;
    for (std::size_t i = 0; i < n_a; ++i) rank_sum_a += ranks[i];

    const double na = static_cast<double>(n_a), nb = static_cast<double>(n_b);
    UTestResult res;
    res.n_a = n_a;
    res.n_b = n_b;
    res.u_statistic = rank_sum_a - na * (na + 1.0) / 2.0;

    if (n <= cfg.exact_cutoff) {
        res.method = UTestMethod::ExactPermutation;
        res.p_value = detail::exact_u_pvalue(ranks, n_a, rank_sum_a);
    } else {
        res.method = UTestMethod::NormalApprox;
        const double mean = na * nb / 2.0;
        const double nn = static_cast<double>(n);
        double tie_term = 0.0;
        if (cfg.tie_correction) {
            std::vector<double> sorted(ranks);
            std::sort(sorted.begin(), sorted.end());
            std::size_t i = 0;
            while (i < n) {
                std::size_t j = i + 1;
                while (j < n && sorted[j] == sorted[i]) ++j;
                const double t = static_cast<double>(j - i);
                tie_term += t * t * t - t;
                i = j;
            }
            res.tie_corrected = true;
        }
        const double var = na * nb / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
        if (var <= 0.0) {
            res.p_value = 1.0;
        } else {
            const double dev = std::max(std::abs(res.u_statistic - mean) - 0.5, 0.0);
            res.p_value = detail::standard_normal_upper_two_sided(dev / std::sqrt(var));
        }
    }
    res.p_value = std::clamp(res.p_value, kMinPValue, 1.0);
    return res;
}

}  // namespace upset
