#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "dancehit/numeric.hpp"

namespace dancehit {

namespace detail {

// Ranks of |d| with average ranks on ties, doubled so they stay integral
// (an average of two integers is a half-integer).
inline std::vector<std::int64_t> doubled_ranks(const std::vector<double>& abs_d) {
    std::vector<std::size_t> order(abs_d.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return abs_d[a] < abs_d[b]; });
    std::vector<std::int64_t> r2(abs_d.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && abs_d[order[j]] == abs_d[order[i]]) ++j;
        std::int64_t doubled_avg = static_cast<std::int64_t>(i + 1 + j);  // 2 * (i+1 + j)/2
        for (std::size_t t = i; t < j; ++t) r2[order[t]] = doubled_avg;
        i = j;
    }
    return r2;
}

// Null distribution of 2*W+ over all 2^n sign assignments, as counts by sum.
inline std::vector<std::uint64_t> signed_rank_counts(const std::vector<std::int64_t>& r2) {
    std::int64_t total = std::accumulate(r2.begin(), r2.end(), std::int64_t{0});
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(total) + 1, 0);
    counts[0] = 1;
    std::int64_t reach = 0;
    for (std::int64_t r : r2) {
        for (std::int64_t s = reach; s >= 0; --s)
            if (counts[static_cast<std::size_t>(s)])
                counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
        reach += r;
    }
    return counts;
}

}  // namespace detail

// Two-sided Wilcoxon signed-rank p-value for paired samples. Zero
// differences are dropped; ties in |d| get average ranks. For n <= 25 the
// p-value is exact over the 2^n equiprobable sign assignments:
// p = P(min(W+, W-) <= observed min). Larger n uses the normal
// approximation with tie correction and continuity correction.
inline double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("wilcoxon_signed_rank: length mismatch or empty");

    std::vector<double> abs_d;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        if (d == 0) continue;
        abs_d.push_back(std::fabs(d));
        positive.push_back(d > 0);
    }
    const std::size_t n = abs_d.size();
    if (n == 0) return 1.0;

    auto r2 = detail::doubled_ranks(abs_d);
    std::int64_t w2_plus = 0, total2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total2 += r2[i];
        if (positive[i]) w2_plus += r2[i];
    }
    std::int64_t w2_minus = total2 - w2_plus;
    std::int64_t w2 = std::min(w2_plus, w2_minus);

    if (n <= 25) {
        auto counts = detail::signed_rank_counts(r2);
        // assignments with min(W+, W-) <= w2: sum <= w2 or sum >= total - w2
        std::uint64_t extreme = 0;
        for (std::int64_t s = 0; s <= total2; ++s) {
            if (s <= w2 || total2 - s <= w2)
                extreme += counts[static_cast<std::size_t>(s)];
        }
        double denom = std::ldexp(1.0, static_cast<int>(n));  // 2^n
        return std::min(1.0, static_cast<double>(extreme) / denom);
    }

    // Normal approximation: W+ has mean n(n+1)/4 and variance
    // n(n+1)(2n+1)/24 - sum(t^3 - t)/48 over tie groups.
    double nd = static_cast<double>(n);
    double mean = nd * (nd + 1.0) / 4.0;
    double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0;
    std::vector<double> sorted_abs = abs_d;
    std::sort(sorted_abs.begin(), sorted_abs.end());
    std::size_t i = 0;
    while (i < sorted_abs.size()) {
        std::size_t j = i;
        while (j < sorted_abs.size() && sorted_abs[j] == sorted_abs[i]) ++j;
        double t = static_cast<double>(j - i);
        var -= (t * t * t - t) / 48.0;
        i = j;
    }
    if (var <= 0) return 1.0;
    double w = static_cast<double>(w2) / 2.0;
    double z = (w - mean + 0.5) / std::sqrt(var);
    return std::min(1.0, 2.0 * std_normal_cdf(z));
}

}  // namespace dancehit
