#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "dancehit/numeric.hpp"

namespace dancehit {

// The ten per-series descriptors computed over every temporal series
// (one timbre dimension, or the beat-difference series).
struct DescriptiveStats {
    double mean = 0;
    double variance = 0;
    double skewness = 0;
    double kurtosis = 0;
    double stdev = 0;
    double p80 = 0;
    double min = 0;
    double max = 0;
    double range = 0;
    double median = 0;
};

// Linear interpolation between closest ranks: position = p * (n - 1),
// zero-based. Input must be sorted ascending.
inline double percentile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty())
        throw std::invalid_argument("percentile_sorted: empty input");
    if (sorted.size() == 1) return sorted[0];
    double pos = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo >= sorted.size() - 1) return sorted[sorted.size() - 1];
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Population moments. Skewness = m3 / m2^(3/2); kurtosis = m4 / m2^2
// (non-excess, normal ~ 3). A constant series gets skewness and kurtosis 0
// so downstream feature rows stay finite.
inline DescriptiveStats descriptive_stats(std::span<const double> series) {
    if (series.empty())
        throw std::invalid_argument("descriptive_stats: empty series");
    if (!all_finite(series))
        throw std::invalid_argument("descriptive_stats: non-finite value in series");

    const auto n = static_cast<double>(series.size());
    DescriptiveStats s;

    double sum = 0;
    for (double x : series) sum += x;
    s.mean = sum / n;

    double m2 = 0, m3 = 0, m4 = 0;
    for (double x : series) {
        double d = x - s.mean;
        double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    s.variance = m2;
    s.stdev = std::sqrt(m2);
    if (m2 > 0) {
        s.skewness = m3 / (m2 * s.stdev);
        s.kurtosis = m4 / (m2 * m2);
    }

    std::vector<double> sorted(series.begin(), series.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.range = s.max - s.min;
    s.p80 = percentile_sorted(sorted, 0.80);
    s.median = percentile_sorted(sorted, 0.50);
    return s;
}

// Time differences between consecutive beat onsets.
inline std::vector<double> beatdiff_series(std::span<const double> beats) {
    if (beats.size() < 2)
        throw std::invalid_argument("beatdiff_series: need at least 2 beats");
    std::vector<double> diffs;
    diffs.reserve(beats.size() - 1);
    for (std::size_t i = 0; i + 1 < beats.size(); ++i) {
        double d = beats[i + 1] - beats[i];
        if (!(d > 0))
            throw std::invalid_argument("beatdiff_series: beats not strictly increasing");
        diffs.push_back(d);
    }
    return diffs;
}

struct TrendLine {
    double slope = 0;
    double intercept = 0;
    int n_years = 0;
};

// Ordinary least squares y = slope * x + intercept, closed form.
inline TrendLine ols_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ols_line: need >= 2 paired points");
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0)
        throw std::invalid_argument("ols_line: x values are all identical");
    TrendLine t;
    t.slope = sxy / sxx;
    t.intercept = my - t.slope * mx;
    t.n_years = static_cast<int>(x.size());
    return t;
}

}  // namespace dancehit
