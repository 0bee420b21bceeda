#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dancehit/analysis.hpp"
#include "dancehit/stats.hpp"

namespace dancehit {

// 8 track-level features + 10 descriptors x 12 timbre dimensions + 10
// descriptors of the beat-difference series.
inline constexpr int kFeatureCount = 138;

namespace detail {
inline const std::vector<std::string>& stat_suffixes() {
    static const std::vector<std::string> suffixes = {
        "mean", "var", "skewness", "kurtosis", "stdev",
        "80perc", "min", "max", "range", "median"};
    return suffixes;
}

inline std::vector<double> stats_in_schema_order(const DescriptiveStats& s) {
    return {s.mean, s.variance, s.skewness, s.kurtosis, s.stdev,
            s.p80, s.min, s.max, s.range, s.median};
}
}  // namespace detail

// The fixed 138-name schema shared by every song. Timbre descriptors are
// named `T<dim><stat>` (e.g. T1mean, T880perc), beat-difference descriptors
// `Beatdiff<stat>`.
inline const std::vector<std::string>& feature_schema() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n = {"duration", "tempo", "time_signature", "mode",
                                      "key", "loudness", "danceability", "energy"};
        for (int d = 1; d <= 12; ++d)
            for (const auto& stat : detail::stat_suffixes())
                n.push_back("T" + std::to_string(d) + stat);
        for (const auto& stat : detail::stat_suffixes())
            n.push_back("Beatdiff" + stat);
        return n;
    }();
    return names;
}

inline std::vector<double> feature_vector(const SongAnalysis& a) {
    a.validate();
    if (a.segments.empty())
        throw std::invalid_argument("feature_vector: analysis has no segments");

    std::vector<double> v;
    v.reserve(kFeatureCount);
    v.push_back(a.duration);
    v.push_back(a.tempo);
    v.push_back(static_cast<double>(a.time_signature));
    v.push_back(static_cast<double>(a.mode));
    v.push_back(static_cast<double>(a.key));
    v.push_back(a.loudness);
    v.push_back(a.danceability);
    v.push_back(a.energy);

    std::vector<double> series(a.segments.size());
    for (int d = 0; d < 12; ++d) {
        for (std::size_t i = 0; i < a.segments.size(); ++i)
            series[i] = a.segments[i][static_cast<std::size_t>(d)];
        auto s = detail::stats_in_schema_order(descriptive_stats(series));
        v.insert(v.end(), s.begin(), s.end());
    }

    auto diffs = beatdiff_series(a.beats);  // throws if < 2 beats
    auto s = detail::stats_in_schema_order(descriptive_stats(diffs));
    v.insert(v.end(), s.begin(), s.end());

    if (!all_finite(v))
        throw std::invalid_argument("feature_vector: produced a non-finite value");
    return v;
}

struct YearlyTrend {
    std::vector<std::pair<int, double>> yearly_means;  // sorted by year
    TrendLine line;
};

// Averages values per calendar year and fits an OLS line of the per-year
// means against the year.
inline YearlyTrend yearly_trend(std::span<const std::pair<Date, double>> songs) {
    std::map<int, std::pair<double, int>> acc;  // year -> (sum, count)
    for (const auto& [date, value] : songs) {
        auto& [sum, count] = acc[date.year()];
        sum += value;
        ++count;
    }
    if (acc.size() < 2)
        throw std::invalid_argument("yearly_trend: need at least 2 distinct years");

    YearlyTrend t;
    std::vector<double> xs, ys;
    for (const auto& [year, sc] : acc) {
        double mean = sc.first / sc.second;
        t.yearly_means.emplace_back(year, mean);
        xs.push_back(static_cast<double>(year));
        ys.push_back(mean);
    }
    t.line = ols_line(xs, ys);
    return t;
}

}  // namespace dancehit
