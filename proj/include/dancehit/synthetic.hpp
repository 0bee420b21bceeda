#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dancehit/analysis.hpp"
#include "dancehit/chart.hpp"
#include "dancehit/csv.hpp"
#include "dancehit/rng.hpp"

namespace dancehit {

// Desk-scale data generator: charts plus matching analyses.
//  - separable: segment timbre means drift monotonically with peak
//    position, so any gap labeling is recoverable from the features
//  - noise: features independent of chart positions
//  - trend: loudness exactly linear in the entry year
enum class Scenario { Separable, Noise, Trend };

inline Scenario scenario_from_string(std::string_view s) {
    if (s == "separable") return Scenario::Separable;
    if (s == "noise") return Scenario::Noise;
    if (s == "trend") return Scenario::Trend;
    throw std::invalid_argument("unknown scenario '" + std::string(s) +
                                "' (expected separable, noise or trend)");
}

struct SyntheticConfig {
    std::uint64_t seed = 1;
    int n_songs = 400;
    Scenario scenario = Scenario::Noise;
};

struct SyntheticPaths {
    std::filesystem::path charts_csv;
    std::filesystem::path analyses_dir;
};

namespace detail {

// Saturday chart dates, weekly from 2009-05-02 through early 2013.
inline Date chart_week_date(int week) {
    static const std::vector<Date> calendar = [] {
        std::vector<Date> days;
        int y = 2009, m = 5, d = 2;
        static constexpr int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        for (int w = 0; w < 200; ++w) {
            days.emplace_back(y, m, d);
            d += 7;
            int dim = len[m - 1];
            if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) dim = 29;
            if (d > dim) {
                d -= dim;
                if (++m > 12) {
                    m = 1;
                    ++y;
                }
            }
        }
        return days;
    }();
    return calendar[static_cast<std::size_t>(week) % calendar.size()];
}

}  // namespace detail

inline SyntheticPaths generate_synthetic(const SyntheticConfig& config,
                                         const std::filesystem::path& out_dir) {
    if (config.n_songs < 1) throw std::invalid_argument("generate_synthetic: n_songs >= 1");
    std::filesystem::create_directories(out_dir);
    SyntheticPaths paths{out_dir / "charts.csv", out_dir / "analyses"};
    std::filesystem::create_directories(paths.analyses_dir);

    Rng root = Rng(config.seed).derive("synthetic");
    std::ofstream charts(paths.charts_csv, std::ios::binary);
    if (!charts)
        throw std::runtime_error("generate_synthetic: cannot write " +
                                 paths.charts_csv.string());
    charts << "title,artist,position,date\n";

    for (int s = 0; s < config.n_songs; ++s) {
        Rng rng = root.derive("song", static_cast<std::uint64_t>(s));

        char name[32];
        std::snprintf(name, sizeof(name), "Song %04d", s);
        char artist[32];
        std::snprintf(artist, sizeof(artist), "Artist %02d", static_cast<int>(rng.below(40)));

        int peak = 1 + static_cast<int>(rng.below(40));
        int entry_week = static_cast<int>(rng.below(195));
        Date entry_date = detail::chart_week_date(entry_week);

        std::vector<std::string> row = {name, artist, std::to_string(peak),
                                        entry_date.to_string()};
        write_csv_row(charts, row);
        // A lower follow-up listing the week after; the peak stays the minimum.
        int follow = std::min(40, peak + 1 + static_cast<int>(rng.below(8)));
        row = {name, artist, std::to_string(follow),
               detail::chart_week_date(entry_week + 1).to_string()};
        write_csv_row(charts, row);

        SongAnalysis a;
        a.title = name;
        a.artist = artist;
        a.duration = 180.0 + 90.0 * rng.real();
        a.tempo = 118.0 + 16.0 * rng.real();
        a.time_signature = rng.below(10) == 0 ? 3 : 4;
        a.mode = static_cast<int>(rng.below(2));
        a.key = static_cast<int>(rng.below(12));
        a.loudness = config.scenario == Scenario::Trend
                         ? -12.0 + 0.5 * (entry_date.year() - 2009)
                         : -9.0 + 3.0 * rng.real();
        a.danceability = rng.real();
        a.energy = rng.real();

        // Monotone-in-peak shift applied to the first timbre dimensions in
        // the separable scenario; zero otherwise.
        double strength = config.scenario == Scenario::Separable
                              ? (20.5 - peak) / 19.5
                              : 0.0;
        const double amplitude[12] = {2.0, -1.5, 1.0, 0, 0, 0, 0, 0, 0, 0, 0, 0};

        auto n_segments = 60 + rng.below(120);
        a.segments.reserve(n_segments);
        for (std::size_t g = 0; g < n_segments; ++g) {
            std::array<double, 12> seg{};
            for (int d = 0; d < 12; ++d)
                seg[static_cast<std::size_t>(d)] =
                    amplitude[d] * strength + rng.normal();
            a.segments.push_back(seg);
        }

        double period = 60.0 / a.tempo;
        double t = 0.2 + 0.1 * rng.real();
        while (t < a.duration) {
            a.beats.push_back(t);
            t += std::max(period + 0.01 * rng.normal(), 0.05);
        }

        char fname[32];
        std::snprintf(fname, sizeof(fname), "song_%04d.json", s);
        std::ofstream out(paths.analyses_dir / fname, std::ios::binary);
        out << analysis_to_json(a).dump(2) << '\n';
    }
    return paths;
}

}  // namespace dancehit
