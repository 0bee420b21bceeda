#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dancehit/csv.hpp"
#include "dancehit/date.hpp"

namespace dancehit {

enum class SongClass { Hit, NonHit };
enum class GapLabel { Hit, NonHit, Excluded };

inline std::string_view to_string(SongClass c) {
    return c == SongClass::Hit ? "Hit" : "NonHit";
}

// One chart entry: a song at a position on a given week.
struct ChartListing {
    std::string title;
    std::string artist;
    int position = 0;  // 1-based rank
    Date date;
};

namespace detail {

// Lowercases ASCII plus the Latin-1 supplement letters; other code points
// pass through unchanged.
inline void append_lowered(std::string& out, std::string_view utf8) {
    for (std::size_t i = 0; i < utf8.size();) {
        auto c = static_cast<unsigned char>(utf8[i]);
        if (c < 0x80) {
            out.push_back(static_cast<char>(
                c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
            ++i;
        } else if (c == 0xC3 && i + 1 < utf8.size()) {
            auto c2 = static_cast<unsigned char>(utf8[i + 1]);
            // U+00C0..U+00DE map to U+00E0..U+00FE, except U+00D7 (multiply sign).
            if (c2 >= 0x80 && c2 <= 0x9E && c2 != 0x97) c2 += 0x20;
            out.push_back(static_cast<char>(c));
            out.push_back(static_cast<char>(c2));
            i += 2;
        } else {
            out.push_back(static_cast<char>(c));
            ++i;
        }
    }
}

}  // namespace detail

// Lowercase, collapse whitespace runs, trim, and canonicalize featuring
// markers ("featuring", "feat", "feat.", "ft", "ft.") to the single token
// "feat" so re-spellings of the same credit line collide.
inline std::string normalize_name(std::string_view raw) {
    std::string lowered;
    lowered.reserve(raw.size());
    detail::append_lowered(lowered, raw);

    std::istringstream words(lowered);
    std::string word, out;
    while (words >> word) {
        if (word == "featuring" || word == "feat" || word == "feat." ||
            word == "ft" || word == "ft.")
            word = "feat";
        if (!out.empty()) out.push_back(' ');
        out += word;
    }
    return out;
}

// Normalized (title, artist) identity used to join chart rows with audio
// analyses.
struct SongKey {
    std::string title;
    std::string artist;

    auto operator<=>(const SongKey&) const = default;
};

inline SongKey make_song_key(std::string_view title, std::string_view artist) {
    return SongKey{normalize_name(title), normalize_name(artist)};
}

// Best (minimum) position a song ever reached, with its listing date span.
struct PeakRecord {
    SongKey key;
    int peak_position = 0;
    Date first_date;
    Date last_date;
};

// Hit / non-hit labeling rule. Peaks <= hit_max are hits, peaks >=
// nonhit_min are non-hits, anything strictly between is excluded.
struct GapScheme {
    std::string name;
    int hit_max = 0;
    int nonhit_min = 0;

    GapScheme(std::string scheme_name, int hit_max_pos, int nonhit_min_pos)
        : name(std::move(scheme_name)), hit_max(hit_max_pos), nonhit_min(nonhit_min_pos) {
        if (hit_max < 1 || nonhit_min <= hit_max)
            throw std::invalid_argument("GapScheme: require 1 <= hit_max < nonhit_min");
    }

    static GapScheme d1() { return GapScheme("D1", 10, 30); }
    static GapScheme d2() { return GapScheme("D2", 10, 20); }
    static GapScheme d3() { return GapScheme("D3", 20, 21); }

    static GapScheme by_name(std::string_view name) {
        if (name == "D1") return d1();
        if (name == "D2") return d2();
        if (name == "D3") return d3();
        throw std::invalid_argument("GapScheme: unknown scheme '" + std::string(name) +
                                    "' (expected D1, D2 or D3)");
    }
};

inline GapLabel label_with_gap(int peak_position, const GapScheme& scheme) {
    if (peak_position <= scheme.hit_max) return GapLabel::Hit;
    if (peak_position >= scheme.nonhit_min) return GapLabel::NonHit;
    return GapLabel::Excluded;
}

inline GapLabel label_with_gap(const PeakRecord& peak, const GapScheme& scheme) {
    return label_with_gap(peak.peak_position, scheme);
}

struct ChartParseResult {
    std::vector<ChartListing> listings;
    std::size_t skipped_rows = 0;
};

// Reads `title,artist,position,date` chart rows. A bad header is a hard
// error; rows whose position or date fail to parse are skipped and counted.
inline ChartParseResult parse_chart_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("parse_chart_csv: cannot open " + path.string());

    auto records = read_csv(in);
    if (records.empty())
        throw std::runtime_error("parse_chart_csv: " + path.string() +
                                 " is empty (expected header title,artist,position,date)");

    auto header = records.front();
    // Tolerate a UTF-8 BOM on the first header field.
    if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF"))
        header[0] = header[0].substr(3);
    const std::vector<std::string> expected = {"title", "artist", "position", "date"};
    if (header != expected)
        throw std::runtime_error("parse_chart_csv: " + path.string() +
                                 " has a bad header (expected title,artist,position,date)");

    ChartParseResult result;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& row = records[r];
        if (row.size() == 1 && row[0].empty()) continue;  // blank line
        if (row.size() != 4) {
            ++result.skipped_rows;
            continue;
        }
        int position = 0;
        if (!detail::parse_int(row[2], position) || position < 1) {
            ++result.skipped_rows;
            continue;
        }
        auto date = Date::parse(row[3]);
        if (!date) {
            ++result.skipped_rows;
            continue;
        }
        result.listings.push_back(ChartListing{row[0], row[1], position, *date});
    }
    return result;
}

// One record per distinct song key; peak = minimum position over all of the
// song's listings. Output is sorted by key, so it is independent of listing
// order.
inline std::vector<PeakRecord> compute_peaks(std::span<const ChartListing> listings) {
    std::map<SongKey, PeakRecord> by_key;
    for (const auto& l : listings) {
        SongKey key = make_song_key(l.title, l.artist);
        auto it = by_key.find(key);
        if (it == by_key.end()) {
            by_key.emplace(key, PeakRecord{key, l.position, l.date, l.date});
        } else {
            auto& rec = it->second;
            rec.peak_position = std::min(rec.peak_position, l.position);
            rec.first_date = std::min(rec.first_date, l.date);
            rec.last_date = std::max(rec.last_date, l.date);
        }
    }
    std::vector<PeakRecord> peaks;
    peaks.reserve(by_key.size());
    for (auto& [key, rec] : by_key) peaks.push_back(std::move(rec));
    return peaks;
}

}  // namespace dancehit
