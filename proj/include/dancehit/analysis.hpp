#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dancehit/chart.hpp"

namespace dancehit {

// Per-song audio description: the eight track-level fields plus the
// per-segment timbre matrix and the beat onset times.
struct SongAnalysis {
    std::string title;
    std::string artist;
    double duration = 0;       // seconds
    double tempo = 0;          // beats per minute
    int time_signature = 4;    // beats per bar
    int mode = 0;              // 0 minor, 1 major
    int key = 0;               // 0..11
    double loudness = 0;       // dB
    double danceability = 0;   // [0, 1]
    double energy = 0;         // [0, 1]
    std::vector<std::array<double, 12>> segments;
    std::vector<double> beats;  // onset seconds, strictly increasing

    SongKey song_key() const { return make_song_key(title, artist); }

    void validate() const {
        if (!(duration > 0)) throw std::invalid_argument("SongAnalysis: duration must be > 0");
        if (!(tempo > 0)) throw std::invalid_argument("SongAnalysis: tempo must be > 0");
        if (mode != 0 && mode != 1) throw std::invalid_argument("SongAnalysis: mode must be 0 or 1");
        if (key < 0 || key > 11) throw std::invalid_argument("SongAnalysis: key must be in 0..11");
        for (std::size_t i = 0; i + 1 < beats.size(); ++i)
            if (!(beats[i] < beats[i + 1]))
                throw std::invalid_argument("SongAnalysis: beats must be strictly increasing");
    }
};

inline nlohmann::json analysis_to_json(const SongAnalysis& a) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : a.segments) segs.push_back(s);
    return nlohmann::json{
        {"title", a.title},
        {"artist", a.artist},
        {"duration", a.duration},
        {"tempo", a.tempo},
        {"time_signature", a.time_signature},
        {"mode", a.mode},
        {"key", a.key},
        {"loudness", a.loudness},
        {"danceability", a.danceability},
        {"energy", a.energy},
        {"segments", segs},
        {"beats", a.beats},
    };
}

inline SongAnalysis analysis_from_json(const nlohmann::json& j) {
    SongAnalysis a;
    a.title = j.value("title", std::string{});
    a.artist = j.value("artist", std::string{});
    a.duration = j.at("duration").get<double>();
    a.tempo = j.at("tempo").get<double>();
    a.time_signature = j.at("time_signature").get<int>();
    a.mode = j.at("mode").get<int>();
    a.key = j.at("key").get<int>();
    a.loudness = j.at("loudness").get<double>();
    a.danceability = j.at("danceability").get<double>();
    a.energy = j.at("energy").get<double>();
    for (const auto& seg : j.at("segments")) {
        if (!seg.is_array() || seg.size() != 12)
            throw std::invalid_argument("SongAnalysis: every segment needs exactly 12 components");
        std::array<double, 12> v{};
        for (std::size_t i = 0; i < 12; ++i) v[i] = seg[i].get<double>();
        a.segments.push_back(v);
    }
    a.beats = j.at("beats").get<std::vector<double>>();
    a.validate();
    return a;
}

inline SongAnalysis load_analysis(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_analysis: cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        return analysis_from_json(j);
    } catch (const std::exception& e) {
        throw std::runtime_error("load_analysis: " + path.string() + ": " + e.what());
    }
}

// Loads every *.json in a directory, keyed by normalized (title, artist).
// Files are visited in sorted name order so duplicate keys resolve
// deterministically (last one wins).
inline std::map<SongKey, SongAnalysis> load_analysis_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("load_analysis_dir: " + dir.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::map<SongKey, SongAnalysis> out;
    for (const auto& f : files) {
        SongAnalysis a = load_analysis(f);
        out[a.song_key()] = std::move(a);
    }
    return out;
}

}  // namespace dancehit
