#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dancehit/dataset.hpp"
#include "dancehit/features.hpp"
#include "dancehit/synthetic.hpp"

using namespace dancehit;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AssembleReport assemble_from(const SyntheticPaths& paths, const GapScheme& scheme) {
    auto parsed = parse_chart_csv(paths.charts_csv);
    auto peaks = compute_peaks(parsed.listings);
    auto analyses = load_analysis_dir(paths.analyses_dir);
    return assemble_dataset(peaks, analyses, scheme,
                            [](const SongAnalysis& a) { return feature_vector(a); },
                            feature_schema());
}
}  // namespace

TEST_CASE("synthetic corpus loads through the full ingestion path") {
    SyntheticConfig config;
    config.seed = 5;
    config.n_songs = 120;
    config.scenario = Scenario::Noise;
    auto dir = fs::temp_directory_path() / "synth_load";
    fs::remove_all(dir);
    auto paths = generate_synthetic(config, dir);

    auto d1 = assemble_from(paths, GapScheme::d1());
    CHECK(d1.dataset.n_features() == 138);
    CHECK(d1.dataset.count(SongClass::Hit) > 10);
    CHECK(d1.dataset.count(SongClass::NonHit) > 10);

    // smaller gap keeps strictly more songs
    auto d2 = assemble_from(paths, GapScheme::d2());
    CHECK(d2.dataset.n_rows() > d1.dataset.n_rows());
    auto d3 = assemble_from(paths, GapScheme::d3());
    CHECK(d3.dataset.n_rows() > d2.dataset.n_rows());
}

TEST_CASE("same seed reproduces byte-identical outputs") {
    SyntheticConfig config;
    config.seed = 9;
    config.n_songs = 25;
    config.scenario = Scenario::Separable;

    auto dir1 = fs::temp_directory_path() / "synth_a";
    auto dir2 = fs::temp_directory_path() / "synth_b";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    auto p1 = generate_synthetic(config, dir1);
    auto p2 = generate_synthetic(config, dir2);

    CHECK(slurp(p1.charts_csv) == slurp(p2.charts_csv));
    CHECK(slurp(p1.analyses_dir / "song_0000.json") == slurp(p2.analyses_dir / "song_0000.json"));
    CHECK(slurp(p1.analyses_dir / "song_0024.json") == slurp(p2.analyses_dir / "song_0024.json"));

    config.seed = 10;
    auto dir3 = fs::temp_directory_path() / "synth_c";
    fs::remove_all(dir3);
    auto p3 = generate_synthetic(config, dir3);
    CHECK(slurp(p1.charts_csv) != slurp(p3.charts_csv));
}

TEST_CASE("trend scenario embeds the exact loudness drift") {
    SyntheticConfig config;
    config.seed = 3;
    config.n_songs = 150;
    config.scenario = Scenario::Trend;
    auto dir = fs::temp_directory_path() / "synth_trend";
    fs::remove_all(dir);
    auto paths = generate_synthetic(config, dir);

    auto parsed = parse_chart_csv(paths.charts_csv);
    auto peaks = compute_peaks(parsed.listings);
    auto analyses = load_analysis_dir(paths.analyses_dir);

    std::vector<std::pair<Date, double>> series;
    for (const auto& peak : peaks) {
        auto it = analyses.find(peak.key);
        REQUIRE(it != analyses.end());
        series.emplace_back(peak.first_date, it->second.loudness);
    }
    auto trend = yearly_trend(series);
    CHECK(trend.line.slope == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("scenario parsing") {
    CHECK(scenario_from_string("separable") == Scenario::Separable);
    CHECK(scenario_from_string("noise") == Scenario::Noise);
    CHECK(scenario_from_string("trend") == Scenario::Trend);
    CHECK_THROWS(scenario_from_string("nope"));
}
