#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "dancehit/features.hpp"
#include "dancehit/rng.hpp"

using namespace dancehit;

namespace {
SongAnalysis make_analysis(int n_segments, int n_beats, Rng& rng) {
    SongAnalysis a;
    a.title = "t";
    a.artist = "a";
    a.duration = 200;
    a.tempo = 125;
    a.time_signature = 4;
    a.mode = 1;
    a.key = 5;
    a.loudness = -7;
    a.danceability = 0.8;
    a.energy = 0.6;
    for (int s = 0; s < n_segments; ++s) {
        std::array<double, 12> seg{};
        for (auto& v : seg) v = rng.normal();
        a.segments.push_back(seg);
    }
    for (int b = 0; b < n_beats; ++b) a.beats.push_back(0.5 * (b + 1));
    return a;
}
}  // namespace

TEST_CASE("feature schema is fixed at 138 unique names") {
    const auto& names = feature_schema();
    REQUIRE(names.size() == kFeatureCount);
    REQUIRE(names.size() == 138);
    std::set<std::string> unique(names.begin(), names.end());
    CHECK(unique.size() == names.size());

    CHECK(names[0] == "duration");
    CHECK(names[7] == "energy");
    CHECK(names[8] == "T1mean");
    CHECK(names[13] == "T180perc");
    CHECK(std::find(names.begin(), names.end(), "T880perc") != names.end());
    CHECK(std::find(names.begin(), names.end(), "T12median") != names.end());
    CHECK(std::find(names.begin(), names.end(), "Beatdiffrange") != names.end());
    CHECK(names.back() == "Beatdiffmedian");
}

TEST_CASE("feature vector length and schema stability") {
    Rng rng(1);
    auto a = make_analysis(30, 40, rng);
    auto v = feature_vector(a);
    REQUIRE(v.size() == 138);
    CHECK(v[0] == 200.0);
    CHECK(v[1] == 125.0);

    auto b = make_analysis(7, 12, rng);
    CHECK(feature_vector(b).size() == 138);  // same schema for every song
}

TEST_CASE("identical segments zero out the spread descriptors") {
    Rng rng(2);
    auto a = make_analysis(0, 40, rng);
    std::array<double, 12> seg{};
    for (int d = 0; d < 12; ++d) seg[d] = d + 0.5;
    for (int s = 0; s < 10; ++s) a.segments.push_back(seg);

    auto v = feature_vector(a);
    const auto& names = feature_schema();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i].starts_with("T") &&
            (names[i].ends_with("var") || names[i].ends_with("range")))
            CHECK(v[i] == 0.0);
    }
}

TEST_CASE("single segment analysis") {
    Rng rng(3);
    auto a = make_analysis(0, 10, rng);
    std::array<double, 12> seg{};
    seg[0] = 42.0;
    a.segments.push_back(seg);
    auto v = feature_vector(a);
    const auto& names = feature_schema();
    auto at = [&](const std::string& n) {
        return v[static_cast<std::size_t>(
            std::find(names.begin(), names.end(), n) - names.begin())];
    };
    CHECK(at("T1mean") == 42.0);
    CHECK(at("T1var") == 0.0);
}

TEST_CASE("unusable analyses are rejected") {
    Rng rng(4);
    auto no_segments = make_analysis(0, 10, rng);
    CHECK_THROWS(feature_vector(no_segments));

    auto one_beat = make_analysis(5, 1, rng);
    CHECK_THROWS(feature_vector(one_beat));

    auto bad_beats = make_analysis(5, 0, rng);
    bad_beats.beats = {1.0, 0.5};
    CHECK_THROWS(feature_vector(bad_beats));
}

TEST_CASE("yearly trend on exact data") {
    std::vector<std::pair<Date, double>> songs;
    for (int year = 2009; year <= 2013; ++year)
        for (int m = 1; m <= 3; ++m)
            songs.emplace_back(Date(year, m, 10), 2.0 * year - 3950.0);
    auto t = yearly_trend(songs);
    REQUIRE(t.yearly_means.size() == 5);
    CHECK(t.line.slope == Catch::Approx(2.0).margin(1e-9));
    CHECK(t.line.intercept == Catch::Approx(-3950.0).margin(1e-6));
    CHECK(t.line.n_years == 5);

    std::vector<std::pair<Date, double>> single_year = {{Date(2010, 1, 1), 1.0},
                                                        {Date(2010, 5, 1), 2.0}};
    CHECK_THROWS(yearly_trend(single_year));
}

TEST_CASE("yearly trend averages within years") {
    std::vector<std::pair<Date, double>> songs = {
        {Date(2010, 1, 1), 8.0},  {Date(2010, 7, 1), 12.0},  // mean 10
        {Date(2012, 2, 1), 13.0}, {Date(2012, 9, 1), 15.0},  // mean 14
    };
    auto t = yearly_trend(songs);
    CHECK(t.yearly_means[0] == std::pair{2010, 10.0});
    CHECK(t.yearly_means[1] == std::pair{2012, 14.0});
    CHECK(t.line.slope == Catch::Approx(2.0));
}
