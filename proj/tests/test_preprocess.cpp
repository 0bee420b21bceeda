#include <catch2/catch_amalgamated.hpp>

#include "dancehit/preprocess.hpp"
#include "support/fixtures.hpp"

using namespace dancehit;

TEST_CASE("standardizer on a single column") {
    Matrix rows = {{2}, {4}, {6}};
    auto s = Standardizer::fit(rows);
    CHECK(s.means()[0] == 4.0);
    CHECK(s.stdevs()[0] == Catch::Approx(std::sqrt(8.0 / 3.0)));
    auto t = s.transform(rows);
    CHECK(t[0][0] == Catch::Approx(-1.224744871391589).margin(1e-12));
    CHECK(t[1][0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(t[2][0] == Catch::Approx(1.224744871391589).margin(1e-12));
}

TEST_CASE("constant columns standardize to zero") {
    Matrix rows = {{5, 1}, {5, 2}, {5, 3}};
    auto s = Standardizer::fit(rows);
    auto t = s.transform(rows);
    for (const auto& r : t) CHECK(r[0] == 0.0);
}

TEST_CASE("standardized training columns have mean 0 and variance 1") {
    auto ds = fixtures::random_dataset(50, 6, 3);
    auto s = Standardizer::fit(ds.rows);
    auto t = s.transform(ds.rows);
    for (std::size_t j = 0; j < 6; ++j) {
        double mean = 0;
        for (const auto& r : t) mean += r[j];
        mean /= 50.0;
        double var = 0;
        for (const auto& r : t) var += (r[j] - mean) * (r[j] - mean);
        var /= 50.0;
        CHECK(std::fabs(mean) < 1e-9);
        CHECK(std::fabs(var - 1.0) < 1e-9);
    }
    CHECK_THROWS(Standardizer::fit(Matrix{{1.0}}));
}

TEST_CASE("feature-class correlation") {
    std::vector<SongClass> labels = {SongClass::Hit, SongClass::Hit, SongClass::NonHit,
                                     SongClass::NonHit};
    std::vector<double> encoded = {1, 1, 0, 0};
    CHECK(feature_class_correlation(encoded, labels) == Catch::Approx(1.0));

    std::vector<double> alternating = {1, -1, 1, -1};
    CHECK(feature_class_correlation(alternating, labels) == Catch::Approx(0.0).margin(1e-12));

    std::vector<double> constant = {2, 2, 2, 2};
    CHECK(feature_class_correlation(constant, labels) == 0.0);

    std::vector<SongClass> one_class = {SongClass::Hit, SongClass::Hit};
    std::vector<double> col = {1, 2};
    CHECK_THROWS(feature_class_correlation(col, one_class));
}

TEST_CASE("cfs merit formula") {
    Matrix ff = {{1.0, 1.0}, {1.0, 1.0}};
    std::vector<double> fc = {0.7, 0.5};

    std::vector<std::size_t> k1 = {0};
    CHECK(cfs_merit(k1, fc, ff) == Catch::Approx(0.7).margin(1e-12));

    std::vector<double> fc2 = {0.5, 0.5};
    std::vector<std::size_t> k2 = {0, 1};
    CHECK(cfs_merit(k2, fc2, ff) == Catch::Approx(0.5).margin(1e-12));

    Matrix ff_zero = {{1.0, 0.0}, {0.0, 1.0}};
    CHECK(cfs_merit(k2, fc2, ff_zero) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));

    CHECK_THROWS(cfs_merit(std::vector<std::size_t>{}, fc, ff));
}

TEST_CASE("cfs merit properties") {
    // permutation invariance
    Matrix ff = {{1.0, 0.3, 0.2}, {0.3, 1.0, 0.6}, {0.2, 0.6, 1.0}};
    std::vector<double> fc = {0.4, 0.8, 0.6};
    std::vector<std::size_t> sub = {0, 1, 2};
    std::vector<std::size_t> perm = {2, 0, 1};
    CHECK(cfs_merit(sub, fc, ff) == Catch::Approx(cfs_merit(perm, fc, ff)));

    // strictly decreasing in the mean feature-feature correlation
    double prev = 10;
    for (double rff : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        Matrix m = {{1.0, rff}, {rff, 1.0}};
        std::vector<double> f = {0.5, 0.5};
        std::vector<std::size_t> pair = {0, 1};
        double merit = cfs_merit(pair, f, m);
        CHECK(merit < prev);
        prev = merit;
    }
}

namespace {
// One planted feature carrying the labels plus pure noise columns.
Dataset planted_dataset(std::size_t n, std::size_t noise_features, std::uint64_t seed) {
    Rng rng(seed);
    Dataset ds;
    ds.feature_names = fixtures::feature_names(noise_features + 1);
    for (std::size_t i = 0; i < n; ++i) {
        bool hit = i % 2 == 0;
        std::vector<double> row(noise_features + 1);
        row[0] = hit ? 1.0 : 0.0;
        for (std::size_t j = 1; j <= noise_features; ++j) row[j] = rng.normal();
        ds.rows.push_back(std::move(row));
        ds.labels.push_back(hit ? SongClass::Hit : SongClass::NonHit);
        ds.dates.push_back(fixtures::date_from_ordinal(static_cast<int>(i)));
    }
    return ds;
}
}  // namespace

TEST_CASE("genetic search keeps the planted feature") {
    auto ds = planted_dataset(100, 20, 42);
    auto std = Standardizer::fit(ds.rows);
    auto rows = std.transform(ds.rows);

    GaConfig config;
    config.seed = 7;
    auto subset = genetic_select(rows, ds.labels, config);
    CHECK(subset.mask[0]);
    CHECK(subset.merit > 0.5);
}

TEST_CASE("redundant copies are penalized") {
    // merit of {planted} must beat {planted, identical copy}
    Matrix ff = {{1.0, 1.0}, {1.0, 1.0}};
    std::vector<double> fc = {1.0, 1.0};
    std::vector<std::size_t> one = {0};
    std::vector<std::size_t> both = {0, 1};
    CHECK(cfs_merit(one, fc, ff) >= cfs_merit(both, fc, ff));
}

TEST_CASE("genetic search is deterministic and monotone in best-ever merit") {
    auto ds = planted_dataset(60, 10, 3);
    auto rows = Standardizer::fit(ds.rows).transform(ds.rows);
    GaConfig config;
    config.seed = 11;

    std::vector<double> trace;
    auto s1 = genetic_select(rows, ds.labels, config, &trace);
    auto s2 = genetic_select(rows, ds.labels, config);
    CHECK(s1.mask == s2.mask);
    CHECK(s1.merit == s2.merit);
    REQUIRE(trace.size() == static_cast<std::size_t>(config.generations) + 1);
    for (std::size_t g = 1; g < trace.size(); ++g) CHECK(trace[g] >= trace[g - 1]);

    // always at least one feature selected
    CHECK(s1.count() >= 1);
}
