// Shared dataset builders for the test suites.
#pragma once

#include <string>
#include <vector>

#include "dancehit/dataset.hpp"
#include "dancehit/rng.hpp"

namespace fixtures {

using dancehit::Dataset;
using dancehit::Date;
using dancehit::Rng;
using dancehit::SongClass;

inline std::vector<std::string> feature_names(std::size_t p) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < p; ++i) names.push_back("f" + std::to_string(i));
    return names;
}

// Strictly increasing in i (28-day months, 336-day years).
inline Date date_from_ordinal(int i) {
    return Date(2009 + i / 336, 1 + (i % 336) / 28, 1 + i % 28);
}

// Random rows, labels independent of the features.
inline Dataset random_dataset(std::size_t n, std::size_t p, std::uint64_t seed,
                              double hit_fraction = 0.5) {
    Rng rng(seed);
    Dataset ds;
    ds.feature_names = feature_names(p);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(p);
        for (auto& v : row) v = rng.normal();
        ds.rows.push_back(std::move(row));
        ds.labels.push_back(rng.real() < hit_fraction ? SongClass::Hit : SongClass::NonHit);
        ds.dates.push_back(date_from_ordinal(static_cast<int>(i)));
    }
    // make sure both classes show up
    ds.labels[0] = SongClass::Hit;
    ds.labels[n - 1] = SongClass::NonHit;
    return ds;
}

// Hits centered at +mu on every feature, non-hits at -mu.
inline Dataset separable_dataset(std::size_t n, std::size_t p, double mu, std::uint64_t seed) {
    Rng rng(seed);
    Dataset ds;
    ds.feature_names = feature_names(p);
    for (std::size_t i = 0; i < n; ++i) {
        bool hit = i % 2 == 0;
        std::vector<double> row(p);
        for (auto& v : row) v = rng.normal() + (hit ? mu : -mu);
        ds.rows.push_back(std::move(row));
        ds.labels.push_back(hit ? SongClass::Hit : SongClass::NonHit);
        ds.dates.push_back(date_from_ordinal(static_cast<int>(i)));
    }
    return ds;
}

// 400 instances shaped like the D1 experiment: 253 hits / 147 non-hits
// overall; ordered by date the first 360 hold 218 hits / 142 non-hits and
// the last 40 hold 35 hits / 5 non-hits.
inline Dataset d1_like_dataset(std::uint64_t seed = 7) {
    Rng rng(seed);
    Dataset ds;
    ds.feature_names = feature_names(3);
    auto add = [&](SongClass label, int date_ordinal) {
        std::vector<double> row(3);
        for (auto& v : row) v = rng.normal();
        ds.rows.push_back(std::move(row));
        ds.labels.push_back(label);
        ds.dates.push_back(date_from_ordinal(date_ordinal));
    };
    int ordinal = 0;
    for (int i = 0; i < 218; ++i) add(SongClass::Hit, ordinal++);
    for (int i = 0; i < 142; ++i) add(SongClass::NonHit, ordinal++);
    for (int i = 0; i < 35; ++i) add(SongClass::Hit, ordinal++);
    for (int i = 0; i < 5; ++i) add(SongClass::NonHit, ordinal++);
    return ds;
}

}  // namespace fixtures
