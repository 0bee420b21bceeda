#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dancehit/analysis.hpp"
#include "dancehit/chart.hpp"
#include "dancehit/csv.hpp"
#include "dancehit/numeric.hpp"
#include "dancehit/rng.hpp"

namespace dancehit {

using Matrix = std::vector<std::vector<double>>;

// Labeled numeric instances with the fixed feature schema and per-row dates
// for chronological splitting. Immutable once assembled.
struct Dataset {
    std::vector<std::string> feature_names;
    Matrix rows;
    std::vector<SongClass> labels;
    std::vector<Date> dates;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_features() const { return feature_names.size(); }

    std::size_t count(SongClass c) const {
        return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), c));
    }

    void validate() const {
        if (rows.size() != labels.size() || rows.size() != dates.size())
            throw std::invalid_argument("Dataset: row/label/date counts differ");
        for (const auto& r : rows) {
            if (r.size() != feature_names.size())
                throw std::invalid_argument("Dataset: row width != feature name count");
            if (!all_finite(r))
                throw std::invalid_argument("Dataset: non-finite value in a row");
        }
    }

    Dataset subset(std::span<const std::size_t> indices) const {
        Dataset out;
        out.feature_names = feature_names;
        out.rows.reserve(indices.size());
        for (std::size_t i : indices) {
            out.rows.push_back(rows[i]);
            out.labels.push_back(labels[i]);
            out.dates.push_back(dates[i]);
        }
        return out;
    }

    // Keeps only the named columns, in the given order.
    Dataset project(std::span<const std::size_t> feature_indices) const {
        Dataset out;
        out.labels = labels;
        out.dates = dates;
        for (std::size_t f : feature_indices) out.feature_names.push_back(feature_names[f]);
        out.rows.reserve(rows.size());
        for (const auto& r : rows) {
            std::vector<double> nr;
            nr.reserve(feature_indices.size());
            for (std::size_t f : feature_indices) nr.push_back(r[f]);
            out.rows.push_back(std::move(nr));
        }
        return out;
    }
};

struct AssembleReport {
    Dataset dataset;
    std::size_t dropped_excluded = 0;       // peak inside the gap
    std::size_t dropped_no_analysis = 0;    // no matching audio analysis
    std::size_t dropped_bad_features = 0;   // feature computation failed (missing data)
};

using FeatureFn = std::function<std::vector<double>(const SongAnalysis&)>;

// Joins peaks with analyses, labels through the gap scheme, and computes
// one feature row per usable song. Excluded songs and songs with missing or
// unusable analyses are dropped and counted.
inline AssembleReport assemble_dataset(std::span<const PeakRecord> peaks,
                                       const std::map<SongKey, SongAnalysis>& analyses,
                                       const GapScheme& scheme,
                                       const FeatureFn& feature_fn,
                                       const std::vector<std::string>& feature_names) {
    AssembleReport report;
    report.dataset.feature_names = feature_names;
    for (const auto& peak : peaks) {
        GapLabel label = label_with_gap(peak, scheme);
        if (label == GapLabel::Excluded) {
            ++report.dropped_excluded;
            continue;
        }
        auto it = analyses.find(peak.key);
        if (it == analyses.end()) {
            ++report.dropped_no_analysis;
            continue;
        }
        std::vector<double> row;
        try {
            row = feature_fn(it->second);
        } catch (const std::exception&) {
            ++report.dropped_bad_features;
            continue;
        }
        if (row.size() != feature_names.size())
            throw std::runtime_error("assemble_dataset: feature_fn width != schema width");
        report.dataset.rows.push_back(std::move(row));
        report.dataset.labels.push_back(label == GapLabel::Hit ? SongClass::Hit
                                                               : SongClass::NonHit);
        report.dataset.dates.push_back(peak.first_date);
    }
    if (report.dataset.rows.empty())
        throw std::runtime_error("assemble_dataset: no usable songs under scheme " + scheme.name);
    report.dataset.validate();
    return report;
}

// Stratified partition: each class is shuffled with the seeded stream and
// dealt round-robin, so per-fold class counts differ from the global
// proportions by at most one instance per class. Fold indices come back
// sorted.
inline std::vector<std::vector<std::size_t>> stratified_folds(const Dataset& ds, int k,
                                                              std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_folds: k must be >= 2");
    Rng rng = Rng(seed).derive("stratified_folds");

    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    for (SongClass c : {SongClass::Hit, SongClass::NonHit}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < ds.labels.size(); ++i)
            if (ds.labels[i] == c) members.push_back(i);
        if (members.size() < static_cast<std::size_t>(k))
            throw std::runtime_error("stratified_folds: class " + std::string(to_string(c)) +
                                     " has fewer than k members");
        rng.shuffle(members);
        for (std::size_t m = 0; m < members.size(); ++m)
            folds[m % static_cast<std::size_t>(k)].push_back(members[m]);
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

// Chronological split: rows sorted ascending by date, first
// floor(n * train_fraction) go to train. Ties keep their original order.
inline std::pair<Dataset, Dataset> out_of_time_split(const Dataset& ds, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("out_of_time_split: train_fraction must be in (0,1)");
    std::vector<std::size_t> order(ds.n_rows());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ds.dates[a] < ds.dates[b]; });
    auto n_train = static_cast<std::size_t>(static_cast<double>(ds.n_rows()) * train_fraction);
    std::vector<std::size_t> train_idx(order.begin(), order.begin() + n_train);
    std::vector<std::size_t> test_idx(order.begin() + n_train, order.end());
    return {ds.subset(train_idx), ds.subset(test_idx)};
}

// Dataset CSV: feature-name header plus trailing `label,date` columns.
inline void write_dataset_csv(std::ostream& os, const Dataset& ds) {
    std::vector<std::string> header = ds.feature_names;
    header.push_back("label");
    header.push_back("date");
    write_csv_row(os, header);
    std::vector<std::string> fields;
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        fields.clear();
        for (double v : ds.rows[i]) fields.push_back(format_double(v));
        fields.emplace_back(to_string(ds.labels[i]));
        fields.push_back(ds.dates[i].to_string());
        write_csv_row(os, fields);
    }
}

inline void write_dataset_csv(const std::filesystem::path& path, const Dataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_dataset_csv: cannot open " + path.string());
    write_dataset_csv(out, ds);
}

inline Dataset read_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_dataset_csv: cannot open " + path.string());
    auto records = read_csv(in);
    if (records.size() < 2)
        throw std::runtime_error("read_dataset_csv: " + path.string() + " has no data rows");
    const auto& header = records.front();
    if (header.size() < 3 || header[header.size() - 2] != "label" || header.back() != "date")
        throw std::runtime_error("read_dataset_csv: expected trailing label,date columns");

    Dataset ds;
    ds.feature_names.assign(header.begin(), header.end() - 2);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& row = records[r];
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() != header.size())
            throw std::runtime_error("read_dataset_csv: ragged row " + std::to_string(r));
        std::vector<double> values;
        values.reserve(ds.feature_names.size());
        for (std::size_t c = 0; c + 2 < row.size(); ++c) values.push_back(std::stod(row[c]));
        const auto& label = row[row.size() - 2];
        if (label != "Hit" && label != "NonHit")
            throw std::runtime_error("read_dataset_csv: bad label '" + label + "'");
        auto date = Date::parse(row.back());
        if (!date) throw std::runtime_error("read_dataset_csv: bad date '" + row.back() + "'");
        ds.rows.push_back(std::move(values));
        ds.labels.push_back(label == "Hit" ? SongClass::Hit : SongClass::NonHit);
        ds.dates.push_back(*date);
    }
    ds.validate();
    return ds;
}

}  // namespace dancehit
