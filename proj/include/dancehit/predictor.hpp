#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dancehit/cv.hpp"
#include "dancehit/features.hpp"
#include "dancehit/model_specs.hpp"
#include "dancehit/preprocess.hpp"

namespace dancehit {

// A deployable model: the standardizer and optional feature subset fitted
// at training time, bundled with the classifier so raw analyses can be
// scored end to end.
struct PredictorBundle {
    std::vector<std::string> input_schema;  // raw feature names, pre-standardization
    Standardizer standardizer;
    std::optional<FeatureSubset> subset;
    std::unique_ptr<TrainedModel> model;

    std::vector<double> prepare_row(std::span<const double> raw) const {
        if (raw.size() != input_schema.size())
            throw std::invalid_argument("PredictorBundle: raw row width mismatch");
        auto row = standardizer.transform(raw);
        if (subset) {
            std::vector<double> projected;
            for (std::size_t f : subset->indices()) projected.push_back(row[f]);
            return projected;
        }
        return row;
    }

    void check_analysis_schema() const {
        const auto& schema = feature_schema();
        std::set<std::string> have(schema.begin(), schema.end());
        std::set<std::string> want(input_schema.begin(), input_schema.end());
        std::string missing, extra;
        for (const auto& n : want)
            if (!have.count(n)) missing += (missing.empty() ? "" : ", ") + n;
        for (const auto& n : have)
            if (!want.count(n)) extra += (extra.empty() ? "" : ", ") + n;
        if (!missing.empty() || !extra.empty())
            throw std::runtime_error(
                "model schema mismatch; missing features: [" + missing +
                "], extra features: [" + extra + "]");
    }

    double score_analysis(const SongAnalysis& a) const {
        check_analysis_schema();
        return model->score_hit(prepare_row(feature_vector(a)));
    }

    SongClass classify_analysis(const SongAnalysis& a) const {
        check_analysis_schema();
        return model->classify(prepare_row(feature_vector(a)));
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"format_version", kModelFormatVersion},
                         {"type", "predictor_bundle"},
                         {"input_schema", input_schema},
                         {"standardizer", standardizer.to_json()},
                         {"model", model->to_json()}};
        if (subset) {
            std::vector<std::size_t> idx = subset->indices();
            j["subset"] = idx;
        } else {
            j["subset"] = nullptr;
        }
        return j;
    }

    static PredictorBundle from_json(const nlohmann::json& j) {
        if (j.at("format_version").get<int>() != kModelFormatVersion)
            throw std::runtime_error("PredictorBundle: unsupported format_version");
        PredictorBundle b;
        b.input_schema = j.at("input_schema").get<std::vector<std::string>>();
        b.standardizer = Standardizer::from_json(j.at("standardizer"));
        if (!j.at("subset").is_null()) {
            auto idx = j.at("subset").get<std::vector<std::size_t>>();
            FeatureSubset s;
            s.mask.assign(b.input_schema.size(), false);
            for (std::size_t i : idx) s.mask[i] = true;
            b.subset = std::move(s);
        }
        b.model = model_from_json(j.at("model"));
        return b;
    }
};

struct BundleOptions {
    bool feature_selection = false;
    GaConfig ga;
    std::uint64_t seed = 1;
};

// Fits the full pipeline on the given dataset: standardizer, optional
// genetic subset selection, then the model itself.
inline PredictorBundle train_bundle(const Dataset& ds, const ModelSpec& spec,
                                    const BundleOptions& opt = {}) {
    Rng root(opt.seed);
    PredictorBundle b;
    b.input_schema = ds.feature_names;
    b.standardizer = Standardizer::fit(ds.rows);

    Dataset standardized;
    standardized.feature_names = ds.feature_names;
    standardized.rows = b.standardizer.transform(ds.rows);
    standardized.labels = ds.labels;
    standardized.dates = ds.dates;

    if (opt.feature_selection) {
        GaConfig ga = opt.ga;
        ga.seed = root.derive("bundle_ga").next_u64();
        b.subset = genetic_select(standardized.rows, standardized.labels, ga);
        standardized = standardized.project(b.subset->indices());
    }
    b.model = spec.fit(standardized, root.derive("bundle_fit").next_u64());
    return b;
}

inline void save_bundle(const std::filesystem::path& path, const PredictorBundle& b) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_bundle: cannot open " + path.string());
    out << b.to_json().dump(2) << '\n';
}

inline PredictorBundle load_bundle(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_bundle: cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    return PredictorBundle::from_json(j);
}

}  // namespace dancehit
