#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dancehit/dataset.hpp"

namespace dancehit {

inline constexpr int kModelFormatVersion = 1;

// Uniform train/score contract for the five classifier families.
// `score_hit` is a hit probability for the probabilistic kinds and the raw
// decision margin for the SVM; ranking-based metrics consume either
// directly. `classify` applies the 0.5 cutoff (probabilistic) or the margin
// sign (SVM).
class TrainedModel {
public:
    virtual ~TrainedModel() = default;

    virtual std::string kind() const = 0;
    virtual const std::vector<std::string>& feature_names() const = 0;
    virtual double score_hit(std::span<const double> row) const = 0;
    virtual SongClass classify(std::span<const double> row) const = 0;
    virtual nlohmann::json to_json() const = 0;

protected:
    void check_width(std::span<const double> row) const {
        if (row.size() != feature_names().size())
            throw std::invalid_argument(kind() + ": row width " + std::to_string(row.size()) +
                                        " != trained schema width " +
                                        std::to_string(feature_names().size()));
    }
};

namespace detail {
inline nlohmann::json model_envelope(const std::string& kind,
                                     const std::vector<std::string>& feature_names) {
    return nlohmann::json{{"format_version", kModelFormatVersion},
                          {"kind", kind},
                          {"feature_names", feature_names}};
}

inline void check_envelope(const nlohmann::json& j, const std::string& kind) {
    if (j.at("format_version").get<int>() != kModelFormatVersion)
        throw std::runtime_error("model: unsupported format_version");
    if (j.at("kind").get<std::string>() != kind)
        throw std::runtime_error("model: expected kind '" + kind + "', got '" +
                                 j.at("kind").get<std::string>() + "'");
}
}  // namespace detail

}  // namespace dancehit
