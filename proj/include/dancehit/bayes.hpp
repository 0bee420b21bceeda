#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dancehit/model.hpp"

namespace dancehit {

struct NbParams {
    double variance_floor = 1e-9;
};

// Gaussian naive Bayes: class priors plus per-class per-feature normal
// densities, combined in log space and normalized over the two classes.
class GaussianNbModel final : public TrainedModel {
public:
    std::string kind() const override { return "naive_bayes"; }
    const std::vector<std::string>& feature_names() const override { return feature_names_; }

    double score_hit(std::span<const double> row) const override {
        check_width(row);
        double log_hit = std::log(prior_hit_);
        double log_nonhit = std::log(1.0 - prior_hit_);
        for (std::size_t j = 0; j < row.size(); ++j) {
            log_hit += log_gaussian(row[j], mean_hit_[j], var_hit_[j]);
            log_nonhit += log_gaussian(row[j], mean_nonhit_[j], var_nonhit_[j]);
        }
        // Normalize via the log-sum trick so extreme likelihoods stay stable.
        double m = std::max(log_hit, log_nonhit);
        double p_hit = std::exp(log_hit - m);
        double p_nonhit = std::exp(log_nonhit - m);
        return p_hit / (p_hit + p_nonhit);
    }

    SongClass classify(std::span<const double> row) const override {
        return score_hit(row) >= 0.5 ? SongClass::Hit : SongClass::NonHit;
    }

    nlohmann::json to_json() const override {
        auto j = detail::model_envelope(kind(), feature_names_);
        j["prior_hit"] = prior_hit_;
        j["mean_hit"] = mean_hit_;
        j["var_hit"] = var_hit_;
        j["mean_nonhit"] = mean_nonhit_;
        j["var_nonhit"] = var_nonhit_;
        return j;
    }

    static GaussianNbModel from_json(const nlohmann::json& j) {
        detail::check_envelope(j, "naive_bayes");
        GaussianNbModel m;
        m.feature_names_ = j.at("feature_names").get<std::vector<std::string>>();
        m.prior_hit_ = j.at("prior_hit").get<double>();
        m.mean_hit_ = j.at("mean_hit").get<std::vector<double>>();
        m.var_hit_ = j.at("var_hit").get<std::vector<double>>();
        m.mean_nonhit_ = j.at("mean_nonhit").get<std::vector<double>>();
        m.var_nonhit_ = j.at("var_nonhit").get<std::vector<double>>();
        return m;
    }

    double prior_hit() const { return prior_hit_; }

    friend GaussianNbModel nb_fit(const Dataset&, const NbParams&);

private:
    static double log_gaussian(double x, double mean, double var) {
        double d = x - mean;
        return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
    }

    std::vector<std::string> feature_names_;
    double prior_hit_ = 0.5;
    std::vector<double> mean_hit_, var_hit_, mean_nonhit_, var_nonhit_;
};

inline GaussianNbModel nb_fit(const Dataset& train, const NbParams& params = {}) {
    const std::size_t n_hit = train.count(SongClass::Hit);
    const std::size_t n_nonhit = train.count(SongClass::NonHit);
    if (n_hit == 0 || n_nonhit == 0)
        throw std::invalid_argument("nb_fit: both classes required");

    const std::size_t p = train.n_features();
    GaussianNbModel m;
    m.feature_names_ = train.feature_names;
    m.prior_hit_ = static_cast<double>(n_hit) / static_cast<double>(train.n_rows());
    m.mean_hit_.assign(p, 0.0);
    m.mean_nonhit_.assign(p, 0.0);
    m.var_hit_.assign(p, 0.0);
    m.var_nonhit_.assign(p, 0.0);

    for (std::size_t i = 0; i < train.n_rows(); ++i) {
        auto& mean = train.labels[i] == SongClass::Hit ? m.mean_hit_ : m.mean_nonhit_;
        for (std::size_t j = 0; j < p; ++j) mean[j] += train.rows[i][j];
    }
    for (std::size_t j = 0; j < p; ++j) {
        m.mean_hit_[j] /= static_cast<double>(n_hit);
        m.mean_nonhit_[j] /= static_cast<double>(n_nonhit);
    }
    for (std::size_t i = 0; i < train.n_rows(); ++i) {
        bool hit = train.labels[i] == SongClass::Hit;
        auto& mean = hit ? m.mean_hit_ : m.mean_nonhit_;
        auto& var = hit ? m.var_hit_ : m.var_nonhit_;
        for (std::size_t j = 0; j < p; ++j) {
            double d = train.rows[i][j] - mean[j];
            var[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < p; ++j) {
        m.var_hit_[j] = std::max(m.var_hit_[j] / static_cast<double>(n_hit),
                                 params.variance_floor);
        m.var_nonhit_[j] = std::max(m.var_nonhit_[j] / static_cast<double>(n_nonhit),
                                    params.variance_floor);
    }
    return m;
}

}  // namespace dancehit
