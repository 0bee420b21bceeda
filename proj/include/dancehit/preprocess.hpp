#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dancehit/dataset.hpp"
#include "dancehit/rng.hpp"

namespace dancehit {

// Per-feature statistical normalization, fitted on training rows only.
// Constant columns transform to 0.
class Standardizer {
public:
    static Standardizer fit(const Matrix& train_rows) {
        if (train_rows.size() < 2)
            throw std::invalid_argument("Standardizer: need >= 2 training rows");
        const std::size_t p = train_rows[0].size();
        const auto n = static_cast<double>(train_rows.size());
        Standardizer s;
        s.means_.assign(p, 0.0);
        s.stdevs_.assign(p, 0.0);
        for (const auto& r : train_rows)
            for (std::size_t j = 0; j < p; ++j) s.means_[j] += r[j];
        for (std::size_t j = 0; j < p; ++j) s.means_[j] /= n;
        for (const auto& r : train_rows)
            for (std::size_t j = 0; j < p; ++j) {
                double d = r[j] - s.means_[j];
                s.stdevs_[j] += d * d;
            }
        for (std::size_t j = 0; j < p; ++j) s.stdevs_[j] = std::sqrt(s.stdevs_[j] / n);
        return s;
    }

    std::vector<double> transform(std::span<const double> row) const {
        if (row.size() != means_.size())
            throw std::invalid_argument("Standardizer: row width mismatch");
        std::vector<double> out(row.size());
        for (std::size_t j = 0; j < row.size(); ++j)
            out[j] = stdevs_[j] > 0 ? (row[j] - means_[j]) / stdevs_[j] : 0.0;
        return out;
    }

    Matrix transform(const Matrix& rows) const {
        Matrix out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(transform(r));
        return out;
    }

    const std::vector<double>& means() const { return means_; }
    const std::vector<double>& stdevs() const { return stdevs_; }

    nlohmann::json to_json() const {
        return nlohmann::json{{"means", means_}, {"stdevs", stdevs_}};
    }

    static Standardizer from_json(const nlohmann::json& j) {
        Standardizer s;
        s.means_ = j.at("means").get<std::vector<double>>();
        s.stdevs_ = j.at("stdevs").get<std::vector<double>>();
        if (s.means_.size() != s.stdevs_.size())
            throw std::invalid_argument("Standardizer: mean/stdev size mismatch");
        return s;
    }

private:
    std::vector<double> means_;
    std::vector<double> stdevs_;
};

// Pearson correlation; 0 when either side has zero variance.
inline double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("pearson: length mismatch or empty");
    const auto n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0, sbb = 0, sab = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0 || sbb == 0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

// Point-biserial: Pearson of the column against the 0/1 label encoding
// (Hit = 1).
inline double feature_class_correlation(std::span<const double> column,
                                        std::span<const SongClass> labels) {
    bool has_hit = false, has_nonhit = false;
    for (auto l : labels) (l == SongClass::Hit ? has_hit : has_nonhit) = true;
    if (!has_hit || !has_nonhit)
        throw std::invalid_argument("feature_class_correlation: both classes required");
    std::vector<double> encoded(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        encoded[i] = labels[i] == SongClass::Hit ? 1.0 : 0.0;
    return pearson(column, encoded);
}

// Absolute correlation tables the subset evaluator works from.
struct CorrelationTables {
    std::vector<double> feature_class;   // |r| feature vs label
    Matrix feature_feature;              // |r| between features, symmetric
};

inline CorrelationTables build_correlation_tables(const Matrix& rows,
                                                  std::span<const SongClass> labels) {
    if (rows.empty()) throw std::invalid_argument("build_correlation_tables: no rows");
    const std::size_t p = rows[0].size();
    Matrix columns(p, std::vector<double>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < p; ++j) columns[j][i] = rows[i][j];

    CorrelationTables t;
    t.feature_class.resize(p);
    for (std::size_t j = 0; j < p; ++j)
        t.feature_class[j] = std::fabs(feature_class_correlation(columns[j], labels));
    t.feature_feature.assign(p, std::vector<double>(p, 0.0));
    for (std::size_t a = 0; a < p; ++a) {
        t.feature_feature[a][a] = 1.0;
        for (std::size_t b = a + 1; b < p; ++b) {
            double r = std::fabs(pearson(columns[a], columns[b]));
            t.feature_feature[a][b] = r;
            t.feature_feature[b][a] = r;
        }
    }
    return t;
}

// Subset worth: k * mean|r_fc| / sqrt(k + k(k-1) * mean|r_ff|). Rewards
// class correlation, penalizes redundancy between the chosen features.
inline double cfs_merit(std::span<const std::size_t> subset,
                        std::span<const double> feature_class__abs,
                        const Matrix& feature_feature_abs) {
    if (subset.empty()) throw std::invalid_argument("cfs_merit: empty subset");
    const auto k = static_cast<double>(subset.size());
    double rcf = 0;
    for (std::size_t j : subset) rcf += std::fabs(feature_class__abs[j]);
    rcf /= k;
    double rff = 0;
    if (subset.size() > 1) {
        for (std::size_t a = 0; a < subset.size(); ++a)
            for (std::size_t b = a + 1; b < subset.size(); ++b)
                rff += std::fabs(feature_feature_abs[subset[a]][subset[b]]);
        rff /= k * (k - 1) / 2.0;
    }
    return k * rcf / std::sqrt(k + k * (k - 1) * rff);
}

// Bitmask over feature indices plus the merit it scored.
struct FeatureSubset {
    std::vector<bool> mask;
    double merit = 0;

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < mask.size(); ++j)
            if (mask[j]) idx.push_back(j);
        return idx;
    }
    std::size_t count() const { return indices().size(); }
};

struct GaConfig {
    int population_size = 20;
    int generations = 20;
    double crossover_prob = 0.6;
    double mutation_prob = 0.033;
    std::uint64_t seed = 1;

    void validate() const {
        if (population_size < 2) throw std::invalid_argument("GaConfig: population_size >= 2");
        if (generations < 1) throw std::invalid_argument("GaConfig: generations >= 1");
        if (crossover_prob < 0 || crossover_prob > 1 || mutation_prob < 0 || mutation_prob > 1)
            throw std::invalid_argument("GaConfig: probabilities must be in [0,1]");
    }
};

namespace detail {

inline void repair_chromosome(std::vector<bool>& mask, Rng& rng) {
    for (bool b : mask)
        if (b) return;
    mask[rng.below(mask.size())] = true;
}

inline double subset_fitness(const std::vector<bool>& mask, const CorrelationTables& t) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < mask.size(); ++j)
        if (mask[j]) idx.push_back(j);
    return cfs_merit(idx, t.feature_class, t.feature_feature);
}

inline std::size_t roulette_pick(std::span<const double> fitness, double total, Rng& rng) {
    if (total <= 0) return rng.below(fitness.size());
    double target = rng.real() * total;
    double acc = 0;
    for (std::size_t i = 0; i < fitness.size(); ++i) {
        acc += fitness[i];
        if (target < acc) return i;
    }
    return fitness.size() - 1;
}

}  // namespace detail

// Generational GA over subset bitmasks: roulette-wheel selection,
// single-point crossover, per-bit mutation, elitism of one. Fitness is the
// correlation-based subset merit; the best subset ever seen is returned.
// `best_by_generation`, when given, records the best-ever merit after the
// initial population and after each generation.
inline FeatureSubset genetic_select(const Matrix& standardized_rows,
                                    std::span<const SongClass> labels,
                                    const GaConfig& config,
                                    std::vector<double>* best_by_generation = nullptr) {
    config.validate();
    const CorrelationTables tables = build_correlation_tables(standardized_rows, labels);
    const std::size_t p = tables.feature_class.size();
    Rng rng = Rng(config.seed).derive("genetic_select");

    std::vector<std::vector<bool>> population;
    population.reserve(static_cast<std::size_t>(config.population_size));
    for (int i = 0; i < config.population_size; ++i) {
        std::vector<bool> mask(p);
        for (std::size_t j = 0; j < p; ++j) mask[j] = rng.below(2) == 1;
        detail::repair_chromosome(mask, rng);
        population.push_back(std::move(mask));
    }

    std::vector<double> fitness(population.size());
    auto evaluate = [&] {
        for (std::size_t i = 0; i < population.size(); ++i)
            fitness[i] = detail::subset_fitness(population[i], tables);
    };
    evaluate();

    FeatureSubset best;
    auto track_best = [&] {
        for (std::size_t i = 0; i < population.size(); ++i)
            if (fitness[i] > best.merit || best.mask.empty()) {
                best.mask = population[i];
                best.merit = fitness[i];
            }
        if (best_by_generation) best_by_generation->push_back(best.merit);
    };
    track_best();

    for (int gen = 0; gen < config.generations; ++gen) {
        std::vector<std::vector<bool>> next;
        next.reserve(population.size());

        std::size_t elite = 0;
        for (std::size_t i = 1; i < fitness.size(); ++i)
            if (fitness[i] > fitness[elite]) elite = i;
        next.push_back(population[elite]);

        double total = 0;
        for (double f : fitness) total += f;

        while (next.size() < population.size()) {
            auto a = population[detail::roulette_pick(fitness, total, rng)];
            auto b = population[detail::roulette_pick(fitness, total, rng)];
            if (p > 1 && rng.real() < config.crossover_prob) {
                std::size_t point = 1 + rng.below(p - 1);
                for (std::size_t j = point; j < p; ++j) std::swap(a[j], b[j]);
            }
            for (auto* child : {&a, &b}) {
                for (std::size_t j = 0; j < p; ++j)
                    if (rng.real() < config.mutation_prob) (*child)[j] = !(*child)[j];
                detail::repair_chromosome(*child, rng);
                if (next.size() < population.size()) next.push_back(*child);
            }
        }
        population = std::move(next);
        evaluate();
        track_best();
    }
    return best;
}

inline FeatureSubset genetic_select(const Dataset& standardized, const GaConfig& config) {
    return genetic_select(standardized.rows, standardized.labels, config);
}

}  // namespace dancehit
