#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dancehit/dataset.hpp"
#include "dancehit/metrics.hpp"
#include "dancehit/model_specs.hpp"
#include "dancehit/preprocess.hpp"
#include "dancehit/wilcoxon.hpp"

namespace dancehit {

struct CvOptions {
    int runs = 10;
    int folds = 10;
    std::uint64_t seed = 1;
    bool feature_selection = false;
    // When set, the feature subset is selected once on the whole dataset
    // before cross-validation (test folds leak into selection); default is
    // the leakage-safe per-fold selection.
    bool fs_whole_dataset = false;
    GaConfig ga;
};

// Everything fitted per training partition: the standardizer and, when
// feature selection is on, the chosen subset. Shared across model specs so
// their per-fold results are paired.
struct FoldFit {
    Standardizer standardizer;
    std::optional<FeatureSubset> subset;
};

struct FoldPlan {
    int runs = 0;
    int folds = 0;
    std::vector<std::vector<std::vector<std::size_t>>> test_indices;  // [run][fold]
    std::vector<std::vector<FoldFit>> fits;                           // [run][fold]
    std::uint64_t partition_hash = 0;

    std::vector<std::size_t> train_indices(std::size_t n_rows, int run, int fold) const {
        const auto& test = test_indices[static_cast<std::size_t>(run)]
                                       [static_cast<std::size_t>(fold)];
        std::vector<bool> is_test(n_rows, false);
        for (std::size_t i : test) is_test[i] = true;
        std::vector<std::size_t> train;
        train.reserve(n_rows - test.size());
        for (std::size_t i = 0; i < n_rows; ++i)
            if (!is_test[i]) train.push_back(i);
        return train;
    }
};

inline FoldPlan make_fold_plan(const Dataset& ds, const CvOptions& opt) {
    if (opt.runs < 1) throw std::invalid_argument("make_fold_plan: runs >= 1");
    Rng root(opt.seed);

    std::optional<FeatureSubset> whole_subset;
    if (opt.feature_selection && opt.fs_whole_dataset) {
        Standardizer full_std = Standardizer::fit(ds.rows);
        GaConfig ga = opt.ga;
        ga.seed = root.derive("cv_ga_whole").next_u64();
        whole_subset = genetic_select(full_std.transform(ds.rows), ds.labels, ga);
    }

    FoldPlan plan;
    plan.runs = opt.runs;
    plan.folds = opt.folds;
    std::uint64_t hash = kFnvOffset;
    for (int run = 0; run < opt.runs; ++run) {
        auto partition = stratified_folds(
            ds, opt.folds, root.derive("cv_partition", static_cast<std::uint64_t>(run)).next_u64());
        plan.test_indices.push_back(partition);
        plan.fits.emplace_back();
        for (int fold = 0; fold < opt.folds; ++fold) {
            hash = fnv1a64(static_cast<std::uint64_t>(run), hash);
            hash = fnv1a64(static_cast<std::uint64_t>(fold), hash);
            for (std::size_t i : partition[static_cast<std::size_t>(fold)])
                hash = fnv1a64(static_cast<std::uint64_t>(i), hash);

            auto train_idx = plan.train_indices(ds.n_rows(), run, fold);
            Matrix train_rows;
            std::vector<SongClass> train_labels;
            train_rows.reserve(train_idx.size());
            for (std::size_t i : train_idx) {
                train_rows.push_back(ds.rows[i]);
                train_labels.push_back(ds.labels[i]);
            }

            FoldFit fit;
            fit.standardizer = Standardizer::fit(train_rows);
            if (opt.feature_selection) {
                if (whole_subset) {
                    fit.subset = whole_subset;
                } else {
                    GaConfig ga = opt.ga;
                    ga.seed = root.derive("cv_ga", static_cast<std::uint64_t>(run),
                                          static_cast<std::uint64_t>(fold))
                                  .next_u64();
                    fit.subset = genetic_select(fit.standardizer.transform(train_rows),
                                                train_labels, ga);
                }
            }
            plan.fits.back().push_back(std::move(fit));
        }
    }
    plan.partition_hash = hash;
    return plan;
}

// Per-fold AUC and accuracy over runs x folds partitions, run-major order.
struct CvResult {
    std::vector<double> aucs;
    std::vector<double> accuracies;
    int runs = 0;
    int folds = 0;
    std::uint64_t partition_hash = 0;
    double mean_auc = 0, sd_auc = 0;
    double mean_acc = 0, sd_acc = 0;
    // Held-out labels and scores of the first run, pooled over its folds;
    // enough to draw a cross-validated ROC.
    std::vector<SongClass> pooled_labels;
    std::vector<double> pooled_scores;

    void finalize() {
        auto stats = [](std::span<const double> xs, double& mean, double& sd) {
            mean = 0;
            for (double x : xs) mean += x;
            mean /= static_cast<double>(xs.size());
            sd = 0;
            for (double x : xs) sd += (x - mean) * (x - mean);
            sd = std::sqrt(sd / static_cast<double>(xs.size()));
        };
        stats(aucs, mean_auc, sd_auc);
        stats(accuracies, mean_acc, sd_acc);
    }
};

// Test-only observation point; lets a test verify that nothing from the
// held-out fold reaches the per-fold fitting.
struct CvHooks {
    std::function<void(int run, int fold, std::span<const std::size_t> train_idx,
                       std::span<const std::size_t> test_idx, const Standardizer&,
                       const FeatureSubset*)>
        on_fold;
};

// Repeated stratified cross-validation of one model spec. Standardization
// and optional feature selection are fitted on the training folds only,
// then the model is trained and scored on the held-out fold.
inline CvResult repeated_cv(const Dataset& ds, const ModelSpec& spec, const CvOptions& opt,
                            const FoldPlan* shared_plan = nullptr,
                            const CvHooks* hooks = nullptr) {
    FoldPlan local_plan;
    const FoldPlan* plan = shared_plan;
    if (!plan) {
        local_plan = make_fold_plan(ds, opt);
        plan = &local_plan;
    }
    Rng root(opt.seed);

    CvResult res;
    res.runs = plan->runs;
    res.folds = plan->folds;
    res.partition_hash = plan->partition_hash;

    for (int run = 0; run < plan->runs; ++run) {
        for (int fold = 0; fold < plan->folds; ++fold) {
            const auto& test_idx =
                plan->test_indices[static_cast<std::size_t>(run)][static_cast<std::size_t>(fold)];
            auto train_idx = plan->train_indices(ds.n_rows(), run, fold);
            const FoldFit& fit =
                plan->fits[static_cast<std::size_t>(run)][static_cast<std::size_t>(fold)];

            if (hooks && hooks->on_fold)
                hooks->on_fold(run, fold, train_idx, test_idx, fit.standardizer,
                               fit.subset ? &*fit.subset : nullptr);

            std::vector<std::size_t> feature_idx;
            if (fit.subset) feature_idx = fit.subset->indices();

            Dataset train_ds;
            train_ds.feature_names = ds.feature_names;
            for (std::size_t i : train_idx) {
                train_ds.rows.push_back(fit.standardizer.transform(ds.rows[i]));
                train_ds.labels.push_back(ds.labels[i]);
                train_ds.dates.push_back(ds.dates[i]);
            }
            if (fit.subset) train_ds = train_ds.project(feature_idx);

            auto model = spec.fit(train_ds, root.derive("cv_fit", static_cast<std::uint64_t>(run),
                                                        static_cast<std::uint64_t>(fold))
                                                .next_u64());

            std::vector<SongClass> test_labels;
            std::vector<SongClass> predictions;
            std::vector<double> scores;
            for (std::size_t i : test_idx) {
                auto row = fit.standardizer.transform(ds.rows[i]);
                if (fit.subset) {
                    std::vector<double> projected;
                    projected.reserve(feature_idx.size());
                    for (std::size_t f : feature_idx) projected.push_back(row[f]);
                    row = std::move(projected);
                }
                test_labels.push_back(ds.labels[i]);
                scores.push_back(model->score_hit(row));
                predictions.push_back(model->classify(row));
            }

            res.aucs.push_back(roc_auc(test_labels, scores).auc);
            res.accuracies.push_back(confusion_and_accuracy(test_labels, predictions).second);
            if (run == 0) {
                res.pooled_labels.insert(res.pooled_labels.end(), test_labels.begin(),
                                         test_labels.end());
                res.pooled_scores.insert(res.pooled_scores.end(), scores.begin(), scores.end());
            }
        }
    }
    res.finalize();
    return res;
}

enum class SigBand { Best, StrongDiff, MidDiff, NotSig };

inline std::string_view to_string(SigBand b) {
    switch (b) {
        case SigBand::Best: return "best";
        case SigBand::StrongDiff: return "p<0.01";
        case SigBand::MidDiff: return "p<=0.05";
        case SigBand::NotSig: return "ns";
    }
    return "ns";
}

inline SigBand band_for(double p) {
    if (p < 0.01) return SigBand::StrongDiff;
    if (p <= 0.05) return SigBand::MidDiff;
    return SigBand::NotSig;
}

struct ModelComparisonRow {
    std::string model;
    CvResult result;
    double p_auc = 1.0;
    double p_acc = 1.0;
    SigBand band_auc = SigBand::NotSig;
    SigBand band_acc = SigBand::NotSig;
};

struct ModelComparison {
    std::vector<ModelComparisonRow> rows;
    std::size_t best_auc_index = 0;
    std::size_t best_acc_index = 0;
};

ModelComparison compare_models(const Dataset& ds, std::span<const ModelSpec> specs,
                               const CvOptions& opt);

// Like compare_models but accepts a single spec (which is then trivially
// the best model, p = 1).
inline ModelComparison evaluate_models(const Dataset& ds, std::span<const ModelSpec> specs,
                                       const CvOptions& opt) {
    if (specs.empty()) throw std::invalid_argument("evaluate_models: no model specs");
    if (specs.size() >= 2) return compare_models(ds, specs, opt);
    ModelComparison cmp;
    ModelComparisonRow row;
    row.model = specs[0].name;
    row.result = repeated_cv(ds, specs[0], opt);
    row.band_auc = SigBand::Best;
    row.band_acc = SigBand::Best;
    cmp.rows.push_back(std::move(row));
    return cmp;
}

// Evaluates every spec on identical fold partitions (paired samples) and
// tests each model's per-fold metrics against the best model's with the
// Wilcoxon signed-rank test. AUC and accuracy get separate tests against
// their own best models.
inline ModelComparison compare_models(const Dataset& ds, std::span<const ModelSpec> specs,
                                      const CvOptions& opt) {
    if (specs.size() < 2)
        throw std::invalid_argument("compare_models: need >= 2 model specs");
    FoldPlan plan = make_fold_plan(ds, opt);

    ModelComparison cmp;
    for (const auto& spec : specs) {
        ModelComparisonRow row;
        row.model = spec.name;
        row.result = repeated_cv(ds, spec, opt, &plan);
        if (row.result.partition_hash != plan.partition_hash)
            throw std::logic_error("compare_models: partition hash mismatch");
        cmp.rows.push_back(std::move(row));
    }

    for (std::size_t i = 1; i < cmp.rows.size(); ++i) {
        if (cmp.rows[i].result.mean_auc > cmp.rows[cmp.best_auc_index].result.mean_auc)
            cmp.best_auc_index = i;
        if (cmp.rows[i].result.mean_acc > cmp.rows[cmp.best_acc_index].result.mean_acc)
            cmp.best_acc_index = i;
    }

    for (std::size_t i = 0; i < cmp.rows.size(); ++i) {
        auto& row = cmp.rows[i];
        row.p_auc = wilcoxon_signed_rank(row.result.aucs,
                                         cmp.rows[cmp.best_auc_index].result.aucs);
        row.p_acc = wilcoxon_signed_rank(row.result.accuracies,
                                         cmp.rows[cmp.best_acc_index].result.accuracies);
        row.band_auc = i == cmp.best_auc_index ? SigBand::Best : band_for(row.p_auc);
        row.band_acc = i == cmp.best_acc_index ? SigBand::Best : band_for(row.p_acc);
    }
    return cmp;
}

}  // namespace dancehit
