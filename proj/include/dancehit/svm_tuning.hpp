#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dancehit/dataset.hpp"
#include "dancehit/metrics.hpp"
#include "dancehit/model_specs.hpp"
#include "dancehit/svm.hpp"

namespace dancehit {

struct GridSearchOptions {
    double tol = 1e-3;
    std::uint64_t seed = 1;
    bool eight_neighborhood = true;  // false limits climbing to the 4-neighborhood
    std::vector<double> c_values = {1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21};
    std::vector<double> inv_sigma_sq = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1, 10};
    std::vector<int> degrees = {1, 2};
    double poly_scale = 1.0;
};

struct SvmGridResult {
    KernelSpec kernel;
    double c_reg = 1;
    double cv_auc = 0;
};

namespace detail {

// Mean held-out AUC of an SVM spec over a fixed stratified partition.
inline double svm_cv_auc(const Dataset& ds, const KernelSpec& kernel, double c_reg, double tol,
                         const std::vector<std::vector<std::size_t>>& partition) {
    double sum = 0;
    for (std::size_t f = 0; f < partition.size(); ++f) {
        std::vector<std::size_t> train_idx;
        for (std::size_t o = 0; o < partition.size(); ++o)
            if (o != f)
                train_idx.insert(train_idx.end(), partition[o].begin(), partition[o].end());
        std::sort(train_idx.begin(), train_idx.end());
        SvmModel model = smo_fit(ds.subset(train_idx), kernel, c_reg, tol);

        std::vector<SongClass> labels;
        std::vector<double> scores;
        for (std::size_t i : partition[f]) {
            labels.push_back(ds.labels[i]);
            scores.push_back(model.margin(ds.rows[i]));
        }
        sum += roc_auc(labels, scores).auc;
    }
    return sum / static_cast<double>(partition.size());
}

}  // namespace detail

// Two-stage hyperparameter search: every (C, kernel-parameter) point of the
// initial grid is screened with 2-fold CV AUC; the winner and its grid
// neighbors are then re-scored with 10-fold CV and hill-climbed until no
// neighbor improves or the grid border is reached.
inline SvmGridResult grid_search_svm(const Dataset& train, KernelSpec::Kind kind,
                                     const GridSearchOptions& opt = {}) {
    Rng root(opt.seed);
    auto folds2 = stratified_folds(train, 2, root.derive("grid_screen").next_u64());
    auto folds10 = stratified_folds(train, 10, root.derive("grid_refine").next_u64());

    auto spec_at = [&](std::size_t a, std::size_t b) {
        double c_reg = opt.c_values[a];
        KernelSpec kernel = kind == KernelSpec::Kind::Rbf
                                ? KernelSpec::rbf(1.0 / std::sqrt(opt.inv_sigma_sq[b]))
                                : KernelSpec::polynomial(opt.degrees[b], opt.poly_scale);
        return std::make_pair(kernel, c_reg);
    };

    std::size_t nb = kind == KernelSpec::Kind::Rbf ? opt.inv_sigma_sq.size()
                                                   : opt.degrees.size();
    auto climb = grid_search_climb(
        opt.c_values.size(), nb,
        [&](std::size_t a, std::size_t b) {
            auto [kernel, c_reg] = spec_at(a, b);
            return detail::svm_cv_auc(train, kernel, c_reg, opt.tol, folds2);
        },
        [&](std::size_t a, std::size_t b) {
            auto [kernel, c_reg] = spec_at(a, b);
            return detail::svm_cv_auc(train, kernel, c_reg, opt.tol, folds10);
        },
        opt.eight_neighborhood);

    auto [kernel, c_reg] = spec_at(climb.a, climb.b);
    return SvmGridResult{kernel, c_reg, climb.value};
}

// Model specs that tune their hyperparameters on each training set before
// the final fit.
inline ModelSpec spec_svm_poly_tuned(GridSearchOptions opt = {}) {
    return ModelSpec{"SVM (Polynomial)", "svm-poly",
                     [opt](const Dataset& ds, std::uint64_t seed) {
                         GridSearchOptions o = opt;
                         o.seed = seed;
                         auto r = grid_search_svm(ds, KernelSpec::Kind::Polynomial, o);
                         return std::make_unique<SvmModel>(
                             smo_fit(ds, r.kernel, r.c_reg, o.tol));
                     }};
}

inline ModelSpec spec_svm_rbf_tuned(GridSearchOptions opt = {}) {
    return ModelSpec{"SVM (RBF)", "svm-rbf",
                     [opt](const Dataset& ds, std::uint64_t seed) {
                         GridSearchOptions o = opt;
                         o.seed = seed;
                         auto r = grid_search_svm(ds, KernelSpec::Kind::Rbf, o);
                         return std::make_unique<SvmModel>(
                             smo_fit(ds, r.kernel, r.c_reg, o.tol));
                     }};
}

}  // namespace dancehit
