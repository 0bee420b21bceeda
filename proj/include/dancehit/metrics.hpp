#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "dancehit/chart.hpp"

namespace dancehit {

// Counts with Hit as the positive class.
struct ConfusionMatrix {
    long tp = 0;  // hit predicted hit
    long fn = 0;  // hit predicted non-hit
    long fp = 0;  // non-hit predicted hit
    long tn = 0;  // non-hit predicted non-hit

    long total() const { return tp + fn + fp + tn; }
    double accuracy() const {
        return static_cast<double>(tp + tn) / static_cast<double>(total());
    }
    double hit_recall() const {
        return static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
};

inline std::pair<ConfusionMatrix, double> confusion_and_accuracy(
    std::span<const SongClass> labels, std::span<const SongClass> predictions) {
    if (labels.size() != predictions.size() || labels.empty())
        throw std::invalid_argument("confusion_and_accuracy: length mismatch or empty");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == SongClass::Hit)
            (predictions[i] == SongClass::Hit ? cm.tp : cm.fn) += 1;
        else
            (predictions[i] == SongClass::Hit ? cm.fp : cm.tn) += 1;
    }
    return {cm, cm.accuracy()};
}

struct RocPoint {
    double fpr = 0;
    double tpr = 0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // from (0,0) to (1,1), both axes non-decreasing

    double trapezoid_area() const {
        double area = 0;
        for (std::size_t i = 1; i < points.size(); ++i)
            area += (points[i].fpr - points[i - 1].fpr) *
                    (points[i].tpr + points[i - 1].tpr) / 2.0;
        return area;
    }
};

struct RocResult {
    RocCurve curve;
    double auc = 0;
};

// Threshold-sweep ROC with tie grouping plus the Mann-Whitney AUC (ties get
// half credit, computed via average ranks). The trapezoidal area of the
// curve equals the pair statistic up to rounding.
inline RocResult roc_auc(std::span<const SongClass> labels, std::span<const double> scores) {
    if (labels.size() != scores.size() || labels.empty())
        throw std::invalid_argument("roc_auc: length mismatch or empty");
    double n_hit = 0, n_nonhit = 0;
    for (auto l : labels) (l == SongClass::Hit ? n_hit : n_nonhit) += 1;
    if (n_hit == 0 || n_nonhit == 0)
        throw std::invalid_argument("roc_auc: both classes required");

    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocResult res;
    res.curve.points.push_back({0.0, 0.0});
    double tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] == SongClass::Hit ? tp : fp) += 1;
            ++j;
        }
        res.curve.points.push_back({fp / n_nonhit, tp / n_hit});
        i = j;
    }

    // Average ranks over ascending scores; AUC = (R_hit - n_hit(n_hit+1)/2) / (n_hit*n_nonhit).
    std::reverse(order.begin(), order.end());
    double rank_sum_hit = 0;
    i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t)
            if (labels[order[t]] == SongClass::Hit) rank_sum_hit += avg_rank;
        i = j;
    }
    res.auc = (rank_sum_hit - n_hit * (n_hit + 1) / 2.0) / (n_hit * n_nonhit);
    return res;
}

}  // namespace dancehit
