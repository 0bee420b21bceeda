#include <catch2/catch_amalgamated.hpp>

#include "dancehit/metrics.hpp"
#include "dancehit/rng.hpp"
#include "support/oracles.hpp"

using namespace dancehit;

namespace {
void fill(std::vector<SongClass>& labels, std::vector<SongClass>& preds, SongClass l,
          SongClass p, long count) {
    for (long i = 0; i < count; ++i) {
        labels.push_back(l);
        preds.push_back(p);
    }
}
}  // namespace

TEST_CASE("confusion matrix arithmetic from the logistic experiment") {
    std::vector<SongClass> labels, preds;
    fill(labels, preds, SongClass::Hit, SongClass::Hit, 209);
    fill(labels, preds, SongClass::Hit, SongClass::NonHit, 44);
    fill(labels, preds, SongClass::NonHit, SongClass::Hit, 100);
    fill(labels, preds, SongClass::NonHit, SongClass::NonHit, 47);

    auto [cm, acc] = confusion_and_accuracy(labels, preds);
    CHECK(cm.tp == 209);
    CHECK(cm.fn == 44);
    CHECK(cm.fp == 100);
    CHECK(cm.tn == 47);
    CHECK(cm.total() == 400);
    CHECK(acc == 0.64);
    CHECK(cm.hit_recall() == Catch::Approx(0.8261).margin(0.0005));
}

TEST_CASE("confusion matrix edge cases") {
    std::vector<SongClass> labels = {SongClass::Hit, SongClass::NonHit};
    std::vector<SongClass> same = labels;
    auto [cm, acc] = confusion_and_accuracy(labels, same);
    CHECK(acc == 1.0);
    CHECK(cm.fn == 0);
    CHECK(cm.fp == 0);

    std::vector<SongClass> short_preds = {SongClass::Hit};
    CHECK_THROWS(confusion_and_accuracy(labels, short_preds));
}

TEST_CASE("roc auc on the small example") {
    std::vector<SongClass> labels = {SongClass::Hit, SongClass::Hit, SongClass::NonHit,
                                     SongClass::NonHit};
    std::vector<double> scores = {0.8, 0.4, 0.6, 0.2};
    auto r = roc_auc(labels, scores);
    CHECK(r.auc == Catch::Approx(0.75));
    CHECK(r.auc == Catch::Approx(oracle::pair_count_auc(labels, scores)));
    CHECK(r.curve.points.front().fpr == 0.0);
    CHECK(r.curve.points.front().tpr == 0.0);
    CHECK(r.curve.points.back().fpr == 1.0);
    CHECK(r.curve.points.back().tpr == 1.0);
}

TEST_CASE("roc auc degenerate score patterns") {
    std::vector<SongClass> labels = {SongClass::Hit, SongClass::Hit, SongClass::NonHit,
                                     SongClass::NonHit};
    std::vector<double> perfect = {5, 4, 3, 2};
    CHECK(roc_auc(labels, perfect).auc == 1.0);
    std::vector<double> ties = {1, 1, 1, 1};
    CHECK(roc_auc(labels, ties).auc == 0.5);

    std::vector<SongClass> one_class = {SongClass::Hit, SongClass::Hit};
    std::vector<double> s2 = {1, 2};
    CHECK_THROWS(roc_auc(one_class, s2));
}

TEST_CASE("trapezoid area equals the pair statistic on random sets") {
    Rng rng(21);
    for (int t = 0; t < 300; ++t) {
        std::size_t n = 2 + rng.below(49);
        std::vector<SongClass> labels(n);
        std::vector<double> scores(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = rng.below(2) ? SongClass::Hit : SongClass::NonHit;
            scores[i] = static_cast<double>(rng.below(8)) / 4.0;  // deliberate ties
        }
        labels[0] = SongClass::Hit;
        labels[n - 1] = SongClass::NonHit;

        auto r = roc_auc(labels, scores);
        double brute = oracle::pair_count_auc(labels, scores);
        CHECK(std::fabs(r.curve.trapezoid_area() - brute) < 1e-12);
        CHECK(std::fabs(r.auc - brute) < 1e-12);
    }
}

TEST_CASE("auc invariances") {
    Rng rng(5);
    std::vector<SongClass> labels(30);
    std::vector<double> scores(30);
    for (std::size_t i = 0; i < 30; ++i) {
        labels[i] = rng.below(2) ? SongClass::Hit : SongClass::NonHit;
        scores[i] = rng.normal();
    }
    labels[0] = SongClass::Hit;
    labels[1] = SongClass::NonHit;
    double base = roc_auc(labels, scores).auc;

    // strictly increasing transform preserves AUC
    std::vector<double> warped(30);
    for (std::size_t i = 0; i < 30; ++i) warped[i] = std::exp(scores[i] * 0.5) + 3;
    CHECK(roc_auc(labels, warped).auc == Catch::Approx(base).margin(1e-12));

    // negating scores flips it
    std::vector<double> negated(30);
    for (std::size_t i = 0; i < 30; ++i) negated[i] = -scores[i];
    CHECK(roc_auc(labels, negated).auc == Catch::Approx(1.0 - base).margin(1e-12));

    // flipping labels and negating scores leaves it unchanged
    std::vector<SongClass> flipped(30);
    for (std::size_t i = 0; i < 30; ++i)
        flipped[i] = labels[i] == SongClass::Hit ? SongClass::NonHit : SongClass::Hit;
    CHECK(roc_auc(flipped, negated).auc == Catch::Approx(base).margin(1e-12));
}
