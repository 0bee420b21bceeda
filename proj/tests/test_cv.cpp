#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "dancehit/cv.hpp"
#include "support/fixtures.hpp"

using namespace dancehit;

namespace {
// Always predicts the training majority class with a constant score.
ModelSpec constant_spec() {
    return ModelSpec{"Constant", "constant",
                     [](const Dataset& train, std::uint64_t) -> std::unique_ptr<TrainedModel> {
                         Rule only;
                         only.consequent = train.count(SongClass::Hit) >=
                                                   train.count(SongClass::NonHit)
                                               ? SongClass::Hit
                                               : SongClass::NonHit;
                         only.covered_hit = static_cast<double>(train.count(SongClass::Hit));
                         only.covered_nonhit =
                             static_cast<double>(train.count(SongClass::NonHit));
                         return std::make_unique<RuleSetModel>(train.feature_names,
                                                               std::vector<Rule>{only});
                     }};
}
}  // namespace

TEST_CASE("constant model scores majority accuracy and auc one half") {
    auto ds = fixtures::random_dataset(60, 3, 21, 0.6);
    CvOptions opt;
    opt.runs = 2;
    opt.folds = 5;
    opt.seed = 7;
    auto res = repeated_cv(ds, constant_spec(), opt);

    REQUIRE(res.aucs.size() == 10);
    REQUIRE(res.accuracies.size() == 10);
    for (double auc : res.aucs) CHECK(auc == 0.5);

    // per-fold accuracy equals the majority proportion of that test fold;
    // averaged it stays near the global majority share
    double global = static_cast<double>(std::max(ds.count(SongClass::Hit),
                                                 ds.count(SongClass::NonHit))) /
                    static_cast<double>(ds.n_rows());
    CHECK(res.mean_acc == Catch::Approx(global).margin(0.05));
}

TEST_CASE("cv bookkeeping: runs x folds entries") {
    auto ds = fixtures::random_dataset(50, 2, 3);
    CvOptions opt;
    opt.runs = 3;
    opt.folds = 4;
    opt.seed = 11;
    auto res = repeated_cv(ds, spec_nb(), opt);
    CHECK(res.aucs.size() == 12);
    CHECK(res.accuracies.size() == 12);
    CHECK(res.runs == 3);
    CHECK(res.folds == 4);
}

TEST_CASE("no test index reaches the per-fold fitting") {
    auto ds = fixtures::random_dataset(40, 3, 13);
    CvOptions opt;
    opt.runs = 2;
    opt.folds = 4;
    opt.seed = 5;
    opt.feature_selection = true;
    opt.ga.population_size = 6;
    opt.ga.generations = 3;

    int folds_seen = 0;
    CvHooks hooks;
    hooks.on_fold = [&](int, int, std::span<const std::size_t> train_idx,
                        std::span<const std::size_t> test_idx, const Standardizer& std,
                        const FeatureSubset* subset) {
        ++folds_seen;
        std::set<std::size_t> train_set(train_idx.begin(), train_idx.end());
        for (std::size_t i : test_idx) CHECK_FALSE(train_set.count(i));
        CHECK(train_idx.size() + test_idx.size() == ds.n_rows());

        // the standardizer must equal one fitted on the training rows alone
        Matrix train_rows;
        for (std::size_t i : train_idx) train_rows.push_back(ds.rows[i]);
        auto expected = Standardizer::fit(train_rows);
        CHECK(std.means() == expected.means());
        CHECK(std.stdevs() == expected.stdevs());
        REQUIRE(subset != nullptr);
        CHECK(subset->count() >= 1);
    };
    repeated_cv(ds, spec_nb(), opt, nullptr, &hooks);
    CHECK(folds_seen == 8);
}

TEST_CASE("separable data pushes logistic cv auc high") {
    auto ds = fixtures::separable_dataset(80, 4, 1.5, 3);
    CvOptions opt;
    opt.runs = 2;
    opt.folds = 5;
    opt.seed = 19;
    auto res = repeated_cv(ds, spec_logistic(), opt);
    CHECK(res.mean_auc >= 0.95);
}

TEST_CASE("comparing identical specs yields p = 1 and one best") {
    auto ds = fixtures::random_dataset(50, 3, 29);
    CvOptions opt;
    opt.runs = 2;
    opt.folds = 5;
    opt.seed = 3;
    std::vector<ModelSpec> specs = {spec_nb(), spec_nb()};
    auto cmp = compare_models(ds, specs, opt);
    REQUIRE(cmp.rows.size() == 2);
    CHECK(cmp.rows[0].p_auc == 1.0);
    CHECK(cmp.rows[1].p_auc == 1.0);
    CHECK(cmp.rows[0].result.aucs == cmp.rows[1].result.aucs);

    int best_count = 0;
    for (const auto& row : cmp.rows)
        if (row.band_auc == SigBand::Best) ++best_count;
    CHECK(best_count == 1);
}

TEST_CASE("perfect model beats a random scorer significantly") {
    auto ds = fixtures::separable_dataset(80, 3, 2.0, 9);
    ModelSpec random_spec{
        "Random", "random",
        [](const Dataset& train, std::uint64_t seed) -> std::unique_ptr<TrainedModel> {
            // logistic shell with pseudo-random fixed coefficients
            Dataset noise = train;
            Rng rng(seed);
            for (auto& row : noise.rows)
                for (auto& v : row) v = rng.normal();
            LogisticParams p;
            p.max_iter = 1;
            return std::make_unique<LogisticModel>(logistic_fit(noise, p));
        }};
    CvOptions opt;
    opt.runs = 2;
    opt.folds = 5;
    opt.seed = 23;
    std::vector<ModelSpec> specs = {spec_logistic(), random_spec};
    auto cmp = compare_models(ds, specs, opt);
    CHECK(cmp.best_auc_index == 0);
    CHECK(cmp.rows[1].p_auc < 0.01);
    CHECK(cmp.rows[1].band_auc == SigBand::StrongDiff);
}

TEST_CASE("fold partitions are shared across models") {
    auto ds = fixtures::random_dataset(40, 2, 31);
    CvOptions opt;
    opt.runs = 2;
    opt.folds = 4;
    opt.seed = 13;
    std::vector<ModelSpec> specs = {spec_nb(), spec_logistic()};
    auto cmp = compare_models(ds, specs, opt);
    CHECK(cmp.rows[0].result.partition_hash == cmp.rows[1].result.partition_hash);
}

TEST_CASE("whole-dataset selection mode shares one subset") {
    auto ds = fixtures::separable_dataset(40, 4, 1.0, 37);
    CvOptions opt;
    opt.runs = 1;
    opt.folds = 4;
    opt.seed = 17;
    opt.feature_selection = true;
    opt.fs_whole_dataset = true;
    opt.ga.population_size = 6;
    opt.ga.generations = 3;

    std::vector<std::vector<bool>> masks;
    CvHooks hooks;
    hooks.on_fold = [&](int, int, std::span<const std::size_t>, std::span<const std::size_t>,
                        const Standardizer&, const FeatureSubset* subset) {
        REQUIRE(subset != nullptr);
        masks.push_back(subset->mask);
    };
    repeated_cv(ds, spec_nb(), opt, nullptr, &hooks);
    REQUIRE(masks.size() == 4);
    for (const auto& m : masks) CHECK(m == masks[0]);
}
