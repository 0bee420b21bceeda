#include <catch2/catch_amalgamated.hpp>

#include "dancehit/svm.hpp"
#include "dancehit/svm_tuning.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace dancehit;

TEST_CASE("kernel evaluations") {
    std::vector<double> x = {1.0, 1.0};
    std::vector<double> z = {1.0, 1.0};  // x.z = 2
    CHECK(kernel_eval(KernelSpec::polynomial(1, 1.0), x, z) == 3.0);
    CHECK(kernel_eval(KernelSpec::polynomial(2, 1.0), x, z) == 9.0);

    CHECK(kernel_eval(KernelSpec::rbf(0.37), x, x) == 1.0);
    std::vector<double> z1 = {2.0, 1.0};  // |x-z|^2 = 1
    CHECK(kernel_eval(KernelSpec::rbf(1.0), x, z1) == Catch::Approx(std::exp(-1.0)));

    std::vector<double> short_vec = {1.0};
    CHECK_THROWS(kernel_eval(KernelSpec::rbf(1.0), x, short_vec));
    CHECK_THROWS(KernelSpec::polynomial(0));
    CHECK_THROWS(KernelSpec::rbf(-1.0));
}

namespace {
Dataset two_points() {
    Dataset ds;
    ds.feature_names = {"x"};
    ds.rows = {{-1.0}, {1.0}};
    ds.labels = {SongClass::NonHit, SongClass::Hit};
    ds.dates = {fixtures::date_from_ordinal(0), fixtures::date_from_ordinal(1)};
    return ds;
}

Dataset xor_points() {
    Dataset ds;
    ds.feature_names = {"x1", "x2"};
    for (double a : {-1.0, 1.0})
        for (double b : {-1.0, 1.0}) {
            ds.rows.push_back({a, b});
            ds.labels.push_back(a * b > 0 ? SongClass::Hit : SongClass::NonHit);
            ds.dates.push_back(fixtures::date_from_ordinal(static_cast<int>(ds.rows.size())));
        }
    return ds;
}

void check_feasibility(const SvmModel& m) {
    double balance = 0;
    for (std::size_t i = 0; i < m.alphas().size(); ++i) {
        CHECK(m.alphas()[i] >= 0.0);
        CHECK(m.alphas()[i] <= m.c() + 1e-12);
        balance += m.alphas()[i] * m.support_labels()[i];
    }
    CHECK(std::fabs(balance) < 1e-8);
}
}  // namespace

TEST_CASE("two-point instance solves by hand") {
    auto ds = two_points();
    auto m = smo_fit(ds, KernelSpec::polynomial(1, 1.0), 1.0, 1e-6);
    REQUIRE(m.alphas().size() == 2);
    CHECK(m.alphas()[0] == Catch::Approx(0.5).margin(1e-6));
    CHECK(m.alphas()[1] == Catch::Approx(0.5).margin(1e-6));
    CHECK(m.bias() == Catch::Approx(0.0).margin(1e-6));

    for (double x : {-2.0, -0.3, 0.4, 1.7}) {
        std::vector<double> row = {x};
        CHECK(m.margin(row) == Catch::Approx(x).margin(1e-6));
    }
    check_feasibility(m);
}

TEST_CASE("rbf kernel separates xor") {
    auto ds = xor_points();
    auto m = smo_fit(ds, KernelSpec::rbf(1.0), 10.0, 1e-4);
    for (std::size_t i = 0; i < ds.n_rows(); ++i)
        CHECK(m.classify(ds.rows[i]) == ds.labels[i]);
    check_feasibility(m);
}

TEST_CASE("trained models satisfy the dual constraints") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto ds = fixtures::separable_dataset(40, 3, 0.8, seed);
        for (double c_reg : {0.5, 1.0, 10.0}) {
            auto m = smo_fit(ds, KernelSpec::rbf(2.0), c_reg, 1e-4);
            check_feasibility(m);

            // free support vectors sit on the margin
            for (std::size_t i = 0; i < m.alphas().size(); ++i) {
                if (m.alphas()[i] > 1e-9 && m.alphas()[i] < c_reg - 1e-9) {
                    double mar = m.margin(m.support_vectors()[i]);
                    CHECK(std::fabs(mar - m.support_labels()[i]) <= 10 * m.tol());
                }
            }
        }
    }
}

TEST_CASE("smo reaches the brute-force grid optimum on tiny instances") {
    Rng rng(77);
    for (int t = 0; t < 8; ++t) {
        std::size_t n = 2 + rng.below(2);  // 2 or 3 points
        Dataset ds;
        ds.feature_names = {"a", "b"};
        for (std::size_t i = 0; i < n; ++i) {
            ds.rows.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
            ds.labels.push_back(i == 0 ? SongClass::Hit
                                       : (i == 1 ? SongClass::NonHit
                                                 : (rng.below(2) ? SongClass::Hit
                                                                 : SongClass::NonHit)));
            ds.dates.push_back(fixtures::date_from_ordinal(static_cast<int>(i)));
        }
        auto kernel = t % 2 == 0 ? KernelSpec::polynomial(1, 1.0) : KernelSpec::rbf(1.5);
        double c_reg = 1.0;
        auto m = smo_fit(ds, kernel, c_reg, 1e-6);

        Matrix k(n, std::vector<double>(n));
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = ds.labels[i] == SongClass::Hit ? 1.0 : -1.0;
            for (std::size_t j = 0; j < n; ++j)
                k[i][j] = kernel_eval(kernel, ds.rows[i], ds.rows[j]);
        }
        double grid_best = oracle::grid_best_dual(k, y, c_reg, 0.01);
        CHECK(svm_dual_objective(m) >= grid_best - 1e-6);
        check_feasibility(m);
    }
}

TEST_CASE("grid climb returns a dominant point") {
    auto eval = [](std::size_t a, std::size_t b) {
        return a == 3 && b == 2 ? 1.0 : 0.1 * static_cast<double>(a + b) / 20.0;
    };
    auto r = grid_search_climb(11, 7, eval, eval, true);
    CHECK(r.a == 3);
    CHECK(r.b == 2);
}

TEST_CASE("grid climb stops at the border") {
    // refine keeps increasing toward larger a: the climb must stop when it
    // first lands on the border rather than walking along it
    auto screen = [](std::size_t a, std::size_t b) {
        return a == 2 && b == 1 ? 1.0 : 0.0;
    };
    auto refine = [](std::size_t a, std::size_t b) {
        return static_cast<double>(a) + 0.01 * static_cast<double>(b);
    };
    auto r = grid_search_climb(5, 3, screen, refine, true);
    CHECK(r.a == 4);  // reached the a-border...
    CHECK(r.b <= 2);  // ...and stopped climbing there

    // a border start with no better neighbor stays put
    auto flat_screen = [](std::size_t a, std::size_t b) {
        return a == 0 && b == 0 ? 5.0 : 0.0;
    };
    auto flat_refine = [](std::size_t a, std::size_t b) {
        return a == 0 && b == 0 ? 5.0 : 1.0;
    };
    auto r2 = grid_search_climb(5, 3, flat_screen, flat_refine, true);
    CHECK(r2.a == 0);
    CHECK(r2.b == 0);
}

TEST_CASE("four-neighborhood restricts diagonal moves") {
    int evals = 0;
    auto screen = [](std::size_t, std::size_t) { return 0.0; };
    auto refine = [&](std::size_t a, std::size_t b) {
        ++evals;
        return a == 2 && b == 1 ? 1.0 : 0.0;
    };
    // start lands at (0,0) after screening ties; 4-neighborhood from the
    // interior evaluates 4 neighbors, 8-neighborhood evaluates 8
    grid_search_climb(5, 3, screen, refine, false);
    int four = evals;
    evals = 0;
    grid_search_climb(5, 3, screen, refine, true);
    CHECK(four < evals);
}

TEST_CASE("grid search homes in on a usable rbf width") {
    // xor-style blobs at distance ~2: widths near sigma=1 work, the extreme
    // grid corners do not
    Rng rng(15);
    Dataset ds;
    ds.feature_names = {"x1", "x2"};
    for (int i = 0; i < 120; ++i) {
        double cx = i % 2 == 0 ? 1.0 : -1.0;
        double cy = (i / 2) % 2 == 0 ? 1.0 : -1.0;
        ds.rows.push_back({cx + 0.3 * rng.normal(), cy + 0.3 * rng.normal()});
        ds.labels.push_back(cx * cy > 0 ? SongClass::Hit : SongClass::NonHit);
        ds.dates.push_back(fixtures::date_from_ordinal(i));
    }
    GridSearchOptions opt;
    opt.seed = 4;
    auto r = grid_search_svm(ds, KernelSpec::Kind::Rbf, opt);
    double inv_sigma_sq = 1.0 / (r.kernel.sigma * r.kernel.sigma);
    // within one grid step (a decade) of the generating width's decade
    CHECK(inv_sigma_sq >= 0.01);
    CHECK(inv_sigma_sq <= 10.0);
    CHECK(r.cv_auc > 0.9);
}
