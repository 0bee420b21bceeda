#include <catch2/catch_amalgamated.hpp>

#include "dancehit/rng.hpp"
#include "dancehit/wilcoxon.hpp"
#include "support/oracles.hpp"

using namespace dancehit;

TEST_CASE("all-positive differences of ranks 1..5") {
    std::vector<double> a = {1, 2, 3, 4, 5};
    std::vector<double> b = {0, 0, 0, 0, 0};
    CHECK(wilcoxon_signed_rank(a, b) == 0.0625);  // 2/32
}

TEST_CASE("identical samples give p = 1") {
    std::vector<double> a = {0.3, 0.5, 0.9};
    CHECK(wilcoxon_signed_rank(a, a) == 1.0);
}

TEST_CASE("two-sided p is symmetric in the sample order") {
    Rng rng(9);
    for (int t = 0; t < 50; ++t) {
        std::size_t n = 1 + rng.below(15);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.normal();
            b[i] = rng.normal();
        }
        CHECK(wilcoxon_signed_rank(a, b) == wilcoxon_signed_rank(b, a));
    }
}

TEST_CASE("exact p matches full enumeration for n <= 12") {
    Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        std::size_t n = 1 + rng.below(12);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<double>(rng.below(6)) / 2.0;  // ties and zeros likely
            b[i] = static_cast<double>(rng.below(6)) / 2.0;
        }
        double expected = oracle::wilcoxon_enum_p(a, b);
        double actual = wilcoxon_signed_rank(a, b);
        CHECK(actual == expected);
    }
}

TEST_CASE("normal approximation regime behaves sanely") {
    Rng rng(13);
    std::vector<double> a(40), b(40);
    for (std::size_t i = 0; i < 40; ++i) {
        a[i] = rng.normal();
        b[i] = a[i] + 0.01 * rng.normal();
    }
    double p = wilcoxon_signed_rank(a, b);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);

    // strongly one-sided differences should be highly significant
    std::vector<double> big(40), zero(40, 0.0);
    for (std::size_t i = 0; i < 40; ++i) big[i] = 1.0 + rng.real();
    CHECK(wilcoxon_signed_rank(big, zero) < 1e-6);
}

TEST_CASE("length mismatch is rejected") {
    std::vector<double> a = {1, 2};
    std::vector<double> b = {1};
    CHECK_THROWS(wilcoxon_signed_rank(a, b));
}
