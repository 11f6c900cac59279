#include <catch2/catch_amalgamated.hpp>

#include "varshare/stats.hpp"

using namespace varshare;

// Reference values computed with mpmath at 30 digits.
TEST_CASE("chi-square survival function matches high-precision references") {
    struct Case {
        double df, x, expected;
    };
    const Case cases[] = {
        {1, 3.841458820694124, 0.050000000000000057},
        {2, 5.991464547107979, 0.050000000000000074},
        {5, 11.070497693516351, 0.050000000000000052},
        {10, 3.940299136, 0.9500000000052107},
        {3, 0.1, 0.99183742373187648},
        {7, 14.2, 0.047736373029920364},
        {1, 1e-8, 0.99992021154405269},
        {50, 67.50480655, 0.049999999996121033},
        {2, 1e3, 7.1245764067412855e-218},
    };
    for (const auto& c : cases) {
        double got = chi2_sf(c.x, c.df);
        REQUIRE_THAT(got, Catch::Matchers::WithinRel(c.expected, 1e-10));
    }
    REQUIRE(chi2_sf(0.0, 3) == 1.0);
    REQUIRE(chi2_sf(-1.0, 3) == 1.0);
}

TEST_CASE("normal survival function matches references") {
    REQUIRE(normal_sf(0.0) == 0.5);
    REQUIRE_THAT(normal_sf(1.0), Catch::Matchers::WithinRel(0.15865525393145705, 1e-12));
    REQUIRE_THAT(normal_sf(1.959963984540054), Catch::Matchers::WithinRel(0.025, 1e-10));
    REQUIRE_THAT(normal_sf(-2.5), Catch::Matchers::WithinRel(0.99379033467422386, 1e-12));
    REQUIRE_THAT(normal_sf(3.7), Catch::Matchers::WithinRel(0.00010779973347738826, 1e-12));
    REQUIRE_THAT(normal_sf(8.0), Catch::Matchers::WithinRel(6.2209605742717841e-16, 1e-10));
    REQUIRE_THAT(normal_pvalue_two_sided(-1.959963984540054),
                 Catch::Matchers::WithinRel(0.05, 1e-10));
}

TEST_CASE("gamma_p and gamma_q are complementary") {
    for (double a : {0.5, 1.0, 2.5, 25.0}) {
        for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 60.0}) {
            REQUIRE_THAT(gamma_p(a, x) + gamma_q(a, x), Catch::Matchers::WithinAbs(1.0, 1e-12));
        }
    }
}

TEST_CASE("kolmogorov tail matches references") {
    REQUIRE_THAT(ks_tail(0.5), Catch::Matchers::WithinRel(0.963945243665, 1e-9));
    REQUIRE_THAT(ks_tail(1.0), Catch::Matchers::WithinRel(0.269999671677, 1e-9));
    REQUIRE_THAT(ks_tail(1.224), Catch::Matchers::WithinRel(0.0999255775063, 1e-9));
    REQUIRE_THAT(ks_tail(1.62762), Catch::Matchers::WithinRel(0.0100002351302, 1e-9));
}

TEST_CASE("KS test accepts a true-normal sample and rejects a shifted one") {
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> good, bad;
    for (int i = 0; i < 2000; ++i) {
        double z = normal(rng);
        good.push_back(z);
        bad.push_back(z + 0.4);
    }
    REQUIRE(ks_test_standard_normal(good).p_value > 0.01);
    REQUIRE(ks_test_standard_normal(bad).p_value < 1e-6);
}

TEST_CASE("Benjamini-Hochberg basic behaviour") {
    std::vector<double> p{0.001, 0.02, 0.9, 0.04, 0.5};
    auto rej = benjamini_hochberg(p, 0.05);
    REQUIRE(rej[0]);
    REQUIRE_FALSE(rej[2]);
    // monotone: rejecting the k-th smallest implies rejecting all smaller
    std::vector<double> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    bool seen_accept = false;
    for (double q : sorted) {
        bool r = rej[std::find(p.begin(), p.end(), q) - p.begin()];
        if (!r) seen_accept = true;
        if (seen_accept) REQUIRE_FALSE(r);
    }
}

TEST_CASE("median_of handles odd and even lengths") {
    REQUIRE(median_of({3.0, 1.0, 2.0}) == 2.0);
    REQUIRE(median_of({4.0, 1.0, 2.0, 3.0}) == 2.5);
    REQUIRE(std::isnan(median_of({})));
}
