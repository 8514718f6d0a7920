#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "fragmenta/empirics.hpp"
#include "fragmenta/fragmentation.hpp"
#include "fragmenta/split_law.hpp"

using namespace fragmenta;

TEST_SUITE("empirics") {

TEST_CASE("empirical cdf steps") {
    const EmpiricalCdf F(std::vector<double>{0.8, 0.2, 0.4, 0.4});
    CHECK(F.size() == 4);
    REQUIRE(std::is_sorted(F.sorted().begin(), F.sorted().end()));
    CHECK(F(0.1) == 0.0);
    CHECK(F(0.2) == doctest::Approx(0.25));
    CHECK(F(0.3) == doctest::Approx(0.25));
    CHECK(F(0.4) == doctest::Approx(0.75));
    CHECK(F(0.79) == doctest::Approx(0.75));
    CHECK(F(0.8) == 1.0);
    CHECK(F(2.0) == 1.0);
    CHECK_THROWS_AS(EmpiricalCdf(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("ks statistics on hand-checked samples") {
    const std::vector<double> a{0.25, 0.5, 0.75};
    CHECK(ks_uniform(a) == doctest::Approx(0.25).epsilon(1e-15));
    const std::vector<double> b{0.5};
    CHECK(ks_uniform(b) == doctest::Approx(0.5).epsilon(1e-15));

    // against the identity the two statistics coincide
    const auto ident = [](double x) { return x; };
    CHECK(ks_against(a, ident) == ks_uniform(a));

    const std::vector<double> empty;
    CHECK_THROWS_AS((void)ks_uniform(empty), std::invalid_argument);
    CHECK_THROWS_AS((void)ks_against(empty, ident), std::invalid_argument);
}

TEST_CASE("spacing cdf over a run") {
    const double x_c = 1e-2;
    const RunResult run = run_to_cutoff(SplitLaw::kakutani(), x_c, 8);
    const EmpiricalCdf F = spacing_cdf(run, x_c);
    CHECK(F.size() == run.spacings.size());
    CHECK(F(x_c) == 1.0);
    CHECK(F(0.0) == 0.0);
    CHECK_THROWS_AS(spacing_cdf(run, 2e-2), std::invalid_argument);
}

TEST_CASE("restricted spacing cdf") {
    const double x_c = 1e-3, y = 0.3;
    double count_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const RunResult run = run_to_cutoff(SplitLaw::kakutani(), x_c, seed);
        const EmpiricalCdf F = restricted_spacing_cdf(run, y, x_c);
        count_sum += static_cast<double>(F.size());
        REQUIRE(F.sorted().back() <= x_c);
        REQUIRE(F.size() < run.spacings.size());
    }
    // restricted count concentrates near 2y/x_c
    const double mean = count_sum / 50.0;
    CHECK(std::abs(mean - 2.0 * y / x_c) <= 0.05 * (2.0 * y / x_c));

    const RunResult run = run_to_cutoff(SplitLaw::kakutani(), 1e-2, 3);
    CHECK_THROWS_AS(restricted_spacing_cdf(run, 0.0, 1e-2), std::invalid_argument);
    CHECK_THROWS_AS(restricted_spacing_cdf(run, 1.5, 1e-2), std::invalid_argument);
    CHECK_THROWS_AS(restricted_spacing_cdf(run, 1e-12, 1e-2), std::invalid_argument);
    CHECK_THROWS_AS(restricted_spacing_cdf(run, 0.3, 1e-3), std::invalid_argument);
}

TEST_CASE("partition point deviation") {
    const RunResult run = run_to_cutoff(SplitLaw::kakutani(), 1e-2, 5);
    CHECK(point_cdf_deviation(run) == ks_uniform(run.partition_points));
    CHECK(point_cdf_deviation(run) < 0.2);

    const RunResult trivial = run_to_cutoff(SplitLaw::kakutani(), 1.0, 5);
    CHECK_THROWS_AS((void)point_cdf_deviation(trivial), std::invalid_argument);
}

TEST_CASE("martingale increments") {
    const SplitLaw law = SplitLaw::kakutani();
    const double x_c = 1e-3;
    const RunResult run = run_to_cutoff(law, x_c, 21);

    const MartingaleSeries ms = martingale_increments(run, law, x_c / 2.0);
    CHECK(ms.x_query == x_c / 2.0);
    CHECK(ms.bound_c == 2.0);
    REQUIRE(ms.increments.size() == run.n_steps());
    REQUIRE(ms.partial_sums.size() == run.n_steps());
    double s = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < ms.increments.size(); ++i) {
        REQUIRE(std::abs(ms.increments[i]) <= ms.bound_c);
        s += ms.increments[i];
        REQUIRE(ms.partial_sums[i] == doctest::Approx(s).epsilon(1e-12));
        mean += ms.increments[i];
    }
    mean /= static_cast<double>(ms.increments.size());
    CHECK(std::abs(mean) < 0.2);

    // x = 0 queries the empty column: every increment vanishes
    const MartingaleSeries zero = martingale_increments(run, law, 0.0);
    for (double inc : zero.increments) REQUIRE(inc == 0.0);

    CHECK_THROWS_AS(martingale_increments(run, law, 2.0 * x_c), std::invalid_argument);
    CHECK_THROWS_AS(martingale_increments(run, law, x_c * 0.03), std::invalid_argument);
}

TEST_CASE("concentration rows") {
    const std::vector<double> sums{0.5, -1.5, 2.0, 0.0};
    const std::vector<double> lambdas{0.0, 1.0, 3.0};
    const auto rows = concentration_check(sums, 10, 2.0, lambdas);
    REQUIRE(rows.size() == 3);

    CHECK(rows[0].lambda == 0.0);
    CHECK(rows[0].empirical == 1.0);
    CHECK(rows[0].bound == 2.0);
    CHECK(!rows[0].violated);

    CHECK(rows[1].empirical == doctest::Approx(0.5));
    CHECK(rows[1].bound == doctest::Approx(2.0 * std::exp(-1.0 / 80.0)).epsilon(1e-14));
    CHECK(rows[2].empirical == doctest::Approx(0.0));

    // a sample far outside the bound must be flagged
    const std::vector<double> big(100, 10.0);
    const std::vector<double> lam{5.0};
    const auto flagged = concentration_check(big, 1, 0.1, lam);
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0].violated);

    const std::vector<double> none;
    CHECK_THROWS_AS((void)concentration_check(none, 10, 2.0, lambdas), std::invalid_argument);
    CHECK_THROWS_AS((void)concentration_check(sums, 0, 2.0, lambdas), std::invalid_argument);
    CHECK_THROWS_AS((void)concentration_check(sums, 10, 0.0, lambdas), std::invalid_argument);
}

} // TEST_SUITE
