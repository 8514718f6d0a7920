#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "fragmenta/rng.hpp"
#include "fragmenta/split_law.hpp"

using namespace fragmenta;

namespace {

// first Catalan numbers, the oracle for the fringe pmf
const double kCatalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};

std::vector<double> fringe_pmf_oracle(int k) {
    // unordered split weight q(i) = C_{i-1} C_{k-i}, folded onto the smaller piece
    double Z = 0.0;
    for (int i = 1; i <= k - 1; ++i) Z += kCatalan[i - 1] * kCatalan[k - i];
    std::vector<double> p(static_cast<std::size_t>(k / 2), 0.0);
    for (int i = 1; i <= k - 1; ++i)
        p[static_cast<std::size_t>(std::min(i, k - i) - 1)] += kCatalan[i - 1] * kCatalan[k - i] / Z;
    return p;
}

} // namespace

TEST_SUITE("split_law") {

TEST_CASE("expected counts for the closed-form families") {
    const SplitLaw kak = SplitLaw::kakutani();
    CHECK(kak.expected_count(0.3) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(kak.expected_count(0.0) == 0.0);
    CHECK(kak.expected_count(1.0) == doctest::Approx(2.0).epsilon(1e-15));

    const SplitLaw bu3 = SplitLaw::b_uniform(3);
    CHECK(bu3.expected_count(0.5) == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(bu3.expected_count(1.0) == doctest::Approx(3.0).epsilon(1e-15));

    // the m-ary density family is the same law as b_uniform with b = m
    const SplitLaw m3 = SplitLaw::m_ary_density(3);
    for (double x : {0.1, 0.35, 0.8})
        CHECK(m3.expected_count(x) == doctest::Approx(bu3.expected_count(x)).epsilon(1e-15));

    CHECK_THROWS_AS((void)kak.expected_count(-0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)kak.expected_count(1.1), std::invalid_argument);
    CHECK_THROWS_AS((void)SplitLaw::heavy_tail(1.5).expected_count(0.5), std::logic_error);
}

TEST_CASE("densities") {
    CHECK(SplitLaw::kakutani().density(0.7) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(SplitLaw::b_uniform(3).density(0.5) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(SplitLaw::m_ary_density(4).density(0.0) == doctest::Approx(12.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)SplitLaw::catalan_fringe().density(0.5), std::logic_error);
}

TEST_CASE("custom density reproduces the ternary family by quadrature") {
    const SplitLaw custom =
        SplitLaw::custom_density([](double x) { return 6.0 * (1.0 - x); }, 3);
    const SplitLaw bu3 = SplitLaw::b_uniform(3);
    for (double x : {0.05, 0.25, 0.5, 0.9, 1.0})
        CHECK(custom.expected_count(x) == doctest::Approx(bu3.expected_count(x)).epsilon(1e-9));

    // the declared child count must match the integral of f
    CHECK_THROWS_AS(SplitLaw::custom_density([](double) { return 2.0; }, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(SplitLaw::custom_density(nullptr, 2), std::invalid_argument);
    CHECK_THROWS_AS(SplitLaw::custom_density([](double x) { return x - 0.5; }, 2),
                    std::invalid_argument);
}

TEST_CASE("sample_split conserves length and orders offsets") {
    SplitMix64 rng(11);
    const SplitLaw bu4 = SplitLaw::b_uniform(4);
    for (int rep = 0; rep < 200; ++rep) {
        const double len = 0.1 + 0.9 * rng.uniform01();
        const auto off = bu4.sample_split(len, rng);
        REQUIRE(off.size() == 3);
        double prev = 0.0;
        for (double o : off) {
            REQUIRE(o > prev);
            REQUIRE(o < len);
            prev = o;
        }
        // spacing lengths reassemble the parent exactly
        double sum = off[0] + (off[1] - off[0]) + (off[2] - off[1]) + (len - off[2]);
        CHECK(sum == doctest::Approx(len).epsilon(1e-15));
    }
    CHECK_THROWS_AS(bu4.sample_split(0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(SplitLaw::heavy_tail(1.5).sample_split(1.0, rng), std::logic_error);
}

TEST_CASE("count calibration: mean child counts converge to F") {
    const int R = 10000;
    for (const SplitLaw& law : {SplitLaw::kakutani(), SplitLaw::b_uniform(3)}) {
        SplitMix64 rng(2024);
        std::vector<double> counts(20, 0.0);
        std::vector<double> offsets;
        for (int r = 0; r < R; ++r) {
            law.sample_split(1.0, rng, offsets);
            std::vector<double> lens;
            double prev = 0.0;
            for (double o : offsets) {
                lens.push_back(o - prev);
                prev = o;
            }
            lens.push_back(1.0 - prev);
            for (int j = 1; j <= 20; ++j) {
                const double x = j / 20.0;
                for (double l : lens)
                    if (l < x) counts[static_cast<std::size_t>(j - 1)] += 1.0;
            }
        }
        const double tol = 4.0 / std::sqrt(static_cast<double>(R));
        for (int j = 1; j <= 20; ++j) {
            const double mean = counts[static_cast<std::size_t>(j - 1)] / R;
            REQUIRE(std::abs(mean - law.expected_count(j / 20.0)) < tol);
        }
    }
}

TEST_CASE("heavy tail pmf") {
    const SplitLaw law = SplitLaw::heavy_tail(1.5);
    const auto p4 = law.piece_pmf(4);
    REQUIRE(p4.size() == 2);
    const double Z = 1.0 + std::pow(2.0, -1.5);
    CHECK(p4[0] == doctest::Approx(1.0 / Z).epsilon(1e-14));
    CHECK(p4[1] == doctest::Approx(std::pow(2.0, -1.5) / Z).epsilon(1e-14));

    for (std::int64_t s : {2, 3, 7, 20, 101}) {
        const auto p = law.piece_pmf(s);
        REQUIRE(p.size() == static_cast<std::size_t>(s / 2));
        const double total = std::accumulate(p.begin(), p.end(), 0.0);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 1; i < p.size(); ++i) REQUIRE(p[i] < p[i - 1]);
    }
    CHECK_THROWS_AS((void)law.piece_pmf(1), std::invalid_argument);
    CHECK_THROWS_AS((void)SplitLaw::kakutani().piece_pmf(4), std::logic_error);
    CHECK_THROWS_AS(SplitLaw::heavy_tail(1.0), std::invalid_argument);
}

TEST_CASE("heavy tail sampling matches the pmf") {
    const SplitLaw law = SplitLaw::heavy_tail(1.5);
    SplitMix64 rng(5);
    for (int i = 0; i < 100; ++i) REQUIRE(law.sample_piece(2, rng) == 1);

    const int R = 200000;
    const auto p = law.piece_pmf(9);
    std::vector<double> freq(p.size(), 0.0);
    for (int r = 0; r < R; ++r) {
        const auto i = law.sample_piece(9, rng);
        REQUIRE(i >= 1);
        REQUIRE(i <= 4);
        freq[static_cast<std::size_t>(i - 1)] += 1.0;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double sigma = std::sqrt(p[i] * (1.0 - p[i]) / R);
        REQUIRE(std::abs(freq[i] / R - p[i]) < 5.0 * sigma + 1e-4);
    }
}

TEST_CASE("heavy tail sampling beyond the prefix table") {
    // parents above 2e5 exercise the tail-inversion branch
    const SplitLaw law = SplitLaw::heavy_tail(1.5);
    SplitMix64 rng(17);
    const std::int64_t s = 250000;
    int ones = 0;
    const int R = 20000;
    for (int r = 0; r < R; ++r) {
        const auto i = law.sample_piece(s, rng);
        REQUIRE(i >= 1);
        REQUIRE(i <= s / 2);
        if (i == 1) ++ones;
    }
    // P(1) ~ 1/zeta(3/2) at this size
    CHECK(static_cast<double>(ones) / R == doctest::Approx(1.0 / 2.612375348685488).epsilon(0.02));
}

TEST_CASE("catalan fringe pmf against the catalan-number oracle") {
    const SplitLaw law = SplitLaw::catalan_fringe();

    const auto p4 = law.piece_pmf(4);
    REQUIRE(p4.size() == 2);
    CHECK(p4[0] == doctest::Approx(7.0 / 9.0).epsilon(1e-12));
    CHECK(p4[1] == doctest::Approx(2.0 / 9.0).epsilon(1e-12));

    const auto p5 = law.piece_pmf(5);
    REQUIRE(p5.size() == 2);
    CHECK(p5[0] == doctest::Approx(19.0 / 28.0).epsilon(1e-12));
    CHECK(p5[1] == doctest::Approx(9.0 / 28.0).epsilon(1e-12));

    for (int k : {2, 3, 6, 8, 10}) {
        const auto p = law.piece_pmf(k);
        const auto want = fringe_pmf_oracle(k);
        REQUIRE(p.size() == want.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            CHECK(p[i] == doctest::Approx(want[i]).epsilon(1e-11));
    }
}

TEST_CASE("catalan fringe sampling matches the pmf") {
    const SplitLaw law = SplitLaw::catalan_fringe();
    SplitMix64 rng(31);
    const int R = 200000;
    const auto p = law.piece_pmf(9);
    std::vector<double> freq(p.size(), 0.0);
    for (int r = 0; r < R; ++r) {
        const auto i = law.sample_piece(9, rng);
        REQUIRE(i >= 1);
        REQUIRE(i <= 4);
        freq[static_cast<std::size_t>(i - 1)] += 1.0;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double sigma = std::sqrt(p[i] * (1.0 - p[i]) / R);
        REQUIRE(std::abs(freq[i] / R - p[i]) < 5.0 * sigma + 1e-4);
    }

    // large parents terminate and stay in the half range
    for (int r = 0; r < 50; ++r) {
        const auto i = law.sample_piece(1000000, rng);
        REQUIRE(i >= 1);
        REQUIRE(i <= 500000);
    }
}

TEST_CASE("symmetric pmf is symmetric and normalized") {
    for (const SplitLaw& law : {SplitLaw::heavy_tail(1.5), SplitLaw::catalan_fringe()}) {
        for (std::int64_t s : {2, 3, 4, 5, 9, 30}) {
            const auto p = law.symmetric_pmf(s);
            REQUIRE(p.size() == static_cast<std::size_t>(s - 1));
            const double total = std::accumulate(p.begin(), p.end(), 0.0);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            for (std::size_t i = 0; i < p.size(); ++i)
                CHECK(p[i] == doctest::Approx(p[p.size() - 1 - i]).epsilon(1e-12));
        }
    }
    const auto p3 = SplitLaw::heavy_tail(1.5).symmetric_pmf(3);
    CHECK(p3[0] == doctest::Approx(0.5).epsilon(1e-15));
    const auto c4 = SplitLaw::catalan_fringe().symmetric_pmf(4);
    CHECK(c4[0] == doctest::Approx(7.0 / 18.0).epsilon(1e-12));
    CHECK(c4[1] == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("parse and serialization round trips") {
    CHECK(SplitLaw::parse("kakutani").kind() == LawKind::kakutani);
    CHECK(SplitLaw::parse("buniform5").branching() == 5);
    CHECK(SplitLaw::parse("mary26").branching() == 26);
    CHECK(SplitLaw::parse("heavy1.5").alpha() == doctest::Approx(1.5));
    CHECK(SplitLaw::parse("catalan").kind() == LawKind::catalan_fringe);

    CHECK_THROWS_WITH_AS(SplitLaw::parse("bogus"),
                         doctest::Contains("kakutani"), std::invalid_argument);
    CHECK_THROWS_AS(SplitLaw::parse("buniform"), std::invalid_argument);
    CHECK_THROWS_AS(SplitLaw::parse("heavy1.5x"), std::invalid_argument);

    for (const char* tok : {"kakutani", "buniform3", "mary4", "heavy1.5", "catalan"}) {
        const SplitLaw law = SplitLaw::parse(tok);
        const SplitLaw back = SplitLaw::from_json(law.to_json());
        CHECK(back.name() == law.name());
        CHECK(back.kind() == law.kind());
    }
    CHECK_THROWS_AS(
        SplitLaw::from_json(SplitLaw::custom_density([](double) { return 2.0; }, 2).to_json()),
        std::invalid_argument);
}

} // TEST_SUITE
