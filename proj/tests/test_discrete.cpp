#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fragmenta/discrete.hpp"
#include "fragmenta/math_util.hpp"
#include "fragmenta/split_law.hpp"

using namespace fragmenta;

namespace {

std::int64_t snapshot_mass(const DiscreteRun::Snapshot& snap) {
    std::int64_t m = 0;
    for (const auto& [size, count] : snap.counts) m += size * count;
    return m;
}

} // namespace

TEST_SUITE("discrete") {

TEST_CASE("simulation conserves mass and respects the stop size") {
    for (const SplitLaw& law : {SplitLaw::heavy_tail(1.5), SplitLaw::catalan_fringe()}) {
        const DiscreteRun run = simulate_discrete(law, 20000, 5, 3, {10000, 1000, 50});
        CHECK(run.n == 20000);
        CHECK(run.stop_size == 5);
        CHECK(run.total_mass() == 20000);
        for (const auto& [size, count] : run.final_counts) {
            REQUIRE(size >= 1);
            REQUIRE(size <= 5);
            REQUIRE(count >= 1);
        }
        REQUIRE(std::is_sorted(run.final_counts.begin(), run.final_counts.end()));

        REQUIRE(!run.arrivals.empty());
        CHECK(run.arrivals.front().size == 20000);
        CHECK(run.arrivals.front().count == 1);
        CHECK(run.arrivals.front().total_pieces == 1);
        for (std::size_t i = 1; i < run.arrivals.size(); ++i) {
            REQUIRE(run.arrivals[i].size < run.arrivals[i - 1].size);
            REQUIRE(run.arrivals[i].count >= 1);
            REQUIRE(run.arrivals[i].total_pieces > run.arrivals[i - 1].total_pieces);
        }
        CHECK(run.arrival_count(20000) == 1);
        CHECK(run.arrivals.back().size <= 5);

        REQUIRE(run.snapshots.size() == 3);
        CHECK(run.snapshots[0].milestone == 10000);
        CHECK(run.snapshots[1].milestone == 1000);
        CHECK(run.snapshots[2].milestone == 50);
        for (const auto& snap : run.snapshots) {
            REQUIRE(snap.max_size <= snap.milestone);
            REQUIRE(snapshot_mass(snap) == 20000);
        }
        REQUIRE(run.snapshots[0].step <= run.snapshots[1].step);
        REQUIRE(run.snapshots[1].step <= run.snapshots[2].step);
    }
}

TEST_CASE("milestones are merged and crossed at step zero when trivial") {
    const DiscreteRun run = simulate_discrete(1000, 1.5, 100, 7, {500, 500, 4000});
    REQUIRE(run.snapshots.size() == 2);
    CHECK(run.snapshots[0].milestone == 4000);
    CHECK(run.snapshots[0].step == 0);
    CHECK(run.snapshots[0].max_size == 1000);
    CHECK(run.snapshots[1].milestone == 500);
}

TEST_CASE("overloads and determinism") {
    const DiscreteRun a = simulate_discrete(SplitLaw::heavy_tail(1.5), 5000, 10, 99);
    const DiscreteRun b = simulate_discrete(5000, 1.5, 10, 99);
    CHECK(a.steps == b.steps);
    REQUIRE(a.final_counts == b.final_counts);
    REQUIRE(a.arrivals.size() == b.arrivals.size());
    for (std::size_t i = 0; i < a.arrivals.size(); ++i) {
        REQUIRE(a.arrivals[i].size == b.arrivals[i].size);
        REQUIRE(a.arrivals[i].count == b.arrivals[i].count);
    }

    const DiscreteRun c = simulate_discrete(5000, 1.5, 10, 100);
    CHECK(a.final_counts != c.final_counts);
}

TEST_CASE("simulation argument validation") {
    CHECK_THROWS_AS(simulate_discrete(1, 1.5, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(simulate_discrete(100, 1.5, 100, 0), std::invalid_argument);
    CHECK_THROWS_AS(simulate_discrete(100, 1.5, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(simulate_discrete(SplitLaw::kakutani(), 100, 10, 0),
                    std::invalid_argument);
}

TEST_CASE("renewal series") {
    const HtSeries s = solve_Ht_recurrence(1.5, 2000);
    CHECK(s.alpha == 1.5);
    REQUIRE(s.H.size() == 2001);
    CHECK(s.H[0] == 1.0);
    CHECK(s.H[1] == doctest::Approx(0.3827933839994266).epsilon(1e-12));
    CHECK(s.H[2] == doctest::Approx(0.28186867364340273).epsilon(1e-12));
    for (double h : s.H) {
        REQUIRE(h > 0.0);
        REQUIRE(h <= 1.0);
    }

    // naive forward convolution over a short horizon
    const double zeta = riemann_zeta(1.5);
    std::vector<double> H{1.0};
    for (std::size_t t = 1; t <= 50; ++t) {
        double v = 0.0;
        for (std::size_t j = 1; j <= t; ++j)
            v += std::pow(static_cast<double>(j), -1.5) / zeta * H[t - j];
        H.push_back(v);
    }
    for (std::size_t t = 0; t <= 50; ++t)
        REQUIRE(s.H[t] == doctest::Approx(H[t]).epsilon(1e-13));

    CHECK_THROWS_AS(solve_Ht_recurrence(1.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(solve_Ht_recurrence(0.9, 100), std::invalid_argument);
}

TEST_CASE("plateau measurement") {
    std::vector<double> H(1001, 0.0);
    H[0] = 1.0;
    for (std::size_t t = 1; t <= 1000; ++t) H[t] = 1.0 / std::sqrt(static_cast<double>(t));
    const PlateauStats ps = measure_plateau(H, 10, 1000);
    CHECK(ps.gamma_hat == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ps.rel_variation <= 1e-12);

    const HtSeries s = solve_Ht_recurrence(1.5, 400);
    const PlateauStats via_series = measure_plateau(s, 10, 400);
    const PlateauStats via_vector = measure_plateau(s.H, 10, 400);
    CHECK(via_series.gamma_hat == via_vector.gamma_hat);

    CHECK_THROWS_AS(measure_plateau(H, 0, 100), std::invalid_argument);
    CHECK_THROWS_AS(measure_plateau(H, 100, 100), std::invalid_argument);
    CHECK_THROWS_AS(measure_plateau(H, 10, 1001), std::invalid_argument);
}

TEST_CASE("critical point predictions") {
    const std::int64_t n = 1000000;
    const CriticalPoints cp = predict_critical_points(n);
    const double zeta = riemann_zeta(1.5);
    const double dn = static_cast<double>(n);
    CHECK(cp.M_c ==
          doctest::Approx(std::pow(2.0 / zeta, 2.0 / 3.0) * std::pow(dn, 2.0 / 3.0))
              .epsilon(1e-12));
    CHECK(cp.count_at_Mc / cp.M_c == doctest::Approx(zeta / 4.0).epsilon(1e-12));
    CHECK(cp.M_c_prime * cp.M_c == doctest::Approx(4.0 * dn / (zeta * zeta)).epsilon(1e-9));
    CHECK(cp.count_at_Mc_prime ==
          doctest::Approx(zeta / 4.0 * std::sqrt(dn * cp.M_c)).epsilon(1e-12));

    CHECK_THROWS_AS(predict_critical_points(9999), std::invalid_argument);
    CHECK_THROWS_AS(predict_critical_points(100000, 1.4), std::invalid_argument);
}

TEST_CASE("detector on a synthetic arrival profile") {
    // dense coverage up to 5000, then one arrival every 20 sizes: the trailing
    // window first reaches 70% occupancy at s = 5420
    DiscreteRun run;
    run.n = 20000;
    run.arrivals.push_back({20000, 1, 1});
    for (std::int64_t s = 10000; s >= 5020; s -= 20) run.arrivals.push_back({s, 1, 1});
    for (std::int64_t s = 5000; s >= 1; --s) run.arrivals.push_back({s, 1, 1});

    const auto found = detect_critical_size(run);
    REQUIRE(found.has_value());
    CHECK(*found == 5420);

    DiscreteRun empty;
    empty.n = 20000;
    empty.arrivals.push_back({20000, 1, 1});
    CHECK(!detect_critical_size(empty).has_value());

    CHECK_THROWS_AS(detect_critical_size(run, {0.0, 32, 4}), std::invalid_argument);
    CHECK_THROWS_AS(detect_critical_size(run, {1.2, 32, 4}), std::invalid_argument);
    CHECK_THROWS_AS(detect_critical_size(run, {0.7, 0, 4}), std::invalid_argument);
    CHECK_THROWS_AS(detect_critical_size(run, {0.7, 32, 0}), std::invalid_argument);
}

TEST_CASE("detector lands near the predicted critical size") {
    const std::int64_t n = 200000;
    const DiscreteRun run = simulate_discrete(n, 1.5, 32, 12);
    const auto found = detect_critical_size(run);
    REQUIRE(found.has_value());
    const double ratio = static_cast<double>(*found) / predict_critical_points(n).M_c;
    CHECK(ratio >= 0.4);
    CHECK(ratio <= 1.3);
}

TEST_CASE("reverse recurrence degenerates to a point mass at n") {
    const SplitLaw law = SplitLaw::heavy_tail(1.5);
    const std::int64_t n = 1000000;
    const auto rows = reverse_recurrence(n, law, 8);
    REQUIRE(rows.size() == 8);
    for (std::size_t k = 1; k <= 8; ++k) REQUIRE(rows[k - 1].size() == k);
    CHECK(rows[0][0] == static_cast<double>(n));
    CHECK(rows[1][0] == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
    CHECK(std::abs(rows[1][1]) <= 1e-9 * static_cast<double>(n));

    for (const auto& row : rows) {
        CHECK(std::abs(row[0] - static_cast<double>(n)) <= 1e-9 * static_cast<double>(n));
        double mass = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j)
            mass += static_cast<double>(j + 1) * row[j];
        REQUIRE(std::abs(mass - static_cast<double>(n)) <= 1e-9 * static_cast<double>(n));
    }

    CHECK_THROWS_AS(reverse_recurrence(0, law, 4), std::invalid_argument);
    CHECK_THROWS_AS(reverse_recurrence(100, law, 0), std::invalid_argument);
    CHECK_THROWS_AS(reverse_recurrence(100, SplitLaw::kakutani(), 4),
                    std::invalid_argument);
}

TEST_CASE("reverse system matrix") {
    const auto A = reverse_system_matrix(SplitLaw::heavy_tail(1.5), 3);
    REQUIRE(A.size() == 3);
    CHECK(A[0] == std::vector<double>{1.0, 0.5, 0.5});
    CHECK(A[1] == std::vector<double>{0.0, 1.0, 0.5});
    CHECK(A[2] == std::vector<double>{1.0, 2.0, 3.0});
    CHECK_THROWS_AS((void)reverse_system_matrix(SplitLaw::heavy_tail(1.5), 1),
                    std::invalid_argument);

    // forward consistency: A_k x_k reproduces (previous row, n)
    for (const SplitLaw& law : {SplitLaw::heavy_tail(1.5), SplitLaw::catalan_fringe()}) {
        const std::int64_t n = 100000;
        const auto rows = reverse_recurrence(n, law, 5);
        const auto A5 = reverse_system_matrix(law, 5);
        for (std::size_t j = 0; j < 5; ++j) {
            double lhs = 0.0;
            for (std::size_t i = 0; i < 5; ++i) lhs += A5[j][i] * rows[4][i];
            const double rhs = (j < 4) ? rows[3][j] : static_cast<double>(n);
            REQUIRE(std::abs(lhs - rhs) <= 1e-6 * static_cast<double>(n));
        }
    }
}

TEST_CASE("h(k) tables") {
    DiscreteRun run;
    run.n = 1024;
    run.arrivals.push_back({1024, 1, 1});
    run.arrivals.push_back({50, 3, 40});
    run.arrivals.push_back({10, 7, 200});

    const auto rows = make_hk_table(run, 1.5, {50, 10, 33});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].k == 50);
    CHECK(rows[0].h == 3);
    CHECK(rows[0].conjectured == doctest::Approx(1024.0 / std::pow(50.0, 1.5)));
    CHECK(rows[0].ratio == doctest::Approx(3.0 / rows[0].conjectured));
    CHECK(rows[1].h == 7);
    CHECK(rows[2].h == 0);
    CHECK_THROWS_AS(make_hk_table(run, 1.5, {0}), std::invalid_argument);
}

TEST_CASE("conjecture harness") {
    // k = 1 forces a full run to unit pieces, where h(1) = n exactly
    const auto unit = test_Hk_conjecture(100000, 1.5, {1}, 5);
    REQUIRE(unit.size() == 1);
    CHECK(unit[0].h == 100000);
    CHECK(unit[0].ratio == doctest::Approx(1.0));

    std::vector<std::int64_t> ks;
    for (std::int64_t k = 4; k <= 64; k *= 2) ks.push_back(k);
    const auto rows = test_Hk_conjecture(100000, 1.5, ks, 6);
    std::vector<double> lk, lh;
    for (const auto& r : rows)
        if (r.h >= 1) {
            lk.push_back(static_cast<double>(r.k));
            lh.push_back(static_cast<double>(r.h));
        }
    REQUIRE(lk.size() >= 4);
    const LogLogFit fit = fit_loglog(lk, lh);
    CHECK(fit.slope >= -2.2);
    CHECK(fit.slope <= -0.8);

    CHECK_THROWS_AS(test_Hk_conjecture(1000, 1.5, {}, 0), std::invalid_argument);
    CHECK_THROWS_AS(test_Hk_conjecture(1000, 1.5, {0, 5}, 0), std::invalid_argument);
}

} // TEST_SUITE
