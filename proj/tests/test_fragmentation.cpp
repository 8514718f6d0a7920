#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fragmenta/fragmentation.hpp"
#include "fragmenta/rng.hpp"
#include "fragmenta/split_law.hpp"

using namespace fragmenta;

namespace {

struct NaiveOut {
    std::vector<Spacing> spacings;
    std::vector<double> points;
    std::vector<double> maxima;
};

// reference simulator: flat vector, linear argmax scan, same draw order
NaiveOut naive_run(const SplitLaw& law, double x_c, std::uint64_t seed) {
    struct Iv {
        double left, length;
        std::uint64_t seq;
    };
    SplitMix64 rng(seed);
    std::vector<Iv> act;
    std::vector<Spacing> frozen;
    NaiveOut out;
    std::uint64_t next_seq = 1;
    if (x_c >= 1.0)
        frozen.push_back({0.0, 1.0});
    else
        act.push_back({0.0, 1.0, 0});
    std::vector<double> off;
    while (!act.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < act.size(); ++i)
            if (act[i].length > act[best].length ||
                (act[i].length == act[best].length && act[i].seq < act[best].seq))
                best = i;
        const Iv parent = act[best];
        act.erase(act.begin() + static_cast<std::ptrdiff_t>(best));
        out.maxima.push_back(parent.length);
        law.sample_split(parent.length, rng, off);
        double prev = parent.left;
        const double end = parent.left + parent.length;
        for (std::size_t j = 0; j <= off.size(); ++j) {
            const double right = (j < off.size()) ? parent.left + off[j] : end;
            const double len = right - prev;
            if (len <= x_c)
                frozen.push_back({prev, len});
            else
                act.push_back({prev, len, next_seq++});
            prev = right;
        }
    }
    std::sort(frozen.begin(), frozen.end(),
              [](const Spacing& a, const Spacing& b) { return a.left < b.left; });
    out.spacings = std::move(frozen);
    for (std::size_t i = 1; i < out.spacings.size(); ++i)
        out.points.push_back(out.spacings[i].left);
    return out;
}

} // namespace

TEST_SUITE("fragmentation") {

TEST_CASE("greedy run matches the reference simulator bit for bit") {
    struct Case {
        SplitLaw law;
        std::uint64_t seed;
    };
    const Case cases[] = {{SplitLaw::kakutani(), 1},
                          {SplitLaw::kakutani(), 2},
                          {SplitLaw::kakutani(), 3},
                          {SplitLaw::b_uniform(3), 7}};
    for (const auto& c : cases) {
        const RunResult run = run_to_cutoff(c.law, 0.05, c.seed);
        const NaiveOut ref = naive_run(c.law, 0.05, c.seed);
        REQUIRE(run.maxima.size() == ref.maxima.size());
        for (std::size_t i = 0; i < ref.maxima.size(); ++i)
            REQUIRE(run.maxima[i] == ref.maxima[i]);
        REQUIRE(run.spacings.size() == ref.spacings.size());
        for (std::size_t i = 0; i < ref.spacings.size(); ++i) {
            REQUIRE(run.spacings[i].left == ref.spacings[i].left);
            REQUIRE(run.spacings[i].length == ref.spacings[i].length);
        }
        REQUIRE(run.partition_points == ref.points);
    }
}

TEST_CASE("run invariants") {
    for (const SplitLaw& law : {SplitLaw::kakutani(), SplitLaw::b_uniform(4)}) {
        const double x_c = 1e-3;
        const RunResult run = run_to_cutoff(law, x_c, 99);
        const std::size_t b = static_cast<std::size_t>(law.branching());

        CHECK(std::abs(run.total_length() - 1.0) <= 1e-12);
        CHECK(run.spacings.size() == (b - 1) * run.n_steps() + 1);
        CHECK(run.partition_points.size() == run.spacings.size() - 1);
        CHECK(run.x_c == x_c);
        CHECK(run.seed == 99);

        for (const auto& sp : run.spacings) {
            REQUIRE(sp.length > 0.0);
            REQUIRE(sp.length <= x_c);
        }
        REQUIRE(std::is_sorted(run.partition_points.begin(), run.partition_points.end()));
        for (std::size_t i = 1; i < run.maxima.size(); ++i)
            REQUIRE(run.maxima[i] <= run.maxima[i - 1]);
        CHECK(run.maxima.front() == 1.0);
    }
}

TEST_CASE("xi count rows") {
    const RunResult run = run_to_cutoff(SplitLaw::b_uniform(3), 1e-2, 4);
    REQUIRE(run.xi_counts.size() == run.n_steps());
    std::size_t frozen_total = 0;
    for (const auto& row : run.xi_counts) {
        CHECK(row[0] == 0);
        for (int k = 1; k < kXiGridSize; ++k) REQUIRE(row[k] >= row[k - 1]);
        REQUIRE(row[kXiGridSize - 1] <= 3);
        frozen_total += row[kXiGridSize - 1];
    }
    // every final spacing froze out of exactly one split
    CHECK(frozen_total == run.spacings.size());
}

TEST_CASE("stepwise state bookkeeping") {
    const SplitLaw law = SplitLaw::b_uniform(3);
    FragState st(law, 0.05, 9);
    REQUIRE(!st.finished());
    CHECK(st.x_c() == 0.05);
    CHECK(st.current_max() == 1.0);
    CHECK_THROWS_AS(st.take_result(), std::logic_error);

    while (!st.finished()) {
        const double top = st.current_max();
        const SplitEvent ev = st.step();
        CHECK(ev.parent.length == top);
        REQUIRE(ev.children.size() == 3);
        CHECK(ev.children.front().left == ev.parent.left);
        double prev_right = ev.parent.left;
        double len_sum = 0.0;
        for (const auto& ch : ev.children) {
            REQUIRE(ch.left == doctest::Approx(prev_right).epsilon(1e-12));
            REQUIRE(ch.length > 0.0);
            prev_right = ch.left + ch.length;
            len_sum += ch.length;
        }
        CHECK(prev_right == doctest::Approx(ev.parent.left + ev.parent.length).epsilon(1e-14));
        CHECK(len_sum == doctest::Approx(ev.parent.length).epsilon(1e-12));
        // each split nets b - 1 intervals
        REQUIRE(st.active_count() + st.frozen_count() == 1 + 2 * st.step_count());
    }
    CHECK_THROWS_AS(st.step(), std::logic_error);
    CHECK_THROWS_AS(st.current_max(), std::logic_error);
    const RunResult run = st.take_result();
    CHECK(run.n_steps() == run.maxima.size());
}

TEST_CASE("determinism and seed sensitivity") {
    const SplitLaw law = SplitLaw::kakutani();
    const RunResult a = run_to_cutoff(law, 1e-2, 123);
    const RunResult b = run_to_cutoff(law, 1e-2, 123);
    REQUIRE(a.spacings.size() == b.spacings.size());
    for (std::size_t i = 0; i < a.spacings.size(); ++i)
        REQUIRE(a.spacings[i].left == b.spacings[i].left);

    const RunResult c = run_to_cutoff(law, 1e-2, 124);
    const bool same = a.spacings.size() == c.spacings.size() &&
                      std::equal(a.partition_points.begin(), a.partition_points.end(),
                                 c.partition_points.begin());
    CHECK(!same);
}

TEST_CASE("trivial and invalid runs") {
    const SplitLaw law = SplitLaw::kakutani();

    FragState st(law, 1.0, 5);
    CHECK(st.finished());
    const RunResult run = st.take_result();
    CHECK(run.n_steps() == 0);
    REQUIRE(run.spacings.size() == 1);
    CHECK(run.spacings[0].left == 0.0);
    CHECK(run.spacings[0].length == 1.0);
    CHECK(run.partition_points.empty());

    CHECK_THROWS_AS(run_to_cutoff(law, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_to_cutoff(law, -0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_to_cutoff(SplitLaw::heavy_tail(1.5), 0.1, 1), std::invalid_argument);
}

TEST_CASE("random order scheme") {
    const RunResult run = run_to_cutoff(SplitLaw::kakutani(), 1e-2, 77, Scheme::random_order);
    CHECK(run.scheme == Scheme::random_order);
    CHECK(std::abs(run.total_length() - 1.0) <= 1e-12);
    for (const auto& sp : run.spacings) REQUIRE(sp.length <= 1e-2);

    const RunResult again = run_to_cutoff(SplitLaw::kakutani(), 1e-2, 77, Scheme::random_order);
    REQUIRE(run.partition_points == again.partition_points);
}

TEST_CASE("tracking the interval around y") {
    for (const SplitLaw& law : {SplitLaw::kakutani(), SplitLaw::b_uniform(3)}) {
        const YTrackResult tr = track_y_interval(law, 0.3, 1e-3, 42);
        CHECK(tr.y == 0.3);
        REQUIRE(tr.ratios.size() == tr.n_cuts);
        REQUIRE(tr.final_length > 0.0);
        REQUIRE(tr.final_length <= 1e-3);
        double prod = 1.0;
        for (double r : tr.ratios) {
            REQUIRE(r > 0.0);
            REQUIRE(r < 1.0);
            prod *= r;
        }
        CHECK(prod == doctest::Approx(tr.final_length).epsilon(1e-12));
    }

    CHECK_THROWS_AS(track_y_interval(SplitLaw::kakutani(), 0.0, 1e-3, 1), std::invalid_argument);
    CHECK_THROWS_AS(track_y_interval(SplitLaw::kakutani(), 1.0, 1e-3, 1), std::invalid_argument);
    CHECK_THROWS_AS(track_y_interval(SplitLaw::kakutani(), 0.5, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(track_y_interval(SplitLaw::heavy_tail(1.5), 0.5, 1e-3, 1),
                    std::invalid_argument);
}

TEST_CASE("one-step shrinkage of the tracked interval stays below 3/4") {
    // E[ratio | position p] = 1/2 + p(1-p) <= 3/4 for the uniform split
    double sum = 0.0;
    std::size_t n = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const YTrackResult tr = track_y_interval(SplitLaw::kakutani(), 0.5, 1e-3, seed);
        for (double r : tr.ratios) sum += r;
        n += tr.ratios.size();
    }
    REQUIRE(n > 3000);
    const double mean = sum / static_cast<double>(n);
    CHECK(mean <= 0.76);
    CHECK(mean >= 0.5);
}

} // TEST_SUITE
