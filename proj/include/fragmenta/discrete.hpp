#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fragmenta/rng.hpp"
#include "fragmenta/split_law.hpp"

namespace fragmenta {

// One run of the integer splitting process: start from a single piece of
// size n, repeatedly split a largest piece with the given discrete law until
// every piece has size <= stop_size.
struct DiscreteRun {
    std::int64_t n = 0;
    std::int64_t stop_size = 0;
    std::uint64_t seed = 0;
    std::size_t steps = 0;

    std::vector<std::pair<std::int64_t, std::int64_t>> final_counts; // (size, count) asc

    // recorded at the first moment the running maximum equals `size`; sizes
    // the maximum skips over are absent (h = 0)
    struct Arrival {
        std::int64_t size;
        std::int64_t count;         // pieces of that size at arrival
        std::int64_t total_pieces;
    };
    std::vector<Arrival> arrivals;  // descending size

    struct Snapshot {
        std::int64_t milestone;
        std::int64_t max_size;      // actual maximum when crossed
        std::size_t step;
        std::vector<std::pair<std::int64_t, std::int64_t>> counts;
    };
    std::vector<Snapshot> snapshots;

    // h(s): count at first max-arrival, 0 if the maximum skipped s
    std::int64_t arrival_count(std::int64_t size) const;
    std::int64_t total_mass() const;
};

// milestones: sizes at which to snapshot the full histogram (first time the
// maximum falls to or below each value); duplicates are merged
DiscreteRun simulate_discrete(const SplitLaw& law, std::int64_t n,
                              std::int64_t stop_size, std::uint64_t seed,
                              std::vector<std::int64_t> milestones = {});

// heavy-tail convenience: law = DiscreteHeavyTail(alpha)
DiscreteRun simulate_discrete(std::int64_t n, double alpha, std::int64_t stop_size,
                              std::uint64_t seed,
                              std::vector<std::int64_t> milestones = {});

// Critical-size detector: largest s <= n/2 whose trailing window
// [s-W+1, s], W = max(w_min, s/w_frac), has occupied-arrival fraction
// >= theta. Occupied means h(s) >= 1, i.e. the per-size count threshold
// ceil(2 * H_plateau) = 1 is met at arrival.
struct DetectorParams {
    double theta = 0.7;
    std::int64_t w_min = 32;
    std::int64_t w_frac = 4;
};

std::optional<std::int64_t> detect_critical_size(const DiscreteRun& run,
                                                 const DetectorParams& params = {});

// renewal series H_0..H_T, H_t = sum_{j=1}^t p_j H_{t-j} with
// p_j = j^{-alpha} / zeta(alpha) and H_0 = 1
struct HtSeries {
    std::vector<double> H;
    double alpha = 0.0;
};

HtSeries solve_Ht_recurrence(double alpha, std::size_t T);

// plateau of sqrt(t) * H_t over [t_lo, t_hi]
struct PlateauStats {
    double gamma_hat;       // mean of sqrt(t) H_t over the window
    double rel_variation;   // (max - min) / mean
};
PlateauStats measure_plateau(const std::vector<double>& H, std::size_t t_lo,
                             std::size_t t_hi);
PlateauStats measure_plateau(const HtSeries& series, std::size_t t_lo,
                             std::size_t t_hi);

// critical sizes and counts for alpha = 3/2 (other exponents are not
// implemented and are rejected); requires n >= 10^4 so the asymptotic
// formulas apply:
//   M_c  = (2/zeta)^{2/3} n^{2/3},   count(M_c)  = (zeta/4) M_c
//   M_c' = 4 n / (zeta^2 M_c),       count(M_c') = (zeta/4) sqrt(n M_c)
struct CriticalPoints {
    double M_c;
    double count_at_Mc;
    double M_c_prime;
    double count_at_Mc_prime;
};

CriticalPoints predict_critical_points(std::int64_t n, double alpha = 1.5);

// Reverse recurrence for expected ancestor-level profiles: row k solves
// A_k x = b with unit upper-triangular band rows x_j + sum_{i>j} p_{i-j} x_i
// = n_{k-1}(j) (p = symmetric child pmf of a size-k split) and the mass row
// sum_j j x_j = n. Seeded with n_1 = (n). The system is solved exactly as
// stated; with this seed it degenerates to (n, 0, ..., 0).
std::vector<std::vector<double>> reverse_recurrence(std::int64_t n,
                                                    const SplitLaw& law, int k_max);

// dense A_k for inspection and tests
std::vector<std::vector<double>> reverse_system_matrix(const SplitLaw& law, int k);

// h(k) against the conjectured n / k^alpha
struct HkRow {
    std::int64_t k;
    std::int64_t h;
    double conjectured;
    double ratio;
};

std::vector<HkRow> make_hk_table(const DiscreteRun& run, double alpha,
                                 const std::vector<std::int64_t>& ks);

// run one heavy-tail simulation down to min(k_range) and tabulate h(k)
// against n / k^alpha for each requested k
std::vector<HkRow> test_Hk_conjecture(std::int64_t n, double alpha,
                                      const std::vector<std::int64_t>& k_range,
                                      std::uint64_t seed);

} // namespace fragmenta
