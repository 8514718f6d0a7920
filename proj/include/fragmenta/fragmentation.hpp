#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fragmenta/rng.hpp"
#include "fragmenta/split_law.hpp"

namespace fragmenta {

// order in which active intervals are split
enum class Scheme {
    greedy,       // always a longest interval (ties: earliest created)
    random_order  // uniformly random active interval
};

struct Spacing {
    double left;
    double length;
};

struct SplitEvent {
    Spacing parent;
    std::vector<Spacing> children;
};

// number of per-step count-grid columns: thresholds x_c * k / 16, k = 0..16
inline constexpr int kXiGridSize = 17;

// Full record of one run to cutoff. Step i split a parent of length
// maxima[i]; xi_counts[i][k] is the number of its children with length
// <= x_c * k / 16 (the per-step counts the martingale checks replay).
struct RunResult {
    double x_c = 0.0;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::greedy;

    std::vector<Spacing> spacings;          // final partition, sorted by left
    std::vector<double> partition_points;   // interior division points, sorted
    std::vector<double> maxima;             // parent length at each step
    std::vector<std::array<std::uint16_t, kXiGridSize>> xi_counts;

    std::size_t n_steps() const { return maxima.size(); }
    double total_length() const;
};

// Mutable state of one splitting run. Splits happen through step(); frozen
// intervals (length <= x_c, closed at the cutoff) leave the active set
// immediately and are never split again.
class FragState {
public:
    FragState(SplitLaw law, double x_c, std::uint64_t seed,
              Scheme scheme = Scheme::greedy);

    bool finished() const { return active_.empty(); }
    std::size_t step_count() const { return maxima_.size(); }
    std::size_t active_count() const { return active_.size(); }
    std::size_t frozen_count() const { return frozen_.size(); }
    double x_c() const { return x_c_; }
    double current_max() const;   // length of the next greedy parent

    // split one interval; throws if the state is finished
    SplitEvent step();

    // consume the state into the final record (requires finished())
    RunResult take_result();

private:
    struct Entry {
        double length;
        double left;
        std::uint64_t seq;
    };
    Entry pop_parent();

    SplitLaw law_;
    double x_c_;
    std::uint64_t seed_;
    Scheme scheme_;
    SplitMix64 rng_;
    std::uint64_t next_seq_ = 1;
    std::array<double, kXiGridSize> grid_{};
    std::vector<Entry> active_;     // heap-ordered for greedy
    std::vector<Spacing> frozen_;
    std::vector<double> maxima_;
    std::vector<std::array<std::uint16_t, kXiGridSize>> xi_;
    std::vector<double> offsets_;   // scratch
};

// Split (0,1) until every interval has length <= x_c.
//  - x_c >= 1 returns the trivial run (no steps, one spacing)
//  - x_c <= 0 is rejected
// Deterministic for fixed (law, x_c, seed, scheme); under the greedy scheme
// maxima is non-increasing.
RunResult run_to_cutoff(const SplitLaw& law, double x_c, std::uint64_t seed,
                        Scheme scheme = Scheme::greedy);

// History of the interval covering a fixed point y across a run: each entry
// is the covering child's length ratio to its parent. Splits that would
// place a division point exactly on y are resampled.
struct YTrackResult {
    double y = 0.0;
    std::size_t n_cuts = 0;        // splits whose parent covered y
    std::vector<double> ratios;    // child/parent length, one per cut
    double final_length = 0.0;     // equals the product of ratios
};

YTrackResult track_y_interval(const SplitLaw& law, double y, double x_c,
                              std::uint64_t seed);

} // namespace fragmenta
