#include "fragmenta/fragmentation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fragmenta {

double RunResult::total_length() const {
    double s = 0.0;
    for (const auto& sp : spacings) s += sp.length;
    return s;
}

// max-heap order on length; ties go to the oldest entry so greedy order is
// deterministic for a given seed
static bool entry_less(const double al, const std::uint64_t as, const double bl,
                       const std::uint64_t bs) {
    if (al != bl) return al < bl;
    return as > bs;
}

FragState::FragState(SplitLaw law, double x_c, std::uint64_t seed, Scheme scheme)
    : law_(std::move(law)), x_c_(x_c), seed_(seed), scheme_(scheme), rng_(seed) {
    if (!law_.continuous())
        throw std::invalid_argument("FragState: law must be continuous");
    if (!(x_c_ > 0.0))
        throw std::invalid_argument("FragState: x_c must be positive");
    for (int k = 0; k < kXiGridSize; ++k)
        grid_[static_cast<std::size_t>(k)] = x_c_ * k / 16.0;
    if (x_c_ >= 1.0)
        frozen_.push_back({0.0, 1.0});
    else
        active_.push_back({1.0, 0.0, 0});
}

double FragState::current_max() const {
    if (active_.empty()) throw std::logic_error("current_max: run is finished");
    return active_.front().length;
}

FragState::Entry FragState::pop_parent() {
    auto cmp = [](const Entry& a, const Entry& b) {
        return entry_less(a.length, a.seq, b.length, b.seq);
    };
    if (scheme_ == Scheme::greedy) {
        std::pop_heap(active_.begin(), active_.end(), cmp);
        const Entry e = active_.back();
        active_.pop_back();
        return e;
    }
    const std::size_t idx = static_cast<std::size_t>(rng_.below(active_.size()));
    const Entry e = active_[idx];
    active_[idx] = active_.back();
    active_.pop_back();
    // random_order keeps no heap ordering; nothing to restore
    return e;
}

SplitEvent FragState::step() {
    if (active_.empty()) throw std::logic_error("step: run is finished");
    auto cmp = [](const Entry& a, const Entry& b) {
        return entry_less(a.length, a.seq, b.length, b.seq);
    };

    const Entry parent = pop_parent();
    maxima_.push_back(parent.length);
    law_.sample_split(parent.length, rng_, offsets_);

    auto& row = xi_.emplace_back();
    row.fill(0);

    SplitEvent ev;
    ev.parent = {parent.left, parent.length};
    ev.children.reserve(offsets_.size() + 1);

    const double end = parent.left + parent.length;
    double prev = parent.left;
    for (std::size_t j = 0; j <= offsets_.size(); ++j) {
        const double right = (j < offsets_.size()) ? parent.left + offsets_[j] : end;
        const double len = right - prev;
        ev.children.push_back({prev, len});
        if (len <= x_c_) {
            for (int k = kXiGridSize - 1;
                 k >= 0 && len <= grid_[static_cast<std::size_t>(k)]; --k)
                ++row[static_cast<std::size_t>(k)];
            frozen_.push_back({prev, len});
        } else {
            active_.push_back({len, prev, next_seq_++});
            if (scheme_ == Scheme::greedy)
                std::push_heap(active_.begin(), active_.end(), cmp);
        }
        prev = right;
    }
    return ev;
}

RunResult FragState::take_result() {
    if (!active_.empty()) throw std::logic_error("take_result: run not finished");
    RunResult result;
    result.x_c = x_c_;
    result.seed = seed_;
    result.scheme = scheme_;
    result.maxima = std::move(maxima_);
    result.xi_counts = std::move(xi_);
    std::sort(frozen_.begin(), frozen_.end(),
              [](const Spacing& a, const Spacing& b) { return a.left < b.left; });
    result.spacings = std::move(frozen_);
    result.partition_points.reserve(result.spacings.size());
    for (std::size_t i = 1; i < result.spacings.size(); ++i)
        result.partition_points.push_back(result.spacings[i].left);
    return result;
}

RunResult run_to_cutoff(const SplitLaw& law, double x_c, std::uint64_t seed,
                        Scheme scheme) {
    FragState state(law, x_c, seed, scheme);
    while (!state.finished()) state.step();
    return state.take_result();
}

YTrackResult track_y_interval(const SplitLaw& law, double y, double x_c,
                              std::uint64_t seed) {
    if (!law.continuous())
        throw std::invalid_argument("track_y_interval: law must be continuous");
    if (!(x_c > 0.0))
        throw std::invalid_argument("track_y_interval: x_c must be positive");
    if (!(y > 0.0 && y < 1.0))
        throw std::invalid_argument("track_y_interval: y must be in (0,1)");

    YTrackResult out;
    out.y = y;
    SplitMix64 rng(seed);
    std::vector<double> offsets;

    double left = 0.0, length = 1.0;
    while (length > x_c) {
        // resample any split that lands a division point exactly on y
        for (;;) {
            law.sample_split(length, rng, offsets);
            bool hits = false;
            for (double o : offsets)
                if (left + o == y) { hits = true; break; }
            if (!hits) break;
        }
        double lo = left, hi = left + length;
        for (double o : offsets) {
            const double p = left + o;
            if (p < y) lo = std::max(lo, p);
            else hi = std::min(hi, p);
        }
        ++out.n_cuts;
        out.ratios.push_back((hi - lo) / length);
        left = lo;
        length = hi - lo;
    }
    out.final_length = length;
    return out;
}

} // namespace fragmenta
