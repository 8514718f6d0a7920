#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fragmenta/rng.hpp"

namespace fragmenta {

enum class LawKind {
    kakutani,       // binary, uniform division point; F(x) = 2x
    b_uniform,      // b-1 iid uniform division points; F(x) = b(1-(1-x)^{b-1})
    m_ary_density,  // same family parametrized by density f(x) = m(m-1)(1-x)^{m-2}
    custom_density, // user-supplied f with integral b
    heavy_tail,     // discrete: smaller piece ~ i^{-alpha} truncated at s/2
    catalan_fringe  // discrete: Catalan-weighted subtree split
};

// Immutable description of a split law. Cheap to copy (shared impl), safe to
// share across threads. Continuous kinds split a parent interval into b
// children; discrete kinds split an integer mass into two parts.
class SplitLaw {
public:
    static SplitLaw kakutani();
    static SplitLaw b_uniform(int b);
    static SplitLaw m_ary_density(int m);
    static SplitLaw custom_density(std::function<double(double)> f, int b);
    static SplitLaw heavy_tail(double alpha);
    static SplitLaw catalan_fringe();

    LawKind kind() const noexcept;
    bool continuous() const noexcept;
    bool discrete() const noexcept { return !continuous(); }

    // children per split (continuous kinds only)
    int branching() const;
    // tail exponent (heavy_tail only)
    double alpha() const;

    // F(x): expected number of children of length < x*parent produced by one
    // split; defined for x in [0,1], continuous kinds only. F(1) = b.
    double expected_count(double x) const;
    // f = F'
    double density(double x) const;

    // continuous kinds: b-1 sorted division offsets, strictly inside
    // (0, parent_length)
    void sample_split(double parent_length, SplitMix64& rng,
                      std::vector<double>& offsets) const;
    std::vector<double> sample_split(double parent_length, SplitMix64& rng) const;

    // discrete kinds: size of the smaller child, in [1, parent_size/2];
    // parent_size >= 2
    std::int64_t sample_piece(std::int64_t parent_size, SplitMix64& rng) const;

    // discrete kinds: pmf of the smaller child over 1..parent_size/2,
    // normalized to 1
    std::vector<double> piece_pmf(std::int64_t parent_size) const;

    // discrete kinds: symmetric child pmf over 1..parent_size-1 with
    // p_i = p_{parent_size-i}, normalized to 1 (ordered-pair view)
    std::vector<double> symmetric_pmf(std::int64_t parent_size) const;

    std::string name() const;
    nlohmann::json to_json() const;
    static SplitLaw from_json(const nlohmann::json& j);

    // "kakutani", "buniform<b>", "mary<m>", "heavy<alpha>", "catalan"
    static SplitLaw parse(std::string_view token);

private:
    struct Impl;
    explicit SplitLaw(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

} // namespace fragmenta
