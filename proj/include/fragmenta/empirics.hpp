#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fragmenta/fragmentation.hpp"
#include "fragmenta/split_law.hpp"

namespace fragmenta {

// right-continuous empirical CDF of a sample
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> values); // sorts its argument
    double operator()(double x) const;                 // fraction of values <= x
    const std::vector<double>& sorted() const { return values_; }
    std::size_t size() const { return values_.size(); }

private:
    std::vector<double> values_;
};

// sup_x |F_n(x) - x| for sorted points in [0,1], exact over the jump points
double ks_uniform(std::span<const double> sorted_points);

// sup_x |F_n(x) - G(x)| against a continuous nondecreasing reference G
double ks_against(std::span<const double> sorted_points,
                  const std::function<double(double)>& cdf);

// CDF over raw spacing lengths; evaluates to 1 at x_c (all spacings are
// frozen at or below the cutoff)
EmpiricalCdf spacing_cdf(const RunResult& run, double x_c);

// spacings entirely contained in (0, y); throws if none fits
EmpiricalCdf restricted_spacing_cdf(const RunResult& run, double y, double x_c);

// sup-deviation of the partition points from the uniform distribution
double point_cdf_deviation(const RunResult& run);

// martingale increments X_i = xi_i(x) - F(x / M_{i-1}) at a recorded grid
// value x_query = x_c * k / 16; partial_sums[i] = X_1 + ... + X_{i+1}
struct MartingaleSeries {
    double x_query = 0.0;
    double bound_c = 0.0;               // |X_i| <= bound_c (= b children)
    std::vector<double> increments;
    std::vector<double> partial_sums;
};

MartingaleSeries martingale_increments(const RunResult& run, const SplitLaw& law,
                                       double x_query);

// empirical tail P(|S_n| >= lambda) against the Azuma-Hoeffding bound
// 2 exp(-lambda^2 / (2 n c^2)); a row is violated when the empirical
// frequency exceeds bound + 3 * binomial sigma
struct ConcentrationRow {
    double lambda;
    double empirical;
    double bound;
    bool violated;
};

std::vector<ConcentrationRow> concentration_check(std::span<const double> sums,
                                                  std::size_t n, double c,
                                                  std::span<const double> lambdas);

} // namespace fragmenta
