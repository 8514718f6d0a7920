#include "fragmenta/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fragmenta {

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("EmpiricalCdf: empty sample");
    std::sort(values_.begin(), values_.end());
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double ks_uniform(std::span<const double> sorted_points) {
    if (sorted_points.empty()) throw std::invalid_argument("ks_uniform: empty sample");
    const double n = static_cast<double>(sorted_points.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_points.size(); ++i) {
        const double u = sorted_points[i];
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - u));
        d = std::max(d, std::abs(static_cast<double>(i) / n - u));
    }
    return d;
}

double ks_against(std::span<const double> sorted_points,
                  const std::function<double(double)>& cdf) {
    if (sorted_points.empty()) throw std::invalid_argument("ks_against: empty sample");
    const double n = static_cast<double>(sorted_points.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_points.size(); ++i) {
        const double g = cdf(sorted_points[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - g));
        d = std::max(d, std::abs(static_cast<double>(i) / n - g));
    }
    return d;
}

double point_cdf_deviation(const RunResult& run) {
    if (run.partition_points.empty())
        throw std::invalid_argument("point_cdf_deviation: run has no partition points");
    return ks_uniform(run.partition_points);
}

EmpiricalCdf spacing_cdf(const RunResult& run, double x_c) {
    if (x_c != run.x_c)
        throw std::invalid_argument("spacing_cdf: x_c does not match the run");
    std::vector<double> lengths;
    lengths.reserve(run.spacings.size());
    for (const auto& s : run.spacings) lengths.push_back(s.length);
    return EmpiricalCdf(std::move(lengths));
}

EmpiricalCdf restricted_spacing_cdf(const RunResult& run, double y, double x_c) {
    if (x_c != run.x_c)
        throw std::invalid_argument("restricted_spacing_cdf: x_c does not match the run");
    if (!(y > 0.0 && y <= 1.0))
        throw std::invalid_argument("restricted_spacing_cdf: y must be in (0,1]");
    std::vector<double> lengths;
    for (const auto& s : run.spacings)
        if (s.left + s.length <= y) lengths.push_back(s.length);
    if (lengths.empty())
        throw std::invalid_argument("restricted_spacing_cdf: no spacing inside (0,y)");
    return EmpiricalCdf(std::move(lengths));
}

MartingaleSeries martingale_increments(const RunResult& run, const SplitLaw& law,
                                       double x_query) {
    const double x_c = run.x_c;
    if (x_query > x_c)
        throw std::invalid_argument("martingale_increments: x_query must be <= x_c");
    const double kf = x_query / x_c * 16.0;
    const int k = static_cast<int>(std::lround(kf));
    if (k < 0 || k >= kXiGridSize || std::abs(kf - k) > 1e-9)
        throw std::invalid_argument(
            "martingale_increments: x_query must be a grid value x_c*k/16, k=0..16");

    MartingaleSeries out;
    out.x_query = x_query;
    out.bound_c = law.branching();
    out.increments.reserve(run.n_steps());
    out.partial_sums.reserve(run.n_steps());
    double s = 0.0;
    for (std::size_t i = 0; i < run.n_steps(); ++i) {
        const double parent = run.maxima[i];
        const double xi = run.xi_counts[i][static_cast<std::size_t>(k)];
        const double ratio = std::min(x_query / parent, 1.0);
        const double inc = xi - law.expected_count(ratio);
        out.increments.push_back(inc);
        s += inc;
        out.partial_sums.push_back(s);
    }
    return out;
}

std::vector<ConcentrationRow> concentration_check(std::span<const double> sums,
                                                  std::size_t n, double c,
                                                  std::span<const double> lambdas) {
    if (sums.empty()) throw std::invalid_argument("concentration_check: empty sample");
    if (n == 0 || !(c > 0.0))
        throw std::invalid_argument("concentration_check: need n >= 1 and c > 0");
    const double R = static_cast<double>(sums.size());
    std::vector<ConcentrationRow> rows;
    rows.reserve(lambdas.size());
    for (double lambda : lambdas) {
        std::size_t hits = 0;
        for (double s : sums)
            if (std::abs(s) >= lambda) ++hits;
        const double emp = static_cast<double>(hits) / R;
        const double bound =
            2.0 * std::exp(-lambda * lambda / (2.0 * static_cast<double>(n) * c * c));
        const double p = std::min(bound, 1.0);
        const double sigma = std::sqrt(std::max(p * (1.0 - p), 0.0) / R);
        rows.push_back({lambda, emp, bound, emp > bound + 3.0 * sigma});
    }
    return rows;
}

} // namespace fragmenta
