#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace fragmenta {

// sum_{i > m} i^{-alpha} by Euler-Maclaurin; alpha > 1, m >= 1.
// Error is O(m^{-alpha-3}), negligible against the pmf scale for m >= 8.
double zeta_tail(double alpha, double m);

// Riemann zeta for real alpha > 1 (truncated sum + tail correction)
double riemann_zeta(double alpha);

// log of the n-th Catalan number, n >= 0
double log_catalan(std::int64_t n);

// least-squares slope and intercept of log(y) against log(x);
// entries with x <= 0 or y <= 0 are skipped
struct LogLogFit {
    double slope;
    double intercept;
    std::size_t used;
};
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

} // namespace fragmenta
