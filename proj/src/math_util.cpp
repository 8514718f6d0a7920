#include "fragmenta/math_util.hpp"

#include <cmath>
#include <stdexcept>

namespace fragmenta {

double zeta_tail(double alpha, double m) {
    if (alpha <= 1.0) throw std::invalid_argument("zeta_tail: alpha must be > 1");
    if (m < 1.0) throw std::invalid_argument("zeta_tail: m must be >= 1");
    const double ma = std::pow(m, -alpha);
    return m * ma / (alpha - 1.0) - 0.5 * ma + alpha * ma / (12.0 * m);
}

double riemann_zeta(double alpha) {
    if (alpha <= 1.0) throw std::invalid_argument("riemann_zeta: alpha must be > 1");
    const int m = 10000;
    double s = 0.0;
    for (int i = m; i >= 1; --i) s += std::pow(static_cast<double>(i), -alpha);
    return s + zeta_tail(alpha, static_cast<double>(m));
}

double log_catalan(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("log_catalan: n must be >= 0");
    if (n == 0) return 0.0;
    const double dn = static_cast<double>(n);
    return std::lgamma(2.0 * dn + 1.0) - std::lgamma(dn + 2.0) - std::lgamma(dn + 1.0);
}

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("fit_loglog: size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_loglog: need at least two positive points");
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_loglog: degenerate abscissae");
    const double slope = (dn * sxy - sx * sy) / denom;
    return {slope, (sy - slope * sx) / dn, n};
}

} // namespace fragmenta
