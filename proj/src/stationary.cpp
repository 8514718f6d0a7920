#include "fragmenta/stationary.hpp"

#include <cmath>
#include <stdexcept>

#include "fragmenta/quadrature.hpp"

namespace fragmenta {

namespace {

// J(beta) = integral_0^1 f(s) s^beta ds
double density_moment(const SplitLaw& law, double beta) {
    return integrate_gl([&](double s) { return law.density(s) * std::pow(s, beta); },
                        0.0, 1.0);
}

// g(C) = C * integral_0^1 F(s) s^{beta-1} ds - 1, with the integral reduced
// by parts to (b - J(beta))/beta so the s^{beta-1} endpoint singularity
// never enters the quadrature
double stationarity_gap(const SplitLaw& law, double C) {
    const double b = law.branching();
    const double beta = C * (b - 1.0);
    return C * (b - density_moment(law, beta)) / beta - 1.0;
}

} // namespace

double StationarySolution::cdf(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("StationarySolution::cdf: x must be in [0,1]");
    if (x == 0.0) return 0.0;
    const double inner = integrate_gl(
        [&](double t) { return law.density(x * t) * std::pow(t, beta); }, 0.0, 1.0);
    return (C / beta) * (law.expected_count(x) - x * inner);
}

double StationarySolution::mean_spacing_scaled() const {
    return integrate_gl([&](double x) { return 1.0 - cdf(x); }, 0.0, 1.0);
}

double solve_stationary_constant(const SplitLaw& law, int b) {
    if (law.continuous() && b != law.branching())
        throw std::invalid_argument("solve_stationary_constant: b does not match the law");
    return solve_stationary(law).C;
}

double stationary_cdf(const StationarySolution& sol, double x) {
    if (!(x > 0.0))
        throw std::invalid_argument("stationary_cdf: x must be positive");
    return sol.cdf(x);
}

StationarySolution solve_stationary(const SplitLaw& law) {
    if (!law.continuous())
        throw std::invalid_argument("solve_stationary: law must be continuous");

    const double lo = 1e-3, hi = 1e3;
    auto g = [&](double C) { return stationarity_gap(law, C); };

    // reject non-monotone sign patterns over the bracket
    int sign_changes = 0;
    double prev = g(lo);
    for (int i = 1; i <= 24; ++i) {
        const double C = lo * std::pow(hi / lo, i / 24.0);
        const double cur = g(C);
        if ((prev < 0.0) != (cur < 0.0)) ++sign_changes;
        prev = cur;
    }
    if (sign_changes != 1)
        throw std::runtime_error("solve_stationary: no unique root in [1e-3, 1e3]");

    double a = lo, b = hi;
    double ga = g(a);
    for (int iter = 0; iter < 200 && (b - a) > 1e-15 * b; ++iter) {
        const double mid = 0.5 * (a + b);
        const double gm = g(mid);
        if ((ga < 0.0) == (gm < 0.0)) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }

    // secant polish
    double c0 = a, c1 = b;
    double g0 = g(c0), g1 = g(c1);
    for (int iter = 0; iter < 8 && g1 != g0; ++iter) {
        const double c2 = c1 - g1 * (c1 - c0) / (g1 - g0);
        if (!(c2 > lo && c2 < hi)) break;
        c0 = c1;
        g0 = g1;
        c1 = c2;
        g1 = g(c1);
        if (std::abs(g1) < 1e-14) break;
    }

    StationarySolution sol{law, law.branching(), c1, c1 * (law.branching() - 1.0)};
    return sol;
}

double ode_residual(const StationarySolution& sol, const std::vector<double>& grid) {
    const double h = 1e-6;
    double worst = 0.0;
    for (double x : grid) {
        if (!(x > 2.0 * h && x <= 1.0))
            throw std::invalid_argument("ode_residual: grid values must lie in (0,1]");
        double du;
        if (x + h <= 1.0) {
            du = (sol.cdf(x + h) - sol.cdf(x - h)) / (2.0 * h);
        } else {
            // second-order backward difference at the right edge
            du = (3.0 * sol.cdf(x) - 4.0 * sol.cdf(x - h) + sol.cdf(x - 2.0 * h)) /
                 (2.0 * h);
        }
        const double r = du + sol.beta * sol.cdf(x) / x -
                         sol.C * sol.law.expected_count(x) / x;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

} // namespace fragmenta
