#pragma once

#include <vector>

#include "fragmenta/split_law.hpp"

namespace fragmenta {

// Solution of the stationarity equation
//   1 = C * integral_0^1 F(s) s^{C(b-1)-1} ds
// for a continuous split law, with the limiting spacing CDF evaluated as
//   u(x) = (C/beta) * (F(x) - x * integral_0^1 f(x t) t^beta dt),
// beta = C(b-1). The t-substitution removes the s^{beta-1} endpoint
// singularity; u increases from 0 to 1 on [0,1].
struct StationarySolution {
    SplitLaw law;
    int b;
    double C;
    double beta;

    double cdf(double x) const;                   // u(x), x in [0,1]
    double mean_spacing_scaled() const;           // E[spacing]/x_c = integral of 1-u
};

// Unique positive root of g(C) = C*integral_0^1 F(s)s^{C(b-1)-1}ds - 1 on
// [1e-3, 1e3], bracketed bisection plus a secant polish, |g| < 1e-10.
// A non-monotone sign pattern over the bracket is rejected.
double solve_stationary_constant(const SplitLaw& law, int b);

StationarySolution solve_stationary(const SplitLaw& law);

// u(x) for x in (0,1]; x <= 0 is a domain error
double stationary_cdf(const StationarySolution& sol, double x);

// max over the grid of |u'(x) + beta u(x)/x - C F(x)/x|, the residual of the
// stationarity ODE; u' by central differences (h = 1e-6)
double ode_residual(const StationarySolution& sol, const std::vector<double>& grid);

} // namespace fragmenta
