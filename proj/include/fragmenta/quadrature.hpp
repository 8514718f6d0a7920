#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fragmenta {

// Gauss-Legendre nodes/weights on [-1,1]. Computed once by Newton iteration
// on P_n; the 64-point rule is exact for polynomials of degree <= 127 and is
// the workhorse for the smooth integrands in the stationary-theory module.
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;

    explicit GaussLegendre(int n);

    static const GaussLegendre& order64();
};

template <class F>
double integrate_gl(F&& f, double a, double b,
                    const GaussLegendre& rule = GaussLegendre::order64()) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        s += rule.w[i] * f(c + h * rule.x[i]);
    return s * h;
}

// adaptive Simpson with error estimate from the 15-point/3-panel split;
// tol is absolute on the whole interval
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double tol = 1e-12);

} // namespace fragmenta
