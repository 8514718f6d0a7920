#include "fragmenta/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fragmenta {

GaussLegendre::GaussLegendre(int n) : x(n), w(n) {
    if (n < 1) throw std::invalid_argument("GaussLegendre: order must be >= 1");
    const double eps = 1e-15;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n(t)
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            // p0 = P_n(t), derivative from the standard identity
            pp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / pp;
            t -= dt;
            if (std::abs(dt) < eps) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

const GaussLegendre& GaussLegendre::order64() {
    static const GaussLegendre rule(64);
    return rule;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f,
             double a, double fa, double b, double fb, double fm,
             double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(a, fa, b, fb, fm);
    return adapt(f, a, fa, b, fb, fm, whole, tol, 48);
}

} // namespace fragmenta
