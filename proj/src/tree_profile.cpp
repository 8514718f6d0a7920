#include "fragmenta/tree_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace fragmenta {

namespace {

std::vector<double> march(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> H(n);
    H[0] = f[0];
    const double denom = 1.0 - 0.5 * h * f[0];
    for (std::size_t j = 1; j < n; ++j) {
        double s = 0.5 * f[j] * H[0];
        for (std::size_t k = 1; k < j; ++k) s += f[j - k] * H[k];
        H[j] = (f[j] + h * s) / denom;
    }
    return H;
}

} // namespace

ProfileSolution solve_volterra_H(const SplitLaw& law, double y_min,
                                       int grid_size) {
    if (!law.continuous())
        throw std::invalid_argument("solve_volterra_H: law must be continuous");
    if (!(y_min > 0.0 && y_min < 1.0))
        throw std::invalid_argument("solve_volterra_H: y_min must be in (0,1)");
    if (grid_size < 16 || grid_size % 2 != 0)
        throw std::invalid_argument("solve_volterra_H: grid_size must be even and >= 16");

    const auto G = static_cast<std::size_t>(grid_size);
    const double h = std::log(1.0 / y_min) / grid_size;

    ProfileSolution sol;
    sol.y_.resize(G + 1);
    std::vector<double> f(G + 1);
    for (std::size_t j = 0; j <= G; ++j) {
        sol.y_[j] = std::exp(-h * static_cast<double>(j));
        f[j] = law.density(sol.y_[j]);
    }
    sol.H_ = march(f, h);

    // half-resolution comparison on the shared nodes
    std::vector<double> f2(G / 2 + 1);
    for (std::size_t j = 0; j <= G / 2; ++j) f2[j] = f[2 * j];
    const std::vector<double> H2 = march(f2, 2.0 * h);
    double worst = 0.0;
    for (std::size_t j = 0; j <= G / 2; ++j) {
        const double scale = std::max(std::abs(sol.H_[2 * j]), 1e-12);
        worst = std::max(worst, std::abs(sol.H_[2 * j] - H2[j]) / (3.0 * scale));
    }
    sol.richardson_ = worst;
    if (worst > 1e-3)
        throw std::runtime_error("solve_volterra_H: grid too coarse (half-resolution "
                                 "disagreement above 1e-3)");
    return sol;
}

double ProfileSolution::at(double y) const {
    if (!(y >= y_.back() * (1.0 - 1e-12) && y <= 1.0))
        throw std::invalid_argument("ProfileSolution::at: y outside the solved range");
    const double h = std::log(y_[0] / y_[1]);
    const double tau = -std::log(std::max(y, y_.back()));
    const auto j = std::min(static_cast<std::size_t>(tau / h), y_.size() - 2);
    const double t = tau / h - static_cast<double>(j);
    const double a = H_[j], b = H_[j + 1];
    if (a > 0.0 && b > 0.0)
        return std::exp((1.0 - t) * std::log(a) + t * std::log(b));
    return (1.0 - t) * a + t * b;
}

double ProfileSolution::integrate(double a, double b) const {
    if (!(a <= b))
        throw std::invalid_argument("ProfileSolution::integrate: need a <= b");
    if (a == b) return 0.0;
    // nodes are descending in y; walk them ascending between a and b
    std::vector<std::pair<double, double>> pts;
    pts.emplace_back(a, at(a));
    for (std::size_t idx = y_.size(); idx-- > 0;) {
        if (y_[idx] > a && y_[idx] < b) pts.emplace_back(y_[idx], H_[idx]);
    }
    pts.emplace_back(b, at(b));
    double s = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        s += 0.5 * (pts[i].second + pts[i - 1].second) * (pts[i].first - pts[i - 1].first);
    return s;
}

namespace {

double factorial(int m) {
    double v = 1.0;
    for (int i = 2; i <= m; ++i) v *= i;
    return v;
}

// P(z) = z (z+1) ... (z+m-2)
std::complex<double> rising_product(std::complex<double> z, int m) {
    std::complex<double> p = 1.0;
    for (int l = 0; l <= m - 2; ++l) p *= z + static_cast<double>(l);
    return p;
}

} // namespace

RootSet characteristic_roots(int m) {
    if (m < 2) throw std::invalid_argument("characteristic_roots: m must be >= 2");
    if (m > 64) throw std::invalid_argument("characteristic_roots: m must be <= 64");
    const int deg = m - 1;
    const double mf = factorial(m);

    // Aberth iteration straight on the product form. Expanding into
    // monomial coefficients looks tempting but is a Wilkinson trap: the
    // virtual roots 0, -1, ..., -(m-2) sit in arithmetic progression and
    // their coefficient sensitivities blow past 1/eps near m = 45. The
    // factored evaluation costs O(m) per point and is exact to rounding.
    RootSet out;
    out.m = m;
    out.roots.resize(static_cast<std::size_t>(deg));
    const std::complex<double> center(-0.5 * (m - 2.0), 0.0);
    const double rad = 0.5 * (m - 2.0) + 3.0;
    for (int k = 0; k < deg; ++k) {
        const double th = 2.0 * std::numbers::pi * (k + 0.5) / deg + 0.3;
        out.roots[static_cast<std::size_t>(k)] =
            center + rad * std::complex<double>(std::cos(th), std::sin(th));
    }
    auto& zs = out.roots;
    for (int sweep = 0; sweep < 400; ++sweep) {
        double worst = 0.0;
        for (std::size_t i = 0; i < zs.size(); ++i) {
            for (int l = 0; l <= m - 2; ++l)
                if (std::abs(zs[i] + static_cast<double>(l)) < 1e-12)
                    zs[i] += std::complex<double>(1e-9, 1e-9);
            const std::complex<double> p = rising_product(zs[i], m);
            std::complex<double> dlog = 0.0;
            for (int l = 0; l <= m - 2; ++l) dlog += 1.0 / (zs[i] + static_cast<double>(l));
            const std::complex<double> newton = (p - mf) / (p * dlog);
            std::complex<double> rep = 0.0;
            for (std::size_t j = 0; j < zs.size(); ++j) {
                if (j == i) continue;
                std::complex<double> d = zs[i] - zs[j];
                if (std::abs(d) < 1e-12) d = 1e-12;
                rep += 1.0 / d;
            }
            const std::complex<double> corr = newton / (1.0 - newton * rep);
            zs[i] -= corr;
            worst = std::max(worst, std::abs(corr) / (1.0 + std::abs(zs[i])));
        }
        if (worst < 1e-14) break;
    }

    // final uncoupled Newton polish
    for (auto& z : out.roots) {
        for (int iter = 0; iter < 60; ++iter) {
            const std::complex<double> p = rising_product(z, m);
            std::complex<double> dlog = 0.0;
            for (int l = 0; l <= m - 2; ++l) dlog += 1.0 / (z + static_cast<double>(l));
            std::complex<double> step = (p - mf) / (p * dlog);
            const double cap = 0.5 * (1.0 + std::abs(z));
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            z -= step;
            if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) break;
        }
    }

    // enforce exact conjugate symmetry so the sort pairs partners: snap the
    // real roots, then average each conjugate pair (members converge
    // independently and end up a few ulps apart in the real part)
    for (auto& zr : out.roots)
        if (std::abs(zr.imag()) < 1e-9 * (1.0 + std::abs(zr.real())))
            zr = {zr.real(), 0.0};
    std::vector<bool> paired(out.roots.size(), false);
    for (std::size_t i = 0; i < out.roots.size(); ++i) {
        if (paired[i] || out.roots[i].imag() == 0.0) continue;
        std::size_t best = i;
        double bestd = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < out.roots.size(); ++j) {
            if (j == i || paired[j] || out.roots[j].imag() == 0.0) continue;
            const double d = std::abs(std::conj(out.roots[i]) - out.roots[j]);
            if (d < bestd) {
                bestd = d;
                best = j;
            }
        }
        if (best == i) continue;
        const std::complex<double> mean =
            0.5 * (out.roots[i] + std::conj(out.roots[best]));
        out.roots[i] = mean;
        out.roots[best] = std::conj(mean);
        paired[i] = paired[best] = true;
    }

    std::sort(out.roots.begin(), out.roots.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() > b.real();
                  return a.imag() > b.imag();
              });
    out.residuals.reserve(out.roots.size());
    for (const auto& z : out.roots)
        out.residuals.push_back(std::abs(rising_product(z, m) - mf) / mf);
    return out;
}

StationarityClass classify_stationarity(int m) {
    if (m < 3) throw std::invalid_argument("classify_stationarity: m must be >= 3");
    const auto cr = characteristic_roots(m);
    if (std::abs(cr.roots[0] - std::complex<double>(2.0, 0.0)) > 1e-8)
        throw std::runtime_error("classify_stationarity: dominant root is not 2");
    const double re2 = cr.roots[1].real();
    return {m, re2, re2 < 1.5, 1.5 - re2};
}

CauchyEulerSolution cauchy_euler_solution(int m) {
    if (m < 2) throw std::invalid_argument("cauchy_euler_solution: m must be >= 2");

    CauchyEulerSolution out;
    out.m = m;
    if (m == 2) {
        // single root; the coefficient is fixed by total mass, H(1) = 2
        out.roots = {std::complex<double>(2.0, 0.0)};
        out.coeff = {std::complex<double>(2.0, 0.0)};
        out.condition_number = 1.0;
        return out;
    }

    const auto cr = characteristic_roots(m);
    const int deg = m - 1;
    const double mfac = factorial(m);
    out.roots = cr.roots;

    // the Vandermonde-style solve needs distinct roots
    for (int i = 0; i < deg; ++i)
        for (int j = i + 1; j < deg; ++j)
            if (std::abs(out.roots[static_cast<std::size_t>(i)] -
                         out.roots[static_cast<std::size_t>(j)]) <= 1e-6)
                throw std::runtime_error("cauchy_euler_solution: characteristic roots "
                                         "are not separated");

    // the side conditions V C = rhs with V[j][i] = d^j/dy^j y^{-z_i} at
    // y = 1 = (-1)^j (z_i)(z_i+1)...(z_i+j-1) say that the functional
    // q -> sum_i C_i q(z_i) extracts m! times the leading coefficient of any
    // polynomial q of degree <= m-2 (the rising factorials form a basis), so
    // the coefficients are the scaled Lagrange weights
    out.coeff.resize(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) {
        std::complex<double> w = 1.0;
        for (int j = 0; j < deg; ++j)
            if (j != i) w *= out.roots[static_cast<std::size_t>(i)] -
                             out.roots[static_cast<std::size_t>(j)];
        out.coeff[static_cast<std::size_t>(i)] = mfac / w;
    }

    // conditioning is reported for the row-equilibrated side-condition
    // matrix; the raw rows grow factorially in j and would swamp any
    // scale-free measure
    Eigen::MatrixXcd V(deg, deg);
    for (int j = 0; j < deg; ++j) {
        for (int i = 0; i < deg; ++i) {
            std::complex<double> r = 1.0;
            for (int l = 0; l < j; ++l) r *= out.roots[static_cast<std::size_t>(i)] +
                                             static_cast<double>(l);
            V(j, i) = r;
        }
        const double rmax = V.row(j).cwiseAbs().maxCoeff();
        if (rmax > 0.0) V.row(j) /= rmax;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V);
    out.condition_number = svd.singularValues()(0) / svd.singularValues()(deg - 1);
    return out;
}

double CauchyEulerSolution::value(double y) const {
    if (!(y > 0.0)) throw std::invalid_argument("CauchyEulerSolution::value: y must be > 0");
    std::complex<double> s = 0.0;
    const std::complex<double> ly(std::log(y), 0.0);
    for (std::size_t i = 0; i < roots.size(); ++i)
        s += coeff[i] * std::exp(-roots[i] * ly);
    return s.real();
}

double subtree_profile(int m, std::int64_t n, std::int64_t k) {
    if (n < 1) throw std::invalid_argument("subtree_profile: n must be >= 1");
    if (k < 1) throw std::invalid_argument("subtree_profile: k must be >= 1");
    if (k > n) throw std::invalid_argument("subtree_profile: k must be <= n");
    const auto ce = cauchy_euler_solution(m);
    const double dn = static_cast<double>(n);
    if (k == n) return ce.value(1.0) / dn;
    const double dk = static_cast<double>(k);
    return ce.coeff[0].real() * dn / (dk * dk);
}

} // namespace fragmenta
