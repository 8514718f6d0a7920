#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fragmenta/split_law.hpp"

namespace fragmenta {

// Solution of the renewal-type Volterra equation
//   H(y) = f(y) + integral_y^1 f(y/t) (1/t) H(t) dt
// on the log-uniform grid y_j = exp(-j h), j = 0..G, h = log(1/y_min)/G.
// The substitution tau = -log t makes the kernel evaluable on grid points
// only, so the backward marching scheme is a plain trapezoid convolution.
class ProfileSolution {
public:
    const std::vector<double>& grid() const { return y_; }   // decreasing
    const std::vector<double>& values() const { return H_; }
    double richardson_error() const { return richardson_; }

    // interpolated H(y), log-log linear between nodes
    double at(double y) const;
    // integral of H over [a, b] within the grid span, piecewise trapezoid
    double integrate(double a, double b) const;

private:
    friend ProfileSolution solve_volterra_H(const SplitLaw& law, double y_min,
                                            int grid_size);
    std::vector<double> y_;
    std::vector<double> H_;
    double richardson_ = 0.0;
};

// Solve the equation for a continuous law; throws when the half-resolution
// comparison disagrees by more than 1e-3 relative (grid too coarse).
ProfileSolution solve_volterra_H(const SplitLaw& law, double y_min, int grid_size);

// roots of z(z+1)...(z+m-2) = m!, sorted by nonincreasing real part with
// conjugate pairs adjacent (positive imaginary first); residuals are
// |P(z) - m!| / m! at the returned roots
struct RootSet {
    int m;
    std::vector<std::complex<double>> roots;
    std::vector<double> residuals;
};

RootSet characteristic_roots(int m);

// the profile admits a stationary regime iff the subdominant root stays
// below the critical line Re z = 3/2
struct StationarityClass {
    int m;
    double re_z2;
    bool stationary;   // re_z2 < 3/2
    double margin;     // 3/2 - re_z2
};

StationarityClass classify_stationarity(int m);

// coefficients C_i of the Cauchy-Euler expansion H(y) = sum_i C_i y^{-z_i},
// fitted to the derivative side conditions at y = 1 (only the (m-2)-nd
// condition is inhomogeneous); m = 2 is the single-root case normalized by
// total mass
struct CauchyEulerSolution {
    int m;
    std::vector<std::complex<double>> roots;
    std::vector<std::complex<double>> coeff;
    double condition_number;

    double value(double y) const; // real part of the expansion
};

CauchyEulerSolution cauchy_euler_solution(int m);

// expected number of size-k subtrees among n leaves, leading-root term
// Re(C_1) n / k^2; k = n returns the boundary value H(1)/n, k > n is rejected
double subtree_profile(int m, std::int64_t n, std::int64_t k);

} // namespace fragmenta
