#pragma once

#include <numbers>
#include <span>
#include <vector>

namespace ffst {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// into [-pi, pi)
double wrap_phase(double x);

// continuous lift of a sequence of phases
std::vector<double> unwrap(std::span<const double> phases);

double trapezoid(std::span<const double> y, double h);
std::vector<double> cumulative_trapezoid(std::span<const double> y, double h);

// central differences, second-order one-sided stencils at the ends
std::vector<double> derivative(std::span<const double> y, double h);

// 4-point Lagrange interpolation on a uniform grid starting at x0
double interpolate_uniform(std::span<const double> y, double x0, double h, double x);

// drive value halfway between samples k and k+1
double midpoint_value(std::span<const double> y, std::size_t k);

// monotone cubic (Fritsch-Carlson) resampling from one uniform grid to another
std::vector<double> pchip_resample(std::span<const double> y, double x0, double h,
                                   double x0_out, double h_out, std::size_t n_out);

// cubic through (xs[i], ys[i]), i = 0..3, evaluated at x
double cubic_through(const double* xs, const double* ys, double x);

}  // namespace ffst
