#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gaplab {

/// Uniform grid of n points on [-1, 1].
std::vector<double> uniform_grid(int n);

/// Composite Simpson rule for samples on a uniform grid with spacing h.
/// Requires an odd number of samples (>= 3).
double simpson(std::span<const double> f, double h);

/// Cubic Hermite interpolant of (u, du) sampled on a uniform grid.
double hermite_interpolate(std::span<const double> grid, std::span<const double> u,
                           std::span<const double> du, double x);

/// Derivative of the same interpolant.
double hermite_derivative(std::span<const double> grid, std::span<const double> u,
                          std::span<const double> du, double x);

}  // namespace gaplab
