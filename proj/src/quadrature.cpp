#include "gaplab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "gaplab/errors.hpp"

namespace gaplab {

std::vector<double> uniform_grid(int n) {
  if (n < 2) throw PreconditionError("grid needs at least two points");
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = -1.0 + 2.0 * k / (n - 1);
  x.back() = 1.0;
  return x;
}

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3 || n % 2 == 0) throw PreconditionError("simpson: need an odd sample count >= 3");
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t k = 1; k + 1 < n; k += 2) odd += f[k];
  for (std::size_t k = 2; k + 1 < n; k += 2) even += f[k];
  return h / 3.0 * (f.front() + 4.0 * odd + 2.0 * even + f.back());
}

double hermite_interpolate(std::span<const double> grid, std::span<const double> u,
                           std::span<const double> du, double x) {
  const std::size_t n = grid.size();
  const double h = (grid.back() - grid.front()) / static_cast<double>(n - 1);
  auto k = static_cast<std::size_t>(std::clamp((x - grid.front()) / h, 0.0,
                                               static_cast<double>(n - 2)));
  const double t = (x - grid[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * u[k] + h10 * h * du[k] + h01 * u[k + 1] + h11 * h * du[k + 1];
}

double hermite_derivative(std::span<const double> grid, std::span<const double> u,
                          std::span<const double> du, double x) {
  const std::size_t n = grid.size();
  const double h = (grid.back() - grid.front()) / static_cast<double>(n - 1);
  auto k = static_cast<std::size_t>(std::clamp((x - grid.front()) / h, 0.0,
                                               static_cast<double>(n - 2)));
  const double t = (x - grid[k]) / h;
  const double t2 = t * t;
  const double d00 = 6 * t2 - 6 * t;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d11 = 3 * t2 - 2 * t;
  return (d00 * (u[k] - u[k + 1])) / h + d10 * du[k] + d11 * du[k + 1];
}

}  // namespace gaplab
