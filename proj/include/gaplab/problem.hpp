#pragma once

#include <cmath>
#include <string>

#include "gaplab/potential.hpp"

namespace gaplab {

/// Robin(alpha) with alpha = 0 for Neumann, or Dirichlet.
class BoundaryCondition {
 public:
  static BoundaryCondition robin(double alpha) { return BoundaryCondition(false, alpha); }
  static BoundaryCondition neumann() { return robin(0.0); }
  static BoundaryCondition dirichlet() { return BoundaryCondition(true, 0.0); }

  bool is_dirichlet() const noexcept { return dirichlet_; }
  /// Robin parameter; meaningless for Dirichlet.
  double alpha() const noexcept { return alpha_; }

  /// "dirichlet" or the Robin parameter as a number.
  std::string describe() const;

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;

 private:
  BoundaryCondition(bool dirichlet, double alpha) : dirichlet_(dirichlet), alpha_(alpha) {}
  bool dirichlet_;
  double alpha_;
};

/// -(|u'|^{p-2}u')' + V|u|^{p-2}u = lambda |u|^{p-2}u on (-1, 1).
class Problem {
 public:
  /// Throws PreconditionError unless p > 1.
  Problem(double p, Potential potential, BoundaryCondition bc);

  double p() const noexcept { return p_; }
  /// Conjugate exponent p / (p - 1).
  double p_conjugate() const noexcept { return p_ / (p_ - 1.0); }
  bool is_linear() const noexcept { return p_ == 2.0; }
  const Potential& potential() const noexcept { return potential_; }
  const BoundaryCondition& bc() const noexcept { return bc_; }

  Problem with_potential(Potential v) const { return Problem(p_, std::move(v), bc_); }
  Problem reflected() const { return with_potential(potential_.reflected()); }

 private:
  double p_;
  Potential potential_;
  BoundaryCondition bc_;
};

/// Odd power map |s|^{q-2} s.
inline double phi(double s, double q) noexcept {
  if (q == 2.0) return s;
  if (s == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(s), q - 1.0), s);
}

}  // namespace gaplab
