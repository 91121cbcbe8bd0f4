#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gaplab/ode.hpp"
#include "gaplab/problem.hpp"

namespace gaplab {

/// State above this size (in u units) is renormalised by homogeneity.
inline constexpr double kRenormalizeAbove = 1e8;
inline constexpr double kRenormalizeBelow = 1e-8;
inline constexpr double kRiccatiPoleGuard = 1e6;

struct ShotSample {
  double u = 0.0;
  double w = 0.0;
  /// Log of the factor that maps (u, w) back to the unrescaled solution, in
  /// w units: u_true = u * exp(log_scale / (p - 1)), w_true = w * exp(log_scale).
  double log_scale = 0.0;
};

/// Dense output of a shot: renormalised (u, w) per step plus the scale in force.
class ShotTrajectory {
 public:
  ShotTrajectory(double p, ode::DenseTrajectory<2> dense) : p_(p), dense_(std::move(dense)) {}
  ShotSample operator()(double x) const;
  double p() const noexcept { return p_; }
  const ode::DenseTrajectory<2>& dense() const noexcept { return dense_; }
  /// Largest log_scale over the trajectory.
  double max_log_scale() const noexcept;

 private:
  double p_;
  ode::DenseTrajectory<2> dense_;
};

struct ShotResult {
  /// Right-endpoint state after renormalisation (sign-faithful).
  double u_end = 0.0;
  double w_end = 0.0;
  int nodal_count = 0;
  /// Accumulated (p-1) * sum(log s) over renormalisations.
  double log_scale = 0.0;
  /// Interior zeros of u, refined on the dense output (only when recorded).
  std::vector<double> zeros;
  std::shared_ptr<const ShotTrajectory> trajectory;
  std::size_t steps = 0;
};

struct ShotOptions {
  double tol = 1e-12;
  bool record = false;
  /// (u, w)(-1) in place of the boundary-condition seed.
  std::optional<ode::Vec<2>> initial;
};

/// Integrates u' = phi_{p'}(w), w' = (V - lambda) phi_p(u) from -1 to 1 with
/// the left boundary data of the problem.
ShotResult shoot_state(const Problem& problem, double lambda, const ShotOptions& options = {});

struct RiccatiSample {
  double x = 0.0;
  double v = 0.0;
};

struct RiccatiTrace {
  std::vector<RiccatiSample> samples;
  /// Where |v| first exceeded the pole guard, if it did.
  std::optional<double> blow_up;
};

/// v' = (V - lambda) - (p-1)|v|^{p/(p-1)} from (from, v0) toward `to`.
RiccatiTrace riccati_integrate(const Problem& problem, double lambda, double from, double to,
                               double v0, double tol = 1e-12);

}  // namespace gaplab
