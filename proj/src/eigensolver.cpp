#include "gaplab/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gaplab/errors.hpp"
#include "gaplab/ivp.hpp"
#include "gaplab/quadrature.hpp"
#include "gaplab/roots.hpp"

namespace gaplab {

namespace {

constexpr double kInitialBracket = 50.0;
constexpr double kMaxBracket = 1e6;

struct CountedShot {
  MissValue miss;
  double u_end = 0.0;
};

CountedShot counted_shot(const Problem& problem, double lambda, double ode_tol) {
  ShotOptions opts;
  opts.tol = ode_tol;
  const ShotResult shot = shoot_state(problem, lambda, opts);
  const auto& bc = problem.bc();
  CountedShot out;
  out.u_end = shot.u_end;
  out.miss.nodal_count = shot.nodal_count;
  if (bc.is_dirichlet()) {
    out.miss.value = shot.u_end;
    out.miss.eigen_count = shot.nodal_count;
  } else {
    out.miss.value = shot.w_end + bc.alpha() * phi(shot.u_end, problem.p());
    // The right-end phase has passed the Robin target iff u(1) and the
    // residual have opposite signs.
    const bool past = shot.u_end == 0.0 || (shot.u_end > 0) != (out.miss.value > 0);
    out.miss.eigen_count = shot.nodal_count + ((past && out.miss.value != 0.0) ? 1 : 0);
  }
  return out;
}

}  // namespace

double default_lambda_tol(double p) noexcept { return p == 2.0 ? 1e-10 : 1e-8; }

double SolverOptions::resolved_lambda_tol(double p) const noexcept {
  return lambda_tol > 0.0 ? lambda_tol : default_lambda_tol(p);
}

double SolverOptions::resolved_ode_tol(double p) const noexcept {
  if (ode_tol > 0.0) return ode_tol;
  return std::clamp(resolved_lambda_tol(p) * 1e-2, 1e-13, 1e-8);
}

MissValue miss_function(const Problem& problem, double lambda, double ode_tol) {
  return counted_shot(problem, lambda, ode_tol).miss;
}

EigenvalueEstimate solve_eigenvalue(const Problem& problem, int i, const SolverOptions& options) {
  if (i < 0) throw PreconditionError("eigenvalue index must be non-negative");
  if (!std::isfinite(options.lambda_tol) || !std::isfinite(options.ode_tol))
    throw PreconditionError("solver tolerances must be finite");
  if (options.grid_n < 3 || options.grid_n % 2 == 0)
    throw PreconditionError("eigenfunction grid must have an odd size of at least 3");
  const double tol = options.resolved_lambda_tol(problem.p());
  const double ode_tol = options.resolved_ode_tol(problem.p());

  double bound = kInitialBracket;
  CountedShot lo_shot = counted_shot(problem, -bound, ode_tol);
  CountedShot hi_shot = counted_shot(problem, bound, ode_tol);
  while (lo_shot.miss.eigen_count > i || hi_shot.miss.eigen_count <= i) {
    bound *= 2.0;
    if (bound > kMaxBracket)
      throw SearchFailure("no bracket for eigenvalue " + std::to_string(i) +
                          " within [-1e6, 1e6]");
    if (lo_shot.miss.eigen_count > i) lo_shot = counted_shot(problem, -bound, ode_tol);
    if (hi_shot.miss.eigen_count <= i) hi_shot = counted_shot(problem, bound, ode_tol);
  }
  double lo = -bound;
  double hi = bound;
  int iterations = 0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      throw PrecisionError("eigenvalue bracket reached floating-point resolution", hi - lo);
    CountedShot s = counted_shot(problem, mid, ode_tol);
    ++iterations;
    if (s.miss.eigen_count <= i) {
      lo = mid;
      lo_shot = s;
    } else {
      hi = mid;
      hi_shot = s;
    }
  }
  if (lo_shot.miss.value * hi_shot.miss.value > 0.0)
    throw PrecisionError("miss function has no sign change on the final bracket", hi - lo);
  EigenvalueEstimate est;
  est.lambda = 0.5 * (lo + hi);
  est.bracket_width = hi - lo;
  est.iterations = iterations;
  est.lower = lo;
  return est;
}

namespace {

double log_magnitude(const ShotSample& s, double p) {
  return std::log(std::abs(s.u)) + s.log_scale / (p - 1.0);
}

}  // namespace

Eigenpair solve_eigenpair(const Problem& problem, int i, const SolverOptions& options) {
  const EigenvalueEstimate est = solve_eigenvalue(problem, i, options);
  const double p = problem.p();
  ShotOptions opts;
  // Traced tighter than the bisection shots: the samples feed residual checks
  // that divide by phi_p(u) near zeros.
  opts.tol = std::min(options.resolved_ode_tol(p), kReconstructOdeTol);
  opts.record = true;
  // A single shot picks up the growing mode wherever the true solution decays
  // toward the far end, so shoot from both ends and join them where |u| is
  // large for both. The lower bracket end carries exactly i interior zeros.
  const ShotResult from_left = shoot_state(problem, est.lower, opts);
  const ShotResult from_right = shoot_state(problem.reflected(), est.lower, opts);
  const auto& tl = *from_left.trajectory;
  const auto& tr = *from_right.trajectory;

  Eigenpair e;
  e.index = i;
  e.lambda = est.lambda;
  e.p = p;
  e.bracket_width = est.bracket_width;
  e.iterations = est.iterations;
  e.x = uniform_grid(options.grid_n);
  const std::size_t n = e.x.size();

  // Contamination of one shot comes with a tiny value of the other, so the sum
  // of log magnitudes peaks where both are trustworthy.
  std::size_t km = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double sum = log_magnitude(tl(e.x[k]), p) + log_magnitude(tr(-e.x[k]), p);
    if (std::isfinite(sum) && sum > best) {
      best = sum;
      km = k;
    }
  }
  if (!std::isfinite(best)) throw PrecisionError("eigenfunction reconstruction failed", 0.0);
  e.match = e.x[km];
  const ShotSample sl = tl(e.match);
  const ShotSample sr = tr(-e.match);
  e.left = {from_left.trajectory, 0.0, 1.0};
  e.right = {from_right.trajectory, log_magnitude(sl, p) - log_magnitude(sr, p),
             (sl.u > 0) == (sr.u > 0) ? 1.0 : -1.0};

  for (double z : from_left.zeros)
    if (z <= e.match) e.interior_zeros.push_back(z);
  for (auto it = from_right.zeros.rbegin(); it != from_right.zeros.rend(); ++it)
    if (-*it > e.match) e.interior_zeros.push_back(-*it);
  // A re-shot may put a Dirichlet end zero a rounding error inside.
  if (problem.bc().is_dirichlet())
    std::erase_if(e.interior_zeros, [](double z) { return std::abs(z) > 1.0 - 1e-8; });

  // Scale so the largest sample is O(1), then normalise int |u|^p = 1.
  double ref = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double a = e.x[k] > e.match ? log_magnitude(tr(-e.x[k]), p) + e.right.log_factor
                                      : log_magnitude(tl(e.x[k]), p);
    if (std::isfinite(a)) ref = std::max(ref, a);
  }
  e.left.log_factor -= ref;
  e.right.log_factor -= ref;
  e.u.resize(n);
  for (std::size_t k = 0; k < n; ++k) e.u[k] = e.sample(e.x[k]).u;
  std::vector<double> mass(n);
  for (std::size_t k = 0; k < n; ++k) mass[k] = std::pow(std::abs(e.u[k]), p);
  const double log_norm = std::log(simpson(mass, e.h())) / p;
  e.left.log_factor -= log_norm;
  e.right.log_factor -= log_norm;
  e.du.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const EigenSample s = e.sample(e.x[k]);
    e.u[k] = s.u;
    e.du[k] = s.du;
  }
  return e;
}

EigenSample Eigenpair::sample(double at) const {
  if (!has_dense()) return {hermite_interpolate(x, u, du, at), hermite_derivative(x, u, du, at)};
  const bool use_right = right.trajectory && at > match;
  const Piece& piece = use_right ? right : left;
  const ShotSample s = (*piece.trajectory)(use_right ? -at : at);
  // u scales by m, w by phi_p(m).
  const double log_m = s.log_scale / (p - 1.0) + piece.log_factor;
  const double uu = piece.sign * s.u * std::exp(log_m);
  double w = piece.sign * s.w * std::exp((p - 1.0) * log_m);
  if (use_right) w = -w;
  return {uu, phi(w, p / (p - 1.0))};
}

Eigenpair solve_eigenpair(const Problem& problem, int i, double tol) {
  SolverOptions opts;
  opts.lambda_tol = tol;
  return solve_eigenpair(problem, i, opts);
}

GapReport fundamental_gap(const Problem& problem, const SolverOptions& options) {
  const auto e0 = solve_eigenvalue(problem, 0, options);
  const auto e1 = solve_eigenvalue(problem, 1, options);
  GapReport r;
  r.lambda0 = e0.lambda;
  r.lambda1 = e1.lambda;
  r.gap = e1.lambda - e0.lambda;
  r.diagnostics = {e0.bracket_width, e1.bracket_width, e0.iterations, e1.iterations};
  return r;
}

GapReport fundamental_gap(const Problem& problem, double tol) {
  SolverOptions opts;
  opts.lambda_tol = tol;
  return fundamental_gap(problem, opts);
}

double analytic_zero_potential_p2(const BoundaryCondition& bc, int i) {
  using std::numbers::pi;
  if (i != 0 && i != 1) throw PreconditionError("analytic reference supports indices 0 and 1");
  constexpr double tol = 1e-12;
  if (bc.is_dirichlet()) return std::pow((i + 1) * pi / 2.0, 2);
  const double alpha = bc.alpha();
  if (i == 0) {
    if (alpha == 0.0) return 0.0;
    if (alpha > 0.0) {
      // mu tan mu = alpha on (0, pi/2)
      double mu = bisect([&](double m) { return m * std::sin(m) - alpha * std::cos(m); }, 0.0,
                         pi / 2, tol);
      return mu * mu;
    }
    // mu tanh mu = -alpha
    double mu = bisect([&](double m) { return m * std::tanh(m) + alpha; }, 0.0,
                       std::abs(alpha) + 1.0, tol);
    return -mu * mu;
  }
  if (alpha == 0.0) return pi * pi / 4.0;
  if (alpha == -1.0) return 0.0;
  if (alpha > 0.0) {
    // mu = -alpha tan mu on (pi/2, pi)
    double mu = bisect([&](double m) { return m * std::cos(m) + alpha * std::sin(m); }, pi / 2,
                       pi, tol);
    return mu * mu;
  }
  if (alpha > -1.0) {
    double mu = bisect(
        [&](double m) { return std::cos(m) + alpha * (m == 0.0 ? 1.0 : std::sin(m) / m); }, 0.0,
        pi / 2, tol);
    return mu * mu;
  }
  // mu = -alpha tanh mu
  double mu = bisect([&](double m) { return m + alpha * std::tanh(m); }, 1e-300,
                     std::abs(alpha) + 1.0, tol);
  return -mu * mu;
}

double pi_p(double p) {
  if (!(p > 1.0)) throw PreconditionError("pi_p requires p > 1");
  return 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
}

double analytic_dirichlet_plaplace(double p, int i) {
  if (i < 0) throw PreconditionError("eigenvalue index must be non-negative");
  return (p - 1.0) * std::pow((i + 1) * pi_p(p) / 2.0, p);
}

}  // namespace gaplab
