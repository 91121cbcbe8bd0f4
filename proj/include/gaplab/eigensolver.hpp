#pragma once

#include <memory>
#include <vector>

#include "gaplab/ivp.hpp"
#include "gaplab/problem.hpp"

namespace gaplab {

inline constexpr int kDefaultGridSize = 4097;
/// Integrator tolerance for the shot that reconstructs an eigenfunction.
inline constexpr double kReconstructOdeTol = 1e-14;

/// Default eigenvalue tolerance: 1e-10 for p = 2, 1e-8 otherwise.
double default_lambda_tol(double p) noexcept;

struct SolverOptions {
  /// Bracket width at which bisection stops; <= 0 selects default_lambda_tol.
  double lambda_tol = 0.0;
  /// Integrator tolerance; <= 0 derives it from lambda_tol.
  double ode_tol = 0.0;
  int grid_n = kDefaultGridSize;

  double resolved_lambda_tol(double p) const noexcept;
  double resolved_ode_tol(double p) const noexcept;
};

struct MissValue {
  /// w(1) + alpha phi_p(u(1)) for Robin, u(1) for Dirichlet (renormalised).
  double value = 0.0;
  int nodal_count = 0;
  /// Number of eigenvalues strictly below lambda (generalised Pruefer count).
  int eigen_count = 0;
};

MissValue miss_function(const Problem& problem, double lambda, double ode_tol = 1e-12);

struct EigenvalueEstimate {
  double lambda = 0.0;
  double bracket_width = 0.0;
  int iterations = 0;
  /// Lower end of the final bracket (eigen_count there equals the index).
  double lower = 0.0;
};

/// Eigenvalue with index i by bracketing and bisection on eigen_count.
EigenvalueEstimate solve_eigenvalue(const Problem& problem, int i,
                                    const SolverOptions& options = {});

struct EigenSample {
  double u = 0.0;
  double du = 0.0;
};

struct Eigenpair {
  int index = 0;
  double lambda = 0.0;
  double p = 2.0;
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> du;
  std::vector<double> interior_zeros;
  double bracket_width = 0.0;
  int iterations = 0;

  /// Dense solution the samples were taken from, as a shot from x = -1 used up
  /// to `match` and a shot from x = +1 (reflected coordinates) beyond it.
  /// Null for hand-built pairs.
  struct Piece {
    std::shared_ptr<const ShotTrajectory> trajectory;
    double log_factor = 0.0;
    double sign = 1.0;
  };
  Piece left;
  Piece right;
  double match = 1.0;

  bool has_dense() const noexcept { return left.trajectory != nullptr; }
  double h() const noexcept { return x[1] - x[0]; }
  /// Normalised (u, u') anywhere in [-1, 1]: from the dense solution when
  /// present, else the cubic Hermite interpolant of the samples.
  EigenSample sample(double at) const;
};

/// Eigenpair normalised to int |u|^p = 1 with u > 0 near x = -1.
Eigenpair solve_eigenpair(const Problem& problem, int i, const SolverOptions& options = {});
Eigenpair solve_eigenpair(const Problem& problem, int i, double tol);

struct GapDiagnostics {
  double bracket_width0 = 0.0;
  double bracket_width1 = 0.0;
  int iterations0 = 0;
  int iterations1 = 0;
};

struct GapReport {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double gap = 0.0;
  GapDiagnostics diagnostics;
};

GapReport fundamental_gap(const Problem& problem, const SolverOptions& options = {});
GapReport fundamental_gap(const Problem& problem, double tol);

/// Closed-form eigenvalues of -u'' on (-1, 1), i in {0, 1}.
double analytic_zero_potential_p2(const BoundaryCondition& bc, int i);

/// 2 pi / (p sin(pi / p)).
double pi_p(double p);

/// (p-1) ((i+1) pi_p / 2)^p: Dirichlet eigenvalues of the p-Laplacian on (-1, 1).
double analytic_dirichlet_plaplace(double p, int i);

}  // namespace gaplab
