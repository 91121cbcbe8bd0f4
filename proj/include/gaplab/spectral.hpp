#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gaplab/eigensolver.hpp"
#include "gaplab/problem.hpp"

namespace gaplab {

/// Energy ratio (int |u'|^p + V|u|^p + alpha [|u|^p]_{+-1}) / int |u|^p on a
/// uniform grid. Dirichlet drops the boundary term. Throws PreconditionError
/// for a vanishing denominator.
double rayleigh_quotient(std::span<const double> x, std::span<const double> u,
                         std::span<const double> du, const Problem& problem);
double rayleigh_quotient(const Eigenpair& e, const Problem& problem);

/// d lambda_i / dt along V + t Vdot: int Vdot |u_i|^p.
double hf_derivative(const Eigenpair& e, const Potential& vdot);
double hf_derivative(const Problem& problem, const Potential& vdot, int i,
                     const SolverOptions& options = {});

/// int Vdot (|u_1|^p - |u_0|^p).
double gap_derivative(const Eigenpair& e0, const Eigenpair& e1, const Potential& vdot);
double gap_derivative(const Problem& problem, const Potential& vdot,
                      const SolverOptions& options = {});

/// psi = |u_1|^p - |u_0|^p on the shared grid.
std::vector<double> gap_density(const Eigenpair& e0, const Eigenpair& e1);

inline constexpr double kXiTol = 1e-10;
inline constexpr double kXiMerge = 1e-6;
/// Samples with |psi| at or below this are treated as zeros when counting.
inline constexpr double kPsiFloor = 1e-12;

struct SignChangeProfile {
  double xi_minus = -1.0;
  double xi_plus = 1.0;
  int interior_zero_count = 0;
  std::vector<double> psi;
  /// int psi dx (zero for normalised eigenfunctions).
  double mean = 0.0;
  /// Largest departure from psi >= 0 outside [xi-, xi+] and psi <= 0 inside.
  double pattern_violation = 0.0;
};

/// Sign structure of psi. Throws StructureViolation unless psi has one or two
/// interior sign changes with psi < 0 between them.
SignChangeProfile sign_change_profile(const Eigenpair& e0, const Eigenpair& e1, double p);

inline constexpr double kZeroExclusion = 1e-3;

struct RatioMonotonicity {
  /// max_k r(x_{k+1}) - r(x_k) for r = u_1 / u_0, away from the zero of u_1.
  double max_positive_slope = 0.0;
  /// min of v_0 - v_1 left of the zero of u_1, v_i the log-derivatives.
  double riccati_gap_min = 0.0;
};

RatioMonotonicity ratio_monotonicity(const Eigenpair& e0, const Eigenpair& e1);

/// Max of |v' - (V - lambda) + (p-1)|v|^{p'}| over the grid, v = phi_p(u')/phi_p(u),
/// skipping points within kZeroExclusion of a zero of u.
double riccati_residual(const Eigenpair& e, const Problem& problem);

struct LinearIdentityResiduals {
  double res1 = 0.0;
  double res2 = 0.0;
};

/// Energy identities of an eigenpair of -u'' + a x u = lambda u with Robin(alpha).
LinearIdentityResiduals boundary_identity_linear(const Eigenpair& e, double a, double alpha);

/// u_1(1)^2 - u_0(1)^2 - u_1(-1)^2 + u_0(-1)^2.
double boundary_gap_quantity(const Eigenpair& e0, const Eigenpair& e1);

struct BoundaryTerms {
  double gap_quantity = 0.0;
  /// u_0(1)^2 - u_0(-1)^2.
  double ground_asymmetry = 0.0;
  /// alpha^2 + lambda_1 + a.
  double second_level = 0.0;
};

BoundaryTerms boundary_terms(const Eigenpair& e0, const Eigenpair& e1, double a, double alpha);

struct GapMomentResiduals {
  /// (1+2 alpha) B - [4 (lambda_1 - lambda_0) int x psi - 5 a int x^2 psi].
  double combined = 0.0;
  /// (1+2 alpha) B - [4 (lambda_1 int x u_1^2 - lambda_0 int x u_0^2) - 5 a int x^2 psi],
  /// the difference of the per-eigenfunction second identities.
  double per_eigenfunction = 0.0;
};

GapMomentResiduals gap_moment_residuals(const Eigenpair& e0, const Eigenpair& e1, double a,
                                        double alpha);

/// int x (|u_1|^p - |u_0|^p): the slope of the gap along V + a x.
double gap_moment(const Eigenpair& e0, const Eigenpair& e1);

using InputValue = std::variant<double, std::string>;

struct VerificationRecord {
  std::string claim_id;
  std::vector<std::pair<std::string, InputValue>> inputs;
  std::vector<std::pair<std::string, double>> quantities;
  bool passed = false;
  double tolerance = 0.0;

  /// Value of a named quantity; throws std::out_of_range when absent.
  double quantity(const std::string& name) const;
};

inline constexpr double kEqualityTol = 1e-8;
inline constexpr double kStrictMargin = 1e-6;
/// Amplitude above which a single-well potential must beat the constant one strictly.
inline constexpr double kStrictAmplitude = 0.1;

/// Gap of V versus the zero potential, plus the gap derivative along tV.
VerificationRecord verify_single_well_theorem(const Potential& v, double p,
                                              const BoundaryCondition& bc,
                                              const SolverOptions& options = {});

/// Gap of V versus the linear potential whose slope is that of the secant
/// through the sign changes of psi.
VerificationRecord verify_convex_theorem(const Potential& v, double p,
                                         const BoundaryCondition& bc,
                                         const SolverOptions& options = {});

/// Gap of a x versus the zero potential over a grid of slopes (p = 2).
/// Throws PreconditionError for alpha < -1/2.
VerificationRecord verify_linear_theorem(double alpha, std::span<const double> a_grid,
                                         const SolverOptions& options = {});

struct CriticalSlope {
  double a_star = 0.0;
  double gap = 0.0;
  double moment = 0.0;
  /// Whether |moment| was small enough for the two-zero check to apply.
  bool checked = false;
  bool two_zero_check = false;
  int interior_zeros = 0;
  double psi_left = 0.0;
  double psi_right = 0.0;
  int evaluations = 0;
};

inline constexpr double kCriticalBound = 50.0;
inline constexpr double kGoldenTol = 1e-5;
inline constexpr double kMomentTol = 1e-6;

/// Minimiser of the p = 2 gap of a x over a in [-50, 50].
CriticalSlope critical_a_search(double alpha, const SolverOptions& options = {});

}  // namespace gaplab
