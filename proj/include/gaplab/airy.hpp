#pragma once

#include "gaplab/problem.hpp"

namespace gaplab {

inline constexpr double kAiryMin = -20.0;
inline constexpr double kAiryMax = 5.0;
inline constexpr int kAiryMaxZeroIndex = 4;

struct AiryValue {
  double x = 0.0;
  double ai = 0.0;
  double ai_prime = 0.0;
};

/// Ai and Ai' on [-20, 5] from a traced solution of y'' = x y started at 0.
/// Throws DomainError outside that range.
AiryValue airy_ai(double x);

/// y'' - x y at x for the traced solution, differencing the traced y'.
double airy_ode_residual(double x, double h = 2e-3);

enum class AiryZeroKind { ai, ai_prime };

/// mu > 0 with Ai(-mu) = 0 or Ai'(-mu) = 0, k-th in increasing order.
/// Throws DomainError for k outside [0, 4].
double airy_zero(AiryZeroKind kind, int k);

struct AsymptoticGap {
  double predicted_gap = 0.0;
  /// Limits of the rescaled eigenvalues a^{-2/3} lambda_i + a^{1/3}.
  double lambda_hat0 = 0.0;
  double lambda_hat1 = 0.0;
};

/// Leading large-slope model for the gap of a x: a^{2/3} (mu_1 - mu_0), with
/// Ai' zeros for any Robin parameter and Ai zeros for Dirichlet.
AsymptoticGap asymptotic_gap(double a, const BoundaryCondition& bc);

}  // namespace gaplab
