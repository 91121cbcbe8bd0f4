#include "gaplab/airy.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gaplab/errors.hpp"
#include "gaplab/ode.hpp"
#include "gaplab/roots.hpp"

namespace gaplab {

namespace {

constexpr double kTraceTol = 1e-12;
constexpr double kScanStep = 0.01;

struct AiryTrace {
  ode::DenseTrajectory<2> left;
  ode::DenseTrajectory<2> right;
};

const AiryTrace& trace() {
  static const AiryTrace t = [] {
    const double ai0 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
    const double aip0 = -std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
    auto f = [](double x, const ode::Vec<2>& y) -> ode::Vec<2> { return {y[1], x * y[0]}; };
    return AiryTrace{ode::integrate<2>(f, 0.0, kAiryMin, {ai0, aip0}, kTraceTol),
                     ode::integrate<2>(f, 0.0, kAiryMax, {ai0, aip0}, kTraceTol)};
  }();
  return t;
}

/// Zeros on the negative axis, bracketed on a fixed scan and bisected.
const std::vector<double>& zeros(AiryZeroKind kind) {
  auto build = [](int component) {
    std::vector<double> out;
    auto f = [component](double x) {
      const AiryValue v = airy_ai(x);
      return component == 0 ? v.ai : v.ai_prime;
    };
    double prev_x = 0.0;
    double prev = f(prev_x);
    for (int k = 1; out.size() <= kAiryMaxZeroIndex; ++k) {
      const double x = -k * kScanStep;
      const double cur = f(x);
      if ((cur > 0) != (prev > 0)) out.push_back(-bisect(f, x, prev_x, 1e-12));
      prev_x = x;
      prev = cur;
    }
    return out;
  };
  static const std::vector<double> ai = build(0);
  static const std::vector<double> aip = build(1);
  return kind == AiryZeroKind::ai ? ai : aip;
}

}  // namespace

AiryValue airy_ai(double x) {
  if (!(x >= kAiryMin && x <= kAiryMax))
    throw DomainError("airy_ai: x = " + std::to_string(x) + " outside [-20, 5]");
  const auto& t = trace();
  const auto y = x < 0.0 ? t.left(x) : t.right(x);
  return {x, y[0], y[1]};
}

double airy_ode_residual(double x, double h) {
  // Ai'' from a fourth-order first difference of the traced Ai'.
  auto d = [](double s) { return airy_ai(s).ai_prime; };
  const double d2 = (d(x - 2 * h) - 8 * d(x - h) + 8 * d(x + h) - d(x + 2 * h)) / (12 * h);
  return d2 - x * airy_ai(x).ai;
}

double airy_zero(AiryZeroKind kind, int k) {
  if (k < 0 || k > kAiryMaxZeroIndex)
    throw DomainError("airy_zero: index " + std::to_string(k) + " outside [0, 4]");
  return zeros(kind)[static_cast<std::size_t>(k)];
}

AsymptoticGap asymptotic_gap(double a, const BoundaryCondition& bc) {
  if (!(a > 0.0)) throw PreconditionError("asymptotic_gap needs a > 0");
  // A finite Robin parameter rescales to alpha a^{-1/3} -> 0: the Neumann limit.
  const auto kind = bc.is_dirichlet() ? AiryZeroKind::ai : AiryZeroKind::ai_prime;
  AsymptoticGap g;
  g.lambda_hat0 = airy_zero(kind, 0);
  g.lambda_hat1 = airy_zero(kind, 1);
  g.predicted_gap = std::cbrt(a * a) * (g.lambda_hat1 - g.lambda_hat0);
  return g;
}

}  // namespace gaplab
