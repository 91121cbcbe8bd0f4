#include "gaplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gaplab/errors.hpp"
#include "gaplab/quadrature.hpp"
#include "gaplab/roots.hpp"

namespace gaplab {

namespace {

double integrate(const Eigenpair& e, const std::vector<double>& f) { return simpson(f, e.h()); }

void require_same_grid(const Eigenpair& e0, const Eigenpair& e1) {
  if (e0.x.size() != e1.x.size() || e0.p != e1.p)
    throw PreconditionError("eigenpairs must share grid and exponent");
}

/// Grid points near a zero of u, including Dirichlet endpoints.
std::vector<bool> zero_neighbourhood(const Eigenpair& e, double delta) {
  std::vector<bool> out(e.x.size(), false);
  double umax = 0.0;
  for (double v : e.u) umax = std::max(umax, std::abs(v));
  std::vector<double> zeros = e.interior_zeros;
  if (std::abs(e.u.front()) <= 1e-8 * umax) zeros.push_back(-1.0);
  if (std::abs(e.u.back()) <= 1e-8 * umax) zeros.push_back(1.0);
  for (std::size_t k = 0; k < e.x.size(); ++k)
    for (double z : zeros)
      if (std::abs(e.x[k] - z) < delta) out[k] = true;
  return out;
}

constexpr double kGaussNodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                   0.5384693101056831, 0.9061798459386640};
constexpr double kGaussWeights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                     0.4786286704993665, 0.2369268850561891};

/// Breakpoints inside (a, b) where u or u' changes sign, plus kinks of V.
/// |u|^p and |u'|^p are not smooth there, so quadrature pieces end on them.
std::vector<double> cell_breaks(const Eigenpair& e, std::size_t k, const std::vector<double>& kinks) {
  const double a = e.x[k];
  const double b = e.x[k + 1];
  std::vector<double> out;
  auto split = [&](auto f, double fa, double fb) {
    if (fa == 0.0 || fb == 0.0 || (fa > 0) == (fb > 0)) return;
    out.push_back(bisect(f, a, b, 1e-15));
  };
  if (e.has_dense()) {
    split([&](double x) { return e.sample(x).u; }, e.u[k], e.u[k + 1]);
    split([&](double x) { return e.sample(x).du; }, e.du[k], e.du[k + 1]);
  }
  for (double c : kinks)
    if (c > a && c < b) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

/// int_a^b f(x, u, u') dx by 5-point Gauss on pieces between breakpoints.
template <class F>
double cell_integral(const Eigenpair& e, std::size_t k, const std::vector<double>& kinks, F f) {
  std::vector<double> pts{e.x[k]};
  for (double c : cell_breaks(e, k, kinks)) pts.push_back(c);
  pts.push_back(e.x[k + 1]);
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    const double mid = 0.5 * (pts[j] + pts[j + 1]);
    const double half = 0.5 * (pts[j + 1] - pts[j]);
    if (half <= 0.0) continue;
    double part = 0.0;
    for (int g = 0; g < 5; ++g) {
      const double x = mid + half * kGaussNodes[g];
      const EigenSample s = e.sample(x);
      part += kGaussWeights[g] * f(x, s.u, s.du);
    }
    sum += half * part;
  }
  return sum;
}

}  // namespace

double rayleigh_quotient(std::span<const double> x, std::span<const double> u,
                         std::span<const double> du, const Problem& problem) {
  const double p = problem.p();
  const std::size_t n = x.size();
  if (n < 3 || u.size() != n || du.size() != n)
    throw PreconditionError("rayleigh_quotient: mismatched samples");
  const double h = x[1] - x[0];
  std::vector<double> energy(n);
  std::vector<double> mass(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double up = std::pow(std::abs(u[k]), p);
    energy[k] = std::pow(std::abs(du[k]), p) + problem.potential().value(x[k]) * up;
    mass[k] = up;
  }
  const double denom = simpson(mass, h);
  if (!(denom > 0.0)) throw PreconditionError("rayleigh_quotient: function vanishes");
  double num = simpson(energy, h);
  if (!problem.bc().is_dirichlet())
    num += problem.bc().alpha() *
           (std::pow(std::abs(u.back()), p) + std::pow(std::abs(u.front()), p));
  return num / denom;
}

double rayleigh_quotient(const Eigenpair& e, const Problem& problem) {
  if (!e.has_dense()) return rayleigh_quotient(e.x, e.u, e.du, problem);
  // Quadrature on the dense solution: grid samples alone lose accuracy where
  // |u|^p or |u'|^p has a fractional-power cusp.
  const double p = problem.p();
  const auto& v = problem.potential();
  const auto kinks = v.breakpoints();
  double num = 0.0;
  double denom = 0.0;
  for (std::size_t k = 0; k + 1 < e.x.size(); ++k) {
    num += cell_integral(e, k, kinks, [&](double x, double u, double du) {
      return std::pow(std::abs(du), p) + v.value(x) * std::pow(std::abs(u), p);
    });
    denom += cell_integral(e, k, kinks,
                           [&](double, double u, double) { return std::pow(std::abs(u), p); });
  }
  if (!(denom > 0.0)) throw PreconditionError("rayleigh_quotient: function vanishes");
  if (!problem.bc().is_dirichlet())
    num += problem.bc().alpha() *
           (std::pow(std::abs(e.u.back()), p) + std::pow(std::abs(e.u.front()), p));
  return num / denom;
}

double hf_derivative(const Eigenpair& e, const Potential& vdot) {
  std::vector<double> f(e.x.size());
  for (std::size_t k = 0; k < f.size(); ++k)
    f[k] = vdot.value(e.x[k]) * std::pow(std::abs(e.u[k]), e.p);
  return integrate(e, f);
}

double hf_derivative(const Problem& problem, const Potential& vdot, int i,
                     const SolverOptions& options) {
  return hf_derivative(solve_eigenpair(problem, i, options), vdot);
}

std::vector<double> gap_density(const Eigenpair& e0, const Eigenpair& e1) {
  require_same_grid(e0, e1);
  std::vector<double> psi(e0.x.size());
  for (std::size_t k = 0; k < psi.size(); ++k)
    psi[k] = std::pow(std::abs(e1.u[k]), e0.p) - std::pow(std::abs(e0.u[k]), e0.p);
  return psi;
}

double gap_derivative(const Eigenpair& e0, const Eigenpair& e1, const Potential& vdot) {
  auto psi = gap_density(e0, e1);
  for (std::size_t k = 0; k < psi.size(); ++k) psi[k] *= vdot.value(e0.x[k]);
  return integrate(e0, psi);
}

double gap_derivative(const Problem& problem, const Potential& vdot,
                      const SolverOptions& options) {
  return gap_derivative(solve_eigenpair(problem, 0, options), solve_eigenpair(problem, 1, options),
                        vdot);
}

double gap_moment(const Eigenpair& e0, const Eigenpair& e1) {
  return gap_derivative(e0, e1, Potential::linear(1.0));
}

SignChangeProfile sign_change_profile(const Eigenpair& e0, const Eigenpair& e1, double p) {
  require_same_grid(e0, e1);
  SignChangeProfile prof;
  prof.psi = gap_density(e0, e1);
  prof.mean = integrate(e0, prof.psi);

  auto psi_at = [&](double x) {
    const double a = hermite_interpolate(e0.x, e0.u, e0.du, x);
    const double b = hermite_interpolate(e1.x, e1.u, e1.du, x);
    return std::pow(std::abs(b), p) - std::pow(std::abs(a), p);
  };

  std::vector<double> changes;
  int first_sign = 0;
  int last_sign = 0;
  std::size_t last_k = 0;
  for (std::size_t k = 0; k < prof.psi.size(); ++k) {
    const double v = prof.psi[k];
    if (std::abs(v) <= kPsiFloor) continue;
    const int s = v > 0 ? 1 : -1;
    if (first_sign == 0) first_sign = s;
    if (last_sign != 0 && s != last_sign)
      changes.push_back(bisect(psi_at, e0.x[last_k], e0.x[k], kXiTol));
    last_sign = s;
    last_k = k;
  }

  // A pair of changes closer than kXiMerge is a grazing touch, not a crossing.
  std::vector<double> merged;
  for (double c : changes) {
    if (!merged.empty() && c - merged.back() < kXiMerge)
      merged.pop_back();
    else
      merged.push_back(c);
  }

  prof.interior_zero_count = static_cast<int>(merged.size());
  if (merged.size() == 2 && first_sign > 0) {
    prof.xi_minus = merged[0];
    prof.xi_plus = merged[1];
  } else if (merged.size() == 1) {
    if (first_sign < 0) {
      prof.xi_minus = -1.0;
      prof.xi_plus = merged[0];
    } else {
      prof.xi_minus = merged[0];
      prof.xi_plus = 1.0;
    }
  } else {
    throw StructureViolation("psi has " + std::to_string(merged.size()) +
                             " sign changes; expected one or two around a negative core");
  }

  for (std::size_t k = 0; k < prof.psi.size(); ++k) {
    const double x = e0.x[k];
    const bool inside = x >= prof.xi_minus && x <= prof.xi_plus;
    prof.pattern_violation = std::max(prof.pattern_violation, inside ? prof.psi[k] : -prof.psi[k]);
  }
  return prof;
}

RatioMonotonicity ratio_monotonicity(const Eigenpair& e0, const Eigenpair& e1) {
  require_same_grid(e0, e1);
  if (e1.interior_zeros.empty()) throw StructureViolation("second eigenfunction has no zero");
  const double p = e0.p;
  const double z = e1.interior_zeros.front();
  const std::size_t n = e0.x.size();

  std::vector<bool> keep(n, true);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(e0.x[k] - z) < kZeroExclusion) keep[k] = false;
    if (e0.u[k] == 0.0) keep[k] = false;
  }
  // Dirichlet ends: the ratio is a removable limit there.
  if (std::abs(e0.u.front()) <= 1e-8) keep.front() = false;
  if (std::abs(e0.u.back()) <= 1e-8) keep.back() = false;

  RatioMonotonicity out;
  out.max_positive_slope = -std::numeric_limits<double>::infinity();
  out.riccati_gap_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!keep[k] || !keep[k + 1]) continue;
    const double r0 = e1.u[k] / e0.u[k];
    const double r1 = e1.u[k + 1] / e0.u[k + 1];
    out.max_positive_slope = std::max(out.max_positive_slope, r1 - r0);
  }
  for (std::size_t k = 0; k < n && e0.x[k] <= z - kZeroExclusion; ++k) {
    if (!keep[k] || e1.u[k] == 0.0) continue;
    const double v0 = phi(e0.du[k], p) / phi(e0.u[k], p);
    const double v1 = phi(e1.du[k], p) / phi(e1.u[k], p);
    out.riccati_gap_min = std::min(out.riccati_gap_min, v0 - v1);
  }
  return out;
}

double riccati_residual(const Eigenpair& e, const Problem& problem) {
  const double p = problem.p();
  const std::size_t n = e.x.size();
  const double h = e.h();
  const auto skip = zero_neighbourhood(e, kZeroExclusion + h);
  const auto kinks = problem.potential().breakpoints();
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = phi(e.du[k], p);

  // v' + (p-1)|v|^{p'} - (V - lambda) = (w' - (V - lambda) phi_p(u)) / phi_p(u)
  // for v = w / phi_p(u). The numerator is taken in cell-integrated form,
  // dw - int (V - lambda) phi_p(u), which stays exact where w is not smooth.
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (skip[k] || skip[k + 1]) continue;
    const double a = e.x[k];
    const double b = e.x[k + 1];
    bool kinked = false;
    for (double c : kinks) kinked = kinked || (c > a && c < b);
    if (kinked) continue;
    const double source = cell_integral(e, k, kinks, [&](double x, double u, double) {
      return (problem.potential().value(x) - e.lambda) * phi(u, p);
    });
    const double pu = phi(e.sample(0.5 * (a + b)).u, p);
    worst = std::max(worst, std::abs((w[k + 1] - w[k] - source) / (h * pu)));
  }
  return worst;
}

LinearIdentityResiduals boundary_identity_linear(const Eigenpair& e, double a, double alpha) {
  (void)alpha;
  const double lam = e.lambda;
  auto first = [&](double x, double u, double du) { return du * du + (lam - a * x) * u * u; };
  auto second = [&](double x, double u, double du) {
    return du * du + (lam - a * x + 1.0) * u * u - 2.0 * x * u * du;
  };
  const double ul = e.u.front(), ur = e.u.back();
  const double dl = e.du.front(), dr = e.du.back();

  std::vector<double> xu2(e.x.size());
  std::vector<double> x2u2(e.x.size());
  for (std::size_t k = 0; k < e.x.size(); ++k) {
    const double u2 = e.u[k] * e.u[k];
    xu2[k] = e.x[k] * u2;
    x2u2[k] = e.x[k] * e.x[k] * u2;
  }
  LinearIdentityResiduals r;
  r.res1 = first(1.0, ur, dr) - first(-1.0, ul, dl) + a;
  r.res2 = second(1.0, ur, dr) - second(-1.0, ul, dl) - 4.0 * lam * integrate(e, xu2) +
           5.0 * a * integrate(e, x2u2);
  return r;
}

double boundary_gap_quantity(const Eigenpair& e0, const Eigenpair& e1) {
  auto sq = [](double v) { return v * v; };
  return sq(e1.u.back()) - sq(e0.u.back()) - sq(e1.u.front()) + sq(e0.u.front());
}

BoundaryTerms boundary_terms(const Eigenpair& e0, const Eigenpair& e1, double a, double alpha) {
  BoundaryTerms t;
  t.gap_quantity = boundary_gap_quantity(e0, e1);
  t.ground_asymmetry = e0.u.back() * e0.u.back() - e0.u.front() * e0.u.front();
  t.second_level = alpha * alpha + e1.lambda + a;
  return t;
}

GapMomentResiduals gap_moment_residuals(const Eigenpair& e0, const Eigenpair& e1, double a,
                                        double alpha) {
  require_same_grid(e0, e1);
  const std::size_t n = e0.x.size();
  std::vector<double> xpsi(n), x2psi(n), xu0(n), xu1(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = e0.x[k];
    const double u0 = e0.u[k] * e0.u[k];
    const double u1 = e1.u[k] * e1.u[k];
    xpsi[k] = x * (u1 - u0);
    x2psi[k] = x * x * (u1 - u0);
    xu0[k] = x * u0;
    xu1[k] = x * u1;
  }
  const double lhs = (1.0 + 2.0 * alpha) * boundary_gap_quantity(e0, e1);
  const double quad = 5.0 * a * integrate(e0, x2psi);
  GapMomentResiduals r;
  r.combined = lhs - (4.0 * (e1.lambda - e0.lambda) * integrate(e0, xpsi) - quad);
  r.per_eigenfunction =
      lhs - (4.0 * (e1.lambda * integrate(e0, xu1) - e0.lambda * integrate(e0, xu0)) - quad);
  return r;
}

double VerificationRecord::quantity(const std::string& name) const {
  for (const auto& [k, v] : quantities)
    if (k == name) return v;
  throw std::out_of_range("no quantity named " + name);
}

}  // namespace gaplab
