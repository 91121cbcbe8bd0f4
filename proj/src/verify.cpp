#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "gaplab/errors.hpp"
#include "gaplab/parallel.hpp"
#include "gaplab/spectral.hpp"

namespace gaplab {

namespace {

InputValue alpha_input(const BoundaryCondition& bc) {
  if (bc.is_dirichlet()) return std::string("dirichlet");
  return bc.alpha();
}

std::string slope_key(const char* stem, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s[a=%.10g]", stem, a);
  return buf;
}

}  // namespace

VerificationRecord verify_single_well_theorem(const Potential& v, double p,
                                              const BoundaryCondition& bc,
                                              const SolverOptions& options) {
  const PropertyFlags flags = classify_potential(v);
  if (!flags.symmetric || !flags.single_well)
    throw PreconditionError("potential is not symmetric single-well: " + v.serialize());

  const Problem problem(p, v, bc);
  const GapReport gv = fundamental_gap(problem, options);
  const GapReport g0 = fundamental_gap(problem.with_potential(Potential::constant(0.0)), options);
  const double margin = gv.gap - g0.gap;
  const double amplitude = potential_amplitude(v);
  const bool constant = flags.affine && flags.symmetric;
  const bool strict = !constant && amplitude >= kStrictAmplitude;

  VerificationRecord rec;
  rec.claim_id = "single_well_gap";
  rec.tolerance = kEqualityTol;
  rec.inputs = {{"potential", v.serialize()}, {"p", p}, {"alpha", alpha_input(bc)}};
  rec.quantities = {{"gap", gv.gap},
                    {"gap_zero", g0.gap},
                    {"margin", margin},
                    {"amplitude", amplitude},
                    {"strict_required", strict ? 1.0 : 0.0}};

  // The gap grows along the whole segment tV: its derivative never dips below 0.
  double min_derivative = std::numeric_limits<double>::infinity();
  for (double t : {0.25, 0.5, 0.75, 1.0}) {
    const Problem pt = problem.with_potential(v.scaled(t));
    const double d =
        gap_derivative(solve_eigenpair(pt, 0, options), solve_eigenpair(pt, 1, options), v);
    char key[48];
    std::snprintf(key, sizeof key, "gap_derivative[t=%g]", t);
    rec.quantities.emplace_back(key, d);
    min_derivative = std::min(min_derivative, d);
  }
  rec.quantities.emplace_back("min_gap_derivative", min_derivative);
  rec.passed = margin >= -rec.tolerance && (!strict || margin > kStrictMargin) &&
               min_derivative >= -rec.tolerance;
  return rec;
}

VerificationRecord verify_convex_theorem(const Potential& v, double p,
                                         const BoundaryCondition& bc,
                                         const SolverOptions& options) {
  const PropertyFlags flags = classify_potential(v);
  if (!flags.convex) throw PreconditionError("potential is not convex: " + v.serialize());

  const Problem problem(p, v, bc);
  const Eigenpair e0 = solve_eigenpair(problem, 0, options);
  const Eigenpair e1 = solve_eigenpair(problem, 1, options);
  const SignChangeProfile prof = sign_change_profile(e0, e1, p);
  const Line line = secant_line(v, prof.xi_minus, prof.xi_plus);
  const GapReport gl = fundamental_gap(problem.with_potential(Potential::linear(line.slope)), options);

  const double gap = e1.lambda - e0.lambda;
  const double margin = gap - gl.gap;
  // V - L is >= 0 outside [xi-, xi+] and <= 0 inside, as psi is, so this is >= 0.
  const Potential excess = v.plus_affine(-line.slope, -line.intercept);
  const double positivity = gap_derivative(e0, e1, excess);

  VerificationRecord rec;
  rec.claim_id = "convex_vs_linear_gap";
  rec.tolerance = kEqualityTol;
  rec.inputs = {{"potential", v.serialize()}, {"p", p}, {"alpha", alpha_input(bc)}};
  rec.quantities = {{"gap", gap},
                    {"gap_linear", gl.gap},
                    {"slope", line.slope},
                    {"intercept", line.intercept},
                    {"xi_minus", prof.xi_minus},
                    {"xi_plus", prof.xi_plus},
                    {"margin", margin},
                    {"positivity", positivity},
                    {"affine", flags.affine ? 1.0 : 0.0}};
  rec.passed = margin >= -rec.tolerance &&
               (flags.affine || (margin > kStrictMargin && positivity > 0.0));
  return rec;
}

VerificationRecord verify_linear_theorem(double alpha, std::span<const double> a_grid,
                                         const SolverOptions& options) {
  if (!(alpha >= -0.5)) throw PreconditionError("linear-potential comparison needs alpha >= -1/2");
  if (a_grid.empty()) throw PreconditionError("slope grid is empty");
  const auto bc = BoundaryCondition::robin(alpha);
  const double g0 = fundamental_gap(Problem(2.0, Potential::constant(0.0), bc), options).gap;

  std::vector<double> gaps(a_grid.size());
  parallel_for(a_grid.size(), [&](std::size_t k) {
    gaps[k] = fundamental_gap(Problem(2.0, Potential::linear(a_grid[k]), bc), options).gap;
  });

  VerificationRecord rec;
  rec.claim_id = "linear_vs_constant_gap";
  rec.tolerance = kEqualityTol;
  rec.inputs = {{"p", 2.0}, {"alpha", alpha}};
  rec.quantities.emplace_back("gap_zero", g0);

  bool ok = true;
  double min_margin = std::numeric_limits<double>::infinity();
  double smallest_nonzero = std::numeric_limits<double>::infinity();
  std::size_t argmin = 0;
  for (std::size_t k = 0; k < a_grid.size(); ++k) {
    rec.quantities.emplace_back(slope_key("gap", a_grid[k]), gaps[k]);
    if (gaps[k] < gaps[argmin]) argmin = k;
    if (a_grid[k] != 0.0) smallest_nonzero = std::min(smallest_nonzero, std::abs(a_grid[k]));
  }
  for (std::size_t k = 0; k < a_grid.size(); ++k) {
    const double m = gaps[k] - g0;
    if (m < -rec.tolerance) ok = false;
    if (a_grid[k] != 0.0) {
      min_margin = std::min(min_margin, m);
      if (std::abs(a_grid[k]) >= smallest_nonzero && !(m > kStrictMargin)) ok = false;
    }
  }
  rec.quantities.emplace_back("min_location", a_grid[argmin]);
  rec.quantities.emplace_back("min_gap", gaps[argmin]);
  rec.quantities.emplace_back("min_nonzero_margin", min_margin);
  rec.passed = ok;
  return rec;
}

CriticalSlope critical_a_search(double alpha, const SolverOptions& options) {
  const auto bc = BoundaryCondition::robin(alpha);
  CriticalSlope out;
  auto problem_at = [&](double a) { return Problem(2.0, Potential::linear(a), bc); };
  auto gap_at = [&](double a) {
    ++out.evaluations;
    return fundamental_gap(problem_at(a), options).gap;
  };
  auto moment_at = [&](double a) {
    const Problem pr = problem_at(a);
    return gap_moment(solve_eigenpair(pr, 0, options), solve_eigenpair(pr, 1, options));
  };

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -kCriticalBound;
  double hi = kCriticalBound;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = gap_at(c);
  double fd = gap_at(d);
  while (hi - lo > kGoldenTol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = gap_at(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = gap_at(d);
    }
  }

  // Gap values near the minimum are flat to solver noise; the slope (the
  // moment) is not, so finish by bisecting on its sign.
  double a_star = 0.5 * (lo + hi);
  double m_star = moment_at(a_star);
  double half = 0.5 * (hi - lo);
  for (int widen = 0; widen < 6 && std::abs(m_star) > 0.1 * kMomentTol; ++widen, half *= 4.0) {
    double l = a_star - half;
    double r = a_star + half;
    double ml = moment_at(l);
    if ((ml > 0) == (moment_at(r) > 0)) continue;
    while (r - l > 1e-12) {
      const double mid = 0.5 * (l + r);
      const double mm = moment_at(mid);
      a_star = mid;
      m_star = mm;
      if (std::abs(mm) <= 0.1 * kMomentTol) break;
      if ((mm > 0) == (ml > 0)) {
        l = mid;
        ml = mm;
      } else {
        r = mid;
      }
    }
    break;
  }

  const Problem pr = problem_at(a_star);
  const Eigenpair e0 = solve_eigenpair(pr, 0, options);
  const Eigenpair e1 = solve_eigenpair(pr, 1, options);
  out.a_star = a_star;
  out.gap = e1.lambda - e0.lambda;
  out.moment = gap_moment(e0, e1);
  out.psi_left = e1.u.front() * e1.u.front() - e0.u.front() * e0.u.front();
  out.psi_right = e1.u.back() * e1.u.back() - e0.u.back() * e0.u.back();
  if (std::abs(out.moment) <= kMomentTol) {
    out.checked = true;
    try {
      out.interior_zeros = sign_change_profile(e0, e1, 2.0).interior_zero_count;
    } catch (const StructureViolation&) {
      out.interior_zeros = -1;
    }
    out.two_zero_check = out.interior_zeros == 2 && out.psi_left > 0.0 && out.psi_right > 0.0;
  }
  return out;
}

}  // namespace gaplab
