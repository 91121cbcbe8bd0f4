#include "gaplab/ivp.hpp"

#include <algorithm>
#include <cmath>

#include "gaplab/errors.hpp"

namespace gaplab {

namespace {

using State = ode::Vec<2>;

/// Interior breakpoints of V in integration order, followed by the end point.
std::vector<double> stops(const Potential& v, double from, double to) {
  std::vector<double> out;
  for (double b : v.breakpoints())
    if (b > std::min(from, to) && b < std::max(from, to)) out.push_back(b);
  if (to > from)
    std::sort(out.begin(), out.end());
  else
    std::sort(out.begin(), out.end(), std::greater<>());
  out.push_back(to);
  return out;
}

double refine_zero(const ode::DenseSegment<2>& seg) {
  double a = seg.x0;
  double b = seg.x1();
  double ua = seg(a)[0];
  for (int it = 0; it < 200 && std::abs(b - a) > 1e-15; ++it) {
    double m = 0.5 * (a + b);
    double um = seg(m)[0];
    if (um == 0.0) return m;
    if ((um > 0) == (ua > 0)) {
      a = m;
      ua = um;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

template <class Field>
ShotResult run_shot(const Problem& problem, Field field, const ShotOptions& options) {
  const double p = problem.p();
  const auto& bc = problem.bc();
  State y0 = bc.is_dirichlet() ? State{0.0, 1.0} : State{1.0, bc.alpha()};
  if (options.initial) y0 = *options.initial;

  ode::StepControl ctl;
  ctl.rtol = options.tol;
  ctl.atol = options.tol;
  auto targets = stops(problem.potential(), -1.0, 1.0);
  ode::DormandPrince<2, Field> stepper(field, -1.0, y0, targets.front(), ctl);

  ShotResult out;
  ode::DenseTrajectory<2> dense;
  double log_u = 0.0;
  int last_sign = y0[0] > 0 ? 1 : (y0[0] < 0 ? -1 : 0);

  for (double target : targets) {
    stepper.retarget(target);
    while (!stepper.done()) {
      stepper.step();
      const double u = stepper.y()[0];
      if (u != 0.0) {
        const int s = u > 0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) {
          ++out.nodal_count;
          if (options.record) out.zeros.push_back(refine_zero(stepper.last_segment()));
        }
        last_sign = s;
      }
      if (options.record) {
        auto seg = stepper.last_segment();
        seg.tag = (p - 1.0) * log_u;
        dense.push(seg);
      }
      const double w = stepper.y()[1];
      const double size =
          std::max(std::abs(u), p == 2.0 ? std::abs(w) : std::pow(std::abs(w), 1.0 / (p - 1.0)));
      if (size > kRenormalizeAbove || (size < kRenormalizeBelow && size > 0.0)) {
        const double su = 1.0 / size;
        const double sw = p == 2.0 ? su : std::pow(size, 1.0 - p);
        stepper.rescale({su, sw});
        log_u += std::log(size);
      }
    }
  }
  out.u_end = stepper.y()[0];
  out.w_end = stepper.y()[1];
  out.log_scale = (p - 1.0) * log_u;
  out.steps = stepper.accepted();
  if (options.record) out.trajectory = std::make_shared<const ShotTrajectory>(p, std::move(dense));
  return out;
}

}  // namespace

ShotSample ShotTrajectory::operator()(double x) const {
  const auto& seg = dense_.segment_at(x);
  const auto y = seg(x);
  return {y[0], y[1], seg.tag};
}

double ShotTrajectory::max_log_scale() const noexcept {
  double m = 0.0;
  for (const auto& s : dense_.segments()) m = std::max(m, s.tag);
  return m;
}

ShotResult shoot_state(const Problem& problem, double lambda, const ShotOptions& options) {
  const Potential& v = problem.potential();
  if (problem.is_linear()) {
    auto field = [&v, lambda](double x, const State& y) -> State {
      return {y[1], (v.value(x) - lambda) * y[0]};
    };
    return run_shot(problem, field, options);
  }
  const double p = problem.p();
  const double pc = problem.p_conjugate();
  auto field = [&v, lambda, p, pc](double x, const State& y) -> State {
    return {phi(y[1], pc), (v.value(x) - lambda) * phi(y[0], p)};
  };
  return run_shot(problem, field, options);
}

RiccatiTrace riccati_integrate(const Problem& problem, double lambda, double from, double to,
                               double v0, double tol) {
  if (from == to || from < -1.0 || from > 1.0 || to < -1.0 || to > 1.0)
    throw PreconditionError("riccati_integrate: need distinct endpoints in [-1,1]");
  const Potential& pot = problem.potential();
  const double pm1 = problem.p() - 1.0;
  const double pc = problem.p_conjugate();
  const bool linear = problem.is_linear();
  auto field = [&pot, lambda, pm1, pc, linear](double x, const ode::Vec<1>& y) -> ode::Vec<1> {
    const double a = std::abs(y[0]);
    return {pot.value(x) - lambda - pm1 * (linear ? a * a : std::pow(a, pc))};
  };
  ode::StepControl ctl;
  ctl.rtol = tol;
  ctl.atol = tol;
  auto targets = stops(pot, from, to);
  ode::DormandPrince<1, decltype(field)> stepper(field, from, {v0}, targets.front(), ctl);

  RiccatiTrace trace;
  trace.samples.push_back({from, v0});
  try {
    for (double target : targets) {
      stepper.retarget(target);
      while (!stepper.done()) {
        stepper.step();
        const double v = stepper.y()[0];
        trace.samples.push_back({stepper.x(), v});
        if (std::abs(v) > kRiccatiPoleGuard) {
          trace.blow_up = stepper.x();
          return trace;
        }
      }
    }
  } catch (const StiffnessError& e) {
    // Step collapse just short of a pole is a blow-up, not a failure.
    if (std::abs(stepper.y()[0]) > 1e-2 * kRiccatiPoleGuard) {
      trace.blow_up = e.where();
      return trace;
    }
    throw;
  }
  return trace;
}

}  // namespace gaplab
