#pragma once

// Dormand-Prince 5(4) with proportional-integral step control and the
// pair's continuous extension as dense output.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gaplab/errors.hpp"

namespace gaplab::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

struct StepControl {
  double rtol = 1e-10;
  double atol = 1e-10;
  /// Steps below this fraction of the interval length raise StiffnessError.
  double min_step_fraction = 1e-14;
  std::size_t max_steps = 20'000'000;
};

/// One accepted step: y(x0 + theta h) by the quartic continuous extension.
template <std::size_t N>
struct DenseSegment {
  double x0 = 0.0;
  double h = 0.0;
  std::array<Vec<N>, 5> coef{};
  /// Caller payload, e.g. an accumulated log scale.
  double tag = 0.0;

  Vec<N> operator()(double x) const noexcept {
    const double s = (x - x0) / h;
    const double s1 = 1.0 - s;
    Vec<N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = coef[0][i] +
             s * (coef[1][i] + s1 * (coef[2][i] + s * (coef[3][i] + s1 * coef[4][i])));
    return y;
  }
  double x1() const noexcept { return x0 + h; }
};

/// Piecewise dense output over the integrated interval (either direction).
template <std::size_t N>
class DenseTrajectory {
 public:
  void push(const DenseSegment<N>& seg) { segments_.push_back(seg); }
  bool empty() const noexcept { return segments_.empty(); }
  std::span<const DenseSegment<N>> segments() const noexcept { return segments_; }
  double start() const noexcept { return segments_.front().x0; }
  double end() const noexcept { return segments_.back().x1(); }

  const DenseSegment<N>& segment_at(double x) const {
    const bool forward = segments_.front().h > 0;
    auto it = std::partition_point(segments_.begin(), segments_.end(), [&](const auto& s) {
      return forward ? s.x1() < x : s.x1() > x;
    });
    if (it == segments_.end()) --it;
    return *it;
  }
  Vec<N> operator()(double x) const { return segment_at(x)(x); }

 private:
  std::vector<DenseSegment<N>> segments_;
};

namespace dp {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace dp

/// Step-at-a-time driver. `F` is callable as `Vec<N> f(double x, const Vec<N>& y)`.
///
/// The target abscissa may be moved forward with `retarget` so callers can land
/// exactly on breakpoints; the state may be rescaled between steps.
template <std::size_t N, class F>
class DormandPrince {
 public:
  DormandPrince(F f, double x0, const Vec<N>& y0, double x_end, StepControl ctl)
      : f_(std::move(f)), ctl_(ctl), x_(x0), y_(y0), x_end_(x_end),
        span_(std::abs(x_end - x0)) {
    k1_ = f_(x_, y_);
    h_ = initial_step();
  }

  double x() const noexcept { return x_; }
  const Vec<N>& y() const noexcept { return y_; }
  bool done() const noexcept { return x_ == x_end_; }
  std::size_t accepted() const noexcept { return accepted_; }
  std::size_t rejected() const noexcept { return rejected_; }
  const DenseSegment<N>& last_segment() const noexcept { return seg_; }

  void retarget(double x_end) { x_end_ = x_end; }

  /// Multiply component i of the state (and of the cached derivative) by
  /// scale[i]. Valid for fields that commute with the rescaling.
  void rescale(const Vec<N>& scale) {
    for (std::size_t i = 0; i < N; ++i) {
      y_[i] *= scale[i];
      k1_[i] *= scale[i];
    }
  }

  /// Replace the cached derivative after an external change of the field.
  void refresh() { k1_ = f_(x_, y_); }

  /// Advance by one accepted step toward the current target.
  void step() {
    using namespace dp;
    const double dir = x_end_ >= x_ ? 1.0 : -1.0;
    const double h_min = ctl_.min_step_fraction * std::max(span_, 1e-300);
    for (;;) {
      if (++attempts_ > ctl_.max_steps)
        throw StiffnessError("integrator exceeded the step budget", x_);
      double h = dir * std::abs(h_);
      bool last = false;
      if (dir * (x_ + h - x_end_) >= 0.0 || std::abs(x_end_ - x_ - h) < 1e-3 * std::abs(h)) {
        h = x_end_ - x_;
        last = true;
      }
      if (std::abs(h) < h_min && !last)
        throw StiffnessError("step size underflow at x=" + std::to_string(x_), x_);

      Vec<N> tmp, k2, k3, k4, k5, k6, k7, y1;
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * a21 * k1_[i];
      k2 = f_(x_ + c2 * h, tmp);
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2[i]);
      k3 = f_(x_ + c3 * h, tmp);
      for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
      k4 = f_(x_ + c4 * h, tmp);
      for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      k5 = f_(x_ + c5 * h, tmp);
      for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                              a65 * k5[i]);
      const double x_new = last ? x_end_ : x_ + h;
      k6 = f_(x_ + h, tmp);
      for (std::size_t i = 0; i < N; ++i)
        y1[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                             a76 * k6[i]);
      k7 = f_(x_new, y1);

      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double sk = ctl_.atol + ctl_.rtol * std::max(std::abs(y_[i]), std::abs(y1[i]));
        const double ei = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                               e6 * k6[i] + e7 * k7[i]);
        err += (ei / sk) * (ei / sk);
      }
      err = std::sqrt(err / static_cast<double>(N));
      if (!std::isfinite(err)) err = 1e10;

      if (err <= 1.0) {
        seg_.x0 = x_;
        seg_.h = x_new - x_;
        for (std::size_t i = 0; i < N; ++i) {
          const double ydiff = y1[i] - y_[i];
          const double bspl = h * k1_[i] - ydiff;
          seg_.coef[0][i] = y_[i];
          seg_.coef[1][i] = ydiff;
          seg_.coef[2][i] = bspl;
          seg_.coef[3][i] = ydiff - h * k7[i] - bspl;
          seg_.coef[4][i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                 d6 * k6[i] + d7 * k7[i]);
        }
        double fac = kSafe * std::pow(err, -kExpo) * std::pow(err_old_, kBeta);
        fac = std::clamp(fac, kFacMin, reject_streak_ ? 1.0 : kFacMax);
        err_old_ = std::max(err, 1e-4);
        if (!last) h_ = std::abs(h) * fac;  // a clipped final step says nothing about h
        x_ = x_new;
        y_ = y1;
        k1_ = k7;
        ++accepted_;
        reject_streak_ = false;
        return;
      }
      ++rejected_;
      reject_streak_ = true;
      h_ = std::abs(h) * std::max(kFacMin, kSafe * std::pow(err, -0.2));
    }
  }

  void advance_to_target() {
    while (!done()) step();
  }

 private:
  static constexpr double kSafe = 0.9;
  static constexpr double kBeta = 0.04;
  static constexpr double kExpo = 0.2 - 0.75 * kBeta;
  static constexpr double kFacMin = 0.2;
  static constexpr double kFacMax = 10.0;

  double norm(const Vec<N>& v) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = ctl_.atol + ctl_.rtol * std::abs(y_[i]);
      acc += (v[i] / sk) * (v[i] / sk);
    }
    return std::sqrt(acc / static_cast<double>(N));
  }

  double initial_step() {
    if (span_ == 0.0) return 0.0;
    const double dir = x_end_ >= x_ ? 1.0 : -1.0;
    const double d0 = norm(y_);
    const double d1n = norm(k1_);
    double h0 = (d0 < 1e-10 || d1n < 1e-10) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, span_);
    Vec<N> y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y_[i] + dir * h0 * k1_[i];
    const Vec<N> f1 = f_(x_ + dir * h0, y1);
    Vec<N> df;
    for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - k1_[i];
    const double d2 = norm(df) / h0;
    const double dmax = std::max(d1n, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, span_});
  }

  F f_;
  StepControl ctl_;
  double x_;
  Vec<N> y_;
  Vec<N> k1_{};
  double x_end_;
  double span_;
  double h_ = 0.0;
  double err_old_ = 1e-4;
  bool reject_streak_ = false;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
  std::size_t attempts_ = 0;
  DenseSegment<N> seg_{};
};

/// Integrates y' = f(x, y) from x0 to x1 with rtol = atol = tol and returns
/// the dense trajectory.
template <std::size_t N, class F>
DenseTrajectory<N> integrate(F f, double x0, double x1, const Vec<N>& y0, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("integrate: tolerance must be positive");
  StepControl ctl;
  ctl.rtol = tol;
  ctl.atol = tol;
  DormandPrince<N, F> stepper(std::move(f), x0, y0, x1, ctl);
  DenseTrajectory<N> out;
  while (!stepper.done()) {
    stepper.step();
    out.push(stepper.last_segment());
  }
  return out;
}

}  // namespace gaplab::ode
