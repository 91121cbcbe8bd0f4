#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gaplab/errors.hpp"
#include "gaplab/ode.hpp"

using namespace gaplab;

TEST_CASE("exponential growth") {
  auto f = [](double, const ode::Vec<1>& y) -> ode::Vec<1> { return {y[0]}; };
  const auto tr = ode::integrate<1>(f, 0.0, 1.0, {1.0}, 1e-10);
  CHECK(std::abs(tr(1.0)[0] - std::exp(1.0)) <= 1e-9);
  // Dense output between steps.
  for (double x : {0.1, 0.37, 0.5, 0.93}) CHECK(std::abs(tr(x)[0] - std::exp(x)) <= 1e-9);
}

TEST_CASE("rotation") {
  auto f = [](double, const ode::Vec<2>& y) -> ode::Vec<2> { return {y[1], -y[0]}; };
  const auto tr = ode::integrate<2>(f, 0.0, std::numbers::pi, {1.0, 0.0}, 1e-10);
  const auto y = tr(std::numbers::pi);
  CHECK(std::abs(y[0] + 1.0) <= 1e-8);
  CHECK(std::abs(y[1]) <= 1e-8);
}

TEST_CASE("Gaussian growth y' = x y") {
  auto f = [](double x, const ode::Vec<1>& y) -> ode::Vec<1> { return {x * y[0]}; };
  const auto tr = ode::integrate<1>(f, 0.0, 3.0, {1.0}, 1e-10);
  CHECK(std::abs(tr(3.0)[0] / std::exp(4.5) - 1.0) <= 1e-8);
}

TEST_CASE("backward integration") {
  auto f = [](double, const ode::Vec<1>& y) -> ode::Vec<1> { return {y[0]}; };
  const auto tr = ode::integrate<1>(f, 1.0, -1.0, {1.0}, 1e-10);
  CHECK(std::abs(tr(-1.0)[0] - std::exp(-2.0)) <= 1e-10);
  CHECK(std::abs(tr(0.0)[0] - std::exp(-1.0)) <= 1e-10);
}

TEST_CASE("step collapse raises a stiffness error with its location") {
  // y' = y^2 blows up at x = 1.
  auto f = [](double, const ode::Vec<1>& y) -> ode::Vec<1> { return {y[0] * y[0]}; };
  try {
    ode::integrate<1>(f, 0.0, 2.0, {1.0}, 1e-10);
    FAIL("expected StiffnessError");
  } catch (const StiffnessError& e) {
    CHECK(e.where() == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("tolerance must be positive") {
  auto f = [](double, const ode::Vec<1>& y) -> ode::Vec<1> { return y; };
  CHECK_THROWS_AS(ode::integrate<1>(f, 0.0, 1.0, {1.0}, 0.0), PreconditionError);
}

TEST_CASE("error decreases with tolerance") {
  auto f = [](double, const ode::Vec<2>& y) -> ode::Vec<2> { return {y[1], -y[0]}; };
  double prev = 1.0;
  for (double tol : {1e-4, 1e-7, 1e-10}) {
    const auto tr = ode::integrate<2>(f, 0.0, 10.0, {0.0, 1.0}, tol);
    const double err = std::abs(tr(10.0)[0] - std::sin(10.0));
    CHECK(err < prev);
    prev = err;
  }
}
