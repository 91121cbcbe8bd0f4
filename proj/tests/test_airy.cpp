#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/airy.hpp>

#include "gaplab/airy.hpp"
#include "gaplab/errors.hpp"
#include "oracles.hpp"

using namespace gaplab;

TEST_CASE("Airy values at the origin") {
  const auto v = airy_ai(0.0);
  CHECK(v.ai == doctest::Approx(0.3550280538878172).epsilon(1e-12));
  CHECK(v.ai_prime == doctest::Approx(-0.2588194037928068).epsilon(1e-12));
}

TEST_CASE("Airy values against boost") {
  for (double x = -20.0; x <= 5.0; x += 0.73) {
    const auto v = airy_ai(x);
    CAPTURE(x);
    CHECK(std::abs(v.ai - boost::math::airy_ai(x)) <= 1e-9);
    CHECK(std::abs(v.ai_prime - boost::math::airy_ai_prime(x)) <= 1e-8);
  }
  CHECK(std::abs(airy_ai(-2.338107410459767).ai) <= 1e-8);
  CHECK(std::abs(airy_ai(-1.018792971647471).ai_prime) <= 1e-8);
  CHECK_THROWS_AS(airy_ai(-20.5), DomainError);
  CHECK_THROWS_AS(airy_ai(5.1), DomainError);
}

TEST_CASE("Airy ODE residual") {
  double worst = 0.0;
  for (double x = -10.0; x <= 2.0; x += 0.01) worst = std::max(worst, std::abs(airy_ode_residual(x)));
  CHECK(worst <= 1e-9);
}

TEST_CASE("Airy zeros") {
  CHECK(airy_zero(AiryZeroKind::ai, 0) == doctest::Approx(2.3381074).epsilon(1e-7));
  CHECK(airy_zero(AiryZeroKind::ai_prime, 0) == doctest::Approx(1.0187930).epsilon(1e-7));
  CHECK(airy_zero(AiryZeroKind::ai_prime, 1) == doctest::Approx(3.2481976).epsilon(1e-7));
  for (int k = 0; k <= 4; ++k) {
    CHECK(std::abs(airy_zero(AiryZeroKind::ai, k) - oracle::ai_zero(k)) <= 1e-9);
    CHECK(std::abs(airy_zero(AiryZeroKind::ai_prime, k) - oracle::ai_prime_zero(k)) <= 1e-9);
  }
  // Strict interlacing: mu'_0 < mu_0 < mu'_1 < mu_1 < ...
  for (int k = 0; k <= 4; ++k) {
    CHECK(airy_zero(AiryZeroKind::ai_prime, k) < airy_zero(AiryZeroKind::ai, k));
    if (k < 4) CHECK(airy_zero(AiryZeroKind::ai, k) < airy_zero(AiryZeroKind::ai_prime, k + 1));
  }
  CHECK_THROWS_AS(airy_zero(AiryZeroKind::ai, 5), DomainError);
  CHECK_THROWS_AS(airy_zero(AiryZeroKind::ai, -1), DomainError);
}

TEST_CASE("asymptotic gap model") {
  const auto n = asymptotic_gap(1.0, BoundaryCondition::neumann());
  CHECK(n.lambda_hat1 - n.lambda_hat0 == doctest::Approx(2.2294046).epsilon(1e-7));
  const auto r = asymptotic_gap(1000.0, BoundaryCondition::robin(1.0));
  CHECK(r.predicted_gap == doctest::Approx(222.94046).epsilon(1e-7));
  const auto d = asymptotic_gap(1.0, BoundaryCondition::dirichlet());
  CHECK(d.predicted_gap == doctest::Approx(1.7498420).epsilon(1e-7));
  CHECK_THROWS_AS(asymptotic_gap(0.0, BoundaryCondition::neumann()), PreconditionError);
}
