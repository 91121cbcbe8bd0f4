#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gaplab/eigensolver.hpp"
#include "gaplab/errors.hpp"
#include "gaplab/quadrature.hpp"
#include "gaplab/spectral.hpp"

using namespace gaplab;
using std::numbers::pi;

namespace {

Problem make(double p, const char* spec, BoundaryCondition bc) {
  return Problem(p, parse_potential(spec), bc);
}

struct Pair {
  Eigenpair e0, e1;
};

Pair pair_of(const Problem& pr) { return {solve_eigenpair(pr, 0), solve_eigenpair(pr, 1)}; }

}  // namespace

TEST_CASE("rayleigh quotient of explicit functions") {
  const int n = 4097;
  const auto x = uniform_grid(n);
  std::vector<double> u(n, std::sqrt(0.5)), du(n, 0.0);
  CHECK(std::abs(rayleigh_quotient(x, u, du, make(2, "const:0", BoundaryCondition::neumann()))) <=
        1e-14);
  for (int k = 0; k < n; ++k) {
    u[k] = std::sin(pi * (x[k] + 1) / 2);
    du[k] = pi / 2 * std::cos(pi * (x[k] + 1) / 2);
  }
  CHECK(rayleigh_quotient(x, u, du, make(2, "const:0", BoundaryCondition::dirichlet())) ==
        doctest::Approx(pi * pi / 4).epsilon(1e-10));
  std::vector<double> z(n, 0.0);
  CHECK_THROWS_AS(rayleigh_quotient(x, z, z, make(2, "const:0", BoundaryCondition::neumann())),
                  PreconditionError);

  const auto pr = make(3, "abs:5", BoundaryCondition::robin(1.0));
  const auto e = solve_eigenpair(pr, 0);
  CHECK(std::abs(rayleigh_quotient(e, pr) - e.lambda) <= 1e-6);
}

TEST_CASE("Hellmann-Feynman derivatives") {
  const auto one = Potential::constant(1.0);
  const auto xv = Potential::linear(1.0);
  for (double p : {1.5, 2.0, 3.0}) {
    const auto pr = make(p, "poly:0,1,3", BoundaryCondition::robin(0.5));
    for (int i : {0, 1}) CHECK(hf_derivative(pr, one, i) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(gap_derivative(pr, Potential::constant(2.5))) <= 1e-8);
  }
  CHECK(std::abs(hf_derivative(make(2, "const:0", BoundaryCondition::neumann()), xv, 0)) <= 1e-8);

  const double eps = 1e-4;
  const auto robin = make(2, "const:0", BoundaryCondition::robin(1.0));
  const double fd = (solve_eigenvalue(robin.with_potential(Potential::linear(eps)), 0,
                                      SolverOptions{1e-13, 0, kDefaultGridSize})
                         .lambda -
                     solve_eigenvalue(robin.with_potential(Potential::linear(-eps)), 0,
                                      SolverOptions{1e-13, 0, kDefaultGridSize})
                         .lambda) /
                    (2 * eps);
  CHECK(std::abs(hf_derivative(robin, xv, 0) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
}

TEST_CASE("gap derivative along 5x^2 matches the closed form and finite differences") {
  const auto neu = make(2, "const:0", BoundaryCondition::neumann());
  const auto vdot = Potential::polynomial({0, 0, 5});
  // u0^2 = 1/2, u1^2 = sin^2(pi x/2): int x^2 sin^2(pi x / 2) = 1/3 + 2/pi^2.
  const double exact = 5 * ((1.0 / 3 + 2 / (pi * pi)) - 1.0 / 3);
  const double g = gap_derivative(neu, vdot);
  CHECK(g == doctest::Approx(exact).epsilon(1e-8));
  CHECK(g == doctest::Approx(hf_derivative(neu, vdot, 1) - hf_derivative(neu, vdot, 0)));
  const double eps = 1e-4;
  SolverOptions tight{1e-13, 0, kDefaultGridSize};
  const double fd = (fundamental_gap(neu.with_potential(vdot.scaled(eps)), tight).gap -
                     fundamental_gap(neu.with_potential(vdot.scaled(-eps)), tight).gap) /
                    (2 * eps);
  CHECK(std::abs(g - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
}

TEST_CASE("Hellmann-Feynman against finite differences on random problems") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  const double ps[] = {1.5, 2.0, 3.0};
  const double alphas[] = {-0.5, 0.0, 1.0};
  const double eps = 1e-4;
  for (int k = 0; k < 6; ++k) {
    const double p = ps[k % 3];
    const std::vector<double> base{c(rng), c(rng), c(rng)};
    const std::vector<double> dir{c(rng), c(rng), c(rng)};
    const auto bc = BoundaryCondition::robin(alphas[(k / 3 + k) % 3]);
    const Problem pr(p, Potential::polynomial(base), bc);
    auto shifted = [&](double t) {
      std::vector<double> q(3);
      for (int j = 0; j < 3; ++j) q[j] = base[j] + t * dir[j];
      return pr.with_potential(Potential::polynomial(q));
    };
    SolverOptions tight{p == 2.0 ? 1e-13 : 1e-12, 0, kDefaultGridSize};
    const int i = k % 2;
    const double hf = hf_derivative(pr, Potential::polynomial(dir), i, tight);
    const double fd = (solve_eigenvalue(shifted(eps), i, tight).lambda -
                       solve_eigenvalue(shifted(-eps), i, tight).lambda) /
                      (2 * eps);
    CAPTURE(k);
    CHECK(std::abs(hf - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("sign change profile") {
  {
    const auto [e0, e1] = pair_of(make(2, "const:0", BoundaryCondition::neumann()));
    const auto s = sign_change_profile(e0, e1, 2);
    CHECK(s.xi_minus == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(s.xi_plus == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(s.interior_zero_count == 2);
    CHECK(std::abs(s.mean) <= 1e-7);
    CHECK(s.pattern_violation <= 1e-7);
  }
  {
    // u0 = cos(pi x/2), u1 = sin(pi x): psi = 0 where sin(pi x/2) = +-1/2.
    const auto [e0, e1] = pair_of(make(2, "const:0", BoundaryCondition::dirichlet()));
    const auto s = sign_change_profile(e0, e1, 2);
    CHECK(std::abs(s.psi.front()) <= 1e-12);
    CHECK(std::abs(s.psi.back()) <= 1e-12);
    CHECK(s.xi_minus == doctest::Approx(-1.0 / 3).epsilon(1e-8));
    CHECK(s.xi_plus == doctest::Approx(1.0 / 3).epsilon(1e-8));
  }
  for (double p : {1.5, 2.0, 3.0}) {
    const auto [e0, e1] = pair_of(make(p, "poly:1,0,4,0,-2", BoundaryCondition::robin(0.7)));
    const auto s = sign_change_profile(e0, e1, p);
    CHECK(s.xi_minus == doctest::Approx(-s.xi_plus).epsilon(1e-6));
    CHECK(std::abs(s.mean) <= 1e-7);
    CHECK(s.pattern_violation <= 1e-7);
  }
  {
    // Strong tilt: only one sign change; the other end is assigned.
    const auto [e0, e1] = pair_of(make(2, "linear:10", BoundaryCondition::robin(-0.5)));
    const auto s = sign_change_profile(e0, e1, 2);
    CHECK(s.interior_zero_count >= 1);
    CHECK(s.xi_minus < s.xi_plus);
    CHECK(s.pattern_violation <= 1e-7);
  }
  {
    const auto pr = make(2, "const:0", BoundaryCondition::neumann());
    const auto e0 = solve_eigenpair(pr, 0);
    CHECK_THROWS_AS(sign_change_profile(e0, e0, 2), StructureViolation);
  }
}

TEST_CASE("ratio monotonicity") {
  {
    const auto [e0, e1] = pair_of(make(2, "const:0", BoundaryCondition::neumann()));
    const auto r = ratio_monotonicity(e0, e1);
    CHECK(r.max_positive_slope <= 1e-8);
    CHECK(r.riccati_gap_min >= -1e-8);
    // The ratio really is -sqrt(2) sin(pi x / 2).
    const std::size_t k = e0.x.size() / 4;
    CHECK(e1.u[k] / e0.u[k] == doctest::Approx(-std::sqrt(2.0) * std::sin(pi * e0.x[k] / 2)));
  }
  {
    const auto [e0, e1] = pair_of(make(2, "linear:3", BoundaryCondition::robin(1.0)));
    CHECK(ratio_monotonicity(e0, e1).max_positive_slope <= 1e-6);
  }
  {
    const auto [e0, e1] = pair_of(make(3, "abs:5", BoundaryCondition::neumann()));
    const auto r = ratio_monotonicity(e0, e1);
    CHECK(r.max_positive_slope <= 1e-5);
    CHECK(r.riccati_gap_min >= -1e-5);
  }
  {
    const auto [e0, e1] = pair_of(make(2, "poly:0,1,2", BoundaryCondition::dirichlet()));
    CHECK(ratio_monotonicity(e0, e1).max_positive_slope <= 1e-6);
  }
}

TEST_CASE("ground state ratio against the zero potential is decreasing") {
  const auto bc = BoundaryCondition::robin(0.5);
  const auto z = solve_eigenpair(Problem(2, Potential::constant(0), bc), 0);
  for (double a : {0.5, 1.0, 5.0, 20.0}) {
    const auto e = solve_eigenpair(Problem(2, Potential::linear(a), bc), 0);
    double worst = -1e300;
    for (std::size_t k = 0; k + 1 < e.x.size(); ++k)
      worst = std::max(worst, e.u[k + 1] / z.u[k + 1] - e.u[k] / z.u[k]);
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("linear potential identities") {
  {
    const auto [e0, e1] = pair_of(make(2, "const:0", BoundaryCondition::neumann()));
    CHECK(std::abs(boundary_identity_linear(e1, 0.0, 0.0).res1) <= 1e-8);
    CHECK(std::abs(boundary_gap_quantity(e0, e1)) <= 1e-8);
  }
  for (double alpha : {-0.5, 0.0, 1.0}) {
    const auto [e0, e1] = pair_of(make(2, "const:0", BoundaryCondition::robin(alpha)));
    CHECK(std::abs(boundary_gap_quantity(e0, e1)) <= 1e-8);
  }
  const auto [e0, e1] = pair_of(make(2, "linear:2", BoundaryCondition::robin(1.0)));
  CHECK(std::abs(boundary_identity_linear(e0, 2.0, 1.0).res1) <= 1e-6);
  CHECK(std::abs(boundary_identity_linear(e1, 2.0, 1.0).res2) <= 1e-5);
  CHECK(std::abs(gap_moment_residuals(e0, e1, 2.0, 1.0).per_eigenfunction) <= 1e-4);

  const auto [f0, f1] = pair_of(make(2, "linear:1", BoundaryCondition::neumann()));
  const auto t = boundary_terms(f0, f1, 1.0, 0.0);
  CHECK(t.gap_quantity > 0.0);
  CHECK(t.ground_asymmetry < 0.0);
  CHECK(t.second_level > 0.0);
  CHECK(t.gap_quantity == doctest::Approx(boundary_gap_quantity(f0, f1)));
}

TEST_CASE("eigenvalues of a x move by less than a") {
  for (double alpha : {-0.5, 0.0, 1.0}) {
    const auto bc = BoundaryCondition::robin(alpha);
    const auto g0 = fundamental_gap(Problem(2, Potential::constant(0), bc));
    for (double a : {0.5, 1.0, 5.0, 20.0}) {
      const auto g = fundamental_gap(Problem(2, Potential::linear(a), bc));
      CHECK(std::abs(g.lambda0 - g0.lambda0) < a);
      CHECK(std::abs(g.lambda1 - g0.lambda1) < a);
    }
  }
}

TEST_CASE("gap moment vanishes for even potentials") {
  const auto [e0, e1] = pair_of(make(2, "poly:0,0,3", BoundaryCondition::robin(0.3)));
  CHECK(std::abs(gap_moment(e0, e1)) <= 1e-9);
  const auto d = gap_density(e0, e1);
  CHECK(std::abs(simpson(d, e0.h())) <= 1e-9);
}

TEST_CASE("verification record lookup") {
  VerificationRecord r;
  r.quantities = {{"gap", 1.5}};
  CHECK(r.quantity("gap") == 1.5);
  CHECK_THROWS_AS(r.quantity("nope"), std::out_of_range);
}
