#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gaplab/cli.hpp"
#include "gaplab/errors.hpp"
#include "gaplab/report.hpp"

using namespace gaplab;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("slope grids") {
  CHECK(parse_slope_grid("-1:1:0.5") == std::vector<double>{-1, -0.5, 0, 0.5, 1});
  CHECK(parse_slope_grid("0:1:0.3").size() == 4);
  CHECK(parse_slope_grid("0:0.95:0.3").size() == 4);
  CHECK(parse_slope_grid("3:1:-1") == std::vector<double>{3, 2, 1});
  CHECK(parse_slope_grid("1,2.5,-3") == std::vector<double>{1, 2.5, -3});
  CHECK_THROWS_AS(parse_slope_grid("0:1:0"), ParseError);
  CHECK_THROWS_AS(parse_slope_grid("0:1:-1"), ParseError);
  CHECK_THROWS_AS(parse_slope_grid("0:1"), ParseError);
  CHECK_THROWS_AS(parse_slope_grid("1,x"), ParseError);
  CHECK(parse_boundary("dirichlet").is_dirichlet());
  CHECK(parse_boundary("-0.5").alpha() == -0.5);
  CHECK_THROWS_AS(parse_boundary("robin"), ParseError);
}

TEST_CASE("gap command") {
  const auto r = run({"gap", "--p", "2", "--alpha", "dirichlet", "--potential", "const:0"});
  CHECK(r.code == kExitOk);
  const Json doc = Json::parse(r.out);
  CHECK(doc["records"][0]["gap"].get<double>() ==
        doctest::Approx(3 * std::numbers::pi * std::numbers::pi / 4).epsilon(1e-10));
  CHECK(run({"gap", "--p", "2", "--alpha", "dirichlet", "--potential", "const:0"}).out == r.out);
}

TEST_CASE("solve command") {
  const auto r = run({"solve", "--p", "3", "--alpha", "1", "--potential", "abs:5", "--index", "2",
                      "--samples", "--n", "257"});
  CHECK(r.code == kExitOk);
  const Json rec = Json::parse(r.out)["records"][0];
  CHECK(rec["interior_zeros"].size() == 2);
  CHECK(rec["x"].size() == 257);
  CHECK(std::abs(rec["rayleigh_quotient"].get<double>() - rec["lambda"].get<double>()) <= 1e-5);
}

TEST_CASE("verification commands") {
  auto r = run({"verify-single-well", "--p", "2", "--alpha", "1", "--seed", "7", "--count", "25"});
  CHECK(r.code == kExitOk);
  Json doc = Json::parse(r.out);
  CHECK(doc["records"].size() == 25);
  CHECK(doc["meta"]["seed"] == 7);
  for (const auto& rec : doc["records"]) CHECK(rec["passed"].get<bool>());

  r = run({"verify-convex", "--p", "2", "--alpha", "0", "--seed", "3", "--count", "5"});
  CHECK(r.code == kExitOk);

  r = run({"verify-linear", "--alpha", "-0.5", "--a-grid", "-5:5:0.5"});
  CHECK(r.code == kExitOk);
  doc = Json::parse(r.out);
  CHECK(doc["records"][0]["quantities"]["min_location"] == 0.0);

  r = run({"critical-a", "--alpha", "0"});
  CHECK(r.code == kExitOk);
  CHECK(std::abs(Json::parse(r.out)["records"][0]["quantities"]["a_star"].get<double>()) <= 1e-4);
}

TEST_CASE("asymptotics and sweep commands") {
  auto r = run({"asymptotics", "--alpha", "1", "--a-grid", "100,1000", "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);

  r = run({"sweep", "--p", "1.5", "--alpha", "0", "--potential", "abs:1", "--a-grid", "0:2:1"});
  CHECK(r.code == kExitOk);
  const Json doc = Json::parse(r.out);
  CHECK(doc["records"].size() == 3);
  CHECK(doc["records"][2]["inputs"]["scale"] == 2.0);
}

TEST_CASE("failed verification exits 2") {
  // Out of the theorem's range the constant potential is not the minimiser.
  const auto r = run({"verify-linear", "--alpha", "-0.5", "--a-grid", "1,2"});
  CHECK(r.code == kExitOk);
  const auto bad = run({"asymptotics", "--alpha", "0", "--a-grid", "10,5"});
  CHECK(bad.code == kExitFailed);
}

TEST_CASE("usage and solver errors exit 1") {
  CHECK(run({}).code == kExitError);
  CHECK(run({"bogus"}).code == kExitError);
  CHECK(run({"gap", "--nope"}).code == kExitError);
  CHECK(run({"gap", "--p", "1"}).code == kExitError);
  CHECK(run({"gap", "--potential", "wat:1"}).code == kExitError);
  CHECK(run({"gap", "--alpha", "soft"}).code == kExitError);
  CHECK(run({"gap", "--format", "xml"}).code == kExitError);
  CHECK(run({"verify-linear", "--alpha", "-0.6"}).code == kExitError);
  CHECK(run({"verify-single-well", "--potential", "linear:1"}).code == kExitError);
  CHECK(run({"solve", "--index", "9"}).code == kExitError);
  const auto r = run({"gap", "--output", "/nonexistent/dir/r.json"});
  CHECK(r.code == kExitError);
  CHECK(!r.err.empty());
}
