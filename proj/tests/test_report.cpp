#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gaplab/errors.hpp"
#include "gaplab/report.hpp"

using namespace gaplab;

namespace {

VerificationRecord sample_record(int k) {
  VerificationRecord r;
  r.claim_id = "sample";
  r.inputs = {{"p", 2.0}, {"potential", std::string("abs:") + std::to_string(k)}};
  r.quantities = {{"gap", 0.1 * k + 1.0 / 3.0}, {"margin", -1e-300}};
  r.passed = k % 2 == 0;
  r.tolerance = 1e-8;
  return r;
}

Report sample_report() {
  Report rep;
  rep.config = {{"command", "test"}, {"p", 2.0}};
  rep.seed = 42;
  for (int k = 0; k < 3; ++k) rep.records.push_back(record_json(sample_record(k)));
  return rep;
}

}  // namespace

TEST_CASE("JSON report schema") {
  GapReport g;
  g.lambda0 = 0.1;
  g.lambda1 = 2.5;
  g.gap = 2.4;
  g.diagnostics.iterations0 = 40;
  Report rep;
  rep.records.push_back(record_json(g, Json{{"p", 2.0}}));
  std::ostringstream os;
  write_report_json(os, rep);
  const Json doc = Json::parse(os.str());
  REQUIRE(doc.contains("meta"));
  REQUIRE(doc.contains("records"));
  CHECK(doc["meta"]["version"] == kVersion);
  CHECK(doc["meta"]["seed"].is_null());
  const auto& r = doc["records"][0];
  CHECK(r["lambda0"] == 0.1);
  CHECK(r["lambda1"] == 2.5);
  CHECK(r["gap"] == 2.4);
  CHECK(r["diagnostics"]["iterations0"] == 40);
  CHECK(r["kind"] == "gap");
}

TEST_CASE("reals round-trip at 17 significant digits") {
  std::ostringstream os;
  write_json(os, Json{{"x", 1.0 / 3.0}, {"nan", std::nan("")}, {"inf", INFINITY}});
  CHECK(os.str().find("0.33333333333333331") != std::string::npos);
  const Json back = Json::parse(os.str());
  CHECK(back["x"].get<double>() == 1.0 / 3.0);
  CHECK(back["nan"].is_null());
  CHECK(back["inf"].is_null());
}

TEST_CASE("CSV rows and header") {
  std::ostringstream os;
  write_report_csv(os, sample_report());
  std::istringstream in(os.str());
  std::string line;
  int lines = 0;
  std::string header;
  while (std::getline(in, line)) {
    if (lines == 0) header = line;
    ++lines;
  }
  CHECK(lines == 4);
  CHECK(header == "claim_id,inputs.p,inputs.potential,quantities.gap,quantities.margin,passed,tolerance");
  CHECK(os.str().find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("reports are byte deterministic") {
  for (auto fmt : {ReportFormat::json, ReportFormat::csv}) {
    std::ostringstream a, b;
    emit_report(sample_report(), fmt, "-", a);
    emit_report(sample_report(), fmt, "-", b);
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("report files") {
  const std::string path = "test_report_out.json";
  std::ostringstream console;
  emit_report(sample_report(), ReportFormat::json, path, console);
  CHECK(console.str().empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(Json::parse(buf.str())["meta"]["seed"] == 42);
  std::remove(path.c_str());
  CHECK_THROWS_AS(emit_report(sample_report(), ReportFormat::json, "/nonexistent/dir/x.json", console),
                  Error);
}
