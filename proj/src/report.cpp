#include "gaplab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

#include "gaplab/errors.hpp"

namespace gaplab {

namespace {

std::string real_text(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_value(std::ostream& os, const Json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        write_value(os, it.value(), depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_value(os, v[i], depth + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float:
      os << real_text(v.get<double>());
      return;
    default:
      os << v.dump();
  }
}

std::string csv_cell(const Json& v) {
  switch (v.type()) {
    case Json::value_t::null:
      return "";
    case Json::value_t::number_float:
      return std::isfinite(v.get<double>()) ? real_text(v.get<double>()) : "";
    case Json::value_t::string: {
      const auto s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) {
        if (c == '"') q += '"';
        q += c;
      }
      return q + "\"";
    }
    case Json::value_t::array: {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += csv_cell(v[i]);
      }
      return out;
    }
    default:
      return v.dump();
  }
}

void flatten(const Json& v, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  out.emplace_back(prefix, csv_cell(v));
}

}  // namespace

Json record_json(const VerificationRecord& rec) {
  Json j;
  j["claim_id"] = rec.claim_id;
  Json inputs = Json::object();
  for (const auto& [k, v] : rec.inputs)
    std::visit([&](const auto& x) { inputs[k] = x; }, v);
  j["inputs"] = inputs;
  Json q = Json::object();
  for (const auto& [k, v] : rec.quantities) q[k] = v;
  j["quantities"] = q;
  j["passed"] = rec.passed;
  j["tolerance"] = rec.tolerance;
  return j;
}

Json record_json(const GapReport& gap, const Json& inputs) {
  Json j;
  j["kind"] = "gap";
  j["inputs"] = inputs;
  j["lambda0"] = gap.lambda0;
  j["lambda1"] = gap.lambda1;
  j["gap"] = gap.gap;
  j["diagnostics"] = {{"bracket_width0", gap.diagnostics.bracket_width0},
                      {"bracket_width1", gap.diagnostics.bracket_width1},
                      {"iterations0", gap.diagnostics.iterations0},
                      {"iterations1", gap.diagnostics.iterations1}};
  return j;
}

void write_json(std::ostream& os, const Json& value) {
  write_value(os, value, 0);
  os << "\n";
}

void write_report_json(std::ostream& os, const Report& report) {
  Json doc;
  doc["meta"] = {{"version", kVersion},
                 {"config", report.config},
                 {"seed", report.seed ? Json(*report.seed) : Json(nullptr)}};
  doc["records"] = Json::array();
  for (const auto& r : report.records) doc["records"].push_back(r);
  write_json(os, doc);
}

void write_report_csv(std::ostream& os, const Report& report) {
  std::vector<std::vector<std::pair<std::string, std::string>>> rows;
  std::vector<std::string> header;
  for (const auto& r : report.records) {
    rows.emplace_back();
    flatten(r, "", rows.back());
    for (const auto& [k, _] : rows.back())
      if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
  }
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) os << ',';
      for (const auto& [k, v] : row)
        if (k == header[i]) {
          os << v;
          break;
        }
    }
    os << "\n";
  }
}

void emit_report(const Report& report, ReportFormat format, const std::string& path,
                 std::ostream& console) {
  std::ostringstream buf;
  if (format == ReportFormat::json)
    write_report_json(buf, report);
  else
    write_report_csv(buf, report);
  if (path.empty() || path == "-") {
    console << buf.str() << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open report file: " + path);
  out << buf.str();
  out.close();
  if (!out) throw Error("failed writing report file: " + path);
}

}  // namespace gaplab
