#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaplab/eigensolver.hpp"
#include "gaplab/spectral.hpp"

namespace gaplab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

enum class ReportFormat { json, csv };

struct Report {
  Json config = Json::object();
  std::optional<std::uint64_t> seed;
  std::vector<Json> records;
};

Json record_json(const VerificationRecord& rec);
/// `inputs` describes the problem the gap belongs to.
Json record_json(const GapReport& gap, const Json& inputs);

/// Writes JSON with every real at 17 significant digits (non-finite as null).
void write_json(std::ostream& os, const Json& value);
/// {meta: {version, config, seed}, records: [...]}.
void write_report_json(std::ostream& os, const Report& report);
/// Header row plus one row per record; nested keys are dotted, arrays joined by ';'.
void write_report_csv(std::ostream& os, const Report& report);

/// Writes to `path`, or to `console` for "-". Throws Error on I/O failure.
void emit_report(const Report& report, ReportFormat format, const std::string& path,
                 std::ostream& console);

}  // namespace gaplab
