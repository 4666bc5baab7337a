// Copyright 2026 The pairvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PAIRVOTE_REPORT_HPP_
#define PAIRVOTE_REPORT_HPP_

#include "pairvote/experiment.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pairvote {

enum class ReportFormat { table, csv, json };

std::string_view to_string(ReportFormat format);
ReportFormat parse_report_format(std::string_view text);

/// One CSV row: scope, name, value.
struct Metric {
  std::string scope;
  std::string name;
  std::variant<double, std::string> value;

  bool operator==(const Metric&) const = default;
};

/// Every metric of a report in emission order.
std::vector<Metric> flatten_metrics(const ExperimentReport& report);

/// Reads the CSV form back. Values that parse completely as numbers become
/// doubles, everything else stays text.
std::vector<Metric> parse_report_csv(std::string_view text, const std::string& source = "<report>");

nlohmann::json to_json(const ExperimentReport& report);

std::string format_report(const ExperimentReport& report, ReportFormat format);

/// Writes the report, creating parent directories.
void emit_report(const ExperimentReport& report, ReportFormat format, const std::filesystem::path& path);

/// Text block of the common-feature counts, one line per pair.
std::string format_overlap(const ExperimentReport& report);

}  // namespace pairvote

#endif  // PAIRVOTE_REPORT_HPP_
