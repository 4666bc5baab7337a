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

#include "pairvote/report.hpp"

#include "pairvote/dataset_io.hpp"
#include "pairvote/error.hpp"

#include <fmt/core.h>
#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>

namespace pairvote {

using nlohmann::json;

std::string_view to_string(ReportFormat format) {
  switch (format) {
    case ReportFormat::table:
      return "table";
    case ReportFormat::csv:
      return "csv";
    case ReportFormat::json:
      return "json";
  }
  return "table";
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "table") {
    return ReportFormat::table;
  }
  if (text == "csv") {
    return ReportFormat::csv;
  }
  if (text == "json") {
    return ReportFormat::json;
  }
  throw ExperimentError(fmt::format("unknown report format '{}' (expected table, csv or json)", text));
}

namespace {

std::string classifier_title(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::logistic:
      return "Logistic Regression";
    case ClassifierKind::svm:
      return "SVM";
    case ClassifierKind::nn:
      return "Neural Network";
  }
  return "";
}

std::string method_title(Method method) {
  return method == Method::bi_voting ? "Bi-classification and voting" : "Multi-classification";
}

std::string number(double value) { return fmt::format("{:.17g}", value); }

class MetricSink {
 public:
  void add(const std::string& scope, const std::string& name, double value) { out.push_back({scope, name, value}); }
  void add_count(const std::string& scope, const std::string& name, std::size_t value) {
    out.push_back({scope, name, static_cast<double>(value)});
  }
  void add_text(const std::string& scope, const std::string& name, std::string value) {
    out.push_back({scope, name, std::move(value)});
  }

  std::vector<Metric> out;
};

}  // namespace

std::vector<Metric> flatten_metrics(const ExperimentReport& report) {
  MetricSink sink;
  sink.add_count("meta", "schema_version", kReportSchemaVersion);
  sink.add_text("meta", "config_fingerprint", report.config_fingerprint);
  sink.add_text("meta", "master_seed", std::to_string(report.master_seed));
  sink.add_count("meta", "n_folds", report.n_folds);
  for (std::size_t k = 0; k < report.universe.size(); ++k) {
    sink.add_text("meta", fmt::format("label/{}", k), report.universe.label(k));
  }
  for (const auto& result : report.results) {
    const auto scope = result.scope();
    sink.add(scope, "mean_accuracy", result.mean_accuracy);
    sink.add(scope, "pooled_accuracy", result.pooled_accuracy);
    for (const auto& fold : result.folds) {
      const auto prefix = fmt::format("fold/{}/", fold.fold);
      sink.add(scope, prefix + "accuracy", fold.accuracy);
      sink.add_count(scope, prefix + "correct", fold.correct);
      sink.add_count(scope, prefix + "test_rows", fold.test_rows);
      sink.add_count(scope, prefix + "competition_cases", fold.competition_cases);
    }
    for (const auto& r : result.recall) {
      if (r.recall) {
        sink.add(scope, "recall/" + r.label, *r.recall);
      } else {
        sink.add_text(scope, "recall/" + r.label, "undefined");
      }
      sink.add_count(scope, "recall/" + r.label + "/flagged", r.flagged ? 1 : 0);
    }
    for (std::size_t t = 0; t < result.confusion.size(); ++t) {
      for (std::size_t p = 0; p < result.confusion[t].size(); ++p) {
        sink.add_count(scope, fmt::format("confusion/{}/{}", report.universe.label(t), report.universe.label(p)),
                       result.confusion[t][p]);
      }
    }
  }
  for (const auto& row : report.ttests) {
    const auto scope = fmt::format("ttest/{}", to_string(row.classifier));
    sink.add_text(scope, "status", std::string(to_string(row.result.status)));
    sink.add_count(scope, "n", row.result.n);
    if (row.result.status == TTestStatus::unavailable) {
      continue;
    }
    sink.add(scope, "mean_difference", row.result.mean_difference);
    sink.add(scope, "sd_difference", row.result.sd_difference);
    if (row.result.status == TTestStatus::ok) {
      sink.add(scope, "t", row.result.t);
    }
    sink.add(scope, "df", row.result.df);
    sink.add(scope, "p_value", row.result.p_value);
    sink.add_count(scope, "significant", row.result.significant ? 1 : 0);
  }
  for (const auto& series : report.overlap) {
    const auto scope = fmt::format("overlap/{}", to_string(series.classifier));
    for (std::size_t i = 0; i < series.pairs.size(); ++i) {
      for (std::size_t k = 0; k < series.counts[i].size(); ++k) {
        sink.add_count(scope, fmt::format("{}/fold/{}", series.pairs[i], k), series.counts[i][k]);
      }
      sink.add(scope, series.pairs[i] + "/mean", series.mean[i]);
    }
  }
  for (const auto& audit : report.audits) {
    const auto scope = fmt::format("audit/{}/fold/{}", audit.run, audit.fold);
    sink.add_count(scope, "datasets_checked", audit.datasets_checked);
    sink.add_count(scope, "rows_checked", audit.rows_checked);
    sink.add_count(scope, "violations", audit.violations);
  }
  return std::move(sink.out);
}

std::vector<Metric> parse_report_csv(std::string_view text, const std::string& source) {
  const auto records = parse_csv(text, source);
  if (records.empty() || records.front().fields != std::vector<std::string>{"scope", "name", "value"}) {
    throw ParseError(source, records.empty() ? 0 : records.front().line, "expected header scope,name,value");
  }
  std::vector<Metric> out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& fields = records[i].fields;
    if (fields.size() != 3) {
      throw ParseError(source, records[i].line, fmt::format("expected 3 fields, found {}", fields.size()));
    }
    const auto& value = fields[2];
    char* end = nullptr;
    const double parsed = std::strtod(value.c_str(), &end);
    const bool numeric = !value.empty() && end == value.c_str() + value.size() &&
                         value.find_first_not_of("0123456789+-.eEinfa") == std::string::npos;
    if (numeric) {
      out.push_back({fields[0], fields[1], parsed});
    } else {
      out.push_back({fields[0], fields[1], value});
    }
  }
  return out;
}

json to_json(const ExperimentReport& report) {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["config_fingerprint"] = report.config_fingerprint;
  doc["master_seed"] = report.master_seed;
  doc["universe"] = report.universe.labels();
  doc["n_folds"] = report.n_folds;
  json plan = json::array();
  for (const auto& fold : report.plan) {
    plan.push_back({{"train_speakers", fold.train_speakers}, {"test_speakers", fold.test_speakers}});
  }
  doc["plan"] = plan;

  json results = json::array();
  for (const auto& result : report.results) {
    json folds = json::array();
    for (const auto& fold : result.folds) {
      folds.push_back({{"fold", fold.fold},
                       {"test_speakers", fold.test_speakers},
                       {"test_rows", fold.test_rows},
                       {"correct", fold.correct},
                       {"accuracy", fold.accuracy},
                       {"competition_cases", fold.competition_cases}});
    }
    json recall = json::array();
    for (const auto& r : result.recall) {
      recall.push_back({{"label", r.label},
                        {"correct", r.correct},
                        {"total", r.total},
                        {"recall", r.recall ? json(*r.recall) : json(nullptr)},
                        {"flagged", r.flagged}});
    }
    json genomes = json::array();
    for (const auto& fold : result.genomes) {
      json entry = json::object();
      for (const auto& [name, genome] : fold) {
        entry[name] = genome.indices();
      }
      genomes.push_back(entry);
    }
    results.push_back({{"method", std::string(to_string(result.method))},
                       {"path", std::string(to_string(result.path))},
                       {"classifier", std::string(to_string(result.classifier))},
                       {"folds", folds},
                       {"mean_accuracy", result.mean_accuracy},
                       {"pooled_accuracy", result.pooled_accuracy},
                       {"confusion", result.confusion},
                       {"recall", recall},
                       {"genomes", genomes}});
  }
  doc["results"] = results;

  json ttests = json::array();
  for (const auto& row : report.ttests) {
    const auto& r = row.result;
    json entry = {{"classifier", std::string(to_string(row.classifier))},
                  {"status", std::string(to_string(r.status))},
                  {"n", r.n}};
    if (r.status != TTestStatus::unavailable) {
      entry["mean_difference"] = r.mean_difference;
      entry["sd_difference"] = r.sd_difference;
      entry["t"] = r.status == TTestStatus::ok ? json(r.t) : json(nullptr);
      entry["df"] = r.df;
      entry["p_value"] = r.p_value;
      entry["significant"] = r.significant;
    }
    ttests.push_back(entry);
  }
  doc["ttests"] = ttests;

  json overlap = json::array();
  for (const auto& series : report.overlap) {
    json pairs = json::array();
    for (std::size_t i = 0; i < series.pairs.size(); ++i) {
      pairs.push_back({{"pair", series.pairs[i]}, {"counts", series.counts[i]}, {"mean", series.mean[i]}});
    }
    overlap.push_back({{"classifier", std::string(to_string(series.classifier))}, {"pairs", pairs}});
  }
  doc["overlap"] = overlap;

  json audits = json::array();
  for (const auto& audit : report.audits) {
    audits.push_back({{"run", audit.run},
                      {"fold", audit.fold},
                      {"datasets_checked", audit.datasets_checked},
                      {"rows_checked", audit.rows_checked},
                      {"violations", audit.violations}});
  }
  doc["audits"] = audits;
  return doc;
}

std::string format_overlap(const ExperimentReport& report) {
  std::string out;
  for (const auto& series : report.overlap) {
    out += fmt::format("Common features with the global subset ({})\n", classifier_title(series.classifier));
    std::size_t width = 4;
    for (const auto& pair : series.pairs) {
      width = std::max(width, pair.size());
    }
    for (std::size_t i = 0; i < series.pairs.size(); ++i) {
      out += fmt::format("  {:<{}}  mean {:6.2f}  folds {}\n", series.pairs[i], width, series.mean[i],
                         fmt::join(series.counts[i], " "));
    }
  }
  return out;
}

namespace {

std::string format_table(const ExperimentReport& report) {
  std::vector<ClassifierKind> columns;
  std::set<SubspacePath> paths;
  for (const auto& result : report.results) {
    if (std::find(columns.begin(), columns.end(), result.classifier) == columns.end()) {
      columns.push_back(result.classifier);
    }
    paths.insert(result.path);
  }
  std::string out;
  std::vector<std::string> path_names;
  for (const auto p : paths) {
    path_names.emplace_back(to_string(p));
  }
  out += fmt::format("Accuracy (mean over {} folds; path {}; master seed {}; config {}; schema {})\n", report.n_folds,
                     fmt::join(path_names, ", "), report.master_seed, report.config_fingerprint,
                     kReportSchemaVersion);

  constexpr std::size_t kRowWidth = 38;
  std::vector<std::size_t> widths;
  std::string header = fmt::format("{:<{}}", "", kRowWidth);
  for (const auto kind : columns) {
    const auto title = classifier_title(kind);
    widths.push_back(std::max<std::size_t>(title.size(), 8));
    header += fmt::format("  {:>{}}", title, widths.back());
  }
  out += header + "\n";
  const auto row = [&](Method method, bool pooled) {
    std::string line = fmt::format("{:<{}}", method_title(method) + (pooled ? " (pooled)" : ""), kRowWidth);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto* result = report.find(method, columns[c]);
      const auto cell =
          result == nullptr ? std::string("-")
                            : fmt::format("{:.3f}", pooled ? result->pooled_accuracy : result->mean_accuracy);
      line += fmt::format("  {:>{}}", cell, widths[c]);
    }
    return line + "\n";
  };
  for (const auto method : {Method::bi_voting, Method::multiclass}) {
    out += row(method, false);
  }
  out += "\n";
  for (const auto method : {Method::bi_voting, Method::multiclass}) {
    out += row(method, true);
  }

  if (!report.ttests.empty()) {
    out += fmt::format("\nPaired t-test over folds (two-sided, significance at p < {})\n", kSignificanceLevel);
    for (const auto& t : report.ttests) {
      const auto& r = t.result;
      if (r.status == TTestStatus::unavailable) {
        out += fmt::format("  {}: unavailable (n = {})\n", classifier_title(t.classifier), r.n);
      } else if (r.status == TTestStatus::zero_variance) {
        out += fmt::format("  {}: zero variance, mean difference {:+.4f}, not significant\n",
                           classifier_title(t.classifier), r.mean_difference);
      } else {
        out += fmt::format("  {}: mean difference {:+.4f}, t = {:.4f}, df = {:g}, p = {:.4g}{}\n",
                           classifier_title(t.classifier), r.mean_difference, r.t, r.df, r.p_value,
                           r.significant ? ", significant" : "");
      }
    }
  }

  out += "\nPer-fold accuracy\n";
  for (const auto& result : report.results) {
    std::vector<std::string> cells;
    for (const auto& fold : result.folds) {
      cells.push_back(fmt::format("{:.3f}", fold.accuracy));
    }
    out += fmt::format("  {:<36} {}\n", result.scope(), fmt::join(cells, " "));
  }

  out += "\nPer-emotion recall (* computed but not depicted)\n";
  std::string label_header = fmt::format("  {:<36}", "");
  if (!report.results.empty()) {
    for (const auto& r : report.results.front().recall) {
      label_header += fmt::format(" {:>10}", r.flagged ? r.label + "*" : r.label);
    }
  }
  out += label_header + "\n";
  for (const auto& result : report.results) {
    std::string line = fmt::format("  {:<36}", result.scope());
    for (const auto& r : result.recall) {
      line += fmt::format(" {:>10}", r.recall ? fmt::format("{:.3f}", *r.recall) : std::string("undefined"));
    }
    out += line + "\n";
  }

  if (!report.overlap.empty()) {
    out += "\n" + format_overlap(report);
  }
  return out;
}

std::string format_csv(const ExperimentReport& report) {
  std::string out = "scope,name,value\n";
  for (const auto& m : flatten_metrics(report)) {
    const auto value = std::holds_alternative<double>(m.value) ? number(std::get<double>(m.value))
                                                               : std::get<std::string>(m.value);
    out += fmt::format("{},{},{}\n", csv_escape(m.scope), csv_escape(m.name), csv_escape(value));
  }
  return out;
}

}  // namespace

std::string format_report(const ExperimentReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::table:
      return format_table(report);
    case ReportFormat::csv:
      return format_csv(report);
    case ReportFormat::json:
      return to_json(report).dump(2) + "\n";
  }
  return {};
}

void emit_report(const ExperimentReport& report, ReportFormat format, const std::filesystem::path& path) {
  write_text_file(path, format_report(report, format));
}

}  // namespace pairvote
