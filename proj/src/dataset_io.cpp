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

#include "pairvote/dataset_io.hpp"

#include "pairvote/error.hpp"

#include <fmt/core.h>
#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pairvote {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool starts_with_keyword(std::string_view line, std::string_view keyword) {
  if (line.size() < keyword.size()) {
    return false;
  }
  if (lower(line.substr(0, keyword.size())) != keyword) {
    return false;
  }
  return line.size() == keyword.size() || std::isspace(static_cast<unsigned char>(line[keyword.size()]));
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    return std::nullopt;
  }
  return value;
}

double require_finite(std::string_view text, const std::string& source, std::size_t line, std::string_view what) {
  const auto value = parse_double(text);
  if (!value) {
    throw ParseError(source, line, fmt::format("{}: '{}' is not a number", what, text));
  }
  if (!std::isfinite(*value)) {
    throw ParseError(source, line, fmt::format("{}: non-finite value '{}'", what, text));
  }
  return *value;
}

/// Removes one layer of matching single or double quotes.
std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) {
        out.push_back(s[++i]);
      } else {
        out.push_back(s[i]);
      }
    }
    return out;
  }
  return std::string(s);
}

/// Splits on `sep` outside of single/double quotes.
std::vector<std::string_view> split_quoted(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  char quote = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote != 0) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

enum class AttributeType { numeric, string, nominal };

struct Attribute {
  std::string name;
  AttributeType type;
  std::vector<std::string> values;
};

Attribute parse_attribute(std::string_view rest, const std::string& source, std::size_t line) {
  rest = trim(rest);
  std::string name;
  std::string_view type;
  if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
    const auto close = rest.find(rest.front(), 1);
    if (close == std::string_view::npos) {
      throw ParseError(source, line, "unterminated quoted attribute name");
    }
    name = std::string(rest.substr(1, close - 1));
    type = trim(rest.substr(close + 1));
  } else {
    const auto space = rest.find_first_of(" \t");
    if (space == std::string_view::npos) {
      throw ParseError(source, line, "attribute declaration without a type");
    }
    name = std::string(rest.substr(0, space));
    type = trim(rest.substr(space + 1));
  }
  if (name.empty() || type.empty()) {
    throw ParseError(source, line, "malformed @attribute declaration");
  }
  if (type.front() == '{') {
    if (type.back() != '}') {
      throw ParseError(source, line, "unterminated nominal value list");
    }
    Attribute attr{std::move(name), AttributeType::nominal, {}};
    for (const auto value : split_quoted(type.substr(1, type.size() - 2), ',')) {
      attr.values.push_back(unquote(value));
    }
    return attr;
  }
  const auto kind = lower(type);
  if (kind == "numeric" || kind == "real" || kind == "integer") {
    return {std::move(name), AttributeType::numeric, {}};
  }
  if (kind == "string") {
    return {std::move(name), AttributeType::string, {}};
  }
  throw ParseError(source, line, fmt::format("unsupported attribute type '{}'", type));
}

struct LabelColumn {
  std::vector<std::string> raw;  // per row, empty for missing
  std::vector<std::string> declared;
};

/// Converts raw per-row label strings into indices + universe.
void bind_labels(DatasetParts& parts, const LabelColumn& column, const std::optional<LabelUniverse>& fixed_universe,
                 const std::string& source) {
  const bool any = std::any_of(column.raw.begin(), column.raw.end(), [](const auto& v) { return !v.empty(); });
  if (!any) {
    return;
  }
  if (const auto it = std::find(column.raw.begin(), column.raw.end(), std::string()); it != column.raw.end()) {
    throw DatasetError(fmt::format("{}: row {} has no class value while other rows do", source, it - column.raw.begin()));
  }
  if (fixed_universe) {
    parts.universe = *fixed_universe;
  } else {
    std::vector<std::string> order;
    std::set<std::string> present(column.raw.begin(), column.raw.end());
    if (!column.declared.empty()) {
      for (const auto& value : column.declared) {
        if (present.count(value) != 0) {
          order.push_back(value);
        }
      }
    } else {
      for (const auto& value : column.raw) {
        if (std::find(order.begin(), order.end(), value) == order.end()) {
          order.push_back(value);
        }
      }
    }
    parts.universe = LabelUniverse(std::move(order));
  }
  parts.labels.reserve(column.raw.size());
  for (const auto& value : column.raw) {
    parts.labels.push_back(parts.universe.require_index(value));
  }
}

std::string file_label(const std::filesystem::path& path) { return path.string(); }

}  // namespace

std::vector<CsvRecord> parse_csv(std::string_view text, const std::string& source) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  bool record_has_content = false;
  std::size_t line = 1;
  current.line = 1;

  const auto end_field = [&] {
    current.fields.push_back(field_quoted ? field : std::string(trim(field)));
    field.clear();
    field_quoted = false;
  };
  const auto end_record = [&] {
    end_field();
    if (record_has_content) {
      records.push_back(std::move(current));
    }
    current = CsvRecord{};
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') {
          ++line;
        }
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!trim(field).empty()) {
        throw ParseError(source, line, "quote inside an unquoted field");
      }
      field.clear();
      in_quotes = true;
      field_quoted = true;
      record_has_content = true;
    } else if (c == ',') {
      end_field();
      record_has_content = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
        ++i;
      }
      end_record();
      ++line;
      current.line = line;
    } else {
      if (current.fields.empty() && field.empty() && !record_has_content) {
        current.line = line;
      }
      if (!std::isspace(static_cast<unsigned char>(c))) {
        record_has_content = true;
      }
      field.push_back(c);
    }
  }
  if (in_quotes) {
    throw ParseError(source, line, "unterminated quoted field");
  }
  end_record();
  return records;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos && trim(field) == field) {
    return std::string(field);
  }
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') {
      out.push_back('"');
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DatasetError(fmt::format("cannot open '{}'", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("io", fmt::format("cannot open '{}' for writing", path.string()));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw Error("io", fmt::format("failed writing '{}'", path.string()));
  }
}

Dataset parse_arff(std::string_view text, const std::string& source, const std::optional<LabelUniverse>& fixed_universe) {
  std::vector<Attribute> attributes;
  bool in_data = false;
  bool saw_relation = false;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> ids;
  LabelColumn labels;
  std::optional<std::size_t> string_attr;
  std::optional<std::size_t> nominal_attr;
  std::size_t numeric_count = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '%') {
      continue;
    }
    if (!in_data) {
      if (line.front() != '@') {
        throw ParseError(source, line_no, "expected an @-declaration in the ARFF header");
      }
      if (starts_with_keyword(line, "@relation")) {
        saw_relation = true;
      } else if (starts_with_keyword(line, "@attribute")) {
        auto attr = parse_attribute(line.substr(10), source, line_no);
        const auto index = attributes.size();
        if (attr.type == AttributeType::string) {
          if (string_attr) {
            throw ParseError(source, line_no, "more than one string attribute");
          }
          string_attr = index;
        } else if (attr.type == AttributeType::nominal) {
          if (nominal_attr) {
            throw ParseError(source, line_no, "more than one nominal attribute");
          }
          nominal_attr = index;
          labels.declared = attr.values;
        } else {
          ++numeric_count;
        }
        attributes.push_back(std::move(attr));
      } else if (starts_with_keyword(line, "@data")) {
        if (!saw_relation) {
          throw ParseError(source, line_no, "@data before @relation");
        }
        if (numeric_count == 0) {
          throw ParseError(source, line_no, "no numeric attributes declared");
        }
        in_data = true;
      } else {
        throw ParseError(source, line_no, fmt::format("unknown declaration '{}'", line.substr(0, line.find(' '))));
      }
      continue;
    }
    if (line.front() == '{') {
      throw ParseError(source, line_no, "sparse ARFF rows are not supported");
    }
    const auto values = split_quoted(line, ',');
    const auto row_index = rows.size();
    if (values.size() != attributes.size()) {
      throw ParseError(source, line_no,
                       fmt::format("data row {} has {} values, expected {}", row_index, values.size(), attributes.size()));
    }
    std::vector<double> row;
    row.reserve(numeric_count);
    for (std::size_t a = 0; a < attributes.size(); ++a) {
      switch (attributes[a].type) {
        case AttributeType::numeric:
          row.push_back(require_finite(values[a], source, line_no,
                                       fmt::format("data row {}, attribute '{}'", row_index, attributes[a].name)));
          break;
        case AttributeType::string:
          ids.push_back(unquote(values[a]));
          break;
        case AttributeType::nominal: {
          auto value = unquote(values[a]);
          if (value == "?") {
            value.clear();
          } else if (std::find(attributes[a].values.begin(), attributes[a].values.end(), value) ==
                     attributes[a].values.end()) {
            throw ParseError(source, line_no, fmt::format("data row {}: undeclared class value '{}'", row_index, value));
          }
          labels.raw.push_back(std::move(value));
          break;
        }
      }
    }
    rows.push_back(std::move(row));
  }
  if (!in_data) {
    throw ParseError(source, line_no, "missing @data section");
  }
  if (rows.empty()) {
    throw DatasetError(fmt::format("{}: dataset is empty (no data rows)", source));
  }

  DatasetParts parts;
  parts.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(numeric_count));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < numeric_count; ++c) {
      parts.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  for (const auto& attr : attributes) {
    if (attr.type == AttributeType::numeric) {
      parts.feature_names.push_back(attr.name);
    }
  }
  if (string_attr) {
    parts.utterance_ids = std::move(ids);
  } else {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      parts.utterance_ids.push_back(fmt::format("row{:05d}", r + 1));
    }
  }
  if (nominal_attr) {
    bind_labels(parts, labels, fixed_universe, source);
  }
  return Dataset(std::move(parts));
}

Dataset parse_arff_file(const std::filesystem::path& path, const std::optional<LabelUniverse>& fixed_universe) {
  return parse_arff(read_text_file(path), file_label(path), fixed_universe);
}

Dataset parse_feature_csv(std::string_view text, const std::string& source, const std::optional<LabelUniverse>& fixed_universe) {
  const auto records = parse_csv(text, source);
  if (records.empty()) {
    throw ParseError(source, 1, "missing header row");
  }
  const auto& header = records.front().fields;
  std::optional<std::size_t> id_col;
  std::optional<std::size_t> speaker_col;
  std::optional<std::size_t> label_col;
  std::optional<std::size_t> sex_col;
  std::vector<std::size_t> feature_cols;
  DatasetParts parts;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& name = header[c];
    if (name == "utterance_id" || name == "name") {
      id_col = c;
    } else if (name == "speaker_id") {
      speaker_col = c;
    } else if (name == "label") {
      label_col = c;
    } else if (name == "sex") {
      sex_col = c;
    } else {
      feature_cols.push_back(c);
      parts.feature_names.push_back(name);
    }
  }
  if (feature_cols.empty()) {
    throw ParseError(source, records.front().line, "header declares no feature columns");
  }
  if (records.size() == 1) {
    throw DatasetError(fmt::format("{}: dataset is empty (no data rows)", source));
  }
  const auto n = records.size() - 1;
  parts.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(feature_cols.size()));
  LabelColumn labels;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& record = records[r + 1];
    if (record.fields.size() != header.size()) {
      throw ParseError(source, record.line,
                       fmt::format("data row {} has {} fields, header has {}", r, record.fields.size(), header.size()));
    }
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      parts.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = require_finite(
          record.fields[feature_cols[j]], source, record.line, fmt::format("data row {}, column '{}'", r, header[feature_cols[j]]));
    }
    parts.utterance_ids.push_back(id_col ? record.fields[*id_col] : fmt::format("row{:05d}", r + 1));
    if (speaker_col) {
      parts.speakers.push_back(record.fields[*speaker_col]);
      if (sex_col) {
        const Sex sex = parse_sex(record.fields[*sex_col]);
        if (sex != Sex::unknown) {
          const auto [it, inserted] = parts.speaker_sex.emplace(parts.speakers.back(), sex);
          if (!inserted && it->second != sex) {
            throw ParseError(source, record.line, fmt::format("conflicting sex for speaker '{}'", it->first));
          }
        }
      }
    }
    if (label_col) {
      labels.raw.push_back(record.fields[*label_col]);
    }
  }
  if (label_col) {
    bind_labels(parts, labels, fixed_universe, source);
  }
  return Dataset(std::move(parts));
}

Dataset load_features(const std::filesystem::path& path, const std::optional<LabelUniverse>& fixed_universe) {
  if (lower(path.extension().string()) == ".arff") {
    return parse_arff_file(path, fixed_universe);
  }
  return parse_feature_csv(read_text_file(path), file_label(path), fixed_universe);
}

Dataset parse_manifest(std::string_view text, const Dataset& data, const std::optional<LabelUniverse>& fixed_universe,
                       const std::string& source) {
  const auto records = parse_csv(text, source);
  if (records.empty()) {
    throw ParseError(source, 1, "missing header row");
  }
  const auto& header = records.front().fields;
  const auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? std::nullopt : std::optional<std::size_t>(static_cast<std::size_t>(it - header.begin()));
  };
  const auto id_col = column("utterance_id");
  const auto speaker_col = column("speaker_id");
  const auto label_col = column("label");
  const auto sex_col = column("sex");
  if (!id_col || !speaker_col || !label_col) {
    throw ParseError(source, records.front().line, "manifest header must contain utterance_id, speaker_id and label");
  }
  const auto n = records.size() - 1;
  if (n != data.rows()) {
    throw DatasetError(fmt::format("{}: manifest has {} rows but the dataset has {}", source, n, data.rows()));
  }

  std::unordered_map<std::string_view, std::size_t> row_of;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    row_of.emplace(data.utterance_ids()[r], r);
  }
  std::vector<const CsvRecord*> by_row(data.rows(), nullptr);
  std::vector<std::string> unknown_ids;
  std::vector<std::string> duplicate_ids;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& record = records[i];
    if (record.fields.size() != header.size()) {
      throw ParseError(source, record.line,
                       fmt::format("manifest row has {} fields, header has {}", record.fields.size(), header.size()));
    }
    const auto& id = record.fields[*id_col];
    const auto it = row_of.find(id);
    if (it == row_of.end()) {
      unknown_ids.push_back(id);
    } else if (by_row[it->second] != nullptr) {
      duplicate_ids.push_back(id);
    } else {
      by_row[it->second] = &record;
    }
  }
  std::vector<std::string> missing_ids;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    if (by_row[r] == nullptr) {
      missing_ids.push_back(data.utterance_ids()[r]);
    }
  }
  const auto preview = [](const std::vector<std::string>& ids) {
    const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
    return fmt::format("{}{}", fmt::join(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(shown), ", "),
                       ids.size() > shown ? ", ..." : "");
  };
  std::vector<std::string> problems;
  if (!duplicate_ids.empty()) {
    problems.push_back(fmt::format("duplicate utterance ids: [{}]", preview(duplicate_ids)));
  }
  if (!unknown_ids.empty()) {
    problems.push_back(fmt::format("ids not in dataset: [{}]", preview(unknown_ids)));
  }
  if (!missing_ids.empty()) {
    problems.push_back(fmt::format("dataset ids missing from manifest: [{}]", preview(missing_ids)));
  }
  if (!problems.empty()) {
    throw DatasetError(fmt::format("{}: {}", source, fmt::join(problems, "; ")));
  }

  DatasetParts parts = data.parts();
  parts.speakers.clear();
  parts.speaker_sex.clear();
  LabelColumn labels;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto& record = *by_row[r];
    parts.speakers.push_back(record.fields[*speaker_col]);
    labels.raw.push_back(record.fields[*label_col]);
    if (labels.raw.back().empty()) {
      throw ParseError(source, record.line, "empty label");
    }
    if (sex_col) {
      const Sex sex = parse_sex(record.fields[*sex_col]);
      if (sex != Sex::unknown) {
        const auto [it, inserted] = parts.speaker_sex.emplace(parts.speakers.back(), sex);
        if (!inserted && it->second != sex) {
          throw ParseError(source, record.line, fmt::format("conflicting sex for speaker '{}'", it->first));
        }
      }
    }
  }
  // first-appearance order follows the manifest, not the dataset
  if (!fixed_universe) {
    std::vector<std::string> order;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const auto& value = records[i].fields[*label_col];
      if (std::find(order.begin(), order.end(), value) == order.end()) {
        order.push_back(value);
      }
    }
    parts.universe = LabelUniverse(std::move(order));
  } else {
    parts.universe = *fixed_universe;
  }
  parts.labels.clear();
  for (std::size_t r = 0; r < labels.raw.size(); ++r) {
    const auto index = parts.universe.index_of(labels.raw[r]);
    if (!index) {
      throw DatasetError(fmt::format("{}: label '{}' of '{}' is not in the configured universe ({})", source, labels.raw[r],
                                     data.utterance_ids()[r], fmt::join(parts.universe.labels(), ", ")));
    }
    parts.labels.push_back(*index);
  }
  return Dataset(std::move(parts));
}

Dataset parse_manifest_file(const std::filesystem::path& path, const Dataset& data,
                            const std::optional<LabelUniverse>& fixed_universe) {
  return parse_manifest(read_text_file(path), data, fixed_universe, file_label(path));
}

std::string format_dataset_csv(const Dataset& data) {
  fmt::memory_buffer out;
  const bool with_sex = data.has_speakers() && !data.speaker_sex().empty();
  fmt::format_to(std::back_inserter(out), "utterance_id");
  if (data.has_speakers()) {
    fmt::format_to(std::back_inserter(out), ",speaker_id");
  }
  if (with_sex) {
    fmt::format_to(std::back_inserter(out), ",sex");
  }
  if (data.has_labels()) {
    fmt::format_to(std::back_inserter(out), ",label");
  }
  for (std::size_t c = 0; c < data.dims(); ++c) {
    const auto name = data.feature_names().empty() ? fmt::format("f{}", c) : data.feature_names()[c];
    fmt::format_to(std::back_inserter(out), ",{}", csv_escape(name));
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < data.rows(); ++r) {
    fmt::format_to(std::back_inserter(out), "{}", csv_escape(data.utterance_ids()[r]));
    if (data.has_speakers()) {
      fmt::format_to(std::back_inserter(out), ",{}", csv_escape(data.speakers()[r]));
    }
    if (with_sex) {
      const auto it = data.speaker_sex().find(data.speakers()[r]);
      fmt::format_to(std::back_inserter(out), ",{}", it == data.speaker_sex().end() ? "" : to_string(it->second));
    }
    if (data.has_labels()) {
      fmt::format_to(std::back_inserter(out), ",{}", csv_escape(data.label_of(r)));
    }
    for (std::size_t c = 0; c < data.dims(); ++c) {
      fmt::format_to(std::back_inserter(out), ",{:.17g}", data.features()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
    out.push_back('\n');
  }
  return fmt::to_string(out);
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  write_text_file(path, format_dataset_csv(data));
}

std::string format_manifest_csv(const Dataset& data) {
  if (!data.has_labels() || !data.has_speakers()) {
    throw DatasetError("a manifest needs both labels and speaker ids");
  }
  std::string out = "utterance_id,speaker_id,label,sex\n";
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto it = data.speaker_sex().find(data.speakers()[r]);
    out += fmt::format("{},{},{},{}\n", csv_escape(data.utterance_ids()[r]), csv_escape(data.speakers()[r]),
                       csv_escape(data.label_of(r)), it == data.speaker_sex().end() ? "" : to_string(it->second));
  }
  return out;
}

std::optional<EmodbName> parse_emodb_name(std::string_view name) {
  if (const auto slash = name.find_last_of("/\\"); slash != std::string_view::npos) {
    name.remove_prefix(slash + 1);
  }
  if (const auto dot = name.find('.'); dot != std::string_view::npos) {
    name = name.substr(0, dot);
  }
  const auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  if (name.size() != 7 || !is_digit(name[0]) || !is_digit(name[1]) || (name[2] != 'a' && name[2] != 'b') ||
      !is_digit(name[3]) || !is_digit(name[4])) {
    return std::nullopt;
  }
  static const std::map<char, std::string_view> emotions = {
      {'W', "anger"}, {'L', "boredom"}, {'E', "disgust"}, {'A', "fear"},
      {'F', "happiness"}, {'T', "sadness"}, {'N', "neutral"},
  };
  const auto emotion = emotions.find(name[5]);
  if (emotion == emotions.end()) {
    return std::nullopt;
  }
  static const std::map<std::string_view, Sex> speakers = {
      {"03", Sex::male}, {"08", Sex::female}, {"09", Sex::female}, {"10", Sex::male}, {"11", Sex::male},
      {"12", Sex::male}, {"13", Sex::female}, {"14", Sex::female}, {"15", Sex::male}, {"16", Sex::female},
  };
  EmodbName out;
  out.speaker = std::string(name.substr(0, 2));
  out.text = std::string(name.substr(2, 3));
  out.emotion = std::string(emotion->second);
  if (const auto it = speakers.find(name.substr(0, 2)); it != speakers.end()) {
    out.sex = it->second;
  }
  return out;
}

LabelUniverse emodb_universe() {
  return LabelUniverse({"neutral", "anger", "boredom", "happiness", "sadness", "disgust", "fear"});
}

Dataset annotate_emodb(const Dataset& data) {
  DatasetParts parts = data.parts();
  parts.universe = emodb_universe();
  parts.labels.clear();
  parts.speakers.clear();
  parts.speaker_sex.clear();
  for (const auto& id : data.utterance_ids()) {
    const auto decoded = parse_emodb_name(id);
    if (!decoded) {
      throw DatasetError(fmt::format("'{}' is not an EmoDB utterance name", id));
    }
    parts.labels.push_back(parts.universe.require_index(decoded->emotion));
    parts.speakers.push_back(decoded->speaker);
    if (decoded->sex != Sex::unknown) {
      parts.speaker_sex[decoded->speaker] = decoded->sex;
    }
  }
  return Dataset(std::move(parts));
}

}  // namespace pairvote
