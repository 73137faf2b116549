#include "padic/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "padic/error.hpp"

namespace padic {

using ordered_json = nlohmann::ordered_json;

bool Report::all_passed() const {
  for (const Check& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string cell_to_string(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return std::to_string(v);
        }
      },
      c);
}

namespace {

ordered_json cell_to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          // the 12-digit decimal round-trips, so the shortest form printed
          // by the serializer never shows more than 12 significant digits
          return std::strtod(format_double(v).c_str(), nullptr);
        } else {
          return v;
        }
      },
      c);
}

ordered_json manifest_core(const Report& report) {
  ordered_json m;
  m["subcommand"] = report.subcommand;
  m["tool_version"] = kToolVersion;
  m["seed"] = report.seed;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : report.config) cfg[k] = v;
  m["config"] = cfg;
  ordered_json checks = ordered_json::array();
  for (const Check& c : report.checks) {
    checks.push_back(ordered_json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  m["checks"] = checks;
  m["all_passed"] = report.all_passed();
  return m;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

std::string report_to_json(const Report& report) {
  ordered_json doc;
  doc["manifest"] = manifest_core(report);
  ordered_json rows = ordered_json::array();
  for (const Row& row : report.rows) {
    ordered_json obj = ordered_json::object();
    for (const auto& [k, v] : row.fields()) obj[k] = cell_to_json(v);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const Report& report) {
  std::vector<std::string> header;
  for (const Row& row : report.rows) {
    for (const auto& [k, v] : row.fields()) {
      if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
    }
  }
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(header[i]);
  }
  out += '\n';
  for (const Row& row : report.rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out += ',';
      for (const auto& [k, v] : row.fields()) {
        if (k == header[i]) {
          out += csv_escape(cell_to_string(v));
          break;
        }
      }
    }
    out += '\n';
  }
  return out;
}

std::string manifest_to_json(const Report& report, const RunMetadata& meta) {
  ordered_json m = manifest_core(report);
  m["threads"] = meta.threads;
  m["wall_clock_seconds"] = std::strtod(format_double(meta.wall_clock_seconds).c_str(), nullptr);
  m["artifacts"] = meta.artifacts;
  return m.dump(2) + "\n";
}

CsvTable parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      if (!field.empty()) throw IoError("stray quote inside unquoted CSV field");
      in_quotes = true;
      field_started = true;
    } else if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (ch == '\n') {
      if (field_started || !field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        field.clear();
      }
      records.push_back(std::move(record));
      record.clear();
      field_started = false;
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (in_quotes) throw IoError("unterminated quoted CSV field");
  if (!field.empty() || field_started || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  CsvTable table;
  if (records.empty()) return table;
  table.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.header.size()) throw IoError("CSV record width differs from header");
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = fs::path(path + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move report into place at " + path);
  }
}

}  // namespace padic
