#pragma once

// Machine-readable run reports: rows of typed cells plus a manifest of the
// resolved configuration and per-check outcomes.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace padic {

inline constexpr const char* kToolVersion = "0.1.0";

using Cell = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;

class Row {
 public:
  Row& add(std::string key, Cell value) {
    fields_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Row& add(std::string key, int value) { return add(std::move(key), Cell{std::int64_t{value}}); }
  Row& add(std::string key, unsigned value) { return add(std::move(key), Cell{std::uint64_t{value}}); }
  Row& add(std::string key, const char* value) { return add(std::move(key), Cell{std::string(value)}); }

  const std::vector<std::pair<std::string, Cell>>& fields() const { return fields_; }

 private:
  std::vector<std::pair<std::string, Cell>> fields_;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Report {
  std::string subcommand;
  /// Resolved flags that affect the numbers (thread count and paths excluded).
  std::vector<std::pair<std::string, std::string>> config;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<Row> rows;

  void check(std::string name, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed, std::move(detail)});
  }
  bool all_passed() const;
};

/// "%.12g".
std::string format_double(double v);
std::string cell_to_string(const Cell& c);

/// {"manifest": {...}, "rows": [...]}, fields in insertion order.
std::string report_to_json(const Report& report);

/// RFC 4180 with a header row (union of row keys in first-seen order) and LF
/// line endings. Rows only; the manifest goes to its own file.
std::string report_to_csv(const Report& report);

/// Volatile run metadata that stays out of the report body.
struct RunMetadata {
  unsigned threads = 1;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> artifacts;
};

std::string manifest_to_json(const Report& report, const RunMetadata& meta);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Parses the RFC 4180 subset written by report_to_csv. Throws IoError.
CsvTable parse_csv(std::string_view text);

/// Writes via a temporary file and rename. Throws IoError.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace padic
