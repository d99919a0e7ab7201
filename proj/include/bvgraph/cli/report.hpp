#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bvgraph::cli {

using nlohmann::json;

struct CheckRecord {
  std::string name;
  bool passed;
  double lhs;
  double rhs;
  double residual;
  double tolerance;
  /// Inputs that reproduce the check; attached to failures only.
  json witness;
};

struct TableRow {
  std::size_t level;
  std::optional<double> radius;
  double value;
};

struct Table {
  std::string name;  ///< file stem of the CSV
  std::vector<TableRow> rows;
};

/// Everything a command produces. `timing` is kept apart so that reruns
/// with the same configuration agree on every other byte.
struct Report {
  std::string command;
  json config = json::object();
  std::vector<CheckRecord> checks;
  std::vector<Table> tables;
  json results = json::object();
  json timing = json::object();

  void check(std::string name, bool passed, double lhs, double rhs, double tolerance, json witness = nullptr);
  bool passed() const;
  /// Report as JSON; `with_timing` false drops the timing block.
  json to_json(bool with_timing = true) const;
};

/// Writes report.json plus <table>.csv (header level,radius,value) for each
/// table into `dir`, creating it if needed. Throws Error(io_error) naming
/// the path on failure.
void emit_tables(const Report& report, const std::filesystem::path& dir);

/// CSV text of one table.
std::string table_csv(const Table& table);

}  // namespace bvgraph::cli
