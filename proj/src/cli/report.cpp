#include "bvgraph/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bvgraph/error.hpp"

namespace bvgraph::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no inf/nan; keep them readable as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
}

}  // namespace

void Report::check(std::string name, bool passed, double lhs, double rhs, double tolerance, json witness) {
  checks.push_back({std::move(name), passed, lhs, rhs, std::abs(lhs - rhs), tolerance,
                    passed ? json(nullptr) : std::move(witness)});
}

bool Report::passed() const {
  for (const CheckRecord& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

json Report::to_json(bool with_timing) const {
  json j;
  j["command"] = command;
  j["config"] = config;
  json list = json::array();
  std::size_t failed = 0;
  for (const CheckRecord& c : checks) {
    json r{{"name", c.name},
           {"status", c.passed ? "pass" : "fail"},
           {"lhs", number(c.lhs)},
           {"rhs", number(c.rhs)},
           {"residual", number(c.residual)},
           {"tolerance", number(c.tolerance)}};
    if (!c.passed) {
      r["witness"] = c.witness;
      ++failed;
    }
    list.push_back(std::move(r));
  }
  j["checks"] = std::move(list);
  j["summary"] = {{"checks", checks.size()}, {"failed", failed}, {"pass", failed == 0}};
  j["results"] = results;
  json tabs = json::array();
  for (const Table& t : tables) tabs.push_back({{"name", t.name}, {"rows", t.rows.size()}});
  j["tables"] = std::move(tabs);
  if (with_timing) j["timing"] = timing;
  return j;
}

std::string table_csv(const Table& table) {
  std::string out = "level,radius,value\n";
  for (const TableRow& r : table.rows) {
    out += std::to_string(r.level) + ',' + (r.radius ? fmt(*r.radius) : std::string()) + ',' + fmt(r.value) + '\n';
  }
  return out;
}

void emit_tables(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(Errc::io_error, "cannot create output directory '" + dir.string() + "'");
  }
  write_file(dir / "report.json", report.to_json().dump(2) + "\n");
  for (const Table& t : report.tables) write_file(dir / (t.name + ".csv"), table_csv(t));
}

}  // namespace bvgraph::cli
