#include "bvgraph/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "bvgraph/error.hpp"

namespace bvgraph {

namespace {

// Splits the stream into tokenized, comment-free lines that remember
// their line numbers.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      tokens.clear();
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::parse_error, source_ + ":" + std::to_string(line_no_) + ": " + msg);
  }

  double number(const std::string& tok) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("expected a number, got '" + tok + "'");
    return v;
  }

  std::size_t index(const std::string& tok) const {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("expected a vertex id, got '" + tok + "'");
    return v;
  }

  std::size_t line() const { return line_no_; }
  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

SpacePtr parse_space(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  std::vector<std::string> tok;
  if (!r.next(tok)) r.fail("empty space file");
  if (tok.size() != 2 || tok[0] != "vertices") r.fail("expected 'vertices <count>'");
  const std::size_t n = r.index(tok[1]);
  if (n == 0) r.fail("a space needs at least one vertex");

  std::vector<std::optional<double>> masses(n);
  std::vector<Point> positions(n);
  std::optional<bool> has_positions;
  for (std::size_t k = 0; k < n; ++k) {
    if (!r.next(tok)) r.fail("file ends after " + std::to_string(k) + " of " + std::to_string(n) + " vertices");
    if (tok[0] != "v" || (tok.size() != 3 && tok.size() != 5)) r.fail("expected 'v <id> <mass> [<x> <y>]'");
    const std::size_t id = r.index(tok[1]);
    if (id >= n) r.fail("vertex " + std::to_string(id) + " out of range (space has " + std::to_string(n) + ")");
    if (masses[id]) r.fail("vertex " + std::to_string(id) + " listed twice");
    masses[id] = r.number(tok[2]);
    const bool with_pos = tok.size() == 5;
    if (has_positions && *has_positions != with_pos) r.fail("positions must be given for all vertices or none");
    has_positions = with_pos;
    if (with_pos) positions[id] = {r.number(tok[3]), r.number(tok[4])};
  }

  if (!r.next(tok)) r.fail("missing 'edges <count>'");
  if (tok.size() != 2 || tok[0] != "edges") r.fail("expected 'edges <count>'");
  const std::size_t m = r.index(tok[1]);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (!r.next(tok)) r.fail("file ends after " + std::to_string(k) + " of " + std::to_string(m) + " edges");
    if (tok[0] != "e" || tok.size() != 5) r.fail("expected 'e <a> <b> <length> <tv_weight>'");
    const std::size_t a = r.index(tok[1]);
    const std::size_t b = r.index(tok[2]);
    if (a >= n || b >= n) r.fail("edge endpoint out of range (space has " + std::to_string(n) + " vertices)");
    edges.push_back({a, b, r.number(tok[3]), r.number(tok[4])});
  }
  if (r.next(tok)) r.fail("unexpected content after the edge list");

  std::vector<double> mass(n);
  for (std::size_t k = 0; k < n; ++k) mass[k] = *masses[k];
  try {
    return std::make_shared<const MetricMeasureSpace>(std::move(mass), std::move(edges),
                                                      has_positions.value_or(false) ? positions
                                                                                    : std::vector<Point>{});
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.what());
  }
}

BvFunction parse_function(std::istream& in, const std::string& source, SpacePtr space) {
  LineReader r(in, source);
  const std::size_t n = space->num_vertices();
  std::vector<std::optional<double>> values(n);
  std::vector<std::string> tok;
  while (r.next(tok)) {
    if (tok.size() != 2) r.fail("expected '<id> <value>'");
    const std::size_t id = r.index(tok[0]);
    if (id >= n) r.fail("vertex " + std::to_string(id) + " out of range (space has " + std::to_string(n) + ")");
    if (values[id]) r.fail("vertex " + std::to_string(id) + " given twice");
    values[id] = r.number(tok[1]);
  }
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!values[k]) r.fail("no value for vertex " + std::to_string(k));
    out[k] = *values[k];
  }
  try {
    return BvFunction(std::move(space), std::move(out));
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.what());
  }
}

VertexSet parse_vertex_set(std::istream& in, const std::string& source, std::size_t universe) {
  LineReader r(in, source);
  VertexSet set(universe);
  std::vector<std::string> tok;
  while (r.next(tok)) {
    for (const std::string& t : tok) {
      const std::size_t id = r.index(t);
      if (id >= universe) {
        r.fail("vertex " + std::to_string(id) + " out of range (space has " + std::to_string(universe) + ")");
      }
      set.insert(id);
    }
  }
  return set;
}

SpacePtr read_space(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return parse_space(in, path.string());
}

BvFunction read_function(const std::filesystem::path& path, SpacePtr space) {
  std::ifstream in = open_in(path);
  return parse_function(in, path.string(), std::move(space));
}

VertexSet read_vertex_set(const std::filesystem::path& path, std::size_t universe) {
  std::ifstream in = open_in(path);
  return parse_vertex_set(in, path.string(), universe);
}

void write_space(std::ostream& out, const MetricMeasureSpace& space) {
  out << "vertices " << space.num_vertices() << '\n';
  for (Vertex v = 0; v < space.num_vertices(); ++v) {
    out << "v " << v << ' ' << fmt(space.mass(v));
    if (space.has_positions()) out << ' ' << fmt(space.positions()[v].x) << ' ' << fmt(space.positions()[v].y);
    out << '\n';
  }
  out << "edges " << space.num_edges() << '\n';
  for (const Edge& e : space.edges()) {
    out << "e " << e.a << ' ' << e.b << ' ' << fmt(e.length) << ' ' << fmt(e.tv_weight) << '\n';
  }
}

void write_function(std::ostream& out, const BvFunction& u) {
  for (Vertex v = 0; v < u.size(); ++v) out << v << ' ' << fmt(u[v]) << '\n';
}

void write_vertex_set(std::ostream& out, const VertexSet& set) {
  for (Vertex v : set.members()) out << v << '\n';
}

void write_space(const std::filesystem::path& path, const MetricMeasureSpace& space) {
  std::ofstream out = open_out(path);
  write_space(out, space);
}

void write_function(const std::filesystem::path& path, const BvFunction& u) {
  std::ofstream out = open_out(path);
  write_function(out, u);
}

void write_vertex_set(const std::filesystem::path& path, const VertexSet& set) {
  std::ofstream out = open_out(path);
  write_vertex_set(out, set);
}

}  // namespace bvgraph
