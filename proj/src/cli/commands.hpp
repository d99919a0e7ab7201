#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bvgraph/cli/report.hpp"

namespace bvgraph::cli {

/// A Dirichlet instance either bundled by name or read from three files.
struct ProblemSource {
  std::string instance;
  std::string space;
  std::string omega;
  std::string boundary;
};

struct GenOptions {
  std::string kind;  // path, grid, wgrid, instance
  std::size_t n = 8;
  std::size_t nx = 8;
  std::size_t ny = 8;
  double length = 1.0;
  double mass = 1.0;
  std::string weight_expr = "1";
  std::string name = "p4";
  std::string out;
  std::string out_dir = ".";
};

struct SolveOptions {
  ProblemSource source;
  std::string method = "stack";
  double tol = 1e-6;
  std::size_t max_iters = 200000;
  std::string solution;
};

struct VerifyOptions {
  std::string kind;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::string space;
  bool random_graphs = false;
  std::size_t max_vertices = 30;
  std::optional<double> tol;  // default depends on the kind
};

struct ExperimentOptions {
  std::string kind;
  std::uint64_t seed = 1;
  // maxprinciple
  std::size_t instances = 100;
  std::size_t max_vertices = 30;
  // stability, pointwise
  std::size_t n = 16;
  std::size_t k_max = 14;
  double tol = 1e-4;
  std::size_t intermediate = 3;
  std::size_t porosity_n = 32;
  // degiorgi, continuity
  std::vector<std::size_t> levels;
  double r = 0.13;
  double big_r = 0.26;
  std::vector<double> radii;
  std::string functional = "tv";
  // area
  ProblemSource source;
  std::size_t subgraph_levels = 256;
  std::size_t samples = 1000;
  double solver_tol = 1e-8;
};

void run_gen(const GenOptions& opts, std::ostream& out);
Report run_solve(const SolveOptions& opts);
Report run_verify(const VerifyOptions& opts);
Report run_experiment(const ExperimentOptions& opts);

}  // namespace bvgraph::cli
