#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "bvgraph/dirichlet_problem.hpp"
#include "bvgraph/regularity_lab.hpp"

/// Fixed instances used by the test suites, the acceptance run and the CLI.
namespace bvgraph::bundled {

/// Vertices of an nx x ny grid off the outer ring.
VertexSet grid_interior(std::size_t nx, std::size_t ny);

/// path(4), omega = {1, 2}, datum (0, 0, 0, 1).
DirichletProblem p4();

/// Unit-square grid with omega the interior and datum 1 on ring vertices
/// right of x = 1/2, 0 elsewhere. The minimal cut is the vertical line
/// x = 1/2 for even n.
DirichletProblem half_plane(std::size_t n, const std::function<double(Point)>& weight);
DirichletProblem half_plane(std::size_t n);

struct StabilityInstance {
  DirichletProblem problem;
  BvFunction h;                  ///< bounded perturbation direction
  std::vector<BvFunction> data;  ///< f + 2^-k h for k = 1 .. k_max
};

/// n x n unit-square grid, omega the interior, datum 1 on ring vertices in
/// the upper half, h(i, j) = ((i + 2j) mod 5) / 5.
StabilityInstance stability_grid(std::size_t n = 16, std::size_t k_max = 14);

/// 0.1 on the line x = 1/2, rising linearly to 1 at |x - 1/2| = 0.1.
double channel_weight(Point p);

struct JumpInstance {
  RefinementFamily family;
  std::vector<DirichletProblem> problems;
  Point interface_probe;
  std::vector<Point> smooth_probes;
  std::vector<double> radii;
  double data_gap;
};

/// Channel-weighted grids with two-valued ring data (1 right of x = 1/2).
JumpInstance channel_jump(std::span<const std::size_t> resolutions);
JumpInstance channel_jump();

/// n x n grid, omega the interior, datum on the ring linear in x.
DirichletProblem ramp_grid(std::size_t n = 6);

/// Random connected graph with a random omega (never all of X) and either
/// small integer data (many ties) or continuous data in [-1, 1].
DirichletProblem random_problem(std::size_t n, std::mt19937_64& rng, bool integer_data);

/// Names accepted by `instance`.
std::vector<std::string> instance_names();
/// p4, path8, half16, half32, stability16, ramp6.
DirichletProblem instance(const std::string& name);

}  // namespace bvgraph::bundled
