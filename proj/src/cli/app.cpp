#include "bvgraph/cli/app.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "bvgraph/error.hpp"
#include "commands.hpp"

namespace bvgraph::cli {

namespace {

void add_source(CLI::App* sub, ProblemSource& s) {
  sub->add_option("--instance", s.instance, "bundled instance name");
  sub->add_option("--space", s.space, "space file");
  sub->add_option("--omega", s.omega, "vertex set file for omega");
  sub->add_option("--boundary", s.boundary, "function file holding the boundary datum");
}

// Fills options the command line left unset from a TOML-like file. Keys
// may use either underscores or dashes.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  if (!std::filesystem::is_regular_file(path)) throw Error(Errc::io_error, "cannot read config '" + path + "'");
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path);
  } catch (const CLI::ParseError& e) {
    throw Error(Errc::parse_error, path + ": " + e.what());
  }
  for (const CLI::ConfigItem& item : items) {
    if (!item.parents.empty() || item.name == "++" || item.name == "--") continue;
    std::string name = item.name;
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::Option* opt = sub->get_option_no_throw("--" + name);
    if (opt == nullptr || name == "config") throw Error(Errc::parse_error, path + ": unknown key '" + item.name + "'");
    if (opt->count() > 0) continue;
    try {
      opt->add_result(item.inputs);
      opt->run_callback();
    } catch (const CLI::ParseError& e) {
      throw Error(Errc::parse_error, path + ": key '" + item.name + "': " + e.what());
    }
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) throw Error(Errc::io_error, "cannot write '" + path + "'");
}

std::string summary(const Report& rep) {
  std::size_t failed = 0;
  for (const CheckRecord& c : rep.checks) failed += c.passed ? 0 : 1;
  return rep.command + ": " + std::to_string(rep.checks.size()) + " checks, " + std::to_string(failed) + " failed";
}

int finish(const Report& rep, const std::string& out_path, bool out_is_dir, std::ostream& out) {
  if (out_path.empty()) {
    out << rep.to_json().dump(2) << '\n';
  } else {
    if (out_is_dir) {
      emit_tables(rep, out_path);
    } else {
      write_text(out_path, rep.to_json().dump(2) + "\n");
    }
    out << summary(rep) << '\n';
  }
  return rep.passed() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least-gradient problems and BV calculus on weighted graphs", "bvgraph"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a space file or a bundled instance");
  gen_cmd->require_subcommand(1);
  auto* gen_path = gen_cmd->add_subcommand("path", "path graph");
  gen_path->add_option("--n", gen.n, "vertex count")->check(CLI::PositiveNumber);
  gen_path->add_option("--length", gen.length, "edge length");
  gen_path->add_option("--mass", gen.mass, "vertex mass");
  gen_path->add_option("--out", gen.out, "output file (default stdout)");
  auto* gen_grid = gen_cmd->add_subcommand("grid", "uniform grid on the unit square");
  auto* gen_wgrid = gen_cmd->add_subcommand("wgrid", "weighted grid on the unit square");
  for (auto* g : {gen_grid, gen_wgrid}) {
    g->add_option("--nx", gen.nx, "columns")->check(CLI::PositiveNumber);
    g->add_option("--ny", gen.ny, "rows")->check(CLI::PositiveNumber);
    g->add_option("--out", gen.out, "output file (default stdout)");
  }
  gen_wgrid->add_option("--weight-expr", gen.weight_expr, "weight as an expression in x, y and r");
  auto* gen_inst = gen_cmd->add_subcommand("instance", "write a bundled instance as three files");
  gen_inst->add_option("--name", gen.name, "instance name");
  gen_inst->add_option("--out-dir", gen.out_dir, "output directory");

  SolveOptions solve;
  std::string solve_out;
  auto* solve_cmd = app.add_subcommand("solve", "solve a least-gradient Dirichlet problem");
  add_source(solve_cmd, solve.source);
  solve_cmd->add_option("--method", solve.method, "stack, pd or both")
      ->check(CLI::IsMember({"stack", "pd", "both"}));
  solve_cmd->add_option("--tol", solve.tol, "first-order tolerance");
  solve_cmd->add_option("--max-iters", solve.max_iters, "first-order iteration cap");
  solve_cmd->add_option("--out", solve_out, "report file (default stdout)");
  solve_cmd->add_option("--solution", solve.solution, "write the solution as a function file");

  VerifyOptions verify;
  std::string verify_out;
  auto* verify_cmd = app.add_subcommand("verify", "randomized identity and optimality checks");
  verify_cmd->require_subcommand(1);
  for (const char* kind : {"coarea", "truncation", "leibniz", "leastgrad", "superlevel"}) {
    auto* v = verify_cmd->add_subcommand(kind);
    v->add_option("--trials", verify.trials, "number of trials");
    v->add_option("--seed", verify.seed, "random seed");
    v->add_option("--space", verify.space, "space file to draw trials on");
    v->add_flag("--random-graphs", verify.random_graphs, "draw a random connected graph per trial");
    v->add_option("--max-vertices", verify.max_vertices, "size cap for random graphs");
    v->add_option("--tol", verify.tol, "tolerance (default depends on the check)");
    v->add_option("--out", verify_out, "report file (default stdout)");
  }

  ExperimentOptions exp;
  std::string exp_out;
  std::string exp_config;
  auto* exp_cmd = app.add_subcommand("experiment", "regularity and area experiments");
  exp_cmd->require_subcommand(1);
  auto common = [&](const char* name, const char* help) {
    auto* e = exp_cmd->add_subcommand(name, help);
    e->add_option("--config", exp_config, "TOML file with option values");
    e->add_option("--out", exp_out, "output directory for report.json and CSV tables");
    e->add_option("--seed", exp.seed, "random seed");
    return e;
  };
  auto* e_max = common("maxprinciple", "maximum principle on random instances");
  e_max->add_option("--instances", exp.instances);
  e_max->add_option("--max-vertices", exp.max_vertices);
  auto* e_stab = common("stability", "Dirichlet and local stability on the bundled grid");
  auto* e_point = common("pointwise", "superlevel minimality of a pointwise limit");
  for (auto* e : {e_stab, e_point}) {
    e->add_option("--n", exp.n, "grid size");
    e->add_option("--k-max", exp.k_max, "length of the perturbation sequence");
  }
  e_stab->add_option("--tol", exp.tol, "bound for the last L1 distance");
  e_point->add_option("--intermediate", exp.intermediate, "thresholds inside each gap");
  auto* e_dg = common("degiorgi", "De Giorgi ratio across grid refinements");
  e_dg->add_option("--levels", exp.levels, "grid resolutions");
  e_dg->add_option("--r", exp.r, "inner radius");
  e_dg->add_option("--big-r", exp.big_r, "outer radius");
  auto* e_cont = common("continuity", "oscillation across refinements on the channel instance");
  e_cont->add_option("--levels", exp.levels, "grid resolutions");
  e_cont->add_option("--radii", exp.radii, "probe radii");
  e_cont->add_option("--functional", exp.functional, "tv or area")->check(CLI::IsMember({"tv", "area"}));
  e_cont->add_option("--tol", exp.solver_tol, "area solver tolerance");
  auto* e_por = common("porosity", "porosity of a minimal set near its boundary");
  e_por->add_option("--n", exp.porosity_n, "grid size");
  e_por->add_option("--radii", exp.radii, "radii");
  auto* e_area = common("area", "area functional, subgraph perimeter and quasiminimality");
  add_source(e_area, exp.source);
  e_area->add_option("--levels", exp.subgraph_levels, "subgraph levels")->check(CLI::Range(2, 1 << 20));
  e_area->add_option("--samples", exp.samples, "probe samples");
  e_area->add_option("--tol", exp.solver_tol, "area solver tolerance");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*gen_cmd) {
      gen.kind = gen_cmd->get_subcommands().front()->get_name();
      run_gen(gen, out);
      return 0;
    }
    if (*solve_cmd) return finish(run_solve(solve), solve_out, false, out);
    if (*verify_cmd) {
      verify.kind = verify_cmd->get_subcommands().front()->get_name();
      return finish(run_verify(verify), verify_out, false, out);
    }
    CLI::App* sub = exp_cmd->get_subcommands().front();
    apply_config(sub, exp_config);
    exp.kind = sub->get_name();
    return finish(run_experiment(exp), exp_out, true, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace bvgraph::cli
