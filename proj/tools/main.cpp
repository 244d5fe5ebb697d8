// Command-line workbench: every task is reachable either from a scenario
// file (`run path`) or directly from flags.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "mufourier/scenario.hpp"

using namespace mufourier;

namespace {

struct CommonArgs {
  int dim = 1;
  std::vector<double> box;
  std::vector<double> ball;
  std::string region_pred;
  std::string method;
  double rel_tol = -1.0, abs_tol = -1.0;
  int max_depth = 0;
  long samples = 0;
  long seed = -1;
  bool strict = false;
  std::string out, csv, summary;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--dim", a.dim, "Dimension n (variables x1..xn)");
  cmd->add_option("--box", a.box, "Bounding box: lo1 hi1 [lo2 hi2 ...]")->expected(-1);
  cmd->add_option("--ball", a.ball, "Ball region: c1 .. cd radius")->expected(-1);
  cmd->add_option("--region-pred", a.region_pred,
                  "Membership predicate (needs --box for bounds)");
  cmd->add_option("--method", a.method, "Integration method: refine | stochastic");
  cmd->add_option("--rel-tol", a.rel_tol, "Relative tolerance");
  cmd->add_option("--abs-tol", a.abs_tol, "Absolute tolerance");
  cmd->add_option("--max-depth", a.max_depth, "Subdivision depth budget");
  cmd->add_option("--samples", a.samples, "Stochastic sample count");
  cmd->add_option("--seed", a.seed, "Random seed");
  cmd->add_flag("--strict", a.strict, "Fail when the tolerance is not reached");
  cmd->add_option("--out", a.out, "Write the JSON report here");
  cmd->add_option("--csv", a.csv, "Write the criterion grid as CSV here");
  cmd->add_option("--summary", a.summary, "Write the text summary here");
}

void apply_common(Scenario& sc, const CommonArgs& a) {
  sc.dim = a.dim;
  if (!a.box.empty()) {
    std::ostringstream def;
    def << "box";
    for (double v : a.box) def << " " << format_double(v);
    sc.region_defs.emplace_back("main", def.str());
  }
  if (!a.ball.empty()) {
    std::ostringstream def;
    def << "ball";
    for (double v : a.ball) def << " " << format_double(v);
    sc.region_defs.emplace_back(a.box.empty() ? "main" : "ballpart", def.str());
  }
  if (!a.region_pred.empty()) {
    if (a.box.empty())
      throw CLI::ValidationError("--region-pred needs --box for its bounds");
    sc.region_defs.emplace_back("pred", "pred main " + a.region_pred);
    sc.region_use = "pred";
  }
  if (!a.method.empty()) sc.settings.method = method_from_name(a.method);
  if (a.rel_tol > 0.0) sc.settings.rel_tol = a.rel_tol;
  if (a.abs_tol > 0.0) sc.settings.abs_tol = a.abs_tol;
  if (a.max_depth > 0) sc.settings.max_depth = a.max_depth;
  if (a.samples > 0) sc.settings.sample_count = a.samples;
  if (a.seed >= 0) sc.settings.seed = static_cast<std::uint64_t>(a.seed);
  sc.settings.strict = a.strict;
  sc.report_path = a.out;
  sc.csv_path = a.csv;
  sc.summary_path = a.summary;
}

struct FieldArgs {
  std::string f, g, h, field;
  std::vector<double> f_bounds, g_bounds, h_bounds;
  double f_floor = 0.0, g_floor = 0.0;
  std::string f_mask, g_mask, h_mask;
};

void add_fields(CLI::App* cmd, FieldArgs& fa, bool with_fg, bool with_h) {
  if (with_fg) {
    cmd->add_option("--f", fa.f, "Field f");
    cmd->add_option("--f-bounds", fa.f_bounds, "Declared bounds of f: lo hi")->expected(2);
    cmd->add_option("--f-floor", fa.f_floor, "Positivity floor of f");
    cmd->add_option("--f-mask", fa.f_mask, "Zero f outside this predicate");
    cmd->add_option("--g", fa.g, "Field g");
    cmd->add_option("--g-bounds", fa.g_bounds, "Declared bounds of g: lo hi")->expected(2);
    cmd->add_option("--g-floor", fa.g_floor, "Positivity floor of g");
    cmd->add_option("--g-mask", fa.g_mask, "Zero g outside this predicate");
  }
  if (with_h) {
    cmd->add_option("--h", fa.h, "Field h");
    cmd->add_option("--h-bounds", fa.h_bounds, "Declared bounds of h: lo hi")->expected(2);
    cmd->add_option("--h-mask", fa.h_mask, "Zero h outside this predicate");
  }
}

void apply_fields(Scenario& sc, const FieldArgs& fa) {
  auto put = [&](const std::string& name, const std::string& expr,
                 const std::vector<double>& bounds, double floor,
                 const std::string& mask) {
    if (expr.empty()) return;
    Scenario::FieldDef def;
    def.expr = expr;
    if (bounds.size() == 2) {
      def.lower = bounds[0];
      def.upper = bounds[1];
    }
    if (floor > 0.0) def.floor = floor;
    def.mask = mask;
    sc.fields[name] = def;
  };
  put("f", fa.f, fa.f_bounds, fa.f_floor, fa.f_mask);
  put("g", fa.g, fa.g_bounds, fa.g_floor, fa.g_mask);
  put("h", fa.h, fa.h_bounds, 0.0, fa.h_mask);
  put("field", fa.field, {}, 0.0, "");
}

int dispatch(const Scenario& sc) { return execute_scenario(sc, std::cout); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for weighted orthogonal expansions and integral "
               "inequalities over bounded regions"};
  app.set_help_flag("--help", "Print help");
  app.require_subcommand(1);

  // run <scenario>
  std::string scenario_path;
  CommonArgs run_common;
  auto* cmd_run = app.add_subcommand("run", "Run a scenario file");
  cmd_run->add_option("scenario", scenario_path, "Scenario file path")->required();
  cmd_run->add_option("--out", run_common.out, "Override the report path");
  cmd_run->add_option("--csv", run_common.csv, "Override the CSV path");
  cmd_run->add_option("--summary", run_common.summary, "Override the summary path");

  struct Sub {
    CLI::App* cmd;
    CommonArgs common;
    FieldArgs fields;
    std::string seeds, psi_seeds, cell_seeds;
    int n = 0;
    bool diagnostics = false;
    int partition_depth = 0;
    double zeta = 0.0;
    std::vector<std::string> cells;
  };
  std::map<std::string, Sub> subs;

  auto make_sub = [&](const std::string& name, const std::string& desc, bool fg,
                      bool h, bool family, bool psi, bool partition) -> Sub& {
    Sub& s = subs[name];
    s.cmd = app.add_subcommand(name, desc);
    s.cmd->set_help_flag("--help", "Print help");
    add_common(s.cmd, s.common);
    add_fields(s.cmd, s.fields, fg, h);
    if (name == "integrate")
      s.cmd->add_option("--field", s.fields.field, "Field to integrate");
    if (family) {
      s.cmd->add_option("--seeds", s.seeds, "Family seeds, '|'-separated expressions");
      s.cmd->add_option("--n", s.n, "Truncation order (default: family size)");
    }
    if (psi) {
      s.cmd->add_option("--psi-seeds", s.psi_seeds,
                        "Seeds of the second family (default: same as --seeds)");
      s.cmd->add_flag("--diagnostics", s.diagnostics,
                      "Compute the proof-chain diagnostics");
    }
    if (partition) {
      s.cmd->add_option("--partition-depth", s.partition_depth,
                        "Sign-partition subdivision depth");
      s.cmd->add_option("--zeta", s.zeta, "Zero threshold for sign classification");
      s.cmd->add_option("--cell", s.cells,
                        "Manual partition cell: '<sign> box lo1 hi1 ...' (repeatable)");
      s.cmd->add_option("--cell-seeds", s.cell_seeds,
                        "Per-cell seed expressions, '|'-separated");
    }
    return s;
  };

  make_sub("integrate", "Integrate a field over a region", true, false, false, false,
           false);
  make_sub("orthogonalize", "Orthogonalize seeds against the weight 1/f", true, false,
           true, false, false);
  make_sub("expand", "Expand f over the family built from the seeds", true, false, true,
           false, false);
  make_sub("parseval", "Full-family residual against the integral of f", true, false,
           true, false, false);
  make_sub("partition-parseval",
           "Sign-partition the region and assemble the integral cell by cell", true,
           false, false, false, true);
  make_sub("cauchy-schwarz", "Gap of the integral Cauchy-Schwarz inequality", true, true,
           false, false, false);
  make_sub("product-criterion",
           "Sufficient-condition grid for the product inequality", true, false, true,
           true, false);
  make_sub("corollary", "Fourth-moment bound and its per-function sub-conditions", true,
           false, true, true, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      Scenario sc = parse_scenario_file(scenario_path);
      if (!run_common.out.empty()) sc.report_path = run_common.out;
      if (!run_common.csv.empty()) sc.csv_path = run_common.csv;
      if (!run_common.summary.empty()) sc.summary_path = run_common.summary;
      return dispatch(sc);
    }
    for (auto& [name, s] : subs) {
      if (!s.cmd->parsed()) continue;
      Scenario sc;
      sc.task = name;
      apply_common(sc, s.common);
      apply_fields(sc, s.fields);
      auto split_exprs = [](const std::string& text) {
        std::vector<std::string> out;
        std::istringstream is(text);
        std::string cur;
        while (std::getline(is, cur, '|')) {
          std::size_t a = cur.find_first_not_of(" \t");
          std::size_t b = cur.find_last_not_of(" \t");
          if (a != std::string::npos) out.push_back(cur.substr(a, b - a + 1));
        }
        return out;
      };
      if (!s.seeds.empty()) sc.seeds = split_exprs(s.seeds);
      if (!s.psi_seeds.empty()) sc.psi_seeds = split_exprs(s.psi_seeds);
      if (!s.cell_seeds.empty()) sc.cell_seeds = split_exprs(s.cell_seeds);
      sc.truncation = s.n;
      sc.diagnostics = s.diagnostics;
      sc.partition_depth = s.partition_depth;
      sc.zeta = s.zeta;
      sc.manual_cells = s.cells;
      return dispatch(sc);
    }
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
