#include "mufourier/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mufourier {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::vector<double> parse_numbers(const std::string& s, int line) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw ScenarioError("expected a number, got '" + tok + "'", line);
    out.push_back(v);
  }
  return out;
}

double parse_one_number(const std::string& s, int line) {
  auto v = parse_numbers(s, line);
  if (v.size() != 1) throw ScenarioError("expected exactly one number", line);
  return v[0];
}

long parse_integer(const std::string& s, int line) {
  double v = parse_one_number(s, line);
  if (v != std::floor(v)) throw ScenarioError("expected an integer", line);
  return static_cast<long>(v);
}

bool parse_flag(const std::string& s, int line) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ScenarioError("expected true/false, got '" + s + "'", line);
}

const std::vector<std::string> kTasks = {
    "integrate",          "orthogonalize", "expand",
    "parseval",           "partition-parseval", "cauchy-schwarz",
    "product-criterion",  "corollary"};

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  Scenario sc;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line_no = 0;

  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ScenarioError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ScenarioError("expected 'key = value'", line_no);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ScenarioError("missing key before '='", line_no);

    if (section == "scenario") {
      if (key == "task") {
        bool known = false;
        for (const auto& t : kTasks) known = known || t == value;
        if (!known) throw ScenarioError("unknown task '" + value + "'", line_no);
        sc.task = value;
      } else if (key == "dim") {
        sc.dim = static_cast<int>(parse_integer(value, line_no));
        if (sc.dim < 1) throw ScenarioError("dim must be >= 1", line_no);
      } else {
        throw ScenarioError("unknown [scenario] key '" + key + "'", line_no);
      }
    } else if (section == "region") {
      if (key == "use") sc.region_use = value;
      else sc.region_defs.emplace_back(key, value);
    } else if (section == "fields") {
      std::size_t dot = key.find('.');
      if (dot == std::string::npos) {
        sc.fields[key].expr = value;
      } else {
        std::string name = key.substr(0, dot);
        std::string attr = key.substr(dot + 1);
        auto& def = sc.fields[name];
        if (attr == "floor") def.floor = parse_one_number(value, line_no);
        else if (attr == "bounds") {
          auto b = parse_numbers(value, line_no);
          if (b.size() != 2) throw ScenarioError("bounds needs 'lo hi'", line_no);
          def.lower = b[0];
          def.upper = b[1];
        } else if (attr == "mask") def.mask = value;
        else throw ScenarioError("unknown field attribute '" + attr + "'", line_no);
      }
    } else if (section == "family") {
      if (key == "seeds") sc.seeds = split(value, '|');
      else if (key == "psi_seeds") sc.psi_seeds = split(value, '|');
      else if (key == "n") sc.truncation = static_cast<int>(parse_integer(value, line_no));
      else if (key == "diagnostics") sc.diagnostics = parse_flag(value, line_no);
      else throw ScenarioError("unknown [family] key '" + key + "'", line_no);
    } else if (section == "partition") {
      if (key == "depth") sc.partition_depth = static_cast<int>(parse_integer(value, line_no));
      else if (key == "zeta") sc.zeta = parse_one_number(value, line_no);
      else if (key == "cell") sc.manual_cells.push_back(value);
      else if (key == "seeds") sc.cell_seeds = split(value, '|');
      else throw ScenarioError("unknown [partition] key '" + key + "'", line_no);
    } else if (section == "integrator") {
      if (key == "method") sc.settings.method = method_from_name(value);
      else if (key == "rel_tol") sc.settings.rel_tol = parse_one_number(value, line_no);
      else if (key == "abs_tol") sc.settings.abs_tol = parse_one_number(value, line_no);
      else if (key == "max_depth")
        sc.settings.max_depth = static_cast<int>(parse_integer(value, line_no));
      else if (key == "samples") sc.settings.sample_count = parse_integer(value, line_no);
      else if (key == "seed")
        sc.settings.seed = static_cast<std::uint64_t>(parse_integer(value, line_no));
      else if (key == "strict") sc.settings.strict = parse_flag(value, line_no);
      else throw ScenarioError("unknown [integrator] key '" + key + "'", line_no);
    } else if (section == "output") {
      if (key == "report") sc.report_path = value;
      else if (key == "summary") sc.summary_path = value;
      else if (key == "csv") sc.csv_path = value;
      else throw ScenarioError("unknown [output] key '" + key + "'", line_no);
    } else if (section.empty()) {
      throw ScenarioError("key outside any [section]", line_no);
    } else {
      throw ScenarioError("unknown section [" + section + "]", line_no);
    }
  }

  if (sc.task.empty()) throw ScenarioError("missing task (set [scenario] task = ...)", 1);
  if (sc.dim == 0) throw ScenarioError("missing dimension (set [scenario] dim = ...)", 1);
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

namespace {

// ---- scenario resolution --------------------------------------------------

struct Resolved {
  Region region;
  std::map<std::string, Region> named_regions;
};

Region resolve_region(const Scenario& sc) {
  if (sc.region_defs.empty())
    throw std::invalid_argument("scenario defines no region");
  std::map<std::string, Region> named;
  for (const auto& [name, def] : sc.region_defs) {
    std::istringstream is(def);
    std::string kind;
    is >> kind;
    std::string rest;
    std::getline(is, rest);
    rest = trim(rest);
    auto lookup = [&](const std::string& n) -> const Region& {
      auto it = named.find(n);
      if (it == named.end())
        throw std::invalid_argument("region '" + n + "' referenced before definition");
      return it->second;
    };
    if (kind == "box") {
      auto nums = parse_numbers(rest, 0);
      if (nums.size() != static_cast<std::size_t>(2 * sc.dim))
        throw std::invalid_argument("box needs lo/hi per axis: 2*dim numbers");
      std::vector<double> lo(sc.dim), hi(sc.dim);
      for (int i = 0; i < sc.dim; ++i) {
        lo[i] = nums[2 * i];
        hi[i] = nums[2 * i + 1];
      }
      named.emplace(name, Region::box(Box(lo, hi)));
    } else if (kind == "ball") {
      auto nums = parse_numbers(rest, 0);
      if (nums.size() != static_cast<std::size_t>(sc.dim + 1))
        throw std::invalid_argument("ball needs center coordinates plus radius");
      std::vector<double> c(nums.begin(), nums.end() - 1);
      named.emplace(name, Region::ball(c, nums.back()));
    } else if (kind == "pred") {
      std::istringstream rs(rest);
      std::string bounds_name;
      rs >> bounds_name;
      std::string expr;
      std::getline(rs, expr);
      expr = trim(expr);
      if (expr.empty()) throw std::invalid_argument("pred needs '<bounds-region> <expr>'");
      named.emplace(name, Region::predicate(lookup(bounds_name).bounds(),
                                            parse_predicate(expr, sc.dim)));
    } else if (kind == "union" || kind == "inter" || kind == "diff") {
      std::istringstream rs(rest);
      std::string a, b;
      rs >> a >> b;
      if (a.empty() || b.empty())
        throw std::invalid_argument(kind + " needs two region names");
      const Region& ra = lookup(a);
      const Region& rb = lookup(b);
      named.emplace(name, kind == "union"   ? region_union(ra, rb)
                          : kind == "inter" ? region_intersection(ra, rb)
                                            : region_difference(ra, rb));
    } else {
      throw std::invalid_argument("unknown region kind '" + kind +
                                  "' (box | ball | pred | union | inter | diff)");
    }
  }
  std::string use = sc.region_use;
  if (use.empty()) use = sc.region_defs.back().first;
  auto it = named.find(use);
  if (it == named.end())
    throw std::invalid_argument("region '" + use + "' is not defined");
  return it->second;
}

ScalarField resolve_field(const Scenario& sc, const std::string& name) {
  auto it = sc.fields.find(name);
  if (it == sc.fields.end() || it->second.expr.empty())
    throw std::invalid_argument("task needs field '" + name + "'");
  const auto& def = it->second;
  ScalarField f = parse_field(def.expr, sc.dim);
  if (def.lower && def.upper) f = f.with_bounds(*def.lower, *def.upper);
  if (def.floor) f = f.with_floor(*def.floor);
  if (!def.mask.empty()) {
    Region r = Region::predicate(resolve_region(sc).bounds(),
                                 parse_predicate(def.mask, sc.dim));
    f = masked(f, r);
  }
  return f;
}

std::vector<ScalarField> resolve_seeds(const Scenario& sc,
                                       const std::vector<std::string>& exprs) {
  std::vector<ScalarField> out;
  for (const auto& e : exprs)
    if (!e.empty()) out.push_back(parse_field(e, sc.dim));
  if (out.empty()) throw std::invalid_argument("task needs nonempty family seeds");
  return out;
}

// ---- json helpers ----------------------------------------------------------

ordered_json json_estimate(const Estimate& e) {
  return {{"value", e.value}, {"err", e.err}};
}

ordered_json json_integral(const IntegralEstimate& e) {
  ordered_json j{{"value", e.value},
                 {"err", e.err},
                 {"evals", e.evals},
                 {"method", method_name(e.method)}};
  if (e.method == Method::stochastic) j["seed"] = e.seed;
  return j;
}

ordered_json json_comparison(const Comparison& c) {
  return {{"relation", c.rel == Relation::LE ? "<=" : ">="},
          {"lhs", c.lhs},
          {"lhs_err", c.lhs_err},
          {"rhs", c.rhs},
          {"rhs_err", c.rhs_err},
          {"margin", c.margin},
          {"slack", c.slack},
          {"holds", c.holds},
          {"verdict", verdict_name(c.verdict)}};
}

ordered_json json_coefficient(const CoefficientEstimate& c) {
  return {{"value", c.value},
          {"err", c.err},
          {"numerator", json_integral(c.numerator)},
          {"denominator", json_integral(c.denominator)}};
}

std::string describe_comparison(const std::string& name, const Comparison& c) {
  std::ostringstream os;
  os << name << ": " << format_double(c.lhs) << " "
     << (c.rel == Relation::LE ? "<=" : ">=") << " " << format_double(c.rhs)
     << "  margin " << format_double(c.margin) << " (slack " << format_double(c.slack)
     << ") -> " << verdict_name(c.verdict);
  return os.str();
}

// A named property check; any failing check turns the exit code to 2.
struct CheckSet {
  std::vector<std::pair<std::string, Comparison>> checks;

  void add(const std::string& name, const Comparison& c) { checks.emplace_back(name, c); }

  bool all_hold() const {
    for (const auto& [name, c] : checks)
      if (!c.holds) return false;
    return true;
  }

  ordered_json to_json() const {
    ordered_json arr = ordered_json::array();
    for (const auto& [name, c] : checks) {
      ordered_json j = json_comparison(c);
      j["name"] = name;
      arr.push_back(std::move(j));
    }
    return arr;
  }
};

Comparison nonneg_check(const Estimate& e, double abs_tol) {
  return compare(Relation::GE, e, Estimate{0.0, 0.0}, abs_tol);
}

Comparison close_check(const Estimate& a, const Estimate& b, double abs_tol) {
  // |a - b| <= combined err, phrased as a LE comparison.
  return compare(Relation::LE, Estimate{std::fabs(a.value - b.value), 0.0},
                 Estimate{0.0, a.err + b.err}, abs_tol);
}

// ---- task runners ----------------------------------------------------------

struct TaskContext {
  const Scenario& sc;
  Region region;
  ordered_json results;
  CheckSet checks;
  std::ostringstream summary;
  std::string csv;
};

ScalarField weighted_function(const Scenario& sc, const std::string& name) {
  ScalarField f = resolve_field(sc, name);
  if (!f.positivity_floor)
    throw std::invalid_argument("field '" + name +
                                "' needs a positivity floor (set " + name +
                                ".floor or positive " + name + ".bounds)");
  return f;
}

int family_truncation(const Scenario& sc, const OrthogonalFamily& fam) {
  int K = static_cast<int>(fam.members.size());
  if (sc.truncation == 0) return K;
  if (sc.truncation < 1 || sc.truncation > K)
    throw std::invalid_argument("truncation n is out of range for the family");
  return sc.truncation;
}

void run_integrate(TaskContext& ctx) {
  ScalarField f = resolve_field(ctx.sc, ctx.sc.fields.count("f") ? "f" : "field");
  IntegralEstimate est = integrate(f, ctx.region, ctx.sc.settings);
  ctx.results["integral"] = json_integral(est);
  ctx.summary << "integral = " << format_double(est.value) << " +- "
              << format_double(est.err) << "  (" << est.evals << " evaluations)\n";
}

void run_cauchy_schwarz(TaskContext& ctx) {
  ScalarField g = resolve_field(ctx.sc, "g");
  ScalarField h = resolve_field(ctx.sc, "h");
  Estimate gap = cauchy_schwarz_gap(g, h, ctx.region, ctx.sc.settings);
  ctx.results["gap"] = json_estimate(gap);
  Comparison nonneg = nonneg_check(gap, ctx.sc.settings.abs_tol);
  ctx.checks.add("cauchy_schwarz_nonnegative", nonneg);
  bool equality = std::fabs(gap.value) <= gap.err + ctx.sc.settings.abs_tol;
  ctx.results["equality_within_tolerance"] = equality;
  ctx.summary << "cauchy-schwarz gap = " << format_double(gap.value) << " +- "
              << format_double(gap.err)
              << (equality ? "  [equality within tolerance]\n" : "\n");
}

OrthogonalFamily build_family(TaskContext& ctx, const ScalarField& f,
                              const std::vector<std::string>& seed_exprs) {
  auto seeds = resolve_seeds(ctx.sc, seed_exprs);
  return gram_schmidt(seeds, reciprocal(f), ctx.region, ctx.sc.settings);
}

void summarize_family(TaskContext& ctx, const OrthogonalFamily& fam) {
  ordered_json members = ordered_json::array();
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    members.push_back({{"expr", fam.members[i].describe()},
                       {"norm2", json_integral(fam.norms[i])}});
  }
  ctx.results["members"] = std::move(members);
  ctx.results["residual"] = fam.residual;
  ctx.results["dropped"] = fam.dropped;
}

void run_orthogonalize(TaskContext& ctx) {
  ScalarField w;
  if (ctx.sc.fields.count("f")) {
    w = reciprocal(weighted_function(ctx.sc, "f"));
  } else {
    w = constant(ctx.sc.dim, 1.0);
  }
  auto seeds = resolve_seeds(ctx.sc, ctx.sc.seeds);
  GramSchmidtOptions opt;
  OrthogonalFamily fam;
  try {
    fam = gram_schmidt(seeds, w, ctx.region, ctx.sc.settings, opt);
  } catch (const std::runtime_error& e) {
    // Certification failure is a property violation, not an input error.
    ctx.checks.add("orthogonality_certificate",
                   compare(Relation::LE, Estimate{1.0, 0.0}, Estimate{0.0, 0.0},
                           ctx.sc.settings.abs_tol));
    ctx.summary << "orthogonalization failed: " << e.what() << "\n";
    return;
  }
  summarize_family(ctx, fam);
  ctx.checks.add("orthogonality_certificate",
                 compare(Relation::LE, Estimate{fam.residual, 0.0},
                         Estimate{opt.ortho_tol, 0.0}, 0.0));
  ctx.summary << "family of " << fam.members.size() << " members, residual "
              << format_double(fam.residual) << ", dropped " << fam.dropped.size()
              << " seed(s)\n";
  for (std::size_t i = 0; i < fam.members.size(); ++i)
    ctx.summary << "  phi_" << (i + 1) << " = " << fam.members[i].describe() << "\n";
}

void run_expand(TaskContext& ctx) {
  ScalarField f = weighted_function(ctx.sc, "f");
  OrthogonalFamily fam = build_family(ctx, f, ctx.sc.seeds);
  Expansion X = expand(f, fam, ctx.sc.settings);
  int N = family_truncation(ctx.sc, fam);

  summarize_family(ctx, fam);
  ordered_json coeffs = ordered_json::array();
  for (const auto& c : X.coeffs) coeffs.push_back(json_coefficient(c));
  ctx.results["coefficients"] = std::move(coeffs);

  ordered_json by_order = ordered_json::array();
  Estimate prev_gap;
  for (int n = 0; n <= N; ++n) {
    Estimate msd = mean_square_deviation(X, n, ctx.sc.settings);
    Estimate gap = bessel_gap(X, n, ctx.sc.settings);
    by_order.push_back({{"N", n},
                        {"mean_square_deviation", json_estimate(msd)},
                        {"bessel_gap", json_estimate(gap)}});
    ctx.checks.add("deviation_nonnegative_N" + std::to_string(n),
                   nonneg_check(msd, ctx.sc.settings.abs_tol));
    ctx.checks.add("bessel_gap_nonnegative_N" + std::to_string(n),
                   nonneg_check(gap, ctx.sc.settings.abs_tol));
    ctx.checks.add("deviation_equals_gap_N" + std::to_string(n),
                   close_check(msd, gap, ctx.sc.settings.abs_tol));
    if (n > 0)
      ctx.checks.add("gap_nonincreasing_N" + std::to_string(n),
                     compare(Relation::LE, gap, prev_gap, ctx.sc.settings.abs_tol));
    prev_gap = gap;
    if (n == N) {
      ctx.summary << "N=" << n << ": deviation " << format_double(msd.value) << " +- "
                  << format_double(msd.err) << ", bessel gap " << format_double(gap.value)
                  << " +- " << format_double(gap.err) << "\n";
    }
  }
  ctx.results["by_order"] = std::move(by_order);
  for (std::size_t i = 0; i < X.coeffs.size(); ++i)
    ctx.summary << "  c_" << (i + 1) << " = " << format_double(X.coeffs[i].value)
                << " +- " << format_double(X.coeffs[i].err) << "\n";
}

void run_parseval(TaskContext& ctx) {
  ScalarField f = weighted_function(ctx.sc, "f");
  OrthogonalFamily fam = build_family(ctx, f, ctx.sc.seeds);
  Expansion X = expand(f, fam, ctx.sc.settings);

  Estimate residual = parseval_residual(X, ctx.sc.settings);
  Estimate msd_full = mean_square_deviation(X, X.size(), ctx.sc.settings);
  IntegralEstimate int_f = integrate(f, ctx.region, ctx.sc.settings);
  double existence_tol = 1e-6 * std::fabs(int_f.value);

  summarize_family(ctx, fam);
  ordered_json coeffs = ordered_json::array();
  for (const auto& c : X.coeffs) coeffs.push_back(json_coefficient(c));
  ctx.results["coefficients"] = std::move(coeffs);
  ctx.results["integral_f"] = json_integral(int_f);
  ctx.results["residual"] = json_estimate(residual);
  ctx.results["mean_square_deviation_full"] = json_estimate(msd_full);
  ctx.results["existence_tol"] = existence_tol;
  bool expansion_exists = msd_full.value <= existence_tol + msd_full.err;
  ctx.results["expansion_exists"] = expansion_exists;

  ctx.checks.add("deviation_nonnegative", nonneg_check(msd_full, ctx.sc.settings.abs_tol));
  if (expansion_exists) {
    ctx.checks.add("parseval_residual_vanishes",
                   close_check(residual, Estimate{0.0, 0.0}, ctx.sc.settings.abs_tol));
  }
  ctx.summary << "parseval residual = " << format_double(residual.value) << " +- "
              << format_double(residual.err) << "\n"
              << "full-family deviation = " << format_double(msd_full.value)
              << (expansion_exists ? "  [expansion exists within tolerance]\n"
                                   : "  [family does not reproduce f]\n");
}

SignPartition build_partition(TaskContext& ctx, const ScalarField& f) {
  double zeta = ctx.sc.zeta > 0.0 ? ctx.sc.zeta : default_zeta(f);
  if (!ctx.sc.manual_cells.empty()) {
    SignPartition P;
    P.parent = ctx.region;
    P.zeta = zeta;
    for (const auto& text : ctx.sc.manual_cells) {
      std::istringstream is(text);
      std::string sign_tok, kind;
      is >> sign_tok >> kind;
      if (kind != "box")
        throw std::invalid_argument("manual partition cells must be boxes");
      std::string rest;
      std::getline(is, rest);
      auto nums = parse_numbers(trim(rest), 0);
      if (nums.size() != static_cast<std::size_t>(2 * ctx.sc.dim))
        throw std::invalid_argument("cell box needs 2*dim numbers");
      std::vector<double> lo(ctx.sc.dim), hi(ctx.sc.dim);
      for (int i = 0; i < ctx.sc.dim; ++i) {
        lo[i] = nums[2 * i];
        hi[i] = nums[2 * i + 1];
      }
      SignedCell cell;
      cell.box = Box(lo, hi);
      if (sign_tok == "+1" || sign_tok == "+") cell.sign = 1;
      else if (sign_tok == "-1" || sign_tok == "-") cell.sign = -1;
      else if (sign_tok == "0") cell.sign = 0;
      else throw std::invalid_argument("cell sign must be +1, -1, or 0");
      cell.region = region_intersection(Region::box(cell.box), ctx.region);
      P.cells.push_back(std::move(cell));
    }
    return P;
  }
  int depth = ctx.sc.partition_depth > 0
                  ? ctx.sc.partition_depth
                  : ctx.sc.settings.effective_depth(ctx.sc.dim);
  return sign_partition(f, ctx.region, depth, zeta, ctx.sc.settings.seed);
}

void run_partition_parseval(TaskContext& ctx) {
  ScalarField f = resolve_field(ctx.sc, "f");
  SignPartition P = build_partition(ctx, f);

  std::vector<std::vector<ScalarField>> seed_sets;
  if (!ctx.sc.cell_seeds.empty()) {
    auto shared = resolve_seeds(ctx.sc, ctx.sc.cell_seeds);
    seed_sets.assign(P.cells.size(), shared);
  }
  PartitionReport rep = partitioned_parseval(f, P, seed_sets, ctx.sc.settings);

  ordered_json cells = ordered_json::array();
  for (const auto& c : rep.cells) {
    cells.push_back({{"cell_id", c.cell_id},
                     {"sign", c.sign},
                     {"coefficients", c.coefficients},
                     {"coefficient_errs", c.coefficient_errs},
                     {"cell_parseval", json_estimate(c.cell_parseval)},
                     {"cell_integral", json_estimate(c.cell_integral)}});
  }
  ctx.results["cells"] = std::move(cells);
  ctx.results["cell_count"] = P.cells.size();
  ctx.results["unresolved_count"] = P.unresolved.size();
  ctx.results["total"] = json_estimate(rep.total);
  ctx.results["direct_integral"] = json_estimate(rep.direct_integral);
  ctx.results["discrepancy"] = rep.discrepancy;
  ctx.results["unresolved_volume"] = rep.unresolved_volume;
  ctx.results["unresolved_bound"] = rep.unresolved_bound;

  // The two routes agree up to their errors plus what the unresolved
  // volume may hide.
  Estimate lhs{std::fabs(rep.discrepancy), 0.0};
  Estimate rhs{rep.unresolved_bound, rep.total.err + rep.direct_integral.err};
  ctx.checks.add("partition_total_matches_direct",
                 compare(Relation::LE, lhs, rhs, ctx.sc.settings.abs_tol));

  ctx.summary << "partitioned total = " << format_double(rep.total.value) << " +- "
              << format_double(rep.total.err) << "\n"
              << "direct integral  = " << format_double(rep.direct_integral.value)
              << " +- " << format_double(rep.direct_integral.err) << "\n"
              << "discrepancy = " << format_double(rep.discrepancy)
              << ", unresolved volume " << format_double(rep.unresolved_volume)
              << " (bound " << format_double(rep.unresolved_bound) << ")\n"
              << P.cells.size() << " signed cells, " << P.unresolved.size()
              << " unresolved\n";
}

void run_product_criterion(TaskContext& ctx) {
  ScalarField f = weighted_function(ctx.sc, "f");
  ScalarField g = weighted_function(ctx.sc, "g");
  OrthogonalFamily Phi = build_family(ctx, f, ctx.sc.seeds);
  OrthogonalFamily Psi = build_family(
      ctx, g, ctx.sc.psi_seeds.empty() ? ctx.sc.seeds : ctx.sc.psi_seeds);
  int N = std::min(family_truncation(ctx.sc, Phi), family_truncation(ctx.sc, Psi));

  CriterionReport rep = product_criterion_check(f, g, Phi, Psi, N, ctx.region,
                                                ctx.sc.settings, ctx.sc.diagnostics);

  ordered_json grid = ordered_json::array();
  for (const auto& pr : rep.grid) {
    grid.push_back({{"n", pr.n},
                    {"m", pr.m},
                    {"crit_a", json_comparison(pr.crit_a)},
                    {"crit_b", json_comparison(pr.crit_b)}});
  }
  ctx.results["truncation"] = rep.truncation;
  ctx.results["grid"] = std::move(grid);
  ordered_json cj = ordered_json::array(), dj = ordered_json::array();
  for (const auto& c : rep.c) cj.push_back(json_coefficient(c));
  for (const auto& d : rep.d) dj.push_back(json_coefficient(d));
  ctx.results["c"] = std::move(cj);
  ctx.results["d"] = std::move(dj);
  ctx.results["conclusion"] = json_comparison(rep.conclusion);
  ctx.results["measure"] = json_estimate(rep.measure);
  ctx.results["all_flags_hold"] = rep.all_flags_hold;
  ctx.results["all_flags_decisive"] = rep.all_flags_decisive;

  if (rep.diagnostics) {
    const auto& d = *rep.diagnostics;
    ctx.results["diagnostics"] = {
        {"product_deviation", json_estimate(d.product_deviation)},
        {"expanded_form", json_estimate(d.expanded_form)},
        {"after_term_bound", json_estimate(d.after_term_bound)},
        {"bessel_double_sum", json_estimate(d.bessel_double_sum)},
        {"chain", json_comparison(d.chain)},
        {"double_bessel", json_comparison(d.double_bessel)}};
    ctx.checks.add("diagnostic_chain", d.chain);
    ctx.checks.add("diagnostic_double_bessel", d.double_bessel);
    ctx.checks.add("diagnostic_deviation_nonnegative",
                   nonneg_check(d.product_deviation, ctx.sc.settings.abs_tol));
  }

  // Soundness: decisively satisfied hypotheses must not see the
  // conclusion fail decisively.
  if (rep.all_flags_decisive) {
    ctx.checks.add("sufficient_condition_soundness", rep.conclusion);
  }

  ctx.summary << describe_comparison("conclusion  int(fg) >= int(f)int(g)",
                                     rep.conclusion)
              << "\n";
  ctx.summary << "measure(D) = " << format_double(rep.measure.value) << "\n";
  for (const auto& pr : rep.grid)
    ctx.summary << "  (" << pr.n << "," << pr.m
                << ") critA: " << verdict_name(pr.crit_a.verdict)
                << ", critB: " << verdict_name(pr.crit_b.verdict) << "\n";

  // CSV grid: rows n, columns m, cell = critA/critB/both flags.
  std::ostringstream csv;
  csv << "n\\m";
  for (int m = 1; m <= N; ++m) csv << "," << m;
  csv << "\n";
  for (int n = 1; n <= N; ++n) {
    csv << n;
    for (int m = 1; m <= N; ++m) {
      const auto& pr = rep.grid[static_cast<std::size_t>((n - 1) * N + (m - 1))];
      csv << ",A=" << pr.crit_a.holds << ";B=" << pr.crit_b.holds
          << ";ok=" << (pr.crit_a.holds && pr.crit_b.holds);
    }
    csv << "\n";
  }
  ctx.csv = csv.str();
}

void run_corollary(TaskContext& ctx) {
  ScalarField f = weighted_function(ctx.sc, "f");
  ScalarField g = weighted_function(ctx.sc, "g");
  OrthogonalFamily Phi = build_family(ctx, f, ctx.sc.seeds);
  OrthogonalFamily Psi = build_family(
      ctx, g, ctx.sc.psi_seeds.empty() ? ctx.sc.seeds : ctx.sc.psi_seeds);
  int N = std::min(family_truncation(ctx.sc, Phi), family_truncation(ctx.sc, Psi));

  CorollaryReport rep = corollary_check(f, g, Phi, Psi, N, ctx.region, ctx.sc.settings);

  ordered_json phi_sub = ordered_json::array(), psi_sub = ordered_json::array();
  for (const auto& c : rep.phi_subcond) phi_sub.push_back(json_comparison(c));
  for (const auto& c : rep.psi_subcond) psi_sub.push_back(json_comparison(c));
  ordered_json grid = ordered_json::array();
  for (const auto& rec : rep.grid) {
    grid.push_back({{"n", rec.n},
                    {"m", rec.m},
                    {"cs_bound", json_comparison(rec.cs_bound)},
                    {"certified", rec.certified}});
    ctx.checks.add("cs_bound_" + std::to_string(rec.n) + "_" + std::to_string(rec.m),
                   rec.cs_bound);
  }
  ctx.results["truncation"] = rep.truncation;
  ctx.results["phi_subcond"] = std::move(phi_sub);
  ctx.results["psi_subcond"] = std::move(psi_sub);
  ctx.results["grid"] = std::move(grid);

  for (const auto& rec : rep.grid)
    ctx.summary << "(" << rec.n << "," << rec.m
                << ") bound: " << verdict_name(rec.cs_bound.verdict)
                << (rec.certified ? " [certified by sub-conditions]" : "") << "\n";
  for (int n = 0; n < N; ++n)
    ctx.summary << describe_comparison("phi sub-condition n=" + std::to_string(n + 1),
                                       rep.phi_subcond[static_cast<std::size_t>(n)])
                << "\n";

  std::ostringstream csv;
  csv << "n\\m";
  for (int m = 1; m <= N; ++m) csv << "," << m;
  csv << "\n";
  for (int n = 1; n <= N; ++n) {
    csv << n;
    for (int m = 1; m <= N; ++m) {
      const auto& rec = rep.grid[static_cast<std::size_t>((n - 1) * N + (m - 1))];
      csv << ",bound=" << rec.cs_bound.holds << ";cert=" << rec.certified;
    }
    csv << "\n";
  }
  ctx.csv = csv.str();
}

}  // namespace

RunOutput run_scenario(const Scenario& sc) {
  sc.settings.validate();
  TaskContext ctx{sc, resolve_region(sc), ordered_json::object(), {}, {}, {}};

  if (ctx.region.dim() != sc.dim)
    throw std::invalid_argument("region dimension does not match the scenario");

  if (sc.task == "integrate") run_integrate(ctx);
  else if (sc.task == "orthogonalize") run_orthogonalize(ctx);
  else if (sc.task == "expand") run_expand(ctx);
  else if (sc.task == "parseval") run_parseval(ctx);
  else if (sc.task == "partition-parseval") run_partition_parseval(ctx);
  else if (sc.task == "cauchy-schwarz") run_cauchy_schwarz(ctx);
  else if (sc.task == "product-criterion") run_product_criterion(ctx);
  else if (sc.task == "corollary") run_corollary(ctx);
  else throw std::invalid_argument("unknown task '" + sc.task + "'");

  RunOutput out;
  out.exit_code = ctx.checks.all_hold() ? 0 : 2;

  ordered_json report;
  report["task"] = sc.task;
  report["dim"] = sc.dim;
  report["region"] = ctx.region.describe();
  report["settings"] = {{"method", method_name(sc.settings.method)},
                        {"rel_tol", sc.settings.rel_tol},
                        {"abs_tol", sc.settings.abs_tol},
                        {"max_depth", sc.settings.effective_depth(sc.dim)},
                        {"samples", sc.settings.sample_count},
                        {"seed", sc.settings.seed},
                        {"strict", sc.settings.strict}};
  report["results"] = std::move(ctx.results);
  report["checks"] = ctx.checks.to_json();
  report["exit"] = out.exit_code;
  out.report = std::move(report);

  std::ostringstream summary;
  summary << "task: " << sc.task << " on " << ctx.region.describe() << "\n";
  summary << ctx.summary.str();
  for (const auto& [name, c] : ctx.checks.checks)
    summary << "[" << (c.holds ? "ok" : "VIOLATED") << "] " << name << " (margin "
            << format_double(c.margin) << ", slack " << format_double(c.slack) << ")\n";
  summary << (out.exit_code == 0 ? "status: ok\n" : "status: property violation\n");
  out.summary = summary.str();
  out.csv = std::move(ctx.csv);
  return out;
}

int execute_scenario(const Scenario& sc, std::ostream& os) {
  RunOutput out = run_scenario(sc);
  auto write_file = [](const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p);
    if (!f) throw std::invalid_argument("cannot write output file: " + path);
    f << content;
  };
  if (!sc.report_path.empty()) write_file(sc.report_path, out.report.dump(2) + "\n");
  if (!sc.summary_path.empty()) write_file(sc.summary_path, out.summary);
  if (!sc.csv_path.empty() && !out.csv.empty()) write_file(sc.csv_path, out.csv);
  os << out.summary;
  return out.exit_code;
}

}  // namespace mufourier
