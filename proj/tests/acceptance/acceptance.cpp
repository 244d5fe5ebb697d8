// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails or overruns its time
// budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mufourier/scenario.hpp"

using namespace mufourier;

namespace {

struct Criterion {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void require_close(double got, double want, double tol, const std::string& what) {
    if (!(std::fabs(got - want) <= tol)) {
      std::ostringstream os;
      os << what << ": got " << format_double(got) << ", want " << format_double(want)
         << " +- " << format_double(tol);
      failures.push_back(os.str());
    }
  }
};

int g_failed = 0;

void run(int id, const std::string& name, double time_limit_s,
         const std::function<void(Criterion&)>& body) {
  Criterion c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (elapsed > time_limit_s) {
    std::ostringstream os;
    os << "runtime " << elapsed << "s exceeds " << time_limit_s << "s";
    c.failures.push_back(os.str());
  }
  bool pass = c.failures.empty();
  if (!pass) ++g_failed;
  std::printf("[%s] %d. %s (%.2fs)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              elapsed);
  for (const auto& f : c.failures) std::printf("       - %s\n", f.c_str());
  std::fflush(stdout);
}

Region unit_box(int d) {
  return Region::box(Box(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)));
}

IntegratorSettings tight() {
  IntegratorSettings s;
  s.rel_tol = 1e-10;
  s.abs_tol = 1e-13;
  return s;
}

// ---------------------------------------------------------------------------

void criterion_integrator(Criterion& c) {
  IntegratorSettings s;
  for (int d = 1; d <= 3; ++d) {
    auto r = integrate(constant(d, 1.0), unit_box(d), s);
    c.require_close(r.value, 1.0, 1e-9, "unit box volume, dim " + std::to_string(d));
  }
  auto disk = integrate(constant(2, 1.0), Region::ball({0.0, 0.0}, 1.0), s);
  c.require_close(disk.value, std::numbers::pi, 1e-3, "unit disk area");
  for (int k = 0; k <= 9; ++k) {
    auto f = parse_field("x1^" + std::to_string(k), 1);
    auto r = integrate(f, unit_box(1), s);
    c.require_close(r.value, 1.0 / (k + 1), 1e-9, "monomial degree " + std::to_string(k));
  }
}

void criterion_cauchy_schwarz(Criterion& c) {
  IntegratorSettings s;
  s.max_depth = 7;  // plenty for one-sided gap checks on rough regions
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.3, 1.4);
  std::uniform_int_distribution<int> shape(0, 3);

  for (int inst = 0; inst < 100; ++inst) {
    const int d = 1 + inst % 2;
    Region E;
    if (inst % 3 == 0 && d == 2) {
      E = Region::ball({0.3 * u(rng), 0.3 * u(rng)}, pos(rng));
    } else {
      std::vector<double> lo(d), hi(d);
      for (int i = 0; i < d; ++i) {
        lo[i] = -1.0 - 0.5 * pos(rng);
        hi[i] = 1.0 + 0.5 * pos(rng);
      }
      E = Region::box(Box(lo, hi));
    }

    auto make_field = [&]() -> ScalarField {
      switch (shape(rng)) {
        case 0:  // sign-changing polynomial
          return parse_field("x1^2 - " + format_double(pos(rng)), d);
        case 1:  // oscillatory
          return parse_field("sin(" + format_double(2.0 + 2.0 * pos(rng)) + "*x1)", d);
        case 2: {  // vanishes on a subregion
          Region half = Region::predicate(
              E.bounds(), parse_predicate("x1 > " + format_double(0.4 * u(rng)), d));
          return masked(parse_field("1 + x1", d), half);
        }
        default:
          return d == 2 ? parse_field("x1*x2", 2)
                        : parse_field("x1 - " + format_double(u(rng)), 1);
      }
    };

    ScalarField g = make_field();
    if (inst % 5 == 0) {
      double lambda = 0.5 + pos(rng);
      auto gap = cauchy_schwarz_gap(g, scale(lambda, g), E, s);
      c.require(std::fabs(gap.value) <= gap.err + s.abs_tol,
                "equality case " + std::to_string(inst) + ": |gap| " +
                    format_double(std::fabs(gap.value)) + " err " +
                    format_double(gap.err));
    } else {
      auto gap = cauchy_schwarz_gap(g, make_field(), E, s);
      c.require(gap.value >= -(gap.err + s.abs_tol),
                "instance " + std::to_string(inst) + ": gap " +
                    format_double(gap.value) + " err " + format_double(gap.err));
    }
  }
}

void criterion_bessel_identity(Criterion& c) {
  IntegratorSettings s;
  s.rel_tol = 1e-9;
  s.abs_tol = 1e-12;
  Region E = unit_box(1);
  std::mt19937_64 rng(211);
  std::uniform_real_distribution<double> coef(0.1, 1.5);
  std::uniform_int_distribution<int> nseeds(1, 3);

  const std::vector<std::string> pool = {"1", "x1", "x1^2", "sin(x1)"};
  for (int inst = 0; inst < 50; ++inst) {
    // f = 0.1 + a x^2 + b x + c with positive coefficients, so f >= 0.1
    auto f = parse_field("0.1 + " + format_double(coef(rng)) + "*x1^2 + " +
                             format_double(coef(rng)) + "*x1 + " +
                             format_double(coef(rng)),
                         1)
                 .with_floor(0.1);
    int K = nseeds(rng);
    std::vector<ScalarField> seeds;
    for (int k = 0; k <= K; ++k) seeds.push_back(parse_field(pool[k], 1));
    auto fam = gram_schmidt(seeds, reciprocal(f), E, s);
    auto X = expand(f, fam, s);

    Estimate prev{};
    for (int N = 0; N <= X.size(); ++N) {
      auto dev = mean_square_deviation(X, N, s);
      auto gap = bessel_gap(X, N, s);
      c.require(std::fabs(dev.value - gap.value) <= dev.err + gap.err + s.abs_tol,
                "identity at instance " + std::to_string(inst) + ", N=" +
                    std::to_string(N));
      if (N > 0)
        c.require(gap.value <= prev.value + gap.err + prev.err + s.abs_tol,
                  "monotonicity at instance " + std::to_string(inst) + ", N=" +
                      std::to_string(N));
      prev = gap;
    }
  }
}

void criterion_anchor(Criterion& c) {
  auto s = tight();
  Region E = unit_box(1);
  auto f = parse_field("1 + x1", 1).with_bounds(1.0, 2.0);
  auto fam = gram_schmidt(std::vector<ScalarField>{constant(1, 1.0)}, reciprocal(f), E, s);
  auto X = expand(f, fam, s);
  auto dev = mean_square_deviation(X, 1, s);
  c.require_close(dev.value, 1.5 - 1.0 / std::log(2.0), 1e-6,
                  "deviation of 1+x over {1}");
}

void criterion_parseval_exactness(Criterion& c) {
  IntegratorSettings s;
  s.rel_tol = 1e-9;
  s.abs_tol = 1e-12;
  Region E = unit_box(1);
  std::mt19937_64 rng(307);
  std::uniform_real_distribution<double> amp(0.5, 2.0);
  std::uniform_real_distribution<double> shift(0.0, 1.0);

  for (int inst = 0; inst < 20; ++inst) {
    const int K = (inst % 2 == 0) ? 2 : 4;
    std::vector<ScalarField> members;
    std::vector<double> weights;
    double floor = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      double lo = static_cast<double>(k) / K, hi = static_cast<double>(k + 1) / K;
      // half-open cells tile [0,1); the top cell keeps its upper face
      std::string upper = (k == K - 1) ? "x1 <= " + format_double(hi)
                                       : "x1 < " + format_double(hi);
      Region cell = Region::predicate(
          Box({0.0}, {1.0}),
          parse_predicate("x1 >= " + format_double(lo) + " and " + upper, 1));
      double base = 0.2 + shift(rng);
      double quad = shift(rng);
      auto bump = parse_field(format_double(base) + " + " + format_double(quad) +
                                  "*x1^2", 1);
      members.push_back(masked(bump, cell));
      double a = amp(rng);
      weights.push_back(a);
      floor = std::min(floor, a * base);
    }
    ScalarField f = linear_combination(ScalarField(), weights, members).with_floor(floor);

    // disjoint supports: the family is orthogonal for any weight
    auto fam = make_family(members, reciprocal(f), E, s);
    c.require(fam.residual <= 1e-8, "certificate at instance " + std::to_string(inst));

    auto X = expand(f, fam, s);
    for (int n = 0; n < K; ++n)
      c.require(std::fabs(X.coeffs[n].value - weights[n]) <=
                    X.coeffs[n].err + 1e-6,
                "coefficient recovery at instance " + std::to_string(inst) + ", n=" +
                    std::to_string(n));

    auto r = parseval_residual(X, s);
    c.require(std::fabs(r.value) <= r.err + s.abs_tol,
              "residual at instance " + std::to_string(inst) + ": " +
                  format_double(r.value) + " err " + format_double(r.err));
  }
}

void criterion_partitioned(Criterion& c) {
  IntegratorSettings s;

  {
    Region E = unit_box(1);
    auto f = parse_field("x1 - 0.5", 1);
    auto P = sign_partition(f, E, 12, 1e-9, 1);
    auto rep = partitioned_parseval(f, P, {}, s);
    c.require_close(rep.total.value, 0.0, 1e-6, "odd tent total");
  }
  {
    Region E = unit_box(1);
    auto f = parse_field("abs(x1 - 0.5)", 1);
    auto P = sign_partition(f, E, 12, 1e-9, 1);
    auto rep = partitioned_parseval(f, P, {}, s);
    c.require_close(rep.total.value, 0.25, 1e-6, "tent total");
  }
  {
    Region E = Region::box(Box({-1.0, -1.0}, {1.0, 1.0}));
    auto f = parse_field("x1*x2", 2);

    // four signed quadrant cells
    SignPartition quadrants;
    quadrants.parent = E;
    quadrants.zeta = 1e-9;
    const double b[3] = {-1.0, 0.0, 1.0};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        SignedCell cell;
        cell.box = Box({b[i], b[j]}, {b[i + 1], b[j + 1]});
        cell.sign = (i == j) ? +1 : -1;
        cell.region = region_intersection(Region::box(cell.box), E);
        quadrants.cells.push_back(cell);
      }
    }
    auto rep = partitioned_parseval(f, quadrants, {}, s);
    c.require(rep.cells.size() == 4, "quadrant partition has four signed cells");
    c.require_close(rep.total.value, 0.0, 1e-3, "quadrant total (manual cells)");

    auto P = sign_partition(f, E, 8, 1e-9, 1);
    auto rep2 = partitioned_parseval(f, P, {}, s);
    c.require_close(rep2.total.value, 0.0, 1e-3, "quadrant total (auto partition)");
  }
}

void criterion_product(Criterion& c) {
  IntegratorSettings s;
  s.rel_tol = 1e-9;
  s.abs_tol = 1e-12;
  Region E = unit_box(1);
  std::vector<ScalarField> seeds = {parse_field("1", 1), parse_field("x1", 1)};

  {
    auto f = parse_field("1 + x1", 1).with_bounds(1.0, 2.0);
    auto Phi = gram_schmidt(seeds, reciprocal(f), E, s);
    auto rep = product_criterion_check(f, f, Phi, Phi, 2, E, s);
    c.require(rep.conclusion.holds, "comonotone conclusion holds");
    c.require(rep.conclusion.margin > 0.08,
              "conclusion margin " + format_double(rep.conclusion.margin) + " > 0.08");
    c.require_close(rep.conclusion.lhs, 7.0 / 3.0, 1e-6, "integral of (1+x)^2");
  }
  {
    auto f = parse_field("1 + x1", 1).with_bounds(1.0, 2.0);
    auto g = parse_field("2 - x1", 1).with_bounds(1.0, 2.0);
    auto Phi = gram_schmidt(seeds, reciprocal(f), E, s);
    auto Psi = gram_schmidt(seeds, reciprocal(g), E, s);
    auto rep = product_criterion_check(f, g, Phi, Psi, 2, E, s);
    c.require(rep.conclusion.verdict == Verdict::Fails,
              "oppositely monotone conclusion fails");
    bool witness = false;
    for (const auto& pr : rep.grid)
      witness = witness || pr.crit_a.verdict == Verdict::Fails ||
                pr.crit_b.verdict == Verdict::Fails;
    c.require(witness, "contrapositive: a hypothesis flag is false");
  }
  {
    // the fourth-moment bound never fails
    std::mt19937_64 rng(401);
    std::uniform_real_distribution<double> coef(0.1, 1.5);
    IntegratorSettings sr = s;
    sr.rel_tol = 1e-8;
    for (int inst = 0; inst < 50; ++inst) {
      auto f = parse_field(format_double(coef(rng)) + " + " + format_double(coef(rng)) +
                               "*x1", 1)
                   .with_floor(0.1);
      auto g = parse_field(format_double(coef(rng)) + " + " + format_double(coef(rng)) +
                               "*x1^2", 1)
                   .with_floor(0.1);
      auto Phi = gram_schmidt(seeds, reciprocal(f), E, sr);
      auto Psi = gram_schmidt(seeds, reciprocal(g), E, sr);
      auto rep = corollary_check(f, g, Phi, Psi, 2, E, sr);
      for (const auto& rec : rep.grid)
        c.require(rec.cs_bound.holds, "fourth-moment bound at instance " +
                                          std::to_string(inst));
    }
  }
  {
    auto f = parse_field("1 + x1", 1).with_bounds(1.0, 2.0);
    auto fam = gram_schmidt(std::vector<ScalarField>{constant(1, 1.0)}, reciprocal(f),
                            E, s);
    auto rep = corollary_check(f, f, fam, fam, 1, E, s);
    c.require(rep.phi_subcond[0].verdict == Verdict::Fails,
              "sub-condition anchor fails");
    c.require_close(rep.phi_subcond[0].lhs, 0.5, 1e-6, "sub-condition lhs");
    c.require_close(rep.phi_subcond[0].rhs, std::log(2.0) * std::log(2.0), 1e-6,
                    "sub-condition rhs");
  }
}

void criterion_optimality(Criterion& c) {
  IntegratorSettings s;
  s.rel_tol = 1e-9;
  s.abs_tol = 1e-12;
  Region E = unit_box(1);
  std::mt19937_64 rng(503);
  std::uniform_real_distribution<double> coef(0.1, 1.5);

  for (int inst = 0; inst < 20; ++inst) {
    auto f = parse_field("0.1 + " + format_double(coef(rng)) + "*x1^2 + " +
                             format_double(coef(rng)) + "*x1 + " +
                             format_double(coef(rng)),
                         1)
                 .with_floor(0.1);
    std::vector<ScalarField> seeds = {parse_field("1", 1), parse_field("x1", 1)};
    auto fam = gram_schmidt(seeds, reciprocal(f), E, s);
    auto X = expand(f, fam, s);
    auto base = mean_square_deviation(X, X.size(), s);
    for (std::size_t n = 0; n < X.coeffs.size(); ++n) {
      for (double rel : {0.01, -0.01}) {
        std::vector<double> cs;
        for (const auto& cc : X.coeffs) cs.push_back(cc.value);
        cs[n] *= 1.0 + rel;
        auto dev = mean_square_deviation_with(X, cs, X.size(), s);
        c.require(dev.value >= base.value - (dev.err + base.err + s.abs_tol),
                  "perturbation lowered the deviation at instance " +
                      std::to_string(inst));
      }
    }
  }
}

void criterion_determinism(Criterion& c) {
  const char* text = R"(
[scenario]
task = product-criterion
dim = 1
[region]
main = box 0 1
[fields]
f = 1 + x1
f.bounds = 1 2
g = 2 - x1
g.bounds = 1 2
[family]
seeds = 1 | x1
n = 2
[integrator]
rel_tol = 1e-9
abs_tol = 1e-12
seed = 77
)";
  Scenario sc = parse_scenario_text(text);
  RunOutput a = run_scenario(sc);
  RunOutput b = run_scenario(sc);
  c.require(a.report.dump(2) == b.report.dump(2), "reports are byte-identical");
  c.require(a.summary == b.summary, "summaries are byte-identical");
  c.require(a.csv == b.csv, "csv grids are byte-identical");

  const char* stochastic = R"(
[scenario]
task = integrate
dim = 3
[region]
main = ball 0 0 0 1
[fields]
f = 1 + x1^2 + x2*x3
[integrator]
method = stochastic
samples = 20000
seed = 4242
)";
  Scenario sc2 = parse_scenario_text(stochastic);
  RunOutput a2 = run_scenario(sc2);
  RunOutput b2 = run_scenario(sc2);
  c.require(a2.report.dump(2) == b2.report.dump(2),
            "stochastic reports are byte-identical");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  run(1, "integrator oracle suite", 10.0, criterion_integrator);
  run(2, "cauchy-schwarz gap on randomized instances", 60.0, criterion_cauchy_schwarz);
  run(3, "bessel/deviation identity and monotonicity", 60.0, criterion_bessel_identity);
  run(4, "closed-form deviation anchor", 5.0, criterion_anchor);
  run(5, "parseval exactness on spanned fields", 60.0, criterion_parseval_exactness);
  run(6, "partitioned parseval totals", 30.0, criterion_partitioned);
  run(7, "product criterion and corollary", 120.0, criterion_product);
  run(8, "coefficient optimality under perturbation", 60.0, criterion_optimality);
  run(9, "deterministic reports", 30.0, criterion_determinism);
  if (g_failed == 0) std::printf("all acceptance criteria passed\n");
  else std::printf("%d criterion(s) failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
