#include <doctest.h>

#include <cmath>

#include "mufourier/scenario.hpp"

using namespace mufourier;

namespace {

const char* kCauchy = R"(
# equality case
[scenario]
task = cauchy-schwarz
dim = 1

[region]
main = box 0 1

[fields]
g = x1
h = x1

[integrator]
seed = 9
)";

}  // namespace

TEST_CASE("scenario parsing") {
  Scenario sc = parse_scenario_text(kCauchy);
  CHECK(sc.task == "cauchy-schwarz");
  CHECK(sc.dim == 1);
  CHECK(sc.fields.at("g").expr == "x1");
  CHECK(sc.settings.seed == 9);

  CHECK_THROWS_AS(parse_scenario_text("[scenario]\ntask = juggle\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text("task = integrate\n"), ScenarioError);
  try {
    parse_scenario_text("[scenario]\ntask = integrate\ndim = 1\n[region]\nbroken\n");
    FAIL("expected a scenario error");
  } catch (const ScenarioError& e) {
    CHECK(e.line == 5);
  }
}

TEST_CASE("cauchy-schwarz scenario runs clean") {
  Scenario sc = parse_scenario_text(kCauchy);
  RunOutput out = run_scenario(sc);
  CHECK(out.exit_code == 0);
  double gap = out.report["results"]["gap"]["value"].get<double>();
  double err = out.report["results"]["gap"]["err"].get<double>();
  CHECK(std::fabs(gap) <= err + 1e-9);
  CHECK(out.report["results"]["equality_within_tolerance"].get<bool>());
}

TEST_CASE("malformed field text fails as an input error") {
  const char* bad = R"(
[scenario]
task = integrate
dim = 1
[region]
main = box 0 1
[fields]
f = x1 +
)";
  Scenario sc = parse_scenario_text(bad);
  CHECK_THROWS_AS(run_scenario(sc), ParseError);
}

TEST_CASE("parseval scenario: constant over the unit family") {
  const char* text = R"(
[scenario]
task = parseval
dim = 1
[region]
main = box 0 1
[fields]
f = 2
f.bounds = 2 2
[family]
seeds = 1
)";
  RunOutput out = run_scenario(parse_scenario_text(text));
  CHECK(out.exit_code == 0);
  double residual = out.report["results"]["residual"]["value"].get<double>();
  double err = out.report["results"]["residual"]["err"].get<double>();
  CHECK(std::fabs(residual) <= err + 1e-9);
  CHECK(out.report["results"]["expansion_exists"].get<bool>());
}

TEST_CASE("reports are byte-identical for a fixed seed") {
  const char* text = R"(
[scenario]
task = integrate
dim = 2
[region]
main = ball 0 0 1
[fields]
f = 1 + x1^2
[integrator]
method = stochastic
samples = 4096
seed = 1234
)";
  Scenario sc = parse_scenario_text(text);
  RunOutput a = run_scenario(sc);
  RunOutput b = run_scenario(sc);
  CHECK(a.report.dump(2) == b.report.dump(2));
  CHECK(a.summary == b.summary);
}

TEST_CASE("region algebra and masks resolve from scenario text") {
  const char* text = R"(
[scenario]
task = integrate
dim = 2
[region]
big = box -1 1 -1 1
hole = ball 0 0 0.5
ring = diff big hole
use = ring
[fields]
f = 1
)";
  RunOutput out = run_scenario(parse_scenario_text(text));
  CHECK(out.exit_code == 0);
  double v = out.report["results"]["integral"]["value"].get<double>();
  // area oracle: 4 - pi/4
  CHECK(std::fabs(v - (4.0 - 0.25 * M_PI)) <= 2e-3);
}

TEST_CASE("product-criterion scenario emits a csv grid") {
  const char* text = R"(
[scenario]
task = product-criterion
dim = 1
[region]
main = box 0 1
[fields]
f = 1 + x1
f.bounds = 1 2
g = 1 + x1
g.bounds = 1 2
[family]
seeds = 1 | x1
n = 2
[integrator]
rel_tol = 1e-9
abs_tol = 1e-12
)";
  RunOutput out = run_scenario(parse_scenario_text(text));
  CHECK(out.exit_code == 0);
  CHECK(out.report["results"]["conclusion"]["verdict"].get<std::string>() == "holds");
  CHECK(!out.csv.empty());
  CHECK(out.csv.find("n\\m") == 0);
}

TEST_CASE("partition-parseval scenario with manual cells") {
  const char* text = R"(
[scenario]
task = partition-parseval
dim = 1
[region]
main = box 0 1
[fields]
f = x1 - 0.5
[partition]
cell = -1 box 0 0.5
cell = +1 box 0.5 1
)";
  RunOutput out = run_scenario(parse_scenario_text(text));
  CHECK(out.exit_code == 0);
  double total = out.report["results"]["total"]["value"].get<double>();
  CHECK(std::fabs(total) <= 1e-8);
}

TEST_CASE("an incomplete manual partition is a property violation") {
  // The lone cell misses half the region, so the assembled total cannot
  // reconcile with the direct integral: exit code 2, not an input error.
  const char* text = R"(
[scenario]
task = partition-parseval
dim = 1
[region]
main = box 0 1
[fields]
f = x1 - 0.5
[partition]
cell = -1 box 0 0.5
)";
  RunOutput out = run_scenario(parse_scenario_text(text));
  CHECK(out.exit_code == 2);
}

TEST_CASE("orthogonalize scenario with a plain weight") {
  const char* text = R"(
[scenario]
task = orthogonalize
dim = 1
[region]
main = box 0 1
[family]
seeds = 1 | x1 | 1
)";
  RunOutput out = run_scenario(parse_scenario_text(text));
  CHECK(out.exit_code == 0);
  CHECK(out.report["results"]["dropped"].size() == 1);
}
