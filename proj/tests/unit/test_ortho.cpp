#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mufourier/ortho.hpp"

using namespace mufourier;

namespace {
Region interval(double a, double b) { return Region::box(Box({a}, {b})); }

double at(const ScalarField& f, double x) {
  double p[1] = {x};
  return f(Point(p, 1));
}
}  // namespace

TEST_CASE("gram-schmidt on {1, x}") {
  IntegratorSettings s;
  Region E = interval(0.0, 1.0);
  std::vector<ScalarField> seeds = {parse_field("1", 1), parse_field("x1", 1)};
  auto fam = gram_schmidt(seeds, constant(1, 1.0), E, s);

  REQUIRE(fam.members.size() == 2);
  // hand orthogonalization: <x,1>/<1,1> = 1/2, so phi_2 = x - 1/2
  for (double x : {0.0, 0.25, 0.6, 1.0})
    CHECK(at(fam.members[1], x) == doctest::Approx(x - 0.5).epsilon(1e-10));
  CHECK(fam.residual <= 1e-8);
  CHECK(fam.dropped.empty());
}

TEST_CASE("dependent seeds are dropped") {
  IntegratorSettings s;
  Region E = interval(0.0, 1.0);
  std::vector<ScalarField> seeds = {parse_field("1", 1), parse_field("1", 1)};
  auto fam = gram_schmidt(seeds, constant(1, 1.0), E, s);
  CHECK(fam.members.size() == 1);
  REQUIRE(fam.dropped.size() == 1);
  CHECK(fam.dropped[0] == 2);
}

TEST_CASE("an already orthogonal pair stays put") {
  IntegratorSettings s;
  Region E = interval(-std::numbers::pi, std::numbers::pi);
  std::vector<ScalarField> seeds = {parse_field("sin(x1)", 1),
                                    parse_field("cos(x1)", 1)};
  // antiderivative of sin*cos = sin^2/2 vanishes over the symmetric interval
  auto fam = gram_schmidt(seeds, constant(1, 1.0), E, s);
  REQUIRE(fam.members.size() == 2);
  for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    CHECK(at(fam.members[0], x) == std::sin(x));
    CHECK(at(fam.members[1], x) == doctest::Approx(std::cos(x)).epsilon(1e-9));
  }
  CHECK(fam.residual <= 1e-8);
}

TEST_CASE("first member is the first seed, bit for bit") {
  IntegratorSettings s;
  Region E = interval(0.0, 1.0);
  std::vector<ScalarField> seeds = {parse_field("exp(x1)*sin(3*x1)", 1),
                                    parse_field("x1^2", 1), parse_field("1", 1)};
  auto fam = gram_schmidt(seeds, constant(1, 1.0), E, s);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    double x = u(rng);
    CHECK(at(fam.members[0], x) == at(seeds[0], x));
  }
}

TEST_CASE("construction certificate holds at higher resolution") {
  IntegratorSettings s;
  Region E = interval(0.2, 1.7);
  auto f = parse_field("1 + x1^2", 1).with_bounds(1.0, 4.0);
  std::vector<ScalarField> seeds = {parse_field("1", 1), parse_field("x1", 1),
                                    parse_field("x1^2", 1),
                                    parse_field("sin(x1)", 1)};
  auto fam = gram_schmidt(seeds, reciprocal(f), E, s);

  IntegratorSettings fine = s;
  fine.rel_tol = 1e-10;
  fine.abs_tol = 1e-13;
  CHECK(orthogonality_residual(fam, fine) <= 1e-6);
}

TEST_CASE("span stability: seeds project back onto the family") {
  IntegratorSettings s;
  Region E = interval(0.0, 1.0);
  std::vector<ScalarField> seeds = {parse_field("1", 1), parse_field("x1", 1),
                                    parse_field("x1^2", 1)};
  auto w = constant(1, 1.0);
  auto fam = gram_schmidt(seeds, w, E, s);

  for (const auto& seed : seeds) {
    std::vector<double> cs(fam.members.size());
    for (std::size_t j = 0; j < fam.members.size(); ++j)
      cs[j] = inner_product(seed, fam.members[j], w, E, s).value / fam.norms[j].value;
    auto rebuilt = linear_combination(ScalarField(), cs, fam.members);
    for (double x : {0.1, 0.37, 0.62, 0.95})
      CHECK(at(rebuilt, x) == doctest::Approx(at(seed, x)).epsilon(1e-8));
  }
}

TEST_CASE("orthogonality residual values") {
  IntegratorSettings s;
  Region E = interval(0.0, 1.0);
  auto w = constant(1, 1.0);

  auto single = make_family(std::vector<ScalarField>{parse_field("1", 1)}, w, E, s);
  CHECK(single.residual == 0.0);  // vacuous maximum

  auto pair = gram_schmidt(
      std::vector<ScalarField>{parse_field("1", 1), parse_field("x1", 1)}, w, E, s);
  CHECK(orthogonality_residual(pair, s) <= 1e-8);

  // deliberately non-orthogonal: <1,x> = 1/2, norms 1 and 1/3
  auto skew = make_family(
      std::vector<ScalarField>{parse_field("1", 1), parse_field("x1", 1)}, w, E, s);
  CHECK(skew.residual == doctest::Approx(0.5 / std::sqrt(1.0 / 3.0)).epsilon(1e-8));
}

TEST_CASE("gram-schmidt input validation") {
  IntegratorSettings s;
  Region E = interval(0.0, 1.0);
  std::vector<ScalarField> seeds = {parse_field("x1", 1)};
  CHECK_THROWS_AS(gram_schmidt(std::vector<ScalarField>{}, constant(1, 1.0), E, s),
                  std::invalid_argument);
  CHECK_THROWS_AS(gram_schmidt(seeds, parse_field("x1", 1), E, s),
                  std::invalid_argument);  // weight without a floor
  std::vector<ScalarField> zero = {constant(1, 0.0)};
  CHECK_THROWS_AS(gram_schmidt(zero, constant(1, 1.0), E, s), std::runtime_error);
}

TEST_CASE("six monomials orthogonalize with a certified residual") {
  IntegratorSettings s;
  s.rel_tol = 1e-10;
  s.abs_tol = 1e-13;
  Region E = interval(0.0, 1.0);
  std::vector<ScalarField> seeds;
  for (int k = 0; k <= 5; ++k)
    seeds.push_back(parse_field(k == 0 ? "1" : "x1^" + std::to_string(k), 1));
  auto fam = gram_schmidt(seeds, constant(1, 1.0), E, s);
  CHECK(fam.members.size() == 6);
  CHECK(fam.dropped.empty());
  CHECK(fam.residual <= 1e-8);
  // shifted-interval orthogonal polynomials: norm^2 = 1/((2k+1) C(2k,k)^2)
  for (int k = 0; k <= 5; ++k) {
    double binom = 1.0;
    for (int i = 1; i <= k; ++i) binom *= static_cast<double>(k + i) / i;
    CHECK(fam.norms[static_cast<std::size_t>(k)].value ==
          doctest::Approx(1.0 / ((2 * k + 1) * binom * binom)).epsilon(1e-6));
  }
}
