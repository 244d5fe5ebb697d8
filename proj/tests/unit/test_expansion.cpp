#include <doctest.h>

#include <cmath>
#include <random>

#include "mufourier/expansion.hpp"

using namespace mufourier;

namespace {

Region interval(double a, double b) { return Region::box(Box({a}, {b})); }

IntegratorSettings tight() {
  IntegratorSettings s;
  s.rel_tol = 1e-10;
  s.abs_tol = 1e-13;
  return s;
}

Expansion expand_over(const ScalarField& f, const std::vector<ScalarField>& seeds,
                      const Region& E, const IntegratorSettings& s) {
  auto fam = gram_schmidt(seeds, reciprocal(f), E, s);
  return expand(f, fam, s);
}

}  // namespace

TEST_CASE("fourier coefficients") {
  auto s = tight();
  Region E = interval(0.0, 1.0);

  // phi = f: numerator and denominator are the same integral
  auto f = parse_field("1 + x1", 1).with_bounds(1.0, 2.0);
  auto c = fourier_coefficient(f, f, E, s);
  CHECK(c.value == doctest::Approx(1.0).epsilon(1e-12));

  auto one = constant(1, 1.0);
  CHECK(fourier_coefficient(one, one, E, s).value == doctest::Approx(1.0));

  // numerator 1; denominator = antiderivative of 1/(1+x) = ln 2
  auto c2 = fourier_coefficient(one, f, E, s);
  CHECK(c2.value == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-9));

  // denominator indistinguishable from zero
  auto g = constant(1, 1.0);
  CHECK_THROWS_AS(fourier_coefficient(constant(1, 0.0), g, E, s), std::runtime_error);
  CHECK_THROWS_AS(fourier_coefficient(one, parse_field("1 + x1", 1), E, s),
                  std::invalid_argument);  // f without floor
}

TEST_CASE("mean-square deviation") {
  auto s = tight();
  Region E = interval(0.0, 1.0);
  auto f = parse_field("1 + x1", 1).with_bounds(1.0, 2.0);

  SUBCASE("N = 0 reduces to the integral of f") {
    auto X = expand_over(f, {constant(1, 1.0)}, E, s);
    auto dev = mean_square_deviation(X, 0, s);
    CHECK(dev.value == doctest::Approx(1.5).epsilon(1e-10));
  }

  SUBCASE("a field inside the family's span has zero deviation") {
    auto X = expand_over(f, {f}, E, s);
    auto dev = mean_square_deviation(X, 1, s);
    CHECK(std::fabs(dev.value) <= 1e-10);
  }

  SUBCASE("closed-form anchor: family {1}") {
    auto X = expand_over(f, {constant(1, 1.0)}, E, s);
    auto dev = mean_square_deviation(X, 1, s);
    // antiderivatives: integral f = 3/2, (integral 1)^2 / ln 2 = 1/ln 2
    CHECK(dev.value == doctest::Approx(1.5 - 1.0 / std::log(2.0)).epsilon(1e-6));
    CHECK(dev.value >= -dev.err);
  }
}

TEST_CASE("bessel gap") {
  auto s = tight();
  Region E = interval(0.0, 1.0);
  auto f = parse_field("1 + x1", 1).with_bounds(1.0, 2.0);

  auto X1 = expand_over(f, {constant(1, 1.0)}, E, s);
  auto gap = bessel_gap(X1, 1, s);
  CHECK(gap.value == doctest::Approx(1.5 - 1.0 / std::log(2.0)).epsilon(1e-6));
  CHECK(gap.value >= -gap.err);

  auto Xf = expand_over(f, {f}, E, s);
  CHECK(std::fabs(bessel_gap(Xf, 1, s).value) <= 1e-9);
}

TEST_CASE("deviation equals gap and both shrink with N") {
  IntegratorSettings s;
  s.rel_tol = 1e-9;
  s.abs_tol = 1e-12;
  Region E = interval(0.0, 1.0);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.2, 2.0);

  for (int inst = 0; inst < 8; ++inst) {
    double a = u(rng), b = u(rng), c = u(rng);
    auto f = (constant(1, 0.1) + scale(a, square(parse_field("x1", 1))) +
              scale(b, parse_field("x1", 1)) + constant(1, c))
                 .with_floor(0.1);
    std::vector<ScalarField> seeds = {parse_field("1", 1), parse_field("x1", 1),
                                      parse_field("x1^2", 1)};
    auto X = expand_over(f, seeds, E, s);
    Estimate prev{};
    for (int N = 0; N <= X.size(); ++N) {
      auto dev = mean_square_deviation(X, N, s);
      auto gap = bessel_gap(X, N, s);
      CHECK(std::fabs(dev.value - gap.value) <= dev.err + gap.err + s.abs_tol);
      CHECK(gap.value >= -(gap.err + s.abs_tol));
      if (N > 0) CHECK(gap.value <= prev.value + gap.err + prev.err + s.abs_tol);
      prev = gap;
    }
    // full family reproduces the quadratic: deviation ~ 0
    CHECK(std::fabs(mean_square_deviation(X, X.size(), s).value) <= 1e-8);
  }
}

TEST_CASE("coefficients minimize the deviation") {
  IntegratorSettings s;
  s.rel_tol = 1e-9;
  s.abs_tol = 1e-12;
  Region E = interval(0.0, 1.0);
  auto f = parse_field("1 + x1", 1).with_bounds(1.0, 2.0);
  std::vector<ScalarField> seeds = {parse_field("1", 1), parse_field("x1", 1)};
  auto X = expand_over(f, seeds, E, s);
  auto base = mean_square_deviation(X, X.size(), s);

  for (std::size_t n = 0; n < X.coeffs.size(); ++n) {
    for (double delta : {0.1, -0.1, 0.01, -0.01}) {
      std::vector<double> cs;
      for (const auto& c : X.coeffs) cs.push_back(c.value);
      cs[n] += delta;
      auto perturbed = mean_square_deviation_with(X, cs, X.size(), s);
      CHECK(perturbed.value >= base.value - (perturbed.err + base.err + s.abs_tol));
    }
  }
}

TEST_CASE("expansion rejects a mismatched family weight") {
  auto s = tight();
  Region E = interval(0.0, 1.0);
  auto f = parse_field("1 + x1", 1).with_bounds(1.0, 2.0);
  std::vector<ScalarField> seeds = {parse_field("1", 1), parse_field("x1", 1)};
  auto plain = gram_schmidt(seeds, constant(1, 1.0), E, s);  // weight 1, not 1/f
  CHECK_THROWS_AS(expand(f, plain, s), std::invalid_argument);
}

TEST_CASE("parseval residual") {
  auto s = tight();
  Region E = interval(0.0, 1.0);

  SUBCASE("constant over {1}: c = 2, sum = 4 * 1/2 = integral of f") {
    auto f = constant(1, 2.0);
    auto X = expand_over(f, {constant(1, 1.0)}, E, s);
    CHECK(X.coeffs[0].value == doctest::Approx(2.0));
    auto r = parseval_residual(X, s);
    CHECK(std::fabs(r.value) <= r.err + 1e-12);
  }

  SUBCASE("family {f} itself") {
    auto f = parse_field("1 + x1", 1).with_bounds(1.0, 2.0);
    auto X = expand_over(f, {f}, E, s);
    auto r = parseval_residual(X, s);
    CHECK(std::fabs(r.value) <= r.err + 1e-12);
  }

  SUBCASE("incomplete family undershoots by the bessel gap") {
    auto f = parse_field("1 + x1", 1).with_bounds(1.0, 2.0);
    auto X = expand_over(f, {constant(1, 1.0)}, E, s);
    auto r = parseval_residual(X, s);
    CHECK(r.value == doctest::Approx(1.0 / std::log(2.0) - 1.5).epsilon(1e-6));
    auto gap = bessel_gap(X, 1, s);
    CHECK(r.value == doctest::Approx(-gap.value).epsilon(1e-9));
  }
}

TEST_CASE("partitioned parseval") {
  IntegratorSettings s;

  SUBCASE("odd field about the split point") {
    Region E = interval(0.0, 1.0);
    auto f = parse_field("x1 - 0.5", 1);
    SignPartition P;
    P.parent = E;
    P.zeta = 1e-9;
    for (auto [lo, hi, sign] : {std::tuple{0.0, 0.5, -1}, std::tuple{0.5, 1.0, +1}}) {
      SignedCell cell;
      cell.box = Box({lo}, {hi});
      cell.sign = sign;
      cell.region = region_intersection(Region::box(cell.box), E);
      P.cells.push_back(cell);
    }
    auto rep = partitioned_parseval(f, P, {}, s);
    CHECK(std::fabs(rep.total.value) <= 1e-9);
    CHECK(std::fabs(rep.cells[0].cell_parseval.value + 0.125) <= 1e-9);
    CHECK(std::fabs(rep.cells[1].cell_parseval.value - 0.125) <= 1e-9);
  }

  SUBCASE("zero on one cell, one on the other") {
    Region E = interval(0.0, 1.0);
    Region right = Region::predicate(Box({0.0}, {1.0}), parse_predicate("x1 > 0.5", 1));
    auto f = masked(constant(1, 1.0), right);
    SignPartition P;
    P.parent = E;
    P.zeta = 1e-9;
    SignedCell zero_cell;
    zero_cell.box = Box({0.0}, {0.5});
    zero_cell.sign = 0;
    zero_cell.region = region_intersection(Region::box(zero_cell.box), E);
    SignedCell one_cell;
    one_cell.box = Box({0.5}, {1.0});
    one_cell.sign = +1;
    one_cell.region = region_intersection(Region::box(one_cell.box), E);
    P.cells = {zero_cell, one_cell};
    auto rep = partitioned_parseval(f, P, {}, s);
    CHECK(rep.total.value == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rep.cells[0].cell_parseval.value == 0.0);
  }

  SUBCASE("tent about the split point: two positive cells") {
    Region E = interval(0.0, 1.0);
    auto f = parse_field("abs(x1 - 0.5)", 1);
    SignPartition P = sign_partition(f, E, 12, 1e-9, 1);
    auto rep = partitioned_parseval(f, P, {}, s);
    // antiderivative: two triangles of area 1/8 each
    CHECK(std::fabs(rep.total.value - 0.25) <= 1e-6);
    CHECK(std::fabs(rep.total.value - rep.direct_integral.value) <=
          rep.total.err + rep.direct_integral.err + rep.unresolved_bound + s.abs_tol);
  }

  SUBCASE("sign violation is loud") {
    Region E = interval(0.0, 1.0);
    auto f = parse_field("x1 - 0.5", 1);
    SignPartition P;
    P.parent = E;
    P.zeta = 1e-9;
    SignedCell cell;
    cell.box = Box({0.0}, {1.0});
    cell.sign = +1;  // wrong: f changes sign here
    cell.region = region_intersection(Region::box(cell.box), E);
    P.cells.push_back(cell);
    CHECK_THROWS_AS(partitioned_parseval(f, P, {}, s), std::runtime_error);
  }

  SUBCASE("user seed sets must match the cell count") {
    Region E = interval(0.0, 1.0);
    auto f = constant(1, 1.0);
    SignPartition P = sign_partition(f, E, 4, 1e-9, 1);
    std::vector<std::vector<ScalarField>> seeds(P.cells.size() + 1);
    CHECK_THROWS_AS(partitioned_parseval(f, P, seeds, s), std::invalid_argument);
  }
}
