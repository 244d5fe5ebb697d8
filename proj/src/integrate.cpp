#include "mufourier/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace mufourier {

std::string method_name(Method m) {
  return m == Method::refine ? "refine" : "stochastic";
}

Method method_from_name(const std::string& name) {
  if (name == "refine") return Method::refine;
  if (name == "stochastic") return Method::stochastic;
  throw std::invalid_argument("unknown integration method '" + name +
                              "' (expected refine or stochastic)");
}

void IntegratorSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("integrator tolerances must be > 0");
  if (max_depth < 0) throw std::invalid_argument("max_depth must be >= 0");
  if (sample_count < 2) throw std::invalid_argument("sample_count must be >= 2");
}

int IntegratorSettings::effective_depth(int dim) const {
  if (max_depth > 0) return max_depth;
  switch (dim) {
    case 1: return 14;
    case 2: return 9;
    default: return 6;
  }
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kG5x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                            0.5384693101056831, 0.9061798459386640};
constexpr double kG5w[5] = {0.2369268850561891, 0.4786286704993665,
                            0.5688888888888889, 0.4786286704993665,
                            0.2369268850561891};
constexpr double kG3x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kG3w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

constexpr int kMinRefineDepth = 2;

struct RefineWorker {
  const ScalarField& f;
  const Region& E;
  const IntegratorSettings& s;
  int depth_budget;
  double root_volume;

  std::vector<double> contributions;
  std::vector<double> errors;
  std::vector<double> abs_contributions;
  long evals = 0;

  double gauss(const Box& cell, const double* xs, const double* ws, int n) {
    const int d = cell.dim();
    std::vector<int> idx(d, 0);
    std::vector<double> p(d);
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(std::pow(n, d)));
    double cell_scale = 1.0;
    for (int i = 0; i < d; ++i) cell_scale *= 0.5 * (cell.hi[i] - cell.lo[i]);
    for (;;) {
      double w = 1.0;
      for (int i = 0; i < d; ++i) {
        double mid = 0.5 * (cell.lo[i] + cell.hi[i]);
        double half = 0.5 * (cell.hi[i] - cell.lo[i]);
        p[i] = mid + half * xs[idx[i]];
        w *= ws[idx[i]];
      }
      ++evals;
      terms.push_back(w * f(p));
      int axis = 0;
      while (axis < d && ++idx[axis] == n) idx[axis++] = 0;
      if (axis == d) break;
    }
    return cell_scale * pairwise_sum(terms);
  }

  void probe_points(const Box& cell, std::uint64_t path,
                    std::vector<std::vector<double>>& pts) const {
    const int d = cell.dim();
    pts.clear();
    for (int mask = 0; mask < (1 << d); ++mask) {
      std::vector<double> p(d);
      for (int i = 0; i < d; ++i) p[i] = (mask >> i & 1) ? cell.hi[i] : cell.lo[i];
      pts.push_back(std::move(p));
    }
    pts.push_back(cell.center());
    std::uint64_t state = s.seed ^ (path * 0x9e3779b97f4a7c15ULL + 0x452821e638d01377ULL);
    for (int k = 0; k < 4; ++k) {
      std::vector<double> p(d);
      for (int i = 0; i < d; ++i) {
        double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
        p[i] = cell.lo[i] + u * (cell.hi[i] - cell.lo[i]);
      }
      pts.push_back(std::move(p));
    }
  }

  void visit(const Box& cell, int depth, std::uint64_t path) {
    std::vector<std::vector<double>> pts;
    probe_points(cell, path, pts);
    std::size_t inside = 0;
    for (const auto& p : pts)
      if (E.contains(p)) ++inside;

    if (inside == 0) return;  // probed entirely outside

    const int d = cell.dim();
    if (inside == pts.size()) {
      double q5 = gauss(cell, kG5x, kG5w, 5);
      double q3 = gauss(cell, kG3x, kG3w, 3);
      double est = std::fabs(q5 - q3);
      double share = s.abs_tol * (cell.volume() / root_volume);
      bool converged = est <= std::max(share, s.rel_tol * std::fabs(q5));
      if (converged && q5 == 0.0 && q3 == 0.0 && depth < depth_budget) {
        // Both rules see nothing; scout the non-corner probes before
        // trusting that the cell really is zero (a narrow support can slip
        // between the nodes of both rules).
        for (std::size_t i = (1u << d); i < pts.size(); ++i) {
          ++evals;
          if (f(pts[i]) != 0.0) {
            converged = false;
            break;
          }
        }
      }
      // The first two levels always refine; one nested comparison on a
      // coarse cell is too weak an error signal to stop on.
      if ((converged && depth >= kMinRefineDepth) || depth >= depth_budget) {
        contributions.push_back(q5);
        abs_contributions.push_back(std::fabs(q5));
        errors.push_back(est);
        return;
      }
    } else if (depth >= depth_budget) {
      // Boundary cell at full depth: inside-fraction weighting with a
      // conservative |f| * volume error term.
      double fraction = static_cast<double>(inside) / static_cast<double>(pts.size());
      double vol = cell.volume();
      double max_abs = 0.0;
      std::vector<double> inside_vals;
      for (const auto& p : pts) {
        if (!E.contains(p)) continue;
        ++evals;
        double v = f(p);
        inside_vals.push_back(v);
        max_abs = std::max(max_abs, std::fabs(v));
      }
      double center_val;
      try {
        ++evals;
        center_val = f(cell.center());
      } catch (const EvalError&) {
        // Centroid may fall outside f's domain; use the inside-probe mean.
        center_val = pairwise_sum(inside_vals) / static_cast<double>(inside_vals.size());
      }
      max_abs = std::max(max_abs, std::fabs(center_val));
      contributions.push_back(center_val * vol * fraction);
      abs_contributions.push_back(std::fabs(contributions.back()));
      errors.push_back(max_abs * vol);
      return;
    }

    for (int child = 0; child < (1 << d); ++child) {
      std::vector<double> lo(d), hi(d);
      for (int i = 0; i < d; ++i) {
        double mid = cell.lo[i] + 0.5 * (cell.hi[i] - cell.lo[i]);
        if (child >> i & 1) {
          lo[i] = mid;
          hi[i] = cell.hi[i];
        } else {
          lo[i] = cell.lo[i];
          hi[i] = mid;
        }
      }
      visit(Box(std::move(lo), std::move(hi)), depth + 1,
            path * (1ULL << d) + static_cast<std::uint64_t>(child) + 1);
    }
  }
};

IntegralEstimate integrate_refine(const ScalarField& f, const Region& E,
                                  const IntegratorSettings& s) {
  const int d = E.dim();
  if (d > 3)
    throw std::invalid_argument(
        "refine method supports dimensions 1..3; use the stochastic method");
  RefineWorker w{f, E, s, s.effective_depth(d), E.bounds().volume(), {}, {}, {}, 0};
  w.visit(E.bounds(), 0, 1);

  IntegralEstimate out;
  out.method = Method::refine;
  out.value = pairwise_sum(w.contributions);
  // Rounding allowance for the summation itself.
  double rounding = pairwise_sum(w.abs_contributions) * 0x1.0p-50;
  out.err = pairwise_sum(w.errors) + rounding;
  out.evals = w.evals;
  if (s.strict && out.err > std::max(s.abs_tol, s.rel_tol * std::fabs(out.value)))
    throw BudgetError("refinement budget exhausted before requested tolerance (err=" +
                      format_double(out.err) + ")");
  return out;
}

IntegralEstimate integrate_stochastic(const ScalarField& f, const Region& E,
                                      const IntegratorSettings& s) {
  const Box& box = E.bounds();
  const int d = box.dim();
  const long n = s.sample_count;
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  long strata_per_axis = std::max(
      1L, static_cast<long>(std::floor(std::pow(static_cast<double>(n), 1.0 / d))));
  long n_strata = 1;
  for (int i = 0; i < d; ++i) n_strata *= strata_per_axis;
  long per_stratum = n / n_strata;

  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(n));
  std::vector<double> p(d);
  long f_evals = 0;

  auto record = [&](const std::vector<double>& pt) {
    if (E.contains(pt)) {
      ++f_evals;
      vals.push_back(f(pt));
    } else {
      vals.push_back(0.0);
    }
  };

  std::vector<long> idx(d, 0);
  for (long cell = 0; cell < n_strata; ++cell) {
    for (long k = 0; k < per_stratum; ++k) {
      for (int i = 0; i < d; ++i) {
        double width = (box.hi[i] - box.lo[i]) / static_cast<double>(strata_per_axis);
        p[i] = box.lo[i] + (static_cast<double>(idx[i]) + unit(rng)) * width;
      }
      record(p);
    }
    int axis = 0;
    while (axis < d && ++idx[axis] == strata_per_axis) idx[axis++] = 0;
  }
  while (static_cast<long>(vals.size()) < n) {
    for (int i = 0; i < d; ++i)
      p[i] = box.lo[i] + unit(rng) * (box.hi[i] - box.lo[i]);
    record(p);
  }

  const double vol = box.volume();
  const double nn = static_cast<double>(n);
  double mean = pairwise_sum(vals) / nn;
  std::vector<double> sq(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    double dlt = vals[i] - mean;
    sq[i] = dlt * dlt;
  }
  double sd = std::sqrt(pairwise_sum(sq) / (nn - 1.0));

  IntegralEstimate out;
  out.method = Method::stochastic;
  out.seed = s.seed;
  out.value = vol * mean;
  out.err = 3.0 * vol * sd / std::sqrt(nn);
  out.evals = f_evals;
  if (s.strict && out.err > std::max(s.abs_tol, s.rel_tol * std::fabs(out.value)))
    throw BudgetError("sample budget exhausted before requested tolerance (err=" +
                      format_double(out.err) + ")");
  return out;
}

}  // namespace

IntegralEstimate integrate(const ScalarField& f, const Region& E,
                           const IntegratorSettings& s) {
  s.validate();
  if (f.dim() != E.dim())
    throw std::invalid_argument("field and region dimensions disagree");
  if (s.method == Method::refine) return integrate_refine(f, E, s);
  return integrate_stochastic(f, E, s);
}

IntegralEstimate inner_product(const ScalarField& u, const ScalarField& v,
                               const ScalarField& w, const Region& E,
                               const IntegratorSettings& s) {
  return integrate(u * v * w, E, s);
}

std::vector<std::vector<double>> sample_region(const Region& r, int count,
                                               std::uint64_t seed) {
  const Box& box = r.bounds();
  const int d = box.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<std::size_t>(count));
  long budget = 10000L * count;
  std::vector<double> p(d);
  while (static_cast<int>(pts.size()) < count && budget-- > 0) {
    for (int i = 0; i < d; ++i)
      p[i] = box.lo[i] + unit(rng) * (box.hi[i] - box.lo[i]);
    if (r.contains(p)) pts.push_back(p);
  }
  if (static_cast<int>(pts.size()) < count)
    throw std::runtime_error(
        "region appears to have negligible volume inside its bounding box");
  return pts;
}

}  // namespace mufourier
