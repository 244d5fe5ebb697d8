#ifndef MUFOURIER_INTEGRATE_HPP
#define MUFOURIER_INTEGRATE_HPP

#include <cstdint>
#include <string>

#include "mufourier/region.hpp"

namespace mufourier {

enum class Method { refine, stochastic };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct IntegratorSettings {
  Method method = Method::refine;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  int max_depth = 0;  // 0 -> per-dimension default (14 / 9 / 6 for dims 1..3)
  long sample_count = 32768;
  std::uint64_t seed = 1;
  bool strict = false;

  void validate() const;
  int effective_depth(int dim) const;
};

/// Numerical stand-in for an integral over a region: value, an absolute
/// error estimate, and the work spent producing it.
struct IntegralEstimate {
  double value = 0.0;
  double err = 0.0;
  long evals = 0;
  Method method = Method::refine;
  std::uint64_t seed = 0;
};

/// A plain value with an absolute error bound, used for derived quantities
/// (ratios, sums of estimates, inequality gaps).
struct Estimate {
  double value = 0.0;
  double err = 0.0;
};

/// Integral of f over E.
///
/// `refine`: dyadic subdivision of E's bounding box. Cells whose probe
/// samples all lie in E get a 5-point product Gauss rule, refined until a
/// nested 3-point comparison meets the local tolerance share; cells probed
/// entirely outside E are skipped; cells with mixed probes subdivide to
/// max_depth and then contribute centroid value x (volume x inside
/// fraction), with |f| x volume added to the error bound.
///
/// `stochastic`: stratified uniform samples over the bounding box masked by
/// membership; value = volume x mean, err = 3 sd / sqrt(N).
///
/// Both methods are deterministic for fixed settings.
IntegralEstimate integrate(const ScalarField& f, const Region& E,
                           const IntegratorSettings& s);

/// Weighted inner product: integral of u*v*w over E.
IntegralEstimate inner_product(const ScalarField& u, const ScalarField& v,
                               const ScalarField& w, const Region& E,
                               const IntegratorSettings& s);

/// Deterministic sample points of a region (rejection from the bounding
/// box). Throws if acceptance is too low to produce `count` points.
std::vector<std::vector<double>> sample_region(const Region& r, int count,
                                               std::uint64_t seed);

}  // namespace mufourier

#endif
