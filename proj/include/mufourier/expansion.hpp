#ifndef MUFOURIER_EXPANSION_HPP
#define MUFOURIER_EXPANSION_HPP

#include "mufourier/ortho.hpp"

namespace mufourier {

/// Coefficient c = (integral of phi) / (integral of phi^2 / f) with a
/// first-order propagated error bound; keeps both underlying estimates.
struct CoefficientEstimate {
  double value = 0.0;
  double err = 0.0;
  IntegralEstimate numerator;
  IntegralEstimate denominator;
};

CoefficientEstimate fourier_coefficient(const ScalarField& phi, const ScalarField& f,
                                        const Region& E, const IntegratorSettings& s);

/// An expansion of a positive field over an orthogonal family with weight
/// 1/f: the coefficient list plus everything needed to evaluate partial
/// sums and the identities that come with them.
struct Expansion {
  ScalarField f;
  OrthogonalFamily family;
  std::vector<CoefficientEstimate> coeffs;

  int size() const { return static_cast<int>(coeffs.size()); }

  /// Partial sum s_N built over the first N members (N = 0 gives the zero
  /// field).
  ScalarField partial_sum(int N) const;
};

/// Compute the coefficient of every family member.
Expansion expand(const ScalarField& f, const OrthogonalFamily& family,
                 const IntegratorSettings& s);

/// Integral of (f - s_N)^2 * (1/f). Nonnegative up to the error bound.
Estimate mean_square_deviation(const Expansion& X, int N, const IntegratorSettings& s);

/// Same deviation with caller-supplied coefficients in place of the
/// expansion's own (used for optimality probes).
Estimate mean_square_deviation_with(const Expansion& X, std::span<const double> coeffs,
                                    int N, const IntegratorSettings& s);

/// integral of f  minus  sum_{n<=N} (integral of phi_n)^2 / (integral of
/// phi_n^2/f). Agrees with the mean-square deviation within combined
/// error and is nonnegative up to it.
Estimate bessel_gap(const Expansion& X, int N, const IntegratorSettings& s);

/// Signed residual  sum_n c_n^2 * (integral of phi_n^2/f)  -  integral of
/// f  over the full family; vanishes within combined error when the
/// family actually reproduces f.
Estimate parseval_residual(const Expansion& X, const IntegratorSettings& s);

/// Per-cell record of a partitioned expansion run.
struct CellReport {
  int cell_id = 0;
  int sign = 0;
  std::vector<double> coefficients;
  std::vector<double> coefficient_errs;
  Estimate cell_parseval;  // signed contribution of this cell
  Estimate cell_integral;  // direct integral of f over the cell
};

struct PartitionReport {
  std::vector<CellReport> cells;
  Estimate total;            // sum of signed per-cell Parseval values
  Estimate direct_integral;  // integral of f over the whole region
  double discrepancy = 0.0;  // total - direct
  double unresolved_volume = 0.0;
  double unresolved_bound = 0.0;  // volume x sup|f|
};

/// Eq-by-cell Parseval assembly: expands f (negated on negative cells)
/// over a per-cell family and sums the signed per-cell Parseval values;
/// zero cells contribute 0 with a volume x |f| allowance. `seed_sets`
/// supplies per-cell seeds (indexed like P.cells) or, when empty, defaults
/// to { f restricted to the cell }, which reproduces the cell integral
/// exactly by construction.
PartitionReport partitioned_parseval(const ScalarField& f, const SignPartition& P,
                                     const std::vector<std::vector<ScalarField>>& seed_sets,
                                     const IntegratorSettings& s);

}  // namespace mufourier

#endif
