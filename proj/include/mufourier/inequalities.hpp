#ifndef MUFOURIER_INEQUALITIES_HPP
#define MUFOURIER_INEQUALITIES_HPP

#include <optional>

#include "mufourier/expansion.hpp"

namespace mufourier {

enum class Relation { LE, GE };

enum class Verdict { Holds, Fails, Indeterminate };

std::string verdict_name(Verdict v);

/// Tolerance-aware comparison of two estimated quantities.
/// `margin` is the satisfaction amount (rhs - lhs for LE, lhs - rhs for
/// GE); `slack` = lhs_err + rhs_err + abs_tol. `holds` is the permissive
/// flag margin >= -slack; the verdict is decisive only beyond the slack.
struct Comparison {
  Relation rel = Relation::LE;
  double lhs = 0.0, lhs_err = 0.0;
  double rhs = 0.0, rhs_err = 0.0;
  double slack = 0.0;
  double margin = 0.0;
  bool holds = false;
  Verdict verdict = Verdict::Indeterminate;
};

Comparison compare(Relation rel, Estimate lhs, Estimate rhs, double abs_tol);

/// (integral of g^2)(integral of h^2) - (integral of g h)^2 with the
/// combined error of the three estimates. Nonnegative up to the error;
/// |gap| <= err signals the equality case.
Estimate cauchy_schwarz_gap(const ScalarField& g, const ScalarField& h, const Region& E,
                            const IntegratorSettings& s);

/// Per-(n,m) record of the two sufficient-condition inequalities.
struct PairRecord {
  int n = 0, m = 0;
  Comparison crit_a;  // integral of phi^2 psi^2/(fg)  <=  product of the two norms
  Comparison crit_b;  // c d * integral of phi psi  >=  c d * integral phi * integral psi
};

/// Optional proof-chain diagnostics (expensive double sums).
struct CriterionDiagnostics {
  Estimate product_deviation;   // integral of (fg - s_N t_N)^2 / (fg)
  Estimate expanded_form;       // same quantity after expanding the square
  Estimate after_term_bound;    // expanded form with the square term bounded termwise
  Estimate bessel_double_sum;   // sum over (n,m) of (num_n num_m)^2/(den_n den_m)
  Comparison chain;             // product_deviation <= integral fg - double sum
  Comparison double_bessel;     // integral fg >= double sum
};

struct CriterionReport {
  int truncation = 0;
  std::vector<PairRecord> grid;
  std::vector<CoefficientEstimate> c;  // coefficients of f over phi
  std::vector<CoefficientEstimate> d;  // coefficients of g over psi
  Comparison conclusion;               // integral of fg >= integral f * integral g
  Estimate measure;                    // mu(D), reported alongside the conclusion
  bool all_flags_hold = false;
  bool all_flags_decisive = false;
  std::optional<CriterionDiagnostics> diagnostics;
};

/// Evaluate both sufficient-condition inequalities for every pair
/// (n, m) <= N and the product-inequality conclusion itself.
CriterionReport product_criterion_check(const ScalarField& f, const ScalarField& g,
                                        const OrthogonalFamily& Phi,
                                        const OrthogonalFamily& Psi, int N,
                                        const Region& E, const IntegratorSettings& s,
                                        bool with_diagnostics = false);

struct CorollaryRecord {
  int n = 0, m = 0;
  Comparison cs_bound;   // integral phi^2 psi^2/(fg) <= sqrt(q_f(n) q_g(m))
  bool certified = false;  // both single-function sub-conditions hold
};

struct CorollaryReport {
  int truncation = 0;
  std::vector<Comparison> phi_subcond;  // integral phi^4/f^2 <= (integral phi^2/f)^2
  std::vector<Comparison> psi_subcond;  // integral psi^4/g^2 <= (integral psi^2/g)^2
  std::vector<CorollaryRecord> grid;
};

/// Verify the Cauchy-Schwarz consequence for every pair (it always holds)
/// and evaluate the two per-function sub-conditions that certify pairs.
CorollaryReport corollary_check(const ScalarField& f, const ScalarField& g,
                                const OrthogonalFamily& Phi, const OrthogonalFamily& Psi,
                                int N, const Region& E, const IntegratorSettings& s);

}  // namespace mufourier

#endif
