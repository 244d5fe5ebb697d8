#include "mufourier/inequalities.hpp"

#include <cmath>
#include <stdexcept>

namespace mufourier {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

Comparison compare(Relation rel, Estimate lhs, Estimate rhs, double abs_tol) {
  Comparison c;
  c.rel = rel;
  c.lhs = lhs.value;
  c.lhs_err = lhs.err;
  c.rhs = rhs.value;
  c.rhs_err = rhs.err;
  c.slack = lhs.err + rhs.err + abs_tol;
  c.margin = rel == Relation::LE ? rhs.value - lhs.value : lhs.value - rhs.value;
  c.holds = c.margin >= -c.slack;
  if (c.margin >= c.slack) c.verdict = Verdict::Holds;
  else if (c.margin <= -c.slack) c.verdict = Verdict::Fails;
  else c.verdict = Verdict::Indeterminate;
  return c;
}

namespace {

void check_family_weight(const OrthogonalFamily& fam, const ScalarField& f,
                         const Region& E, const char* which) {
  for (const auto& p : sample_region(E, 8, 0x5eedULL)) {
    double v = fam.weight(p) * f(p);
    if (!(std::fabs(v - 1.0) <= 1e-6))
      throw std::invalid_argument(std::string("family ") + which +
                                  " is not weighted by the reciprocal of its "
                                  "function (w*f = " +
                                  format_double(v) + " at a sampled point)");
  }
}

Estimate to_estimate(const IntegralEstimate& e) { return {e.value, e.err}; }

Estimate product(Estimate a, Estimate b) {
  double v = a.value * b.value;
  double err = std::fabs(a.value) * b.err + std::fabs(b.value) * a.err + a.err * b.err;
  return {v, err};
}

Estimate square_est(Estimate a) { return product(a, a); }

Estimate sqrt_est(Estimate a) {
  double lo = std::sqrt(std::max(a.value - a.err, 0.0));
  double hi = std::sqrt(std::max(a.value + a.err, 0.0));
  double v = std::sqrt(std::max(a.value, 0.0));
  return {v, std::max(hi - v, v - lo)};
}

}  // namespace

Estimate cauchy_schwarz_gap(const ScalarField& g, const ScalarField& h, const Region& E,
                            const IntegratorSettings& s) {
  Estimate g2 = to_estimate(integrate(square(g), E, s));
  Estimate h2 = to_estimate(integrate(square(h), E, s));
  Estimate gh = to_estimate(integrate(g * h, E, s));
  Estimate lhs = product(g2, h2);
  Estimate rhs = square_est(gh);
  return {lhs.value - rhs.value, lhs.err + rhs.err};
}

CriterionReport product_criterion_check(const ScalarField& f, const ScalarField& g,
                                        const OrthogonalFamily& Phi,
                                        const OrthogonalFamily& Psi, int N,
                                        const Region& E, const IntegratorSettings& s,
                                        bool with_diagnostics) {
  if (N < 1) throw std::invalid_argument("truncation must be >= 1");
  if (N > static_cast<int>(Phi.members.size()) ||
      N > static_cast<int>(Psi.members.size()))
    throw std::invalid_argument("truncation exceeds a family size");
  if (!f.positivity_floor || !g.positivity_floor)
    throw std::invalid_argument("both functions need positivity floors");
  check_family_weight(Phi, f, E, "phi");
  check_family_weight(Psi, g, E, "psi");

  CriterionReport rep;
  rep.truncation = N;

  ScalarField fg = f * g;

  for (int n = 0; n < N; ++n)
    rep.c.push_back(fourier_coefficient(Phi.members[n], f, E, s));
  for (int m = 0; m < N; ++m)
    rep.d.push_back(fourier_coefficient(Psi.members[m], g, E, s));

  for (int n = 0; n < N; ++n) {
    const ScalarField& phi = Phi.members[n];
    Estimate num_f = to_estimate(rep.c[n].numerator);
    Estimate den_f = to_estimate(rep.c[n].denominator);
    Estimate cn = {rep.c[n].value, rep.c[n].err};
    for (int m = 0; m < N; ++m) {
      const ScalarField& psi = Psi.members[m];
      Estimate num_g = to_estimate(rep.d[m].numerator);
      Estimate den_g = to_estimate(rep.d[m].denominator);
      Estimate dm = {rep.d[m].value, rep.d[m].err};

      PairRecord pr;
      pr.n = n + 1;
      pr.m = m + 1;

      Estimate cross =
          to_estimate(integrate(square(phi) * square(psi) / fg, E, s));
      pr.crit_a = compare(Relation::LE, cross, product(den_f, den_g), s.abs_tol);

      // The coefficient product is kept on both sides; dividing it out
      // would flip the inequality whenever c_n d_m < 0.
      Estimate cd = product(cn, dm);
      Estimate mixed = to_estimate(integrate(phi * psi, E, s));
      pr.crit_b = compare(Relation::GE, product(cd, mixed),
                          product(cd, product(num_f, num_g)), s.abs_tol);
      rep.grid.push_back(pr);
    }
  }

  Estimate int_fg = to_estimate(integrate(fg, E, s));
  Estimate int_f = to_estimate(integrate(f, E, s));
  Estimate int_g = to_estimate(integrate(g, E, s));
  rep.conclusion = compare(Relation::GE, int_fg, product(int_f, int_g), s.abs_tol);
  rep.measure = to_estimate(integrate(constant(E.dim(), 1.0), E, s));

  rep.all_flags_hold = true;
  rep.all_flags_decisive = true;
  for (const PairRecord& pr : rep.grid) {
    rep.all_flags_hold = rep.all_flags_hold && pr.crit_a.holds && pr.crit_b.holds;
    rep.all_flags_decisive = rep.all_flags_decisive &&
                             pr.crit_a.verdict == Verdict::Holds &&
                             pr.crit_b.verdict == Verdict::Holds;
  }

  if (with_diagnostics) {
    CriterionDiagnostics diag;

    std::vector<double> cvals, dvals;
    for (int n = 0; n < N; ++n) cvals.push_back(rep.c[n].value);
    for (int m = 0; m < N; ++m) dvals.push_back(rep.d[m].value);
    ScalarField s_N = linear_combination(
        ScalarField(), cvals,
        std::span<const ScalarField>(Phi.members.data(), static_cast<std::size_t>(N)));
    ScalarField t_N = linear_combination(
        ScalarField(), dvals,
        std::span<const ScalarField>(Psi.members.data(), static_cast<std::size_t>(N)));

    diag.product_deviation =
        to_estimate(integrate(square(fg - s_N * t_N) / fg, E, s));

    // Expanded form: integral fg - 2 sum c d <phi psi> + integral (s t)^2/(fg).
    double v = int_fg.value, e = int_fg.err;
    double v_term = 0.0, e_term = 0.0;
    for (int n = 0; n < N; ++n) {
      for (int m = 0; m < N; ++m) {
        Estimate cd = product({rep.c[n].value, rep.c[n].err},
                              {rep.d[m].value, rep.d[m].err});
        Estimate mixed =
            to_estimate(integrate(Phi.members[n] * Psi.members[m], E, s));
        Estimate t = product(cd, mixed);
        v -= 2.0 * t.value;
        e += 2.0 * t.err;

        Estimate cd2 = product(square_est({rep.c[n].value, rep.c[n].err}),
                               square_est({rep.d[m].value, rep.d[m].err}));
        Estimate cross = to_estimate(
            integrate(square(Phi.members[n]) * square(Psi.members[m]) / fg, E, s));
        Estimate tb = product(cd2, cross);
        v_term += tb.value;
        e_term += tb.err;
      }
    }
    Estimate st2 = to_estimate(integrate(square(s_N * t_N) / fg, E, s));
    diag.expanded_form = {v + st2.value, e + st2.err};
    diag.after_term_bound = {v + v_term, e + e_term};

    double bsum = 0.0, berr = 0.0;
    for (int n = 0; n < N; ++n) {
      for (int m = 0; m < N; ++m) {
        Estimate nf = square_est(to_estimate(rep.c[n].numerator));
        Estimate ng = square_est(to_estimate(rep.d[m].numerator));
        Estimate numr = product(nf, ng);
        double den = rep.c[n].denominator.value * rep.d[m].denominator.value;
        double den_err =
            std::fabs(rep.c[n].denominator.value) * rep.d[m].denominator.err +
            std::fabs(rep.d[m].denominator.value) * rep.c[n].denominator.err;
        double term = numr.value / den;
        bsum += term;
        berr += (numr.err + std::fabs(term) * den_err) / std::fabs(den);
      }
    }
    diag.bessel_double_sum = {bsum, berr};
    diag.chain = compare(Relation::LE, diag.product_deviation,
                         {int_fg.value - bsum, int_fg.err + berr}, s.abs_tol);
    diag.double_bessel =
        compare(Relation::GE, int_fg, diag.bessel_double_sum, s.abs_tol);
    rep.diagnostics = std::move(diag);
  }

  return rep;
}

CorollaryReport corollary_check(const ScalarField& f, const ScalarField& g,
                                const OrthogonalFamily& Phi, const OrthogonalFamily& Psi,
                                int N, const Region& E, const IntegratorSettings& s) {
  if (N < 1) throw std::invalid_argument("truncation must be >= 1");
  if (N > static_cast<int>(Phi.members.size()) ||
      N > static_cast<int>(Psi.members.size()))
    throw std::invalid_argument("truncation exceeds a family size");
  if (!f.positivity_floor || !g.positivity_floor)
    throw std::invalid_argument("both functions need positivity floors");
  check_family_weight(Phi, f, E, "phi");
  check_family_weight(Psi, g, E, "psi");

  CorollaryReport rep;
  rep.truncation = N;
  ScalarField fg = f * g;

  std::vector<Estimate> qf(N), qg(N);
  for (int n = 0; n < N; ++n) {
    const ScalarField& phi = Phi.members[n];
    qf[n] = to_estimate(integrate(square(square(phi)) / square(f), E, s));
    Estimate den = to_estimate(integrate(square(phi) / f, E, s));
    rep.phi_subcond.push_back(compare(Relation::LE, qf[n], square_est(den), s.abs_tol));
  }
  for (int m = 0; m < N; ++m) {
    const ScalarField& psi = Psi.members[m];
    qg[m] = to_estimate(integrate(square(square(psi)) / square(g), E, s));
    Estimate den = to_estimate(integrate(square(psi) / g, E, s));
    rep.psi_subcond.push_back(compare(Relation::LE, qg[m], square_est(den), s.abs_tol));
  }

  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < N; ++m) {
      CorollaryRecord rec;
      rec.n = n + 1;
      rec.m = m + 1;
      Estimate cross = to_estimate(
          integrate(square(Phi.members[n]) * square(Psi.members[m]) / fg, E, s));
      rec.cs_bound =
          compare(Relation::LE, cross, sqrt_est(product(qf[n], qg[m])), s.abs_tol);
      rec.certified = rep.phi_subcond[n].holds && rep.psi_subcond[m].holds;
      rep.grid.push_back(rec);
    }
  }
  return rep;
}

}  // namespace mufourier
