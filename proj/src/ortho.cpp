#include "mufourier/ortho.hpp"

#include <cmath>
#include <stdexcept>

namespace mufourier {

namespace {

double weighted_ip(const ScalarField& a, const ScalarField& b, const ScalarField& w,
                   const Region& E, const IntegratorSettings& s) {
  return inner_product(a, b, w, E, s).value;
}

}  // namespace

OrthogonalFamily gram_schmidt(std::span<const ScalarField> seeds, const ScalarField& w,
                              const Region& E, const IntegratorSettings& s,
                              const GramSchmidtOptions& opt) {
  if (seeds.empty()) throw std::invalid_argument("gram_schmidt needs at least one seed");
  if (!w.positivity_floor)
    throw std::invalid_argument("weight must carry a positivity floor");
  for (const auto& seed : seeds)
    if (seed.dim() != E.dim())
      throw std::invalid_argument("seed dimension does not match the region");
  if (w.dim() != E.dim())
    throw std::invalid_argument("weight dimension does not match the region");

  double max_seed_norm2 = 0.0;
  for (const auto& seed : seeds) {
    double n2 = weighted_ip(seed, seed, w, E, s);
    max_seed_norm2 = std::max(max_seed_norm2, n2);
  }
  if (!(max_seed_norm2 > 0.0))
    throw std::runtime_error("all seeds were dropped as numerically dependent");
  const double drop_threshold = opt.drop_rel * max_seed_norm2;

  OrthogonalFamily fam;
  fam.region = E;
  fam.weight = w;

  std::vector<double> norm2;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    ScalarField phi = seeds[k];
    if (!fam.members.empty()) {
      std::vector<double> coeffs(fam.members.size());
      for (std::size_t j = 0; j < fam.members.size(); ++j)
        coeffs[j] = -weighted_ip(phi, fam.members[j], w, E, s) / norm2[j];
      phi = linear_combination(seeds[k], coeffs, fam.members);
      // One full re-orthogonalization pass restores orthogonality lost to
      // cancellation in the first projection.
      for (std::size_t j = 0; j < fam.members.size(); ++j)
        coeffs[j] = -weighted_ip(phi, fam.members[j], w, E, s) / norm2[j];
      bool all_zero = true;
      for (double c : coeffs) all_zero = all_zero && c == 0.0;
      if (!all_zero) phi = linear_combination(phi, coeffs, fam.members);
    }
    IntegralEstimate n2 = inner_product(phi, phi, w, E, s);
    if (n2.value < drop_threshold) {
      fam.dropped.push_back(static_cast<int>(k) + 1);
      continue;
    }
    fam.members.push_back(phi);
    fam.norms.push_back(n2);
    norm2.push_back(n2.value);
  }

  if (fam.members.empty())
    throw std::runtime_error("all seeds were dropped as numerically dependent");

  fam.residual = orthogonality_residual(fam, s);
  if (fam.residual > opt.ortho_tol)
    throw std::runtime_error("orthogonalization failed its certificate: residual " +
                             format_double(fam.residual) + " > tolerance " +
                             format_double(opt.ortho_tol));
  return fam;
}

double orthogonality_residual(const OrthogonalFamily& F, const IntegratorSettings& s) {
  if (F.members.size() != F.norms.size())
    throw std::invalid_argument("family norms do not match its members");
  double worst = 0.0;
  for (std::size_t i = 0; i < F.members.size(); ++i) {
    for (std::size_t j = i + 1; j < F.members.size(); ++j) {
      double ip = weighted_ip(F.members[i], F.members[j], F.weight, F.region, s);
      double denom = std::sqrt(F.norms[i].value * F.norms[j].value);
      if (denom == 0.0) continue;
      worst = std::max(worst, std::fabs(ip) / denom);
    }
  }
  return worst;
}

OrthogonalFamily make_family(std::span<const ScalarField> members, const ScalarField& w,
                             const Region& E, const IntegratorSettings& s) {
  if (members.empty()) throw std::invalid_argument("family needs at least one member");
  OrthogonalFamily fam;
  fam.region = E;
  fam.weight = w;
  fam.members.assign(members.begin(), members.end());
  for (const auto& m : fam.members) fam.norms.push_back(inner_product(m, m, w, E, s));
  fam.residual = orthogonality_residual(fam, s);
  return fam;
}

}  // namespace mufourier
