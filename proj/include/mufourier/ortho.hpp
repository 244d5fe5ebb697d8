#ifndef MUFOURIER_ORTHO_HPP
#define MUFOURIER_ORTHO_HPP

#include "mufourier/integrate.hpp"

namespace mufourier {

/// A finite family of fields certified mutually orthogonal on a region
/// with respect to a positive weight w: for i != j the normalized weighted
/// inner product of member i and j stays below the construction tolerance.
struct OrthogonalFamily {
  Region region;
  ScalarField weight;
  std::vector<ScalarField> members;
  std::vector<IntegralEstimate> norms;  // integral of member^2 * w
  double residual = 0.0;
  std::vector<int> dropped;  // 1-based indices of discarded seeds
};

struct GramSchmidtOptions {
  // Seeds whose orthogonalized norm^2 falls below drop_rel x (max seed
  // norm^2) are discarded as numerically dependent.
  double drop_rel = 1e-10;
  // Normalized off-diagonal magnitude the construction must certify.
  double ortho_tol = 1e-6;
};

/// Classical Gram-Schmidt in the inner product <u,v> = integral of u*v*w,
/// with one full re-orthogonalization pass. The first surviving seed is
/// kept unmodified. Members are stored as composition trees over the
/// seeds, so evaluation cost grows quadratically with family size.
OrthogonalFamily gram_schmidt(std::span<const ScalarField> seeds, const ScalarField& w,
                              const Region& E, const IntegratorSettings& s,
                              const GramSchmidtOptions& opt = {});

/// Recompute all pairwise weighted inner products of F's members and
/// return max over i != j of |<phi_i, phi_j>| / sqrt(norm_i * norm_j).
/// A single-member family has residual 0.
double orthogonality_residual(const OrthogonalFamily& F, const IntegratorSettings& s);

/// Assemble a family from given members without any orthogonalization,
/// computing norms with the given settings. Used to inspect candidate
/// families; makes no orthogonality claim (residual is not certified).
OrthogonalFamily make_family(std::span<const ScalarField> members, const ScalarField& w,
                             const Region& E, const IntegratorSettings& s);

}  // namespace mufourier

#endif
