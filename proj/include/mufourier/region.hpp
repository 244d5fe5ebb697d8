#ifndef MUFOURIER_REGION_HPP
#define MUFOURIER_REGION_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mufourier/field.hpp"

namespace mufourier {

/// Axis-aligned bounding box with lo_i < hi_i and finite entries.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  Box() = default;
  Box(std::vector<double> lo, std::vector<double> hi);

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  bool contains(Point p) const;
  std::vector<double> center() const;
};

/// A bounded measurable subset of R^n: bounding box + pure membership
/// predicate + the construction tree it came from. Membership is false
/// everywhere outside the bounding box. Measurability is operational:
/// any pure predicate defines a region.
class Region {
 public:
  Region() = default;

  int dim() const;
  const Box& bounds() const;
  bool contains(Point p) const;
  std::string describe() const;
  bool valid() const { return node_ != nullptr; }

  static Region box(Box b);
  static Region ball(std::vector<double> center, double radius);
  static Region predicate(Box bounds, Predicate membership);

  friend Region region_union(const Region& a, const Region& b);
  friend Region region_intersection(const Region& a, const Region& b);
  friend Region region_difference(const Region& a, const Region& b);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
  explicit Region(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
};

Region region_union(const Region& a, const Region& b);
Region region_intersection(const Region& a, const Region& b);
Region region_difference(const Region& a, const Region& b);

/// f restricted to a region: equals f inside, 0 outside.
ScalarField masked(const ScalarField& f, const Region& r);

/// One dyadic cell of a sign partition. `box` is the cell's own box;
/// `region` is box intersected with the parent region. `min_abs_f` is the
/// smallest |f| seen at the probe points (signed cells only).
struct SignedCell {
  Box box;
  int sign = 0;  // +1, -1, or 0
  Region region;
  double min_abs_f = 0.0;
  double max_abs_f = 0.0;

  /// Half-open cell membership (closed on the parent's top faces) used by
  /// the partition so every point has exactly one claimant.
  bool claims(Point p, const Box& root) const;
};

/// Decomposition of a region into cells where f keeps one sign, plus
/// leftover cells that could not be resolved within the depth budget.
/// Cells and unresolved cells are pairwise disjoint and jointly cover the
/// parent region; `unresolved_volume` is the sum of unresolved cell box
/// volumes, an upper bound on the measure left unclassified.
struct SignPartition {
  Region parent;
  double zeta = 0.0;
  std::vector<SignedCell> cells;
  std::vector<SignedCell> unresolved;
  double unresolved_volume = 0.0;
  double max_abs_f = 0.0;  // over all probe evaluations

  /// Index of the claiming cell: cells first, then unresolved.
  /// Returns -1 when no cell claims p (p outside the parent bounds).
  int claimant(Point p) const;
};

/// Tags dyadic cells of E's bounding box with the sign of f where probe
/// samples agree (|f| <= zeta counts as zero); disagreeing cells subdivide
/// until max_depth and then land in `unresolved`.
SignPartition sign_partition(const ScalarField& f, const Region& E, int max_depth,
                             double zeta, std::uint64_t seed = 1);

/// Scale-aware default zero threshold: 1e-9 times the declared bound of
/// |f| (1 when no bounds are declared).
double default_zeta(const ScalarField& f);

}  // namespace mufourier

#endif
