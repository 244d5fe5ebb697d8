#include "mufourier/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mufourier {

Box::Box(std::vector<double> lo_, std::vector<double> hi_)
    : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size() || lo.empty())
    throw std::invalid_argument("box needs matching nonempty lo/hi vectors");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
      throw std::invalid_argument("box bounds must be finite");
    if (!(lo[i] < hi[i]))
      throw std::invalid_argument("empty box: lo must be strictly below hi on axis " +
                                  std::to_string(i + 1));
  }
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool Box::contains(Point p) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

std::vector<double> Box::center() const {
  std::vector<double> c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = lo[i] + 0.5 * (hi[i] - lo[i]);
  return c;
}

enum class RegionKind { BoxPrim, Ball, Pred, Union, Intersection, Difference };

struct Region::Node {
  RegionKind kind;
  Box bounds;
  // Ball
  std::vector<double> center;
  double radius = 0.0;
  // Pred
  Predicate membership;
  // Composite
  std::shared_ptr<const Node> left, right;

  bool contains_inner(Point p) const {
    switch (kind) {
      case RegionKind::BoxPrim:
        return true;  // bounds already checked
      case RegionKind::Ball: {
        double r2 = 0.0;
        for (std::size_t i = 0; i < center.size(); ++i) {
          double d = p[i] - center[i];
          r2 += d * d;
        }
        return r2 <= radius * radius;
      }
      case RegionKind::Pred:
        return membership(p);
      case RegionKind::Union:
        return left->contains(p) || right->contains(p);
      case RegionKind::Intersection:
        return left->contains(p) && right->contains(p);
      case RegionKind::Difference:
        return left->contains(p) && !right->contains(p);
    }
    return false;
  }

  bool contains(Point p) const { return bounds.contains(p) && contains_inner(p); }

  std::string describe() const {
    std::ostringstream os;
    switch (kind) {
      case RegionKind::BoxPrim: {
        os << "box[";
        for (int i = 0; i < bounds.dim(); ++i) {
          if (i) os << ", ";
          os << format_double(bounds.lo[i]) << ".." << format_double(bounds.hi[i]);
        }
        os << "]";
        break;
      }
      case RegionKind::Ball: {
        os << "ball(center=(";
        for (std::size_t i = 0; i < center.size(); ++i) {
          if (i) os << ", ";
          os << format_double(center[i]);
        }
        os << "), r=" << format_double(radius) << ")";
        break;
      }
      case RegionKind::Pred:
        os << "{" << membership.describe() << "}";
        break;
      case RegionKind::Union:
        os << "(" << left->describe() << " | " << right->describe() << ")";
        break;
      case RegionKind::Intersection:
        os << "(" << left->describe() << " & " << right->describe() << ")";
        break;
      case RegionKind::Difference:
        os << "(" << left->describe() << " \\ " << right->describe() << ")";
        break;
    }
    return os.str();
  }
};

int Region::dim() const { return node_->bounds.dim(); }
const Box& Region::bounds() const { return node_->bounds; }
bool Region::contains(Point p) const { return node_->contains(p); }
std::string Region::describe() const { return node_->describe(); }

Region Region::box(Box b) {
  auto n = std::make_shared<Node>();
  n->kind = RegionKind::BoxPrim;
  n->bounds = std::move(b);
  return Region(std::move(n));
}

Region Region::ball(std::vector<double> center, double radius) {
  if (center.empty()) throw std::invalid_argument("ball needs a nonempty center");
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be > 0");
  std::vector<double> lo(center.size()), hi(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    lo[i] = center[i] - radius;
    hi[i] = center[i] + radius;
  }
  auto n = std::make_shared<Node>();
  n->kind = RegionKind::Ball;
  n->bounds = Box(std::move(lo), std::move(hi));
  n->center = std::move(center);
  n->radius = radius;
  return Region(std::move(n));
}

Region Region::predicate(Box bounds, Predicate membership) {
  if (bounds.dim() != membership.dim())
    throw std::invalid_argument("predicate dimension does not match its bounding box");
  auto n = std::make_shared<Node>();
  n->kind = RegionKind::Pred;
  n->bounds = std::move(bounds);
  n->membership = std::move(membership);
  return Region(std::move(n));
}

namespace {
void check_region_dims(const Region& a, const Region& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("region dimensions disagree: " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
}
}  // namespace

Region region_union(const Region& a, const Region& b) {
  check_region_dims(a, b);
  auto n = std::make_shared<Region::Node>();
  n->kind = RegionKind::Union;
  std::vector<double> lo(a.dim()), hi(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = std::min(a.bounds().lo[i], b.bounds().lo[i]);
    hi[i] = std::max(a.bounds().hi[i], b.bounds().hi[i]);
  }
  n->bounds = Box(std::move(lo), std::move(hi));
  n->left = a.node_;
  n->right = b.node_;
  return Region(std::move(n));
}

Region region_intersection(const Region& a, const Region& b) {
  check_region_dims(a, b);
  auto n = std::make_shared<Region::Node>();
  n->kind = RegionKind::Intersection;
  n->bounds = a.bounds();
  n->left = a.node_;
  n->right = b.node_;
  return Region(std::move(n));
}

Region region_difference(const Region& a, const Region& b) {
  check_region_dims(a, b);
  auto n = std::make_shared<Region::Node>();
  n->kind = RegionKind::Difference;
  n->bounds = a.bounds();
  n->left = a.node_;
  n->right = b.node_;
  return Region(std::move(n));
}

namespace {

class MaskNode final : public Field {
 public:
  MaskNode(FieldPtr f, Region r) : Field(f->dim()), f_(std::move(f)), r_(std::move(r)) {}
  double eval(Point p) const override { return r_.contains(p) ? f_->eval(p) : 0.0; }
  std::string describe() const override {
    return "(" + f_->describe() + ") on " + r_.describe();
  }

 private:
  FieldPtr f_;
  Region r_;
};

}  // namespace

ScalarField masked(const ScalarField& f, const Region& r) {
  if (f.dim() != r.dim())
    throw std::invalid_argument("mask region dimension does not match the field");
  ScalarField out(std::make_shared<MaskNode>(f.impl(), r));
  if (f.lower && f.upper) {
    out.lower = std::min(0.0, *f.lower);
    out.upper = std::max(0.0, *f.upper);
  }
  return out;
}

bool SignedCell::claims(Point p, const Box& root) const {
  for (int i = 0; i < box.dim(); ++i) {
    if (p[i] < box.lo[i]) return false;
    // Half-open on the upper side except where the cell touches the root's
    // top face, which stays closed so the whole root is covered.
    if (box.hi[i] == root.hi[i]) {
      if (p[i] > box.hi[i]) return false;
    } else {
      if (p[i] >= box.hi[i]) return false;
    }
  }
  return true;
}

int SignPartition::claimant(Point p) const {
  if (!parent.contains(p)) return -1;
  const Box& root = parent.bounds();
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].claims(p, root)) return static_cast<int>(i);
  for (std::size_t i = 0; i < unresolved.size(); ++i)
    if (unresolved[i].claims(p, root)) return static_cast<int>(cells.size() + i);
  return -1;
}

double default_zeta(const ScalarField& f) {
  double scale = 1.0;
  if (f.lower || f.upper) {
    scale = 0.0;
    if (f.lower) scale = std::max(scale, std::fabs(*f.lower));
    if (f.upper) scale = std::max(scale, std::fabs(*f.upper));
    if (scale == 0.0) scale = 1.0;
  }
  return 1e-9 * scale;
}

namespace {

struct PartitionBuilder {
  const ScalarField& f;
  const Region& E;
  int max_depth;
  double zeta;
  std::uint64_t seed;
  SignPartition out;

  void probe_points(const Box& cell, std::uint64_t path,
                    std::vector<std::vector<double>>& pts) const {
    const int d = cell.dim();
    pts.clear();
    // 2^d corners
    for (int mask = 0; mask < (1 << d); ++mask) {
      std::vector<double> p(d);
      for (int i = 0; i < d; ++i) p[i] = (mask >> i & 1) ? cell.hi[i] : cell.lo[i];
      pts.push_back(std::move(p));
    }
    pts.push_back(cell.center());
    std::uint64_t state = seed ^ (path * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL);
    for (int k = 0; k < 4; ++k) {
      std::vector<double> p(d);
      for (int i = 0; i < d; ++i) {
        double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
        p[i] = cell.lo[i] + u * (cell.hi[i] - cell.lo[i]);
      }
      pts.push_back(std::move(p));
    }
  }

  void emit(const Box& cell, int sign, double min_abs, double max_abs, bool resolved) {
    SignedCell sc;
    sc.box = cell;
    sc.sign = sign;
    sc.region = region_intersection(Region::box(cell), E);
    sc.min_abs_f = min_abs;
    sc.max_abs_f = max_abs;
    if (resolved) {
      out.cells.push_back(std::move(sc));
    } else {
      out.unresolved_volume += cell.volume();
      out.unresolved.push_back(std::move(sc));
    }
  }

  void visit(const Box& cell, int depth, std::uint64_t path) {
    std::vector<std::vector<double>> pts;
    probe_points(cell, path, pts);

    int n_pos = 0, n_neg = 0, n_zero = 0;
    double min_abs = std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
    int n_inside = 0;
    for (const auto& p : pts) {
      if (!E.contains(p)) continue;
      ++n_inside;
      double v = f(p);
      double a = std::fabs(v);
      min_abs = std::min(min_abs, a);
      max_abs = std::max(max_abs, a);
      out.max_abs_f = std::max(out.max_abs_f, a);
      if (a <= zeta) ++n_zero;
      else if (v > 0.0) ++n_pos;
      else ++n_neg;
    }

    if (n_inside == 0) {
      // No probe landed in E; the cell may still meet E, so keep it as an
      // unclassified leaf rather than claiming emptiness from samples.
      emit(cell, 0, 0.0, 0.0, /*resolved=*/false);
      return;
    }

    const bool uniform = (n_pos == n_inside) || (n_neg == n_inside) || (n_zero == n_inside);
    if (uniform) {
      int sign = n_pos == n_inside ? 1 : (n_neg == n_inside ? -1 : 0);
      emit(cell, sign, min_abs, max_abs, /*resolved=*/true);
      return;
    }
    if (depth >= max_depth) {
      emit(cell, 0, min_abs, max_abs, /*resolved=*/false);
      return;
    }

    const int d = cell.dim();
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

}  // namespace

SignPartition sign_partition(const ScalarField& f, const Region& E, int max_depth,
                             double zeta, std::uint64_t seed) {
  if (f.dim() != E.dim())
    throw std::invalid_argument("field and region dimensions disagree");
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (!(zeta > 0.0)) throw std::invalid_argument("zero threshold zeta must be > 0");
  if (E.dim() > 16) throw std::invalid_argument("sign partition supports dim <= 16");

  PartitionBuilder b{f, E, max_depth, zeta, seed, {}};
  b.out.parent = E;
  b.out.zeta = zeta;
  b.visit(E.bounds(), 0, 1);
  return b.out;
}

}  // namespace mufourier
