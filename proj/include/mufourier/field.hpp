#ifndef MUFOURIER_FIELD_HPP
#define MUFOURIER_FIELD_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mufourier/common.hpp"
#include "mufourier/expr.hpp"

namespace mufourier {

/// Abstract evaluation node behind a ScalarField. Implementations are
/// immutable and pure, so fields may be evaluated concurrently.
class Field {
 public:
  explicit Field(int dim) : dim_(dim) {}
  virtual ~Field() = default;
  int dim() const { return dim_; }
  virtual double eval(Point p) const = 0;
  virtual std::string describe() const = 0;

 private:
  int dim_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// A bounded measurable function on (a region of) R^n. Cheap to copy.
/// `lower`/`upper` are declared bounds; `positivity_floor`, when present,
/// certifies f >= floor > 0 and licenses use as a reciprocal denominator.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(FieldPtr impl) : impl_(std::move(impl)) {}

  int dim() const { return impl_->dim(); }
  double operator()(Point p) const { return impl_->eval(p); }
  const FieldPtr& impl() const { return impl_; }
  std::string describe() const { return impl_->describe(); }
  bool valid() const { return impl_ != nullptr; }

  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> positivity_floor;

  ScalarField with_bounds(double lo, double hi) const;
  ScalarField with_floor(double floor) const;

 private:
  FieldPtr impl_;
};

/// Deterministic point -> {true,false} map parsed from a boolean expression.
class Predicate {
 public:
  Predicate() = default;
  Predicate(ExprPtr expr, int dim, std::string source)
      : expr_(std::move(expr)), dim_(dim), source_(std::move(source)) {}

  int dim() const { return dim_; }
  bool operator()(Point p) const { return expr_->eval_bool(p); }
  const std::string& describe() const { return source_; }
  bool valid() const { return expr_ != nullptr; }

 private:
  ExprPtr expr_;
  int dim_ = 0;
  std::string source_;
};

/// Parse a real-valued expression into a field over x1..x`dim`.
ScalarField parse_field(std::string_view source, int dim);

/// Parse a boolean expression into a membership predicate.
Predicate parse_predicate(std::string_view source, int dim);

ScalarField constant(int dim, double value);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator/(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a);

ScalarField scale(double c, const ScalarField& f);
ScalarField square(const ScalarField& f);

/// 1/f. Refuses to divide by a denominator without a declared positivity
/// floor; the result carries what is known of 1/f's own range.
ScalarField reciprocal(const ScalarField& f);

/// base + sum of coeff_i * term_i, evaluated left to right in term order.
/// An invalid `base` means no base term.
ScalarField linear_combination(const ScalarField& base,
                               std::span<const double> coeffs,
                               std::span<const ScalarField> terms);

}  // namespace mufourier

#endif
