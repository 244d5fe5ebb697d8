#include "mufourier/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mufourier {

ScalarField ScalarField::with_bounds(double lo, double hi) const {
  if (!(lo <= hi)) throw std::invalid_argument("bounds must satisfy lo <= hi");
  ScalarField out = *this;
  out.lower = lo;
  out.upper = hi;
  if (lo > 0.0 && (!out.positivity_floor || *out.positivity_floor < lo))
    out.positivity_floor = lo;
  return out;
}

ScalarField ScalarField::with_floor(double floor) const {
  if (!(floor > 0.0)) throw std::invalid_argument("positivity floor must be > 0");
  ScalarField out = *this;
  out.positivity_floor = floor;
  return out;
}

namespace {

class ExprFieldNode final : public Field {
 public:
  ExprFieldNode(ExprPtr expr, int dim, std::string source)
      : Field(dim), expr_(std::move(expr)), source_(std::move(source)) {}
  double eval(Point p) const override { return expr_->eval(p); }
  std::string describe() const override { return source_; }

 private:
  ExprPtr expr_;
  std::string source_;
};

class ConstNode final : public Field {
 public:
  ConstNode(int dim, double v) : Field(dim), v_(v) {}
  double eval(Point) const override { return v_; }
  std::string describe() const override { return format_double(v_); }

 private:
  double v_;
};

enum class BinOp { Add, Sub, Mul, Div };

class BinaryNode final : public Field {
 public:
  BinaryNode(BinOp op, FieldPtr a, FieldPtr b)
      : Field(a->dim()), op_(op), a_(std::move(a)), b_(std::move(b)) {}
  double eval(Point p) const override {
    double x = a_->eval(p);
    double y = b_->eval(p);
    switch (op_) {
      case BinOp::Add: return x + y;
      case BinOp::Sub: return x - y;
      case BinOp::Mul: return x * y;
      case BinOp::Div:
        if (y == 0.0) throw EvalError("division by zero in composed field");
        return x / y;
    }
    return 0.0;
  }
  std::string describe() const override {
    const char* op = op_ == BinOp::Add   ? " + "
                     : op_ == BinOp::Sub ? " - "
                     : op_ == BinOp::Mul ? "*"
                                         : "/";
    return "(" + a_->describe() + ")" + op + "(" + b_->describe() + ")";
  }

 private:
  BinOp op_;
  FieldPtr a_, b_;
};

class ScaleNode final : public Field {
 public:
  ScaleNode(double c, FieldPtr f) : Field(f->dim()), c_(c), f_(std::move(f)) {}
  double eval(Point p) const override { return c_ * f_->eval(p); }
  std::string describe() const override {
    return format_double(c_) + "*(" + f_->describe() + ")";
  }

 private:
  double c_;
  FieldPtr f_;
};

class SquareNode final : public Field {
 public:
  explicit SquareNode(FieldPtr f) : Field(f->dim()), f_(std::move(f)) {}
  double eval(Point p) const override {
    double v = f_->eval(p);
    return v * v;
  }
  std::string describe() const override { return "(" + f_->describe() + ")^2"; }

 private:
  FieldPtr f_;
};

class LinCombNode final : public Field {
 public:
  LinCombNode(FieldPtr base, std::vector<double> coeffs, std::vector<FieldPtr> terms,
              int dim)
      : Field(dim), base_(std::move(base)), coeffs_(std::move(coeffs)),
        terms_(std::move(terms)) {}
  double eval(Point p) const override {
    double acc = base_ ? base_->eval(p) : 0.0;
    for (std::size_t i = 0; i < terms_.size(); ++i)
      acc += coeffs_[i] * terms_[i]->eval(p);
    return acc;
  }
  std::string describe() const override {
    std::ostringstream os;
    bool first = true;
    if (base_) {
      os << "(" << base_->describe() << ")";
      first = false;
    }
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (!first) os << " + ";
      os << format_double(coeffs_[i]) << "*(" << terms_[i]->describe() << ")";
      first = false;
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  FieldPtr base_;
  std::vector<double> coeffs_;
  std::vector<FieldPtr> terms_;
};

void check_same_dim(const ScalarField& a, const ScalarField& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("field dimensions disagree: " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
}

}  // namespace

ScalarField parse_field(std::string_view source, int dim) {
  ExprPtr e = parse_real_expr(source, dim);
  return ScalarField(
      std::make_shared<ExprFieldNode>(std::move(e), dim, std::string(source)));
}

Predicate parse_predicate(std::string_view source, int dim) {
  ExprPtr e = parse_bool_expr(source, dim);
  return Predicate(std::move(e), dim, std::string(source));
}

ScalarField constant(int dim, double value) {
  ScalarField f(std::make_shared<ConstNode>(dim, value));
  f.lower = value;
  f.upper = value;
  if (value > 0.0) f.positivity_floor = value;
  return f;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  check_same_dim(a, b);
  ScalarField out(std::make_shared<BinaryNode>(BinOp::Add, a.impl(), b.impl()));
  if (a.lower && b.lower) out.lower = *a.lower + *b.lower;
  if (a.upper && b.upper) out.upper = *a.upper + *b.upper;
  if (a.positivity_floor && b.positivity_floor)
    out.positivity_floor = *a.positivity_floor + *b.positivity_floor;
  return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  check_same_dim(a, b);
  ScalarField out(std::make_shared<BinaryNode>(BinOp::Sub, a.impl(), b.impl()));
  if (a.lower && b.upper) out.lower = *a.lower - *b.upper;
  if (a.upper && b.lower) out.upper = *a.upper - *b.lower;
  return out;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  check_same_dim(a, b);
  ScalarField out(std::make_shared<BinaryNode>(BinOp::Mul, a.impl(), b.impl()));
  if (a.lower && a.upper && b.lower && b.upper) {
    double c[4] = {*a.lower * *b.lower, *a.lower * *b.upper, *a.upper * *b.lower,
                   *a.upper * *b.upper};
    out.lower = *std::min_element(c, c + 4);
    out.upper = *std::max_element(c, c + 4);
  }
  if (a.positivity_floor && b.positivity_floor)
    out.positivity_floor = *a.positivity_floor * *b.positivity_floor;
  return out;
}

ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  check_same_dim(a, b);
  return ScalarField(std::make_shared<BinaryNode>(BinOp::Div, a.impl(), b.impl()));
}

ScalarField operator-(const ScalarField& a) { return scale(-1.0, a); }

ScalarField scale(double c, const ScalarField& f) {
  ScalarField out(std::make_shared<ScaleNode>(c, f.impl()));
  if (f.lower && f.upper) {
    out.lower = std::min(c * *f.lower, c * *f.upper);
    out.upper = std::max(c * *f.lower, c * *f.upper);
  }
  if (c > 0.0 && f.positivity_floor) out.positivity_floor = c * *f.positivity_floor;
  return out;
}

ScalarField square(const ScalarField& f) {
  ScalarField out(std::make_shared<SquareNode>(f.impl()));
  if (f.lower && f.upper) {
    double lo = *f.lower, hi = *f.upper;
    out.upper = std::max(lo * lo, hi * hi);
    out.lower = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(lo * lo, hi * hi);
  }
  if (f.positivity_floor)
    out.positivity_floor = *f.positivity_floor * *f.positivity_floor;
  return out;
}

ScalarField reciprocal(const ScalarField& f) {
  if (!f.positivity_floor)
    throw std::invalid_argument(
        "reciprocal weight requires a declared positivity floor on the denominator");
  ScalarField out = constant(f.dim(), 1.0) / f;
  out.upper = 1.0 / *f.positivity_floor;
  // 1/f stays strictly positive; a quantitative floor needs an upper bound on f.
  out.positivity_floor =
      f.upper ? 1.0 / *f.upper : std::numeric_limits<double>::denorm_min();
  out.lower = *out.positivity_floor;
  return out;
}

ScalarField linear_combination(const ScalarField& base, std::span<const double> coeffs,
                               std::span<const ScalarField> terms) {
  if (coeffs.size() != terms.size())
    throw std::invalid_argument("coefficient/term count mismatch");
  int dim = base.valid() ? base.dim() : (terms.empty() ? 0 : terms[0].dim());
  if (dim == 0) throw std::invalid_argument("empty linear combination");
  std::vector<FieldPtr> impls;
  impls.reserve(terms.size());
  for (const ScalarField& t : terms) {
    if (t.dim() != dim) throw std::invalid_argument("field dimensions disagree");
    impls.push_back(t.impl());
  }
  return ScalarField(std::make_shared<LinCombNode>(
      base.valid() ? base.impl() : nullptr,
      std::vector<double>(coeffs.begin(), coeffs.end()), std::move(impls), dim));
}

}  // namespace mufourier
