#ifndef MUFOURIER_EXPR_HPP
#define MUFOURIER_EXPR_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mufourier/common.hpp"

namespace mufourier {

// A small arithmetic expression language over variables x1..xn used to
// define scalar fields and membership predicates.
//
//   orExpr   := andExpr ('or' andExpr)*
//   andExpr  := notExpr ('and' notExpr)*
//   notExpr  := 'not' notExpr | cmpExpr
//   cmpExpr  := addExpr (('<' | '<=' | '>' | '>=') addExpr)?
//   addExpr  := mulExpr (('+' | '-') mulExpr)*
//   mulExpr  := unary (('*' | '/') unary)*
//   unary    := '-' unary | power
//   power    := primary ('^' unary)?          (right-associative)
//   primary  := number | 'x'<digits> | fn '(' args ')' | '(' orExpr ')'
//
// Functions: sin cos exp log sqrt abs (unary), min max (binary).
// Expressions are statically typed as real- or boolean-valued; mixing the
// two outside of comparisons is a parse error.

enum class ExprKind {
  Literal,
  Variable,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Not,
  Call,
};

enum class Builtin { Sin, Cos, Exp, Log, Sqrt, Abs, Min, Max };

enum class ValueKind { Real, Boolean };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree. Evaluation is pure and strictly
/// left-to-right, so identical inputs give bit-identical results.
class Expr {
 public:
  ExprKind kind;
  ValueKind type;
  double literal = 0.0;
  int var_index = 0;  // 1-based
  Builtin fn = Builtin::Sin;
  std::vector<ExprPtr> args;

  double eval(Point p) const;
  bool eval_bool(Point p) const;
};

/// Parse a real-valued expression over x1..x`dim`.
ExprPtr parse_real_expr(std::string_view source, int dim);

/// Parse a boolean-valued expression over x1..x`dim`.
ExprPtr parse_bool_expr(std::string_view source, int dim);

/// Render with minimal parentheses; reparsing yields an expression that
/// evaluates identically.
std::string to_string(const Expr& e);

}  // namespace mufourier

#endif
