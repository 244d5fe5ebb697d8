#include "mufourier/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace mufourier {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result from ") + what);
}

const char* builtin_name(Builtin fn) {
  switch (fn) {
    case Builtin::Sin: return "sin";
    case Builtin::Cos: return "cos";
    case Builtin::Exp: return "exp";
    case Builtin::Log: return "log";
    case Builtin::Sqrt: return "sqrt";
    case Builtin::Abs: return "abs";
    case Builtin::Min: return "min";
    case Builtin::Max: return "max";
  }
  return "?";
}

}  // namespace

double Expr::eval(Point p) const {
  switch (kind) {
    case ExprKind::Literal:
      return literal;
    case ExprKind::Variable:
      return p[static_cast<std::size_t>(var_index - 1)];
    case ExprKind::Neg:
      return -args[0]->eval(p);
    case ExprKind::Add: {
      double v = args[0]->eval(p) + args[1]->eval(p);
      require_finite(v, "+");
      return v;
    }
    case ExprKind::Sub: {
      double v = args[0]->eval(p) - args[1]->eval(p);
      require_finite(v, "-");
      return v;
    }
    case ExprKind::Mul: {
      double v = args[0]->eval(p) * args[1]->eval(p);
      require_finite(v, "*");
      return v;
    }
    case ExprKind::Div: {
      double num = args[0]->eval(p);
      double den = args[1]->eval(p);
      if (den == 0.0) throw EvalError("division by zero");
      double v = num / den;
      require_finite(v, "/");
      return v;
    }
    case ExprKind::Pow: {
      double base = args[0]->eval(p);
      double expo = args[1]->eval(p);
      if (base < 0.0 && std::nearbyint(expo) != expo)
        throw EvalError("negative base raised to non-integer power");
      if (base == 0.0 && expo < 0.0) throw EvalError("zero raised to negative power");
      double v = std::pow(base, expo);
      require_finite(v, "^");
      return v;
    }
    case ExprKind::Call: {
      double a = args[0]->eval(p);
      switch (fn) {
        case Builtin::Sin: return std::sin(a);
        case Builtin::Cos: return std::cos(a);
        case Builtin::Exp: {
          double v = std::exp(a);
          require_finite(v, "exp");
          return v;
        }
        case Builtin::Log:
          if (a <= 0.0) throw EvalError("log of non-positive argument");
          return std::log(a);
        case Builtin::Sqrt:
          if (a < 0.0) throw EvalError("sqrt of negative argument");
          return std::sqrt(a);
        case Builtin::Abs: return std::fabs(a);
        case Builtin::Min: return std::fmin(a, args[1]->eval(p));
        case Builtin::Max: return std::fmax(a, args[1]->eval(p));
      }
      throw EvalError("unknown builtin");
    }
    default:
      // Boolean-valued node evaluated in a real context.
      return eval_bool(p) ? 1.0 : 0.0;
  }
}

bool Expr::eval_bool(Point p) const {
  switch (kind) {
    case ExprKind::Lt: return args[0]->eval(p) < args[1]->eval(p);
    case ExprKind::Le: return args[0]->eval(p) <= args[1]->eval(p);
    case ExprKind::Gt: return args[0]->eval(p) > args[1]->eval(p);
    case ExprKind::Ge: return args[0]->eval(p) >= args[1]->eval(p);
    case ExprKind::And: return args[0]->eval_bool(p) && args[1]->eval_bool(p);
    case ExprKind::Or: return args[0]->eval_bool(p) || args[1]->eval_bool(p);
    case ExprKind::Not: return !args[0]->eval_bool(p);
    default:
      throw EvalError("real-valued expression evaluated as a predicate");
  }
}

namespace {

enum class Tok {
  End,
  Number,
  Ident,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  Comma,
  Lt,
  Le,
  Gt,
  Ge,
};

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;

  Tok tok = Tok::End;
  std::size_t tok_pos = 0;
  double number = 0.0;
  std::string ident;

  explicit Lexer(std::string_view s) : src(s) { advance(); }

  void advance() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    tok_pos = pos;
    if (pos >= src.size()) {
      tok = Tok::End;
      return;
    }
    char c = src[pos];
    switch (c) {
      case '+': tok = Tok::Plus; ++pos; return;
      case '-': tok = Tok::Minus; ++pos; return;
      case '*': tok = Tok::Star; ++pos; return;
      case '/': tok = Tok::Slash; ++pos; return;
      case '^': tok = Tok::Caret; ++pos; return;
      case '(': tok = Tok::LParen; ++pos; return;
      case ')': tok = Tok::RParen; ++pos; return;
      case ',': tok = Tok::Comma; ++pos; return;
      case '<':
        ++pos;
        if (pos < src.size() && src[pos] == '=') { ++pos; tok = Tok::Le; }
        else tok = Tok::Lt;
        return;
      case '>':
        ++pos;
        if (pos < src.size() && src[pos] == '=') { ++pos; tok = Tok::Ge; }
        else tok = Tok::Gt;
        return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* start = src.data() + pos;
      char* end = nullptr;
      number = std::strtod(start, &end);
      if (end == start) throw ParseError("malformed number", pos);
      pos += static_cast<std::size_t>(end - start);
      tok = Tok::Number;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      ident = std::string(src.substr(start, pos - start));
      tok = Tok::Ident;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }
};

struct Parser {
  Lexer lex;
  int dim;

  Parser(std::string_view src, int dim) : lex(src), dim(dim) {}

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, lex.tok_pos); }

  ExprPtr make(ExprKind kind, ValueKind type, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->type = type;
    e->args = std::move(args);
    return e;
  }

  void want_real(const ExprPtr& e, const char* ctx) {
    if (e->type != ValueKind::Real) fail(std::string(ctx) + " requires a real-valued operand");
  }
  void want_bool(const ExprPtr& e, const char* ctx) {
    if (e->type != ValueKind::Boolean) fail(std::string(ctx) + " requires a boolean operand");
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (lex.tok == Tok::Ident && lex.ident == "or") {
      want_bool(lhs, "'or'");
      lex.advance();
      ExprPtr rhs = parse_and();
      want_bool(rhs, "'or'");
      lhs = make(ExprKind::Or, ValueKind::Boolean, {lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (lex.tok == Tok::Ident && lex.ident == "and") {
      want_bool(lhs, "'and'");
      lex.advance();
      ExprPtr rhs = parse_not();
      want_bool(rhs, "'and'");
      lhs = make(ExprKind::And, ValueKind::Boolean, {lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (lex.tok == Tok::Ident && lex.ident == "not") {
      lex.advance();
      ExprPtr arg = parse_not();
      want_bool(arg, "'not'");
      return make(ExprKind::Not, ValueKind::Boolean, {arg});
    }
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_add();
    ExprKind kind;
    switch (lex.tok) {
      case Tok::Lt: kind = ExprKind::Lt; break;
      case Tok::Le: kind = ExprKind::Le; break;
      case Tok::Gt: kind = ExprKind::Gt; break;
      case Tok::Ge: kind = ExprKind::Ge; break;
      default: return lhs;
    }
    want_real(lhs, "comparison");
    lex.advance();
    ExprPtr rhs = parse_add();
    want_real(rhs, "comparison");
    return make(kind, ValueKind::Boolean, {lhs, rhs});
  }

  ExprPtr parse_add() {
    ExprPtr lhs = parse_mul();
    for (;;) {
      ExprKind kind;
      if (lex.tok == Tok::Plus) kind = ExprKind::Add;
      else if (lex.tok == Tok::Minus) kind = ExprKind::Sub;
      else return lhs;
      want_real(lhs, "arithmetic");
      lex.advance();
      ExprPtr rhs = parse_mul();
      want_real(rhs, "arithmetic");
      lhs = make(kind, ValueKind::Real, {lhs, rhs});
    }
  }

  ExprPtr parse_mul() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      ExprKind kind;
      if (lex.tok == Tok::Star) kind = ExprKind::Mul;
      else if (lex.tok == Tok::Slash) kind = ExprKind::Div;
      else return lhs;
      want_real(lhs, "arithmetic");
      lex.advance();
      ExprPtr rhs = parse_unary();
      want_real(rhs, "arithmetic");
      lhs = make(kind, ValueKind::Real, {lhs, rhs});
    }
  }

  ExprPtr parse_unary() {
    if (lex.tok == Tok::Minus) {
      lex.advance();
      ExprPtr arg = parse_unary();
      want_real(arg, "unary minus");
      return make(ExprKind::Neg, ValueKind::Real, {arg});
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (lex.tok == Tok::Caret) {
      want_real(base, "'^'");
      lex.advance();
      ExprPtr expo = parse_unary();  // right-associative, allows x^-2
      want_real(expo, "'^'");
      return make(ExprKind::Pow, ValueKind::Real, {base, expo});
    }
    return base;
  }

  ExprPtr parse_primary() {
    switch (lex.tok) {
      case Tok::Number: {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Literal;
        e->type = ValueKind::Real;
        e->literal = lex.number;
        lex.advance();
        return e;
      }
      case Tok::LParen: {
        lex.advance();
        ExprPtr inner = parse_or();
        if (lex.tok != Tok::RParen) fail("expected ')'");
        lex.advance();
        return inner;
      }
      case Tok::Ident: {
        std::string name = lex.ident;
        std::size_t where = lex.tok_pos;
        bool all_digits = name.size() >= 2;
        for (std::size_t i = 1; i < name.size(); ++i)
          all_digits = all_digits && std::isdigit(static_cast<unsigned char>(name[i]));
        if (name[0] == 'x' && all_digits) {
          int index = std::atoi(name.c_str() + 1);
          if (index < 1 || index > dim)
            throw ParseError("unknown variable " + name + " (dimension is " +
                                 std::to_string(dim) + ")",
                             where);
          lex.advance();
          auto e = std::make_shared<Expr>();
          e->kind = ExprKind::Variable;
          e->type = ValueKind::Real;
          e->var_index = index;
          return e;
        }
        Builtin fn;
        int arity;
        if (name == "sin") { fn = Builtin::Sin; arity = 1; }
        else if (name == "cos") { fn = Builtin::Cos; arity = 1; }
        else if (name == "exp") { fn = Builtin::Exp; arity = 1; }
        else if (name == "log") { fn = Builtin::Log; arity = 1; }
        else if (name == "sqrt") { fn = Builtin::Sqrt; arity = 1; }
        else if (name == "abs") { fn = Builtin::Abs; arity = 1; }
        else if (name == "min") { fn = Builtin::Min; arity = 2; }
        else if (name == "max") { fn = Builtin::Max; arity = 2; }
        else throw ParseError("unknown function or identifier '" + name + "'", where);
        lex.advance();
        if (lex.tok != Tok::LParen) fail("expected '(' after function name");
        lex.advance();
        std::vector<ExprPtr> args;
        args.push_back(parse_or());
        want_real(args.back(), name.c_str());
        if (arity == 2) {
          if (lex.tok != Tok::Comma) fail("expected ',' in two-argument function");
          lex.advance();
          args.push_back(parse_or());
          want_real(args.back(), name.c_str());
        }
        if (lex.tok != Tok::RParen) fail("expected ')'");
        lex.advance();
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Call;
        e->type = ValueKind::Real;
        e->fn = fn;
        e->args = std::move(args);
        return e;
      }
      default:
        fail("expected a number, variable, function call, or '('");
    }
  }
};

ExprPtr parse_typed(std::string_view source, int dim, ValueKind want) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  Parser p(source, dim);
  ExprPtr e = p.parse_or();
  if (p.lex.tok != Tok::End) p.fail("unexpected trailing input");
  if (e->type != want) {
    if (want == ValueKind::Boolean)
      throw ParseError("predicate must be boolean (use comparisons / and / or / not)",
                       0);
    throw ParseError("field must be real-valued, not a predicate", 0);
  }
  return e;
}

// Precedence levels used for minimal-parenthesis printing.
int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Or: return 1;
    case ExprKind::And: return 2;
    case ExprKind::Not: return 3;
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge: return 4;
    case ExprKind::Add:
    case ExprKind::Sub: return 5;
    case ExprKind::Mul:
    case ExprKind::Div: return 6;
    case ExprKind::Neg: return 7;
    case ExprKind::Pow: return 8;
    default: return 9;
  }
}

void print(std::ostream& os, const Expr& e) {
  auto child = [&](const Expr& c, bool needs_paren) {
    if (needs_paren) {
      os << '(';
      print(os, c);
      os << ')';
    } else {
      print(os, c);
    }
  };
  int prec = precedence(e);
  switch (e.kind) {
    case ExprKind::Literal: os << format_double(e.literal); return;
    case ExprKind::Variable: os << 'x' << e.var_index; return;
    case ExprKind::Neg:
      os << '-';
      child(*e.args[0], precedence(*e.args[0]) < prec);
      return;
    case ExprKind::Not:
      os << "not ";
      child(*e.args[0], precedence(*e.args[0]) < prec);
      return;
    case ExprKind::Call:
      os << builtin_name(e.fn) << '(';
      print(os, *e.args[0]);
      if (e.args.size() > 1) {
        os << ", ";
        print(os, *e.args[1]);
      }
      os << ')';
      return;
    default: break;
  }
  const char* op = nullptr;
  switch (e.kind) {
    case ExprKind::Add: op = " + "; break;
    case ExprKind::Sub: op = " - "; break;
    case ExprKind::Mul: op = "*"; break;
    case ExprKind::Div: op = "/"; break;
    case ExprKind::Pow: op = "^"; break;
    case ExprKind::Lt: op = " < "; break;
    case ExprKind::Le: op = " <= "; break;
    case ExprKind::Gt: op = " > "; break;
    case ExprKind::Ge: op = " >= "; break;
    case ExprKind::And: op = " and "; break;
    case ExprKind::Or: op = " or "; break;
    default: op = "?"; break;
  }
  // Left operand may share this precedence (left associativity); the right
  // operand needs parens at equal precedence, except for right-associative
  // '^' where it is the left operand that needs them.
  bool right_assoc = e.kind == ExprKind::Pow;
  child(*e.args[0], precedence(*e.args[0]) < prec + (right_assoc ? 1 : 0));
  os << op;
  child(*e.args[1], precedence(*e.args[1]) < prec + (right_assoc ? 0 : 1));
}

}  // namespace

ExprPtr parse_real_expr(std::string_view source, int dim) {
  return parse_typed(source, dim, ValueKind::Real);
}

ExprPtr parse_bool_expr(std::string_view source, int dim) {
  return parse_typed(source, dim, ValueKind::Boolean);
}

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(os, e);
  return os.str();
}

}  // namespace mufourier
