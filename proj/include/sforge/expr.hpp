#pragma once

#include <cctype>
#include <charconv>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "sforge/jet.hpp"

namespace sforge {

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset(offset) {}
  std::size_t offset;
};

class DomainError : public Error {
public:
  DomainError(const std::string& what, std::size_t offset)
      : Error(what + " (expression byte " + std::to_string(offset) + ")"), offset(offset) {}
  std::size_t offset;
};

enum class NodeKind { Number, Pi, Coord, Param, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class FuncId { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Atan };

inline const std::vector<std::pair<std::string, FuncId>>& function_table() {
  static const std::vector<std::pair<std::string, FuncId>> t = {
      {"sin", FuncId::Sin},   {"cos", FuncId::Cos},   {"tan", FuncId::Tan},
      {"sinh", FuncId::Sinh}, {"cosh", FuncId::Cosh}, {"tanh", FuncId::Tanh},
      {"exp", FuncId::Exp},   {"log", FuncId::Log},   {"sqrt", FuncId::Sqrt},
      {"atan", FuncId::Atan}};
  return t;
}

struct ExprNode {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;
  int index = -1;    // coordinate or parameter slot
  std::string name;  // identifier as written (coords, params, functions)
  FuncId fn = FuncId::Sin;
  std::shared_ptr<const ExprNode> a, b;
  std::size_t offset = 0;
};

using NodePtr = std::shared_ptr<const ExprNode>;

/// Immutable parsed expression over named coordinates and late-bound named
/// parameters. Evaluation is pure; one Expr may be evaluated concurrently.
class Expr {
public:
  Expr() = default;
  Expr(NodePtr root, std::vector<std::string> coords, std::vector<std::string> params)
      : root_(std::move(root)), coords_(std::move(coords)), params_(std::move(params)) {}

  const ExprNode& root() const { return *root_; }
  bool valid() const { return root_ != nullptr; }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<std::string>& params() const { return params_; }

private:
  NodePtr root_;
  std::vector<std::string> coords_;
  std::vector<std::string> params_;
};

using ParamMap = std::map<std::string, double>;

// ---------------------------------------------------------------------------
// Parser. Grammar (standard precedence, ^ binds tighter than unary minus and
// is right-associative):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
// ---------------------------------------------------------------------------

namespace detail {

struct Parser {
  std::string_view src;
  std::size_t pos = 0;
  const std::vector<std::string>& coords;
  const std::vector<std::string>& params;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= src.size();
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (pos >= src.size() || src[pos] != c)
      throw ParseError(std::string("expected '") + c + "'", pos);
    ++pos;
  }

  static NodePtr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      skip_ws();
      const std::size_t at = pos;
      if (accept('+')) {
        ExprNode n;
        n.kind = NodeKind::Add;
        n.a = lhs;
        n.b = parse_term();
        n.offset = at;
        lhs = make(std::move(n));
      } else if (accept('-')) {
        ExprNode n;
        n.kind = NodeKind::Sub;
        n.a = lhs;
        n.b = parse_term();
        n.offset = at;
        lhs = make(std::move(n));
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos;
      if (accept('*')) {
        ExprNode n;
        n.kind = NodeKind::Mul;
        n.a = lhs;
        n.b = parse_unary();
        n.offset = at;
        lhs = make(std::move(n));
      } else if (accept('/')) {
        ExprNode n;
        n.kind = NodeKind::Div;
        n.a = lhs;
        n.b = parse_unary();
        n.offset = at;
        lhs = make(std::move(n));
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    const std::size_t at = pos;
    if (accept('-')) {
      ExprNode n;
      n.kind = NodeKind::Neg;
      n.a = parse_unary();
      n.offset = at;
      return make(std::move(n));
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    skip_ws();
    const std::size_t at = pos;
    if (accept('^')) {
      ExprNode n;
      n.kind = NodeKind::Pow;
      n.a = base;
      n.b = parse_unary();  // right associative, sign allowed in exponent
      n.offset = at;
      return make(std::move(n));
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos >= src.size()) throw ParseError("unexpected end of input", pos);
    const std::size_t at = pos;
    const char c = src[pos];
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos;
      while (end < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
        ++end;
      std::string ident(src.substr(pos, end - pos));
      pos = end;
      if (accept('(')) {
        for (const auto& [name, id] : function_table()) {
          if (name == ident) {
            ExprNode n;
            n.kind = NodeKind::Call;
            n.fn = id;
            n.name = ident;
            n.a = parse_expr();
            if (peek() == ',')
              throw ParseError("function '" + ident + "' takes exactly one argument", pos);
            expect(')');
            n.offset = at;
            return make(std::move(n));
          }
        }
        throw ParseError("unknown function '" + ident + "'", at);
      }
      if (ident == "pi") {
        ExprNode n;
        n.kind = NodeKind::Pi;
        n.offset = at;
        return make(std::move(n));
      }
      for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] == ident) {
          ExprNode n;
          n.kind = NodeKind::Coord;
          n.index = static_cast<int>(i);
          n.name = ident;
          n.offset = at;
          return make(std::move(n));
        }
      }
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i] == ident) {
          ExprNode n;
          n.kind = NodeKind::Param;
          n.index = static_cast<int>(i);
          n.name = ident;
          n.offset = at;
          return make(std::move(n));
        }
      }
      for (const auto& [name, id] : function_table())
        if (name == ident)
          throw ParseError("function '" + ident + "' used without arguments", at);
      throw ParseError("unknown identifier '" + ident + "'", at);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }

  NodePtr parse_number() {
    const std::size_t at = pos;
    std::size_t end = pos;
    while (end < src.size() && std::isdigit(static_cast<unsigned char>(src[end]))) ++end;
    if (end < src.size() && src[end] == '.') {
      ++end;
      if (end >= src.size() || !std::isdigit(static_cast<unsigned char>(src[end])))
        throw ParseError("malformed number: digit required after '.'", end);
      while (end < src.size() && std::isdigit(static_cast<unsigned char>(src[end]))) ++end;
    }
    if (end < src.size() && (src[end] == 'e' || src[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < src.size() && (src[e] == '+' || src[e] == '-')) ++e;
      if (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) {
        while (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) ++e;
        end = e;
      }
    }
    double v = 0;
    const auto res = std::from_chars(src.data() + at, src.data() + end, v);
    if (res.ec != std::errc{}) throw ParseError("malformed number", at);
    pos = end;
    ExprNode n;
    n.number = v;
    n.offset = at;
    return make(std::move(n));
  }
};

} // namespace detail

inline Expr parse(std::string_view source, std::vector<std::string> coords,
                  std::vector<std::string> params = {}) {
  if (source.empty()) throw ParseError("empty expression", 0);
  detail::Parser p{source, 0, coords, params};
  NodePtr root = p.parse_expr();
  if (!p.eof()) throw ParseError("trailing input after expression", p.pos);
  return Expr(std::move(root), std::move(coords), std::move(params));
}

// ---------------------------------------------------------------------------
// Printing and structural comparison.
// ---------------------------------------------------------------------------

namespace detail {

inline int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    default: return 5;
  }
}

inline std::string format_number(double v) {
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline void print_node(const ExprNode& n, std::string& out) {
  const auto child = [&out](const ExprNode& c, int min_prec) {
    const bool parens = precedence(c.kind) < min_prec;
    if (parens) out += '(';
    print_node(c, out);
    if (parens) out += ')';
  };
  switch (n.kind) {
    case NodeKind::Number: out += format_number(n.number); break;
    case NodeKind::Pi: out += "pi"; break;
    case NodeKind::Coord:
    case NodeKind::Param: out += n.name; break;
    case NodeKind::Neg:
      out += '-';
      child(*n.a, precedence(NodeKind::Neg));
      break;
    case NodeKind::Add:
      child(*n.a, 1);
      out += " + ";
      child(*n.b, 2);
      break;
    case NodeKind::Sub:
      child(*n.a, 1);
      out += " - ";
      child(*n.b, 2);
      break;
    case NodeKind::Mul:
      child(*n.a, 2);
      out += "*";
      child(*n.b, 3);
      break;
    case NodeKind::Div:
      child(*n.a, 2);
      out += "/";
      child(*n.b, 3);
      break;
    case NodeKind::Pow:
      child(*n.a, 5);  // parenthesize any compound base
      out += "^";
      child(*n.b, 4);  // right associative; unary minus allowed
      break;
    case NodeKind::Call:
      out += n.name;
      out += '(';
      print_node(*n.a, out);
      out += ')';
      break;
  }
}

} // namespace detail

inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_node(e.root(), out);
  return out;
}

inline bool structurally_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Number: return a.number == b.number;
    case NodeKind::Pi: return true;
    case NodeKind::Coord:
    case NodeKind::Param: return a.index == b.index && a.name == b.name;
    case NodeKind::Neg: return structurally_equal(*a.a, *b.a);
    case NodeKind::Call: return a.fn == b.fn && structurally_equal(*a.a, *b.a);
    default:
      return structurally_equal(*a.a, *b.a) && structurally_equal(*a.b, *b.b);
  }
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
  return structurally_equal(a.root(), b.root());
}

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> bind_params(const Expr& e, const ParamMap& values) {
  std::vector<double> bound(e.params().size(), 0.0);
  for (std::size_t i = 0; i < e.params().size(); ++i) {
    const auto it = values.find(e.params()[i]);
    if (it == values.end())
      throw EvalError("unbound parameter '" + e.params()[i] + "'");
    bound[i] = it->second;
  }
  return bound;
}

/// Exponent nodes that are literal integers (possibly negated) take the
/// repeated-multiplication path, which avoids branch cuts for negative bases.
inline bool constant_int_exponent(const ExprNode& n, long long& out) {
  if (n.kind == NodeKind::Neg) {
    long long inner = 0;
    if (!constant_int_exponent(*n.a, inner)) return false;
    out = -inner;
    return true;
  }
  if (n.kind != NodeKind::Number) return false;
  const double v = n.number;
  if (v != std::floor(v) || std::abs(v) > 1e6) return false;
  out = static_cast<long long>(v);
  return true;
}

template <std::size_t N>
Jet2<N> eval_node(const ExprNode& n, const Vec<N>& x, const std::vector<double>& par) {
  using J = Jet2<N>;
  try {
    switch (n.kind) {
      case NodeKind::Number: return J::constant(n.number);
      case NodeKind::Pi: return J::constant(std::numbers::pi);
      case NodeKind::Coord: return J::coordinate(x[n.index], n.index);
      case NodeKind::Param: return J::constant(par[n.index]);
      case NodeKind::Neg: return -eval_node<N>(*n.a, x, par);
      case NodeKind::Add: return eval_node<N>(*n.a, x, par) + eval_node<N>(*n.b, x, par);
      case NodeKind::Sub: return eval_node<N>(*n.a, x, par) - eval_node<N>(*n.b, x, par);
      case NodeKind::Mul: return eval_node<N>(*n.a, x, par) * eval_node<N>(*n.b, x, par);
      case NodeKind::Div: return eval_node<N>(*n.a, x, par) / eval_node<N>(*n.b, x, par);
      case NodeKind::Pow: {
        long long k = 0;
        const J base = eval_node<N>(*n.a, x, par);
        if (constant_int_exponent(*n.b, k)) return pow_int(base, k);
        const J expo = eval_node<N>(*n.b, x, par);
        bool expo_const = true;
        for (double g : expo.grad) expo_const = expo_const && g == 0.0;
        for (double h : expo.hess) expo_const = expo_const && h == 0.0;
        if (expo_const && expo.value == std::floor(expo.value) && std::abs(expo.value) <= 1e6)
          return pow_int(base, static_cast<long long>(expo.value));
        return pow(base, expo);
      }
      case NodeKind::Call: {
        const J u = eval_node<N>(*n.a, x, par);
        switch (n.fn) {
          case FuncId::Sin: return sin(u);
          case FuncId::Cos: return cos(u);
          case FuncId::Tan: return tan(u);
          case FuncId::Sinh: return sinh(u);
          case FuncId::Cosh: return cosh(u);
          case FuncId::Tanh: return tanh(u);
          case FuncId::Exp: return exp(u);
          case FuncId::Log: return log(u);
          case FuncId::Sqrt: return sqrt(u);
          case FuncId::Atan: return atan(u);
        }
        throw EvalError("unreachable function id");
      }
    }
    throw EvalError("unreachable node kind");
  } catch (const DomainError&) {
    throw;
  } catch (const EvalError& err) {
    std::string point = "(";
    for (int i = 0; i < N; ++i) point += (i ? ", " : "") + format_number(x[i]);
    point += ")";
    throw DomainError(std::string(err.what()) + " at point " + point, n.offset);
  }
}

} // namespace detail

/// Value, gradient and Hessian of e at a point, exact to rounding.
template <std::size_t N>
Jet2<N> eval_jet2(const Expr& e, const Vec<N>& point, const ParamMap& params = {}) {
  const std::vector<double> bound = detail::bind_params(e, params);
  Jet2<N> j = detail::eval_node<N>(e.root(), point, bound);
  if (!j.finite()) throw DomainError("non-finite evaluation result", e.root().offset);
  return j;
}

template <std::size_t N>
double eval_value(const Expr& e, const Vec<N>& point, const ParamMap& params = {}) {
  return eval_jet2<N>(e, point, params).value;
}

/// 4th-order central finite differences of e at a point. The step along
/// coordinate i is h·(1+|xᵢ|). Cross-check backend for the jet evaluator.
template <std::size_t N>
Jet2<N> eval_fd(const Expr& e, const Vec<N>& point, double h, const ParamMap& params = {}) {
  if (!(h > 0.0)) throw EvalError("eval_fd: step must be positive");
  const std::vector<double> bound = detail::bind_params(e, params);
  const auto value_at = [&](const Vec<N>& x) {
    const Jet2<N> j = detail::eval_node<N>(e.root(), x, bound);
    if (!std::isfinite(j.value)) throw DomainError("non-finite evaluation result", e.root().offset);
    return j.value;
  };

  Vec<N> step{};
  for (int i = 0; i < N; ++i) step[i] = h * (1.0 + std::abs(point[i]));

  // Offsets and weights of the 4th-order first-derivative stencil.
  static constexpr std::array<int, 4> off = {-2, -1, 1, 2};
  static constexpr std::array<double, 4> w1 = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};

  Jet2<N> out;
  out.value = value_at(point);
  for (int i = 0; i < N; ++i) {
    double d1 = 0;
    std::array<double, 4> fi{};
    for (int s = 0; s < 4; ++s) {
      Vec<N> x = point;
      x[i] += off[s] * step[i];
      fi[s] = value_at(x);
      d1 += w1[s] * fi[s];
    }
    out.grad[i] = d1 / step[i];
    // 4th-order second derivative along i.
    out.h(i, i) = (-fi[3] + 16.0 * fi[2] - 30.0 * out.value + 16.0 * fi[1] - fi[0]) /
                  (12.0 * step[i] * step[i]);
  }
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < i; ++j) {
      double acc = 0;
      for (int s = 0; s < 4; ++s) {
        for (int t = 0; t < 4; ++t) {
          Vec<N> x = point;
          x[i] += off[s] * step[i];
          x[j] += off[t] * step[j];
          acc += w1[s] * w1[t] * value_at(x);
        }
      }
      out.h(i, j) = acc / (step[i] * step[j]);
    }
  }
  if (!out.finite()) throw DomainError("non-finite finite-difference result", e.root().offset);
  return out;
}

} // namespace sforge
