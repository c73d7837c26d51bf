#include "zeroform/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "zeroform/errors.hpp"

namespace zeroform {
namespace {

bool is_integral(double v) { return std::nearbyint(v) == v && std::abs(v) <= (1 << 20); }

// Best-effort constant folding. A subtree whose value is not finite or falls
// outside a function's domain is left for evaluation to report.
std::optional<double> fold(const Expr::Node& n) {
  if (n.kind == Expr::Kind::Number) return n.number;
  if (n.kind == Expr::Kind::Variable) return std::nullopt;

  const auto a = n.lhs->constant_value;
  if (!a) return std::nullopt;
  double r = 0.0;
  if (n.kind == Expr::Kind::Negate) {
    r = -*a;
  } else if (n.kind == Expr::Kind::Call) {
    switch (n.function) {
      case UnaryFunction::Exp: r = std::exp(*a); break;
      case UnaryFunction::Log:
        if (*a <= 0.0) return std::nullopt;
        r = std::log(*a);
        break;
      case UnaryFunction::Sqrt:
        if (*a < 0.0) return std::nullopt;
        r = std::sqrt(*a);
        break;
      case UnaryFunction::Sin: r = std::sin(*a); break;
      case UnaryFunction::Cos: r = std::cos(*a); break;
      case UnaryFunction::Tanh: r = std::tanh(*a); break;
      case UnaryFunction::Atan: r = std::atan(*a); break;
    }
  } else {
    const auto b = n.rhs->constant_value;
    if (!b) return std::nullopt;
    switch (n.kind) {
      case Expr::Kind::Add: r = *a + *b; break;
      case Expr::Kind::Sub: r = *a - *b; break;
      case Expr::Kind::Mul: r = *a * *b; break;
      case Expr::Kind::Div:
        if (std::abs(*b) < 1e-300) return std::nullopt;
        r = *a / *b;
        break;
      case Expr::Kind::Pow:
        if (!is_integral(*b) && *a <= 0.0) return std::nullopt;
        r = std::pow(*a, *b);
        break;
      default: return std::nullopt;
    }
  }
  if (!std::isfinite(r)) return std::nullopt;
  return r;
}

}  // namespace

const char* function_name(UnaryFunction f) {
  switch (f) {
    case UnaryFunction::Exp: return "exp";
    case UnaryFunction::Log: return "log";
    case UnaryFunction::Sqrt: return "sqrt";
    case UnaryFunction::Sin: return "sin";
    case UnaryFunction::Cos: return "cos";
    case UnaryFunction::Tanh: return "tanh";
    case UnaryFunction::Atan: return "atan";
  }
  return "?";
}

Expr Expr::make(Node node) {
  node.constant_value = fold(node);
  return Expr(std::make_shared<const Node>(std::move(node)));
}

Expr::Expr() : Expr(number(0.0)) {}

Expr Expr::number(double value) {
  Node n;
  n.kind = Kind::Number;
  n.number = value;
  return make(std::move(n));
}

Expr Expr::variable(std::size_t index, std::string name) {
  Node n;
  n.kind = Kind::Variable;
  n.variable = index;
  n.name = std::move(name);
  return make(std::move(n));
}

Expr Expr::call(UnaryFunction f, const Expr& arg) {
  Node n;
  n.kind = Kind::Call;
  n.function = f;
  n.name = function_name(f);
  n.lhs = arg.root_;
  return make(std::move(n));
}

Expr Expr::power(const Expr& base, const Expr& exponent) {
  return binary(Kind::Pow, base, exponent);
}

Expr Expr::binary(Kind kind, const Expr& lhs, const Expr& rhs) {
  switch (kind) {
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
    case Kind::Pow:
      break;
    default:
      throw PreconditionError("not a binary expression kind");
  }
  Node n;
  n.kind = kind;
  n.lhs = lhs.root_;
  n.rhs = rhs.root_;
  return make(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Div, a, b); }

Expr operator-(const Expr& a) {
  Expr::Node n;
  n.kind = Expr::Kind::Negate;
  n.lhs = a.root_;
  return Expr::make(std::move(n));
}

namespace {

void collect_counts(const Expr::Node& n, std::vector<std::size_t>& counts) {
  if (n.kind == Expr::Kind::Variable) {
    if (n.variable >= counts.size()) counts.resize(n.variable + 1, 0);
    ++counts[n.variable];
    return;
  }
  if (n.lhs) collect_counts(*n.lhs, counts);
  if (n.rhs) collect_counts(*n.rhs, counts);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void render(const Expr::Node& n, std::string& out) {
  switch (n.kind) {
    case Expr::Kind::Number:
      if (n.number < 0.0) {
        out += "(" + format_number(n.number) + ")";
      } else {
        out += format_number(n.number);
      }
      return;
    case Expr::Kind::Variable:
      out += n.name;
      return;
    case Expr::Kind::Negate:
      out += "(-";
      render(*n.lhs, out);
      out += ")";
      return;
    case Expr::Kind::Call:
      out += n.name;
      out += "(";
      render(*n.lhs, out);
      out += ")";
      return;
    default:
      break;
  }
  const char* op = "+";
  switch (n.kind) {
    case Expr::Kind::Sub: op = "-"; break;
    case Expr::Kind::Mul: op = "*"; break;
    case Expr::Kind::Div: op = "/"; break;
    case Expr::Kind::Pow: op = "^"; break;
    default: break;
  }
  out += "(";
  render(*n.lhs, out);
  out += op;
  render(*n.rhs, out);
  out += ")";
}

}  // namespace

std::size_t Expr::arity() const {
  std::vector<std::size_t> counts;
  collect_counts(*root_, counts);
  return counts.size();
}

std::vector<std::size_t> Expr::variable_counts(std::size_t vars) const {
  std::vector<std::size_t> counts(vars, 0);
  collect_counts(*root_, counts);
  counts.resize(std::max(vars, counts.size()));
  return counts;
}

std::string Expr::to_string() const {
  std::string out;
  render(*root_, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t offset = 0;
  std::string text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Token t;
    t.offset = pos_;
    if (pos_ >= text_.size()) return t;

    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      t.kind = Tok::Ident;
      t.text = text_.substr(start, pos_ - start);
      return t;
    }
    ++pos_;
    switch (c) {
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      case '^': t.kind = Tok::Caret; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", t.offset);
    }
    return t;
  }

 private:
  Token number() {
    Token t;
    t.kind = Tok::Number;
    t.offset = pos_;
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw SyntaxError("malformed exponent", start);
    }
    t.text = text_.substr(start, pos_ - start);
    t.number = std::strtod(t.text.c_str(), nullptr);
    return t;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

std::optional<UnaryFunction> lookup_function(const std::string& name) {
  static const std::pair<const char*, UnaryFunction> table[] = {
      {"exp", UnaryFunction::Exp},   {"log", UnaryFunction::Log},
      {"sqrt", UnaryFunction::Sqrt}, {"sin", UnaryFunction::Sin},
      {"cos", UnaryFunction::Cos},   {"tanh", UnaryFunction::Tanh},
      {"atan", UnaryFunction::Atan},
  };
  for (const auto& [n, f] : table) {
    if (name == n) return f;
  }
  return std::nullopt;
}

class Parser {
 public:
  Parser(const std::string& text, std::span<const std::string> vars)
      : lexer_(text), vars_(vars) {
    advance();
  }

  Expr parse_all() {
    if (current_.kind == Tok::End) throw SyntaxError("empty expression", current_.offset);
    Expr e = expression();
    if (current_.kind != Tok::End) throw SyntaxError("unexpected trailing input", current_.offset);
    return e;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  Expr expression() {
    Expr lhs = term();
    while (current_.kind == Tok::Plus || current_.kind == Tok::Minus) {
      const Tok op = current_.kind;
      advance();
      Expr rhs = term();
      lhs = op == Tok::Plus ? lhs + rhs : lhs - rhs;
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (current_.kind == Tok::Star || current_.kind == Tok::Slash) {
      const Tok op = current_.kind;
      advance();
      Expr rhs = unary();
      lhs = op == Tok::Star ? lhs * rhs : lhs / rhs;
    }
    return lhs;
  }

  Expr unary() {
    if (current_.kind == Tok::Minus) {
      advance();
      return -unary();
    }
    if (current_.kind == Tok::Plus) {
      advance();
      return unary();
    }
    return power();
  }

  // Right-associative: the exponent is itself a unary expression.
  Expr power() {
    Expr base = primary();
    if (current_.kind == Tok::Caret) {
      advance();
      return Expr::power(base, unary());
    }
    return base;
  }

  Expr primary() {
    const Token t = current_;
    switch (t.kind) {
      case Tok::Number:
        advance();
        return Expr::number(t.number);
      case Tok::LParen: {
        advance();
        Expr inner = expression();
        expect(Tok::RParen, "expected ')'");
        return inner;
      }
      case Tok::Ident:
        return identifier();
      case Tok::End:
        throw SyntaxError("unexpected end of input", t.offset);
      default:
        throw SyntaxError("expected a number, identifier or '('", t.offset);
    }
  }

  Expr identifier() {
    const Token t = current_;
    advance();
    if (current_.kind == Tok::LParen) {
      const auto f = lookup_function(t.text);
      if (!f) throw UnknownIdentifier(t.text);
      advance();
      Expr arg = expression();
      expect(Tok::RParen, "expected ')' after function argument");
      return Expr::call(*f, arg);
    }
    const auto it = std::find(vars_.begin(), vars_.end(), t.text);
    if (it != vars_.end()) {
      return Expr::variable(static_cast<std::size_t>(it - vars_.begin()), t.text);
    }
    if (lookup_function(t.text)) {
      throw SyntaxError("function '" + t.text + "' needs an argument list", current_.offset);
    }
    throw UnknownIdentifier(t.text);
  }

  void expect(Tok kind, const char* message) {
    if (current_.kind != kind) throw SyntaxError(message, current_.offset);
    advance();
  }

  Lexer lexer_;
  std::span<const std::string> vars_;
  Token current_;
};

}  // namespace

Expr parse(const std::string& text, std::span<const std::string> variables) {
  return Parser(text, variables).parse_all();
}

Expr parse(const std::string& text, std::initializer_list<std::string> variables) {
  return parse(text, std::span<const std::string>(variables.begin(), variables.size()));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct DoubleOps {
  double constant(double v) const { return v; }
  double value(double v) const { return v; }
  double divide(double a, double b) const {
    if (std::abs(b) < 1e-300) throw DomainError("division by (near) zero");
    return a / b;
  }
  double ipow(double a, int n) const {
    if (n < 0 && std::abs(a) < 1e-300) throw DomainError("negative power of zero");
    return std::pow(a, n);
  }
  double rpow(double a, double p) const {
    if (!(a > 0.0)) throw DomainError("non-integer power of a non-positive value");
    return std::pow(a, p);
  }
  double call(UnaryFunction f, double a) const {
    switch (f) {
      case UnaryFunction::Exp: return std::exp(a);
      case UnaryFunction::Log:
        if (!(a > 0.0)) throw DomainError("log of a non-positive value");
        return std::log(a);
      case UnaryFunction::Sqrt:
        if (a < 0.0) throw DomainError("sqrt of a negative value");
        return std::sqrt(a);
      case UnaryFunction::Sin: return std::sin(a);
      case UnaryFunction::Cos: return std::cos(a);
      case UnaryFunction::Tanh: return std::tanh(a);
      case UnaryFunction::Atan: return std::atan(a);
    }
    return a;
  }
};

struct JetOps {
  std::size_t vars;
  int order;

  TaylorJet constant(double v) const { return TaylorJet::constant(vars, order, v); }
  double value(const TaylorJet& j) const { return j.value(); }
  TaylorJet divide(const TaylorJet& a, const TaylorJet& b) const { return a / b; }
  TaylorJet ipow(const TaylorJet& a, int n) const { return pow(a, n); }
  TaylorJet rpow(const TaylorJet& a, double p) const { return pow(a, p); }
  TaylorJet call(UnaryFunction f, const TaylorJet& a) const {
    switch (f) {
      case UnaryFunction::Exp: return exp(a);
      case UnaryFunction::Log: return log(a);
      case UnaryFunction::Sqrt: return sqrt(a);
      case UnaryFunction::Sin: return sin(a);
      case UnaryFunction::Cos: return cos(a);
      case UnaryFunction::Tanh: return tanh(a);
      case UnaryFunction::Atan: return atan(a);
    }
    return a;
  }
};

template <class Scalar, class Ops>
Scalar eval_node(const Expr::Node& n, std::span<const Scalar> in, const Ops& ops) {
  if (n.constant_value) return ops.constant(*n.constant_value);
  switch (n.kind) {
    case Expr::Kind::Number:
      return ops.constant(n.number);
    case Expr::Kind::Variable:
      if (n.variable >= in.size()) {
        throw ShapeMismatch("expression variable '" + n.name + "' has no input");
      }
      return in[n.variable];
    case Expr::Kind::Negate:
      return -eval_node(*n.lhs, in, ops);
    case Expr::Kind::Call:
      return ops.call(n.function, eval_node(*n.lhs, in, ops));
    case Expr::Kind::Add:
      return eval_node(*n.lhs, in, ops) + eval_node(*n.rhs, in, ops);
    case Expr::Kind::Sub:
      return eval_node(*n.lhs, in, ops) - eval_node(*n.rhs, in, ops);
    case Expr::Kind::Mul:
      return eval_node(*n.lhs, in, ops) * eval_node(*n.rhs, in, ops);
    case Expr::Kind::Div:
      return ops.divide(eval_node(*n.lhs, in, ops), eval_node(*n.rhs, in, ops));
    case Expr::Kind::Pow: {
      const Scalar base = eval_node(*n.lhs, in, ops);
      if (const auto p = n.rhs->constant_value) {
        if (is_integral(*p)) return ops.ipow(base, static_cast<int>(*p));
        return ops.rpow(base, *p);
      }
      const Scalar exponent = eval_node(*n.rhs, in, ops);
      if (!(ops.value(base) > 0.0)) {
        throw DomainError("variable exponent on a non-positive base");
      }
      return ops.call(UnaryFunction::Exp, exponent * ops.call(UnaryFunction::Log, base));
    }
  }
  throw PreconditionError("corrupt expression node");
}

}  // namespace

double evaluate(const Expr& e, std::span<const double> point) {
  const double v = eval_node<double>(e.root(), point, DoubleOps{});
  if (!std::isfinite(v)) throw NonFiniteError("expression evaluated to a non-finite value");
  return v;
}

TaylorJet evaluate(const Expr& e, std::span<const TaylorJet> inputs) {
  std::size_t vars = 0;
  int order = kMaxJetOrder;
  if (!inputs.empty()) {
    vars = inputs[0].num_vars();
    for (const auto& j : inputs) order = std::min(order, j.order());
  } else {
    order = 0;
  }
  TaylorJet out = eval_node<TaylorJet>(e.root(), inputs, JetOps{vars, order});
  if (!out.all_finite()) throw NonFiniteError("expression jet has non-finite coefficients");
  return out;
}

TaylorJet eval_jet(const Expr& e, std::span<const double> base, int order) {
  if (order < 0 || order > kMaxJetOrder) {
    throw PreconditionError("jet order must be in [0, 4]");
  }
  const auto inputs = coordinate_jets(base, order);
  if (inputs.empty()) {
    TaylorJet out = eval_node<TaylorJet>(e.root(), std::span<const TaylorJet>{},
                                         JetOps{0, order});
    if (!out.all_finite()) throw NonFiniteError("expression jet has non-finite coefficients");
    return out;
  }
  return evaluate(e, std::span<const TaylorJet>(inputs));
}

}  // namespace zeroform
