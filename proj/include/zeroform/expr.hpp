#pragma once

// Closed-form scalar expressions: parsing, plain evaluation, and evaluation
// as truncated Taylor jets.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zeroform/jet.hpp"

namespace zeroform {

enum class UnaryFunction { Exp, Log, Sqrt, Sin, Cos, Tanh, Atan };

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

  struct Node {
    Kind kind = Kind::Number;
    double number = 0.0;
    std::size_t variable = 0;
    std::string name;  // variable or function name
    UnaryFunction function = UnaryFunction::Exp;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    // Set when the subtree references no variables.
    std::optional<double> constant_value;
  };

  /// The constant 0.
  Expr();

  static Expr number(double value);
  static Expr variable(std::size_t index, std::string name);
  static Expr call(UnaryFunction f, const Expr& arg);
  static Expr power(const Expr& base, const Expr& exponent);
  /// Binary node for Add, Sub, Mul, Div or Pow.
  static Expr binary(Kind kind, const Expr& lhs, const Expr& rhs);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  const Node& root() const { return *root_; }
  Kind kind() const { return root_->kind; }
  bool is_constant() const { return root_->constant_value.has_value(); }
  std::optional<double> constant_value() const { return root_->constant_value; }

  /// Number of inputs an evaluation must supply (max variable index + 1).
  std::size_t arity() const;
  /// Occurrences of each variable index in the tree.
  std::vector<std::size_t> variable_counts(std::size_t vars) const;

  /// Fully parenthesised infix rendering; re-parses to an equal tree.
  std::string to_string() const;

  /// Pointer identity of the shared tree.
  bool same_object(const Expr& other) const { return root_ == other.root_; }

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  static Expr make(Node node);

  std::shared_ptr<const Node> root_;
};

const char* function_name(UnaryFunction f);

/// Parses `text` against the declared variable list.
/// Throws SyntaxError (with byte offset) or UnknownIdentifier.
Expr parse(const std::string& text, std::span<const std::string> variables);
Expr parse(const std::string& text, std::initializer_list<std::string> variables);

/// Plain double evaluation.
double evaluate(const Expr& e, std::span<const double> point);

/// Evaluation with jet-valued inputs: the composition e(inputs).
TaylorJet evaluate(const Expr& e, std::span<const TaylorJet> inputs);

/// Taylor jet of e about `base`, with order in [0, 4].
TaylorJet eval_jet(const Expr& e, std::span<const double> base, int order);

}  // namespace zeroform
