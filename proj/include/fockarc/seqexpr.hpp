#pragma once

#include "fockarc/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fockarc {

enum class Mode { Exact, Float };

/// A named parameter. `exact` is empty when the value is known only as a
/// double (for example sqrt(2)/2); such parameters force float-only evaluation.
struct Parameter {
  std::optional<Rational> exact;
  double value = 0.0;

  static Parameter of(const Rational& r) { return {r, to_double(r)}; }
  static Parameter of(double d) { return {std::nullopt, d}; }
};

using ParamMap = std::map<std::string, Parameter, std::less<>>;

namespace seqexpr {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sqrt, QSum };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Literal {
  Rational value;  // always nonnegative; negation is a Negate node
};
struct Variable {};  // the index n
struct ParamRef {
  std::string name;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  Function fn;
  std::vector<NodePtr> args;
};

struct Node {
  std::variant<Literal, Variable, ParamRef, Negate, Binary, Call> value;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::string expected, const std::string& message)
      : std::runtime_error(message), offset_(offset), expected_(std::move(expected)) {}
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

enum class EvalErrorKind { DivisionByZero, UnboundParameter, Irrational, Domain, BadExponent };

class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  EvalErrorKind kind() const { return kind_; }

 private:
  EvalErrorKind kind_;
};

/// Immutable expression tree over n, named parameters, rational literals,
/// + - * / ^, unary minus, sqrt(x) and qsum(q, n) = 1 + q + ... + q^n.
/// The grammar is documented in docs/expression-grammar.md.
class Expression {
 public:
  Expression() = default;
  explicit Expression(NodePtr root) : root_(std::move(root)) {}

  static Expression parse(std::string_view text);

  /// Minimal-parenthesis rendering; parse(to_string()) is structurally equal
  /// to *this whenever every literal has a finite decimal expansion.
  std::string to_string() const;

  const NodePtr& root() const { return root_; }
  bool empty() const { return !root_; }

  /// Parameter names referenced anywhere in the tree.
  std::set<std::string> parameters() const;
  bool uses_index() const;

  Rational evaluate_exact(std::int64_t n, const ParamMap& params) const;
  double evaluate_float(std::int64_t n, const ParamMap& params) const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  NodePtr root_;
};

bool structurally_equal(const NodePtr& a, const NodePtr& b);

using Scalar = std::variant<Rational, double>;

Scalar evaluate(const Expression& expr, std::int64_t n, const ParamMap& params, Mode mode);

// Node builders, used by the parser and by tests that generate random trees.
NodePtr make_literal(Rational value);
NodePtr make_variable();
NodePtr make_param(std::string name);
NodePtr make_negate(NodePtr operand);
NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs);
NodePtr make_call(Function fn, std::vector<NodePtr> args);

}  // namespace seqexpr

/// Parses a parameter value: a constant expression such as "0.3", "-1/2" or
/// "sqrt(2)/2". The result carries an exact value whenever one exists.
Parameter parse_parameter(std::string_view text);

}  // namespace fockarc
