#include "fockarc/seqexpr.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace fockarc {
namespace seqexpr {

NodePtr make_literal(Rational value) { return std::make_shared<const Node>(Node{Literal{std::move(value)}}); }
NodePtr make_variable() { return std::make_shared<const Node>(Node{Variable{}}); }
NodePtr make_param(std::string name) { return std::make_shared<const Node>(Node{ParamRef{std::move(name)}}); }
NodePtr make_negate(NodePtr operand) { return std::make_shared<const Node>(Node{Negate{std::move(operand)}}); }
NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
  return std::make_shared<const Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}});
}
NodePtr make_call(Function fn, std::vector<NodePtr> args) {
  return std::make_shared<const Node>(Node{Call{fn, std::move(args)}});
}

namespace {

constexpr const char* kOperandHint = "number, 'n', parameter, function call, '(' or '-'";

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    skip_space();
    if (pos_ == text_.size()) fail(kOperandHint, "empty expression");
    NodePtr result = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("operator or end of input", "unexpected '" + std::string(1, text_[pos_]) + "'");
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& expected, const std::string& what) const {
    throw ParseError(pos_, expected,
                     "syntax error at offset " + std::to_string(pos_) + ": " + what + " (expected " + expected + ")");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+'))
        lhs = make_binary(BinaryOp::Add, lhs, parse_product());
      else if (accept('-'))
        lhs = make_binary(BinaryOp::Sub, lhs, parse_product());
      else
        return lhs;
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = make_binary(BinaryOp::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = make_binary(BinaryOp::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_negate(parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make_binary(BinaryOp::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail(kOperandHint, "unexpected end of input");
    char ch = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch))) return parse_number();
    if (ch == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!accept(')')) fail("')'", "unbalanced parenthesis");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      skip_space();
      bool call = pos_ < text_.size() && text_[pos_] == '(';
      if (call) {
        if (name != "sqrt" && name != "qsum") {
          pos_ = start;
          fail("sqrt or qsum", "unknown function '" + name + "'");
        }
        ++pos_;
        std::vector<NodePtr> args;
        args.push_back(parse_sum());
        while (accept(',')) args.push_back(parse_sum());
        if (!accept(')')) fail("')' or ','", "unterminated argument list");
        std::size_t arity = name == "sqrt" ? 1 : 2;
        if (args.size() != arity) {
          pos_ = start;
          fail(std::to_string(arity) + " argument(s)", "wrong number of arguments to " + name);
        }
        return make_call(name == "sqrt" ? Function::Sqrt : Function::QSum, std::move(args));
      }
      if (name == "n") return make_variable();
      if (name == "sqrt" || name == "qsum") {
        pos_ = start;
        fail("'(' after " + name, "function name used as a value");
      }
      return make_param(std::move(name));
    }
    fail(kOperandHint, "unexpected '" + std::string(1, ch) + "'");
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t frac = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == frac) fail("digit after '.'", "malformed number");
    }
    return make_literal(parse_rational(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Precedence levels used by the printer.
constexpr int kSum = 1;
constexpr int kProduct = 2;
constexpr int kUnary = 3;
constexpr int kPower = 4;
constexpr int kAtom = 5;

int precedence(const Node& node) {
  if (const auto* b = std::get_if<Binary>(&node.value)) {
    switch (b->op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
        return kSum;
      case BinaryOp::Mul:
      case BinaryOp::Div:
        return kProduct;
      case BinaryOp::Pow:
        return kPower;
    }
  }
  if (std::holds_alternative<Negate>(node.value)) return kUnary;
  return kAtom;
}

void print(const Node& node, std::string& out);

void print_wrapped(const Node& node, bool parens, std::string& out) {
  if (parens) out += '(';
  print(node, out);
  if (parens) out += ')';
}

void print(const Node& node, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Literal>) {
          if (auto dec = to_decimal_string(v.value))
            out += *dec;
          else
            out += "(" + v.value.get_num().get_str() + "/" + v.value.get_den().get_str() + ")";
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += 'n';
        } else if constexpr (std::is_same_v<T, ParamRef>) {
          out += v.name;
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += '-';
          print_wrapped(*v.operand, precedence(*v.operand) < kUnary, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          int p = precedence(node);
          if (v.op == BinaryOp::Pow) {
            print_wrapped(*v.lhs, precedence(*v.lhs) <= kPower, out);
            out += '^';
            print_wrapped(*v.rhs, precedence(*v.rhs) < kUnary, out);
            return;
          }
          print_wrapped(*v.lhs, precedence(*v.lhs) < p, out);
          switch (v.op) {
            case BinaryOp::Add: out += " + "; break;
            case BinaryOp::Sub: out += " - "; break;
            case BinaryOp::Mul: out += "*"; break;
            case BinaryOp::Div: out += "/"; break;
            case BinaryOp::Pow: break;
          }
          print_wrapped(*v.rhs, precedence(*v.rhs) <= p, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          out += v.fn == Function::Sqrt ? "sqrt(" : "qsum(";
          for (std::size_t i = 0; i < v.args.size(); ++i) {
            if (i) out += ", ";
            print(*v.args[i], out);
          }
          out += ')';
        }
      },
      node.value);
}

void collect_params(const Node& node, std::set<std::string>& names, bool& uses_n) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ParamRef>) {
          names.insert(v.name);
        } else if constexpr (std::is_same_v<T, Variable>) {
          uses_n = true;
        } else if constexpr (std::is_same_v<T, Negate>) {
          collect_params(*v.operand, names, uses_n);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_params(*v.lhs, names, uses_n);
          collect_params(*v.rhs, names, uses_n);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& a : v.args) collect_params(*a, names, uses_n);
        }
      },
      node.value);
}

constexpr unsigned long kMaxExactExponent = 1UL << 22;

unsigned long exact_exponent(const Rational& e, const char* where) {
  if (e.get_den() != 1 || sgn(e) < 0)
    throw EvalError(EvalErrorKind::BadExponent, std::string(where) + " must be a nonnegative integer");
  if (!e.get_num().fits_ulong_p() || e.get_num().get_ui() > kMaxExactExponent)
    throw EvalError(EvalErrorKind::BadExponent, std::string(where) + " too large for exact evaluation");
  return e.get_num().get_ui();
}

double float_exponent(double e, const char* where) {
  if (!(e >= 0.0) || std::floor(e) != e)
    throw EvalError(EvalErrorKind::BadExponent, std::string(where) + " must be a nonnegative integer");
  return e;
}

Rational eval_exact(const Node& node, std::int64_t n, const ParamMap& params) {
  return std::visit(
      [&](const auto& v) -> Rational {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return v.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return Rational(mpz_class(std::to_string(n)));
        } else if constexpr (std::is_same_v<T, ParamRef>) {
          auto it = params.find(v.name);
          if (it == params.end())
            throw EvalError(EvalErrorKind::UnboundParameter, "unbound parameter '" + v.name + "'");
          if (!it->second.exact)
            throw EvalError(EvalErrorKind::Irrational, "parameter '" + v.name + "' has no exact value");
          return *it->second.exact;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval_exact(*v.operand, n, params);
        } else if constexpr (std::is_same_v<T, Binary>) {
          Rational a = eval_exact(*v.lhs, n, params);
          Rational b = eval_exact(*v.rhs, n, params);
          switch (v.op) {
            case BinaryOp::Add: return a + b;
            case BinaryOp::Sub: return a - b;
            case BinaryOp::Mul: return a * b;
            case BinaryOp::Div:
              if (b == 0) throw EvalError(EvalErrorKind::DivisionByZero, "division by zero at n=" + std::to_string(n));
              return a / b;
            case BinaryOp::Pow: return pow(a, exact_exponent(b, "exponent"));
          }
          return {};
        } else if constexpr (std::is_same_v<T, Call>) {
          if (v.fn == Function::Sqrt) {
            Rational a = eval_exact(*v.args[0], n, params);
            if (sgn(a) < 0) throw EvalError(EvalErrorKind::Domain, "sqrt of a negative value at n=" + std::to_string(n));
            auto root = exact_sqrt(a);
            if (!root)
              throw EvalError(EvalErrorKind::Irrational, "sqrt(" + a.get_str() + ") is irrational");
            return *root;
          }
          Rational q = eval_exact(*v.args[0], n, params);
          unsigned long upper = exact_exponent(eval_exact(*v.args[1], n, params), "qsum upper index");
          if (q == 1) return Rational(upper + 1);
          return (1 - pow(q, upper + 1)) / (1 - q);
        }
      },
      node.value);
}

double eval_float(const Node& node, std::int64_t n, const ParamMap& params) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return to_double(v.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return static_cast<double>(n);
        } else if constexpr (std::is_same_v<T, ParamRef>) {
          auto it = params.find(v.name);
          if (it == params.end())
            throw EvalError(EvalErrorKind::UnboundParameter, "unbound parameter '" + v.name + "'");
          return it->second.value;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval_float(*v.operand, n, params);
        } else if constexpr (std::is_same_v<T, Binary>) {
          double a = eval_float(*v.lhs, n, params);
          double b = eval_float(*v.rhs, n, params);
          switch (v.op) {
            case BinaryOp::Add: return a + b;
            case BinaryOp::Sub: return a - b;
            case BinaryOp::Mul: return a * b;
            case BinaryOp::Div:
              if (b == 0.0) throw EvalError(EvalErrorKind::DivisionByZero, "division by zero at n=" + std::to_string(n));
              return a / b;
            case BinaryOp::Pow: return std::pow(a, float_exponent(b, "exponent"));
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, Call>) {
          if (v.fn == Function::Sqrt) {
            double a = eval_float(*v.args[0], n, params);
            if (a < 0.0) throw EvalError(EvalErrorKind::Domain, "sqrt of a negative value at n=" + std::to_string(n));
            return std::sqrt(a);
          }
          double q = eval_float(*v.args[0], n, params);
          double upper = float_exponent(eval_float(*v.args[1], n, params), "qsum upper index");
          if (q == 1.0) return upper + 1.0;
          if (upper < 64) {
            double sum = 0.0;
            double term = 1.0;
            for (int i = 0; i <= static_cast<int>(upper); ++i, term *= q) sum += term;
            return sum;
          }
          return (1.0 - std::pow(q, upper + 1.0)) / (1.0 - q);
        }
      },
      node.value);
}

}  // namespace

bool structurally_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->value.index() != b->value.index()) return false;
  return std::visit(
      [&](const auto& va) -> bool {
        using T = std::decay_t<decltype(va)>;
        const auto& vb = std::get<T>(b->value);
        if constexpr (std::is_same_v<T, Literal>) {
          return va.value == vb.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, ParamRef>) {
          return va.name == vb.name;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return structurally_equal(va.operand, vb.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return va.op == vb.op && structurally_equal(va.lhs, vb.lhs) && structurally_equal(va.rhs, vb.rhs);
        } else if constexpr (std::is_same_v<T, Call>) {
          if (va.fn != vb.fn || va.args.size() != vb.args.size()) return false;
          for (std::size_t i = 0; i < va.args.size(); ++i)
            if (!structurally_equal(va.args[i], vb.args[i])) return false;
          return true;
        }
      },
      a->value);
}

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse_all()); }

std::string Expression::to_string() const {
  std::string out;
  if (root_) print(*root_, out);
  return out;
}

std::set<std::string> Expression::parameters() const {
  std::set<std::string> names;
  bool uses_n = false;
  if (root_) collect_params(*root_, names, uses_n);
  return names;
}

bool Expression::uses_index() const {
  std::set<std::string> names;
  bool uses_n = false;
  if (root_) collect_params(*root_, names, uses_n);
  return uses_n;
}

Rational Expression::evaluate_exact(std::int64_t n, const ParamMap& params) const {
  return eval_exact(*root_, n, params);
}

double Expression::evaluate_float(std::int64_t n, const ParamMap& params) const {
  return eval_float(*root_, n, params);
}

bool operator==(const Expression& a, const Expression& b) { return structurally_equal(a.root_, b.root_); }

Scalar evaluate(const Expression& expr, std::int64_t n, const ParamMap& params, Mode mode) {
  if (mode == Mode::Exact) return expr.evaluate_exact(n, params);
  return expr.evaluate_float(n, params);
}

}  // namespace seqexpr

Parameter parse_parameter(std::string_view text) {
  auto expr = seqexpr::Expression::parse(text);
  if (expr.uses_index() || !expr.parameters().empty())
    throw std::invalid_argument("parameter value must be a constant: '" + std::string(text) + "'");
  Parameter p;
  p.value = expr.evaluate_float(0, {});
  try {
    p.exact = expr.evaluate_exact(0, {});
  } catch (const seqexpr::EvalError& e) {
    if (e.kind() != seqexpr::EvalErrorKind::Irrational) throw;
  }
  return p;
}

}  // namespace fockarc
