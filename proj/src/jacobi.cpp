#include "fockarc/jacobi.hpp"

#include <functional>

#include <cmath>
#include <sstream>

namespace fockarc {

namespace {

void require_nonnegative(std::int64_t n) {
  if (n < 0) throw std::out_of_range("one-sided Jacobi sequence indexed at n=" + std::to_string(n));
}

Rational int_rational(std::int64_t n) { return Rational(mpz_class(static_cast<long>(n))); }

class CatalogSource final : public detail::SequenceSource {
 public:
  CatalogSource(CatalogName id, std::optional<Parameter> param) : id_(id), param_(std::move(param)) {}

  double omega(std::int64_t n) const override {
    require_nonnegative(n);
    const double x = static_cast<double>(n);
    switch (id_) {
      case CatalogName::Gaussian: return x + 1.0;
      case CatalogName::Uniform: return (x + 1.0) * (x + 1.0) / ((2.0 * x + 1.0) * (2.0 * x + 3.0));
      case CatalogName::Exponential: return (x + 1.0) * (x + 1.0);
      case CatalogName::QGaussian: {
        const double q = param_->value;
        if (q == 1.0) return x + 1.0;
        return (1.0 - std::pow(q, x + 1.0)) / (1.0 - q);
      }
      case CatalogName::FreeShift: return 0.5;
    }
    return 0.0;
  }

  double alpha(std::int64_t n) const override {
    require_nonnegative(n);
    switch (id_) {
      case CatalogName::Exponential: return 2.0 * static_cast<double>(n) + 1.0;
      case CatalogName::FreeShift: return param_->value * static_cast<double>(n);
      default: return 0.0;
    }
  }

  Rational omega_exact(std::int64_t n) const override {
    require_nonnegative(n);
    const Rational x = int_rational(n);
    switch (id_) {
      case CatalogName::Gaussian: return x + 1;
      case CatalogName::Uniform: return Rational((x + 1) * (x + 1) / ((2 * x + 1) * (2 * x + 3)));
      case CatalogName::Exponential: return (x + 1) * (x + 1);
      case CatalogName::QGaussian: {
        const Rational& q = exact_param();
        if (q == 1) return x + 1;
        return (1 - pow(q, static_cast<unsigned long>(n) + 1)) / (1 - q);
      }
      case CatalogName::FreeShift: return Rational(1, 2);
    }
    return {};
  }

  Rational alpha_exact(std::int64_t n) const override {
    require_nonnegative(n);
    switch (id_) {
      case CatalogName::Exponential: return 2 * int_rational(n) + 1;
      case CatalogName::FreeShift: return exact_param() * int_rational(n);
      default: return 0;
    }
  }

  bool supports_exact() const override { return !param_ || param_->exact.has_value(); }

  std::string description() const override {
    std::ostringstream os;
    os << catalog_entries()[static_cast<std::size_t>(id_)].name;
    if (param_) {
      os << (id_ == CatalogName::QGaussian ? "(q=" : "(c=");
      if (param_->exact)
        os << param_->exact->get_str();
      else
        os << param_->value;
      os << ")";
    }
    return os.str();
  }

 private:
  const Rational& exact_param() const {
    if (!param_->exact) throw NotExactError(description() + " has an irrational parameter; exact mode unavailable");
    return *param_->exact;
  }

  CatalogName id_;
  std::optional<Parameter> param_;
};

class ExpressionSource final : public detail::SequenceSource {
 public:
  ExpressionSource(seqexpr::Expression omega, seqexpr::Expression alpha, ParamMap params)
      : omega_(std::move(omega)), alpha_(std::move(alpha)), params_(std::move(params)) {
    for (const auto* expr : {&omega_, &alpha_})
      for (const auto& name : expr->parameters()) {
        auto it = params_.find(name);
        if (it == params_.end()) throw std::invalid_argument("unbound parameter '" + name + "' in sequence expression");
        if (!it->second.exact) exact_ = false;
      }
  }

  double omega(std::int64_t n) const override {
    require_nonnegative(n);
    return omega_.evaluate_float(n, params_);
  }
  double alpha(std::int64_t n) const override {
    require_nonnegative(n);
    return alpha_.evaluate_float(n, params_);
  }
  Rational omega_exact(std::int64_t n) const override { return exact(omega_, n); }
  Rational alpha_exact(std::int64_t n) const override { return exact(alpha_, n); }
  bool supports_exact() const override { return exact_; }

  std::string description() const override {
    return "expression(omega=" + omega_.to_string() + ", alpha=" + alpha_.to_string() + ")";
  }

 private:
  Rational exact(const seqexpr::Expression& expr, std::int64_t n) const {
    require_nonnegative(n);
    try {
      return expr.evaluate_exact(n, params_);
    } catch (const seqexpr::EvalError& e) {
      if (e.kind() == seqexpr::EvalErrorKind::Irrational) throw NotExactError(e.what());
      throw;
    }
  }

  seqexpr::Expression omega_;
  seqexpr::Expression alpha_;
  ParamMap params_;
  bool exact_ = true;
};

class TabulatedSource final : public detail::SequenceSource {
 public:
  TabulatedSource(std::vector<Rational> omega, std::vector<Rational> alpha)
      : exact_omega_(std::move(omega)), exact_alpha_(std::move(alpha)), exact_(true) {
    check_sizes(exact_omega_.size(), exact_alpha_.size());
    for (const auto& v : exact_omega_) float_omega_.push_back(to_double(v));
    for (const auto& v : exact_alpha_) float_alpha_.push_back(to_double(v));
  }
  TabulatedSource(std::vector<double> omega, std::vector<double> alpha)
      : float_omega_(std::move(omega)), float_alpha_(std::move(alpha)), exact_(false) {
    check_sizes(float_omega_.size(), float_alpha_.size());
  }

  double omega(std::int64_t n) const override { return float_omega_[checked(n)]; }
  double alpha(std::int64_t n) const override { return float_alpha_[checked(n)]; }
  Rational omega_exact(std::int64_t n) const override {
    std::size_t i = checked(n);
    if (!exact_) throw NotExactError("tabulated sequence holds floating-point values only");
    return exact_omega_[i];
  }
  Rational alpha_exact(std::int64_t n) const override {
    std::size_t i = checked(n);
    if (!exact_) throw NotExactError("tabulated sequence holds floating-point values only");
    return exact_alpha_[i];
  }
  bool supports_exact() const override { return exact_; }
  std::optional<std::int64_t> length() const override { return static_cast<std::int64_t>(float_omega_.size()); }
  std::string description() const override {
    return "tabulated(" + std::to_string(float_omega_.size()) + (exact_ ? " exact" : " float") + " entries)";
  }

 private:
  static void check_sizes(std::size_t omega, std::size_t alpha) {
    if (omega != alpha) throw std::invalid_argument("tabulated omega and alpha lists differ in length");
  }
  std::size_t checked(std::int64_t n) const {
    require_nonnegative(n);
    if (static_cast<std::size_t>(n) >= float_omega_.size())
      throw SequenceRangeError("index " + std::to_string(n) + " beyond tabulated range of " +
                               std::to_string(float_omega_.size()));
    return static_cast<std::size_t>(n);
  }

  std::vector<Rational> exact_omega_;
  std::vector<Rational> exact_alpha_;
  std::vector<double> float_omega_;
  std::vector<double> float_alpha_;
  bool exact_;
};

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {CatalogName::Gaussian, "gaussian", "n+1", "0", {}, "exp(-x^2/2)/sqrt(2*pi) on R"},
      {CatalogName::Uniform, "uniform", "(n+1)^2/((2*n+1)*(2*n+3))", "0", {}, "1/2 on [-1,1]"},
      {CatalogName::Exponential, "exponential", "(n+1)^2", "2*n+1", {}, "exp(-x) on [0,inf)"},
      {CatalogName::QGaussian, "q_gaussian", "qsum(q,n)", "0", {"q"}, ""},
      {CatalogName::FreeShift, "free_shift", "1/2", "c*n", {"c"}, ""},
  };
  return entries;
}

std::optional<CatalogName> catalog_id(std::string_view name) {
  for (const auto& entry : catalog_entries())
    if (entry.name == name) return entry.id;
  return std::nullopt;
}

JacobiSequence catalog_sequence(std::string_view name, const ParamMap& params) {
  auto id = catalog_id(name);
  if (!id) throw CatalogError("unknown catalog sequence '" + std::string(name) + "'");
  const CatalogEntry& entry = catalog_entries()[static_cast<std::size_t>(*id)];
  for (const auto& [key, value] : params) {
    bool known = false;
    for (const auto& p : entry.required_params) known = known || p == key;
    if (!known) throw CatalogError("catalog sequence '" + entry.name + "' takes no parameter '" + key + "'");
  }
  std::optional<Parameter> param;
  if (!entry.required_params.empty()) {
    auto it = params.find(entry.required_params.front());
    if (it == params.end())
      throw CatalogError("catalog sequence '" + entry.name + "' requires parameter '" + entry.required_params.front() + "'");
    param = it->second;
  }
  if (*id == CatalogName::QGaussian) {
    bool in_range = param->exact ? (*param->exact > -1 && *param->exact <= 1) : (param->value > -1.0 && param->value <= 1.0);
    if (!in_range) throw CatalogError("q_gaussian requires -1 < q <= 1");
  }
  if (*id == CatalogName::FreeShift && !std::isfinite(param->value))
    throw CatalogError("free_shift requires a finite c");
  return JacobiSequence(std::make_shared<const CatalogSource>(*id, std::move(param)));
}

JacobiSequence expression_sequence(seqexpr::Expression omega, seqexpr::Expression alpha, ParamMap params) {
  return JacobiSequence(std::make_shared<const ExpressionSource>(std::move(omega), std::move(alpha), std::move(params)));
}

JacobiSequence tabulated_sequence(std::vector<Rational> omega, std::vector<Rational> alpha) {
  return JacobiSequence(std::make_shared<const TabulatedSource>(std::move(omega), std::move(alpha)));
}

JacobiSequence tabulated_sequence(std::vector<double> omega, std::vector<double> alpha) {
  return JacobiSequence(std::make_shared<const TabulatedSource>(std::move(omega), std::move(alpha)));
}

ValidationReport validate(const JacobiSequence& seq, std::int64_t n_max) {
  constexpr std::size_t kMaxListed = 100;
  ValidationReport report;
  report.exact_capable = seq.supports_exact();
  if (!report.exact_capable) report.notes.push_back("sequence is float-only (irrational parameter or float data)");
  if (n_max < 0) {
    report.notes.push_back("n_max < 0: nothing to check");
    return report;
  }
  auto flag = [&](std::int64_t n, std::string field, std::string reason) {
    report.ok = false;
    Violation v{n, std::move(field), std::move(reason)};
    if (!report.first_violation) report.first_violation = v;
    if (report.violations.size() < kMaxListed) report.violations.push_back(std::move(v));
  };
  bool exact = report.exact_capable;
  auto check_omega = [&](std::int64_t n) {
    if (exact) {
      Rational w = seq.omega_exact(n);
      if (sgn(w) <= 0) flag(n, "omega", "omega = " + w.get_str() + " is not positive");
      return;
    }
    double w = seq.omega(n);
    if (!std::isfinite(w))
      flag(n, "omega", "omega is not finite");
    else if (!(w > 0.0))
      flag(n, "omega", "omega = " + std::to_string(w) + " is not positive");
  };
  auto check_alpha = [&](std::int64_t n) {
    if (exact) {
      seq.alpha_exact(n);
      return;
    }
    if (!std::isfinite(seq.alpha(n))) flag(n, "alpha", "alpha is not finite");
  };
  for (std::int64_t n = 0; n <= n_max; ++n) {
    for (auto [field, check] : {std::pair<const char*, std::function<void(std::int64_t)>>{"omega", check_omega},
                                {"alpha", check_alpha}}) {
      for (;;) {
        try {
          check(n);
        } catch (const NotExactError& e) {
          if (!exact) throw;
          exact = false;
          report.exact_capable = false;
          report.notes.push_back(std::string("exact evaluation unavailable from n=") + std::to_string(n) + ": " + e.what());
          continue;
        } catch (const SequenceRangeError& e) {
          flag(n, field, e.what());
          return report;
        } catch (const std::exception& e) {
          flag(n, field, e.what());
        }
        break;
      }
    }
    report.checked_through = n;
  }
  return report;
}

JacobiSequence jacobi_from_moments(std::span<const Rational> moments) {
  if (moments.size() < 2 || moments.size() % 2 != 0)
    throw std::invalid_argument("jacobi_from_moments needs an even, nonzero number of moments M_1..M_2L");
  std::vector<Rational> full;
  full.reserve(moments.size() + 1);
  full.emplace_back(1);
  full.insert(full.end(), moments.begin(), moments.end());
  const std::size_t depth = moments.size() / 2;

  // Monic polynomials as coefficient vectors; <x^i, x^j> = M_{i+j}.
  auto inner = [&](const std::vector<Rational>& p, const std::vector<Rational>& q, int shift) {
    Rational sum = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) sum += p[i] * q[j] * full[i + j + shift];
    return sum;
  };

  std::vector<Rational> omega, alpha;
  std::vector<Rational> prev;       // p_{j-1}
  std::vector<Rational> cur = {1};  // p_j
  Rational cur_norm = 1;
  Rational prev_omega = 0;
  for (std::size_t j = 0; j < depth; ++j) {
    Rational a = inner(cur, cur, 1) / cur_norm;
    std::vector<Rational> next(cur.size() + 1);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 1] += cur[i];
      next[i] -= a * cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev_omega * prev[i];
    Rational next_norm = inner(next, next, 0);
    if (sgn(next_norm) <= 0)
      throw MomentRealizationError(static_cast<std::int64_t>(j + 1),
                                   "Hankel determinant of order " + std::to_string(j + 2) +
                                       " is not positive; moments not realizable at depth " + std::to_string(j + 1));
    Rational w = next_norm / cur_norm;
    alpha.push_back(a);
    omega.push_back(w);
    prev = std::move(cur);
    cur = std::move(next);
    cur_norm = next_norm;
    prev_omega = w;
  }
  return tabulated_sequence(std::move(omega), std::move(alpha));
}

}  // namespace fockarc
