#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lndkit/context.hpp"
#include "lndkit/errors.hpp"
#include "lndkit/monomial.hpp"
#include "lndkit/rational.hpp"

namespace lndkit {

/// Degree of a polynomial; std::nullopt stands for the degree of zero (-infinity).
using Degree = std::optional<std::uint64_t>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in descending lex order and no stored coefficient is zero,
/// so two polynomials are equal iff their term maps are equal.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, LexGreater>;

  Polynomial() = default;
  explicit Polynomial(VarContext ctx) : ctx_(std::move(ctx)) {}

  static Polynomial constant(const VarContext& ctx, const Rational& c) {
    Polynomial p(ctx);
    if (c != 0) p.terms_.emplace(Monomial(ctx.size()), c);
    return p;
  }

  static Polynomial variable(const VarContext& ctx, std::string_view name) {
    return variable(ctx, ctx.require(name));
  }

  static Polynomial variable(const VarContext& ctx, std::size_t index) {
    Polynomial p(ctx);
    Monomial m(ctx.size());
    m[index] = 1;
    p.terms_.emplace(std::move(m), Rational(1));
    return p;
  }

  static Polynomial term(const VarContext& ctx, Monomial m, const Rational& c) {
    Polynomial p(ctx);
    if (c != 0) p.terms_.emplace(std::move(m), c);
    return p;
  }

  const VarContext& context() const noexcept { return ctx_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
  }
  /// Value of a constant polynomial; 0 for the zero polynomial.
  Rational constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw DomainError("polynomial is not constant");
    return terms_.begin()->second;
  }
  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Largest term under lex; precondition: nonzero.
  const std::pair<const Monomial, Rational>& leading_term() const {
    if (terms_.empty()) throw DomainError("leading term of zero polynomial");
    return *terms_.begin();
  }

  Degree total_degree() const {
    if (terms_.empty()) return std::nullopt;
    std::uint64_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
  }

  Degree degree_in(std::size_t var) const {
    if (terms_.empty()) return std::nullopt;
    std::uint64_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max<std::uint64_t>(d, m[var]);
    return d;
  }
  Degree degree_in(std::string_view name) const { return degree_in(ctx_.require(name)); }

  /// True when only variables with the given predicate occur.
  template <class Pred>
  bool only_involves(Pred&& allowed) const {
    for (const auto& [m, c] : terms_)
      for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] != 0 && !allowed(i)) return false;
    return true;
  }

  bool involves(std::size_t var) const {
    for (const auto& [m, c] : terms_)
      if (m[var] != 0) return true;
    return false;
  }

  Polynomial& operator+=(const Polynomial& q) {
    check_same(q);
    for (const auto& [m, c] : q.terms_) add_term(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& q) {
    check_same(q);
    for (const auto& [m, c] : q.terms_) add_term(m, -c);
    return *this;
  }

  Polynomial& operator*=(const Rational& c) {
    if (c == 0) {
      terms_.clear();
    } else {
      for (auto& [m, coef] : terms_) coef *= c;
    }
    return *this;
  }

  /// this += c * mono * q, the inner step of every reduction loop.
  void add_scaled(const Rational& c, const Monomial& mono, const Polynomial& q) {
    check_same(q);
    if (c == 0) return;
    for (const auto& [m, coef] : q.terms_) add_term(m * mono, c * coef);
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator-(Polynomial p) { return p *= Rational(-1); }
  friend Polynomial operator*(Polynomial p, const Rational& c) { return p *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial p) { return p *= c; }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    p.check_same(q);
    Polynomial r(p.ctx_);
    for (const auto& [mp, cp] : p.terms_)
      for (const auto& [mq, cq] : q.terms_) r.add_term(mp * mq, cp * cq);
    return r;
  }
  Polynomial& operator*=(const Polynomial& q) { return *this = *this * q; }

  Polynomial pow(std::uint64_t n) const {
    Polynomial result = constant(ctx_, Rational(1));
    Polynomial base = *this;
    while (n) {
      if (n & 1) result *= base;
      n >>= 1;
      if (n) base *= base;
    }
    return result;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.terms_ == b.terms_ && (a.terms_.empty() || a.ctx_ == b.ctx_);
  }

  void check_same(const Polynomial& q) const {
    if (!(ctx_ == q.ctx_)) throw StructuralError("polynomial context mismatch");
  }

  /// Canonical text: descending lex terms, lowest-terms coefficients,
  /// e.g. "X^2 - 1/2*Y*t + 3".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      Rational mag = abs(c);
      if (first) {
        if (c < 0) out << '-';
      } else {
        out << (c < 0 ? " - " : " + ");
      }
      first = false;
      std::string mono = monomial_string(m);
      if (mono.empty()) {
        out << mag.get_str();
      } else {
        if (mag != 1) out << mag.get_str() << '*';
        out << mono;
      }
    }
    return out.str();
  }

  std::string monomial_string(const Monomial& m) const {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!s.empty()) s += '*';
      s += ctx_.name(i);
      if (m[i] > 1) s += '^' + std::to_string(m[i]);
    }
    return s;
  }

 private:
  VarContext ctx_;
  TermMap terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

/// Formal partial derivative with respect to the variable at index var.
inline Polynomial partial_derivative(const Polynomial& p, std::size_t var) {
  Polynomial r(p.context());
  for (const auto& [m, c] : p.terms()) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    r.add_term(d, c * m[var]);
  }
  return r;
}

inline Polynomial partial_derivative(const Polynomial& p, std::string_view var) {
  return partial_derivative(p, p.context().require(var));
}

/// Ring homomorphism sending variable i of p's context to images[i]; the
/// result lives in the images' common context.
inline Polynomial evaluate(const Polynomial& p, std::span<const Polynomial> images,
                           const VarContext& target) {
  if (images.size() != p.context().size())
    throw StructuralError("evaluation needs one image per variable");
  for (const auto& img : images)
    if (!img.is_zero() && !(img.context() == target))
      throw StructuralError("evaluation images must share the target context");
  std::vector<std::vector<Polynomial>> powers(images.size());
  auto power = [&](std::size_t var, std::uint32_t e) -> const Polynomial& {
    auto& cache = powers[var];
    if (cache.empty()) cache.push_back(Polynomial::constant(target, Rational(1)));
    while (cache.size() <= e) {
      Polynomial img = images[var].is_zero() ? Polynomial(target) : images[var];
      cache.push_back(cache.back() * img);
    }
    return cache[e];
  };
  Polynomial result(target);
  for (const auto& [m, c] : p.terms()) {
    Polynomial t = Polynomial::constant(target, c);
    for (std::size_t i = 0; i < m.size() && !t.is_zero(); ++i)
      if (m[i]) t *= power(i, m[i]);
    result += t;
  }
  return result;
}

/// Simultaneous substitution inside p's own context; unbound variables stay.
inline Polynomial substitute(const Polynomial& p, const std::map<std::string, Polynomial>& bindings) {
  const VarContext& ctx = p.context();
  std::vector<Polynomial> images;
  images.reserve(ctx.size());
  for (std::size_t i = 0; i < ctx.size(); ++i) images.push_back(Polynomial::variable(ctx, i));
  for (const auto& [name, img] : bindings) {
    std::size_t i = ctx.require(name);
    if (!img.is_zero() && !(img.context() == ctx))
      throw StructuralError("substitution image for " + name + " has a foreign context");
    images[i] = img.is_zero() ? Polynomial(ctx) : img;
  }
  return evaluate(p, images, ctx);
}

/// Re-embeds p into another context by variable name; every variable of p
/// that actually occurs must exist in the target.
inline Polynomial rebase(const Polynomial& p, const VarContext& target) {
  if (p.context() == target) return p;
  Polynomial r(target);
  for (const auto& [m, c] : p.terms()) {
    Monomial t(target.size());
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) t[target.require(p.context().name(i))] = m[i];
    r.add_term(t, c);
  }
  return r;
}

}  // namespace lndkit
