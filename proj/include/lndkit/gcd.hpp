#pragma once

#include <optional>
#include <vector>

#include "lndkit/polynomial.hpp"

namespace lndkit {

/// Quotient p / q when q divides p exactly, std::nullopt otherwise.
///
/// {q} is a Groebner basis of (q), so single-divisor lex division leaves a
/// zero remainder iff q | p; and when q | p every intermediate leading term
/// is a multiple of lt(q), so the loop may bail out at the first miss.
inline std::optional<Polynomial> divide_exact(const Polynomial& p, const Polynomial& q) {
  p.check_same(q);
  if (q.is_zero()) throw DomainError("division by zero polynomial");
  Polynomial rem = p;
  Polynomial quot(p.context());
  const auto& [lq_mono, lq_coef] = q.leading_term();
  while (!rem.is_zero()) {
    const auto [lm, lc] = rem.leading_term();
    if (!lq_mono.divides(lm)) return std::nullopt;
    Monomial shift = lm.divided_by(lq_mono);
    Rational c = lc / lq_coef;
    quot.add_term(shift, c);
    rem.add_scaled(-c, shift, q);
  }
  return quot;
}

inline Polynomial lex_monic(Polynomial p) {
  if (p.is_zero()) return p;
  Rational lc = p.leading_term().second;
  return p *= Rational(1) / lc;
}

namespace detail {

using Dense = std::vector<Polynomial>;  // coefficients of var^0, var^1, ...

inline Dense coefficients_in(const Polynomial& p, std::size_t var) {
  Dense out;
  for (const auto& [m, c] : p.terms()) {
    if (out.size() <= m[var]) out.resize(m[var] + 1, Polynomial(p.context()));
    Monomial rest = m;
    rest[var] = 0;
    out[m[var]].add_term(rest, c);
  }
  return out;
}

inline Polynomial from_coefficients(const Dense& coeffs, std::size_t var, const VarContext& ctx) {
  Polynomial r(ctx);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    for (const auto& [m, c] : coeffs[i].terms()) {
      Monomial shifted = m;
      shifted[var] += static_cast<std::uint32_t>(i);
      r.add_term(shifted, c);
    }
  }
  return r;
}

inline void trim(Dense& d) {
  while (!d.empty() && d.back().is_zero()) d.pop_back();
}

inline Polynomial require_exact(const Polynomial& p, const Polynomial& q) {
  auto r = divide_exact(p, q);
  if (!r) throw DomainError("internal: expected exact division failed");
  return *r;
}

inline Polynomial gcd_impl(const Polynomial& p, const Polynomial& q);

inline Polynomial content_in(const Polynomial& p, std::size_t var) {
  Dense cs = coefficients_in(p, var);
  Polynomial g(p.context());
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? lex_monic(c) : gcd_impl(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

/// lc(b)^(deg a - deg b + 1) * a mod b, viewing both as univariate in var.
inline Dense pseudo_remainder(Dense a, const Dense& b) {
  const std::size_t db = b.size() - 1;
  const Polynomial& lb = b.back();
  trim(a);
  if (a.size() < b.size()) return a;
  std::size_t e = a.size() - b.size() + 1;
  while (!a.empty() && a.size() - 1 >= db) {
    Polynomial la = a.back();
    std::size_t shift = a.size() - 1 - db;
    for (auto& c : a) c = c * lb;
    for (std::size_t i = 0; i <= db; ++i) a[i + shift] -= la * b[i];
    --e;
    trim(a);
  }
  if (e > 0 && !a.empty()) {
    Polynomial f = lb.pow(e);
    for (auto& c : a) c = c * f;
  }
  return a;
}

/// gcd of two polynomials that are primitive with respect to var and both
/// involve var, via the subresultant remainder sequence.
inline Polynomial primitive_gcd(const Polynomial& p, const Polynomial& q, std::size_t var) {
  const VarContext& ctx = p.context();
  Dense a = coefficients_in(p, var);
  Dense b = coefficients_in(q, var);
  if (a.size() < b.size()) std::swap(a, b);
  Polynomial g = Polynomial::constant(ctx, Rational(1));
  Polynomial h = Polynomial::constant(ctx, Rational(1));
  for (;;) {
    std::size_t delta = a.size() - b.size();
    Dense r = pseudo_remainder(a, b);
    if (r.empty()) break;
    if (r.size() == 1) return Polynomial::constant(ctx, Rational(1));
    Polynomial divisor = g * h.pow(delta);
    for (auto& c : r) c = require_exact(c, divisor);
    a = std::move(b);
    b = std::move(r);
    g = a.back();
    if (delta == 1) {
      h = g;
    } else if (delta > 1) {
      h = require_exact(g.pow(delta), h.pow(delta - 1));
    }
  }
  Polynomial last = from_coefficients(b, var, ctx);
  return require_exact(last, content_in(last, var));
}

inline Polynomial gcd_impl(const Polynomial& p, const Polynomial& q) {
  const VarContext& ctx = p.is_zero() ? q.context() : p.context();
  if (p.is_zero()) return lex_monic(q);
  if (q.is_zero()) return lex_monic(p);
  if (p.is_constant() || q.is_constant()) return Polynomial::constant(ctx, Rational(1));

  std::size_t var = ctx.size();
  for (std::size_t i = 0; i < ctx.size() && var == ctx.size(); ++i)
    if (p.involves(i) || q.involves(i)) var = i;

  if (!p.involves(var)) return gcd_impl(p, content_in(q, var));
  if (!q.involves(var)) return gcd_impl(content_in(p, var), q);

  Polynomial cp = content_in(p, var);
  Polynomial cq = content_in(q, var);
  Polynomial c = gcd_impl(cp, cq);
  Polynomial g = primitive_gcd(require_exact(p, cp), require_exact(q, cq), var);
  return lex_monic(c * g);
}

}  // namespace detail

/// Greatest common divisor, normalized to leading lex coefficient 1.
inline Polynomial gcd(const Polynomial& p, const Polynomial& q) {
  if (!p.is_zero() && !q.is_zero()) p.check_same(q);
  if (p.is_zero() && q.is_zero()) throw DomainError("gcd of two zero polynomials");
  Polynomial g = detail::gcd_impl(p, q);
  return g;
}

}  // namespace lndkit
