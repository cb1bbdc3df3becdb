#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lndkit/polynomial.hpp"

namespace lndkit {

enum class OrderKind { lex, degrevlex };

/// Monomial order over a permutation of the context's variables;
/// perm[0] is the most significant variable.
class MonomialOrder {
 public:
  MonomialOrder(OrderKind kind, std::vector<std::size_t> perm) : kind_(kind), perm_(std::move(perm)) {
    std::vector<std::size_t> sorted = perm_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != i) throw StructuralError("monomial order permutation is not a bijection");
  }

  static MonomialOrder lex(const VarContext& ctx) { return {OrderKind::lex, identity(ctx.size())}; }
  static MonomialOrder degrevlex(const VarContext& ctx) {
    return {OrderKind::degrevlex, identity(ctx.size())};
  }

  OrderKind kind() const noexcept { return kind_; }
  const std::vector<std::size_t>& permutation() const noexcept { return perm_; }

  /// True iff a > b.
  bool greater(const Monomial& a, const Monomial& b) const {
    if (kind_ == OrderKind::degrevlex) {
      auto da = a.total_degree(), db = b.total_degree();
      if (da != db) return da > db;
      for (std::size_t k = perm_.size(); k-- > 0;) {
        auto v = perm_[k];
        if (a[v] != b[v]) return a[v] < b[v];
      }
      return false;
    }
    for (auto v : perm_)
      if (a[v] != b[v]) return a[v] > b[v];
    return false;
  }

  /// Leading term of a nonzero polynomial under this order.
  std::pair<Monomial, Rational> leading_term(const Polynomial& p) const {
    if (p.is_zero()) throw DomainError("leading term of zero polynomial");
    auto best = p.terms().begin();
    for (auto it = std::next(best); it != p.terms().end(); ++it)
      if (greater(it->first, best->first)) best = it;
    return {best->first, best->second};
  }

 private:
  static std::vector<std::size_t> identity(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
  }

  OrderKind kind_;
  std::vector<std::size_t> perm_;
};

struct NormalForm {
  Polynomial remainder;
  std::vector<Polynomial> quotients;  // one per basis element
};

/// Divides p by the list of divisors under order (full reduction).
inline NormalForm reduce_by(const Polynomial& p, const std::vector<Polynomial>& divisors,
                            const MonomialOrder& order) {
  const VarContext& ctx = p.context();
  std::vector<std::pair<Monomial, Rational>> leads;
  for (const auto& d : divisors) {
    d.check_same(p);
    leads.push_back(order.leading_term(d));
  }
  NormalForm out{Polynomial(ctx), std::vector<Polynomial>(divisors.size(), Polynomial(ctx))};
  Polynomial work = p;
  while (!work.is_zero()) {
    auto [m, c] = order.leading_term(work);
    bool reduced = false;
    for (std::size_t k = 0; k < divisors.size(); ++k) {
      if (!leads[k].first.divides(m)) continue;
      Monomial shift = m.divided_by(leads[k].first);
      Rational q = c / leads[k].second;
      out.quotients[k].add_term(shift, q);
      work.add_scaled(-q, shift, divisors[k]);
      reduced = true;
      break;
    }
    if (!reduced) {
      out.remainder.add_term(m, c);
      work.add_term(m, -c);
    }
  }
  return out;
}

/// Reduced Groebner basis with a cofactor matrix over the original inputs:
/// basis[i] == sum_j cofactors[i][j] * inputs[j].
class GroebnerBasis {
 public:
  const MonomialOrder& order() const noexcept { return order_; }
  const std::vector<Polynomial>& generators() const noexcept { return basis_; }
  const std::vector<Polynomial>& inputs() const noexcept { return inputs_; }
  const std::vector<std::vector<Polynomial>>& cofactors() const noexcept { return cofactors_; }

  NormalForm normal_form(const Polynomial& p) const { return reduce_by(p, basis_, order_); }

  /// Expresses p over the original inputs when p lies in the ideal.
  std::optional<std::vector<Polynomial>> express(const Polynomial& p) const {
    NormalForm nf = normal_form(p);
    if (!nf.remainder.is_zero()) return std::nullopt;
    std::vector<Polynomial> out(inputs_.size(), Polynomial(p.context()));
    for (std::size_t k = 0; k < basis_.size(); ++k)
      for (std::size_t j = 0; j < inputs_.size(); ++j)
        if (!nf.quotients[k].is_zero() && !cofactors_[k][j].is_zero())
          out[j] += nf.quotients[k] * cofactors_[k][j];
    return out;
  }

  /// Every S-polynomial of basis pairs has zero normal form.
  bool satisfies_buchberger_criterion() const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      for (std::size_t j = i + 1; j < basis_.size(); ++j)
        if (!normal_form(s_polynomial(basis_[i], basis_[j])).remainder.is_zero()) return false;
    return true;
  }

  /// Every basis element equals its cofactor recombination.
  bool cofactors_consistent() const {
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      Polynomial sum(basis_[k].context());
      for (std::size_t j = 0; j < inputs_.size(); ++j) sum += cofactors_[k][j] * inputs_[j];
      if (!(sum == basis_[k])) return false;
    }
    return true;
  }

  Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) const {
    auto [mf, cf] = order_.leading_term(f);
    auto [mg, cg] = order_.leading_term(g);
    Monomial l = lcm(mf, mg);
    Polynomial s(f.context());
    s.add_scaled(Rational(1) / cf, l.divided_by(mf), f);
    s.add_scaled(Rational(-1) / cg, l.divided_by(mg), g);
    return s;
  }

  friend GroebnerBasis buchberger(const std::vector<Polynomial>& gens, const MonomialOrder& order);

 private:
  explicit GroebnerBasis(MonomialOrder order) : order_(std::move(order)) {}

  MonomialOrder order_;
  std::vector<Polynomial> inputs_;
  std::vector<Polynomial> basis_;
  std::vector<std::vector<Polynomial>> cofactors_;
};

/// Buchberger's algorithm with the coprime-leading-term and chain criteria,
/// normal selection strategy (smallest lcm first, ties by index pair).
inline GroebnerBasis buchberger(const std::vector<Polynomial>& gens, const MonomialOrder& order) {
  if (gens.empty()) throw DomainError("Groebner basis of an empty generator list");
  const VarContext& ctx = gens.front().context();
  for (const auto& g : gens) g.check_same(gens.front());
  if (order.permutation().size() != ctx.size())
    throw StructuralError("monomial order does not match the context");

  GroebnerBasis gb(order);
  gb.inputs_ = gens;
  const std::size_t n_in = gens.size();
  auto unit_vec = [&](std::size_t j) {
    std::vector<Polynomial> v(n_in, Polynomial(ctx));
    v[j] = Polynomial::constant(ctx, Rational(1));
    return v;
  };

  std::vector<Polynomial> G;
  std::vector<std::vector<Polynomial>> C;
  std::vector<Monomial> leads;
  std::set<std::pair<std::size_t, std::size_t>> pending;

  auto add_element = [&](Polynomial p, std::vector<Polynomial> cof) {
    Rational lc = order.leading_term(p).second;
    Rational inv = Rational(1) / lc;
    p *= inv;
    for (auto& c : cof) c *= inv;
    std::size_t idx = G.size();
    leads.push_back(order.leading_term(p).first);
    G.push_back(std::move(p));
    C.push_back(std::move(cof));
    for (std::size_t i = 0; i < idx; ++i) pending.emplace(i, idx);
  };

  auto reduce_tracked = [&](const Polynomial& p, std::vector<Polynomial> cof) {
    NormalForm nf = reduce_by(p, G, order);
    for (std::size_t k = 0; k < G.size(); ++k) {
      if (nf.quotients[k].is_zero()) continue;
      for (std::size_t j = 0; j < n_in; ++j)
        if (!C[k][j].is_zero()) cof[j] -= nf.quotients[k] * C[k][j];
    }
    return std::pair{nf.remainder, std::move(cof)};
  };

  for (std::size_t j = 0; j < n_in; ++j) {
    if (gens[j].is_zero()) continue;
    auto [r, cof] = reduce_tracked(gens[j], unit_vec(j));
    if (!r.is_zero()) add_element(std::move(r), std::move(cof));
  }

  auto pair_lcm = [&](const std::pair<std::size_t, std::size_t>& pr) {
    return lcm(leads[pr.first], leads[pr.second]);
  };

  while (!pending.empty()) {
    auto best = pending.begin();
    Monomial best_lcm = pair_lcm(*best);
    for (auto it = std::next(pending.begin()); it != pending.end(); ++it) {
      Monomial l = pair_lcm(*it);
      if (order.greater(best_lcm, l)) {
        best = it;
        best_lcm = std::move(l);
      }
    }
    auto [i, j] = *best;
    pending.erase(best);

    if (gcd(leads[i], leads[j]).is_one()) continue;
    bool chain = false;
    for (std::size_t k = 0; k < G.size() && !chain; ++k) {
      if (k == i || k == j || !leads[k].divides(best_lcm)) continue;
      auto key = [](std::size_t a, std::size_t b) { return std::pair{std::min(a, b), std::max(a, b)}; };
      chain = !pending.count(key(i, k)) && !pending.count(key(j, k));
    }
    if (chain) continue;

    Polynomial s(ctx);
    std::vector<Polynomial> cof(n_in, Polynomial(ctx));
    Monomial si = best_lcm.divided_by(leads[i]);
    Monomial sj = best_lcm.divided_by(leads[j]);
    s.add_scaled(Rational(1), si, G[i]);
    s.add_scaled(Rational(-1), sj, G[j]);
    for (std::size_t c = 0; c < n_in; ++c) {
      cof[c].add_scaled(Rational(1), si, C[i][c]);
      cof[c].add_scaled(Rational(-1), sj, C[j][c]);
    }
    auto [r, rcof] = reduce_tracked(s, std::move(cof));
    if (!r.is_zero()) add_element(std::move(r), std::move(rcof));
  }

  // Minimalize: drop elements whose leading monomial is divisible by another's.
  std::vector<std::size_t> keep;
  for (std::size_t a = 0; a < G.size(); ++a) {
    bool redundant = false;
    for (std::size_t b = 0; b < G.size() && !redundant; ++b) {
      if (a == b || !leads[b].divides(leads[a])) continue;
      redundant = !(leads[a] == leads[b]) || b < a;
    }
    if (!redundant) keep.push_back(a);
  }
  std::sort(keep.begin(), keep.end(),
            [&](std::size_t a, std::size_t b) { return order.greater(leads[b], leads[a]); });

  // Interreduce tails.
  std::vector<Polynomial> minimal;
  std::vector<std::vector<Polynomial>> mcof;
  for (auto k : keep) {
    minimal.push_back(G[k]);
    mcof.push_back(C[k]);
  }
  for (std::size_t a = 0; a < minimal.size(); ++a) {
    std::vector<Polynomial> others;
    for (std::size_t b = 0; b < minimal.size(); ++b)
      if (b != a) others.push_back(minimal[b]);
    auto [lm, lc] = order.leading_term(minimal[a]);
    Polynomial tail = minimal[a];
    tail.add_term(lm, -lc);
    NormalForm nf = reduce_by(tail, others, order);
    Polynomial reduced = nf.remainder;
    reduced.add_term(lm, lc);
    std::vector<Polynomial> cof = mcof[a];
    for (std::size_t b = 0, o = 0; b < minimal.size(); ++b) {
      if (b == a) continue;
      const Polynomial& q = nf.quotients[o++];
      if (q.is_zero()) continue;
      for (std::size_t j = 0; j < n_in; ++j)
        if (!mcof[b][j].is_zero()) cof[j] -= q * mcof[b][j];
    }
    minimal[a] = std::move(reduced);
    mcof[a] = std::move(cof);
  }
  gb.basis_ = std::move(minimal);
  gb.cofactors_ = std::move(mcof);
  return gb;
}

/// Outcome of an ideal-membership query; cofactors are present iff member.
struct IdealMembership {
  std::optional<std::vector<Polynomial>> cofactors;
  bool member() const noexcept { return cofactors.has_value(); }
};

/// Decides p in <gens>; a Yes carries a_i with sum a_i * gens_i == p, re-verified.
inline IdealMembership ideal_member(const Polynomial& p, const std::vector<Polynomial>& gens,
                                    std::optional<MonomialOrder> order = std::nullopt) {
  if (gens.empty()) throw DomainError("ideal membership against an empty generator list");
  for (const auto& g : gens) p.check_same(g);
  bool all_zero = std::all_of(gens.begin(), gens.end(), [](const auto& g) { return g.is_zero(); });
  if (all_zero) {
    if (p.is_zero()) return {std::vector<Polynomial>(gens.size(), Polynomial(p.context()))};
    return {};
  }
  GroebnerBasis gb = buchberger(gens, order ? *order : MonomialOrder::degrevlex(p.context()));
  auto cof = gb.express(p);
  if (!cof) return {};
  Polynomial check(p.context());
  for (std::size_t j = 0; j < gens.size(); ++j) check += (*cof)[j] * gens[j];
  if (!(check == p)) throw DomainError("internal: ideal membership cofactors failed re-verification");
  return {std::move(cof)};
}

}  // namespace lndkit
