#pragma once

#include <algorithm>
#include <functional>
#include <tuple>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lndkit/derivation.hpp"
#include "lndkit/echelon.hpp"
#include "lndkit/polynomial.hpp"

namespace lndkit {

/// How the formal degree of a generator product is measured.
///  - count: number of generator factors.
///  - weighted: each factor weighs the total degree of its generator.
/// Base and algebra factors have separate budgets, each bounded by d.
enum class DegreeMeasure { count, weighted };

inline std::string to_string(DegreeMeasure m) { return m == DegreeMeasure::count ? "count" : "weighted"; }

/// A = R[g1, ..., gk] inside the ambient polynomial ring of a context, with
/// R = Q[r1, ..., rb] generated inside the coefficient variables.
///
/// Elements of A are written formally as polynomials in symbols, one per
/// generator, living in the formal context (algebra symbols as main
/// variables, base symbols as coefficient variables). For the full ring the
/// formal context is the ambient context itself.
class Subalgebra {
 public:
  static Subalgebra full(const VarContext& ctx, DegreeMeasure measure = DegreeMeasure::count) {
    std::vector<Polynomial> base, alg;
    for (std::size_t i = 0; i < ctx.size(); ++i)
      (ctx.is_main(i) ? alg : base).push_back(Polynomial::variable(ctx, i));
    return Subalgebra(ctx, std::move(base), std::move(alg), measure, true);
  }

  Subalgebra(VarContext ctx, std::vector<Polynomial> base, std::vector<Polynomial> algebra,
             DegreeMeasure measure = DegreeMeasure::count, bool full_ring = false)
      : ctx_(std::move(ctx)),
        base_(std::move(base)),
        alg_(std::move(algebra)),
        measure_(measure),
        full_ring_(full_ring) {
    auto check = [&](const std::vector<Polynomial>& gens, const char* what) {
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].is_zero()) throw StructuralError(std::string(what) + " generator is zero");
        if (!(gens[i].context() == ctx_)) throw StructuralError(std::string(what) + " generator in foreign context");
        for (std::size_t j = 0; j < i; ++j)
          if (gens[i] == gens[j]) throw StructuralError(std::string(what) + " generators are not distinct");
      }
    };
    check(base_, "base");
    check(alg_, "algebra");
    for (const auto& b : base_)
      if (!b.only_involves([&](std::size_t v) { return !ctx_.is_main(v); }))
        throw StructuralError("base generator " + b.to_string() + " involves a main variable");
    if (full_ring_) {
      if (alg_.size() != ctx_.num_main()) throw StructuralError("full ring must be generated by the main variables");
      for (std::size_t i = 0; i < alg_.size(); ++i)
        if (!(alg_[i] == Polynomial::variable(ctx_, i)))
          throw StructuralError("full ring must be generated by the main variables");
      formal_ = ctx_;
    } else {
      std::vector<std::string> bnames, gnames;
      for (std::size_t i = 0; i < base_.size(); ++i) bnames.push_back("r" + std::to_string(i + 1));
      for (std::size_t i = 0; i < alg_.size(); ++i) gnames.push_back("g" + std::to_string(i + 1));
      formal_ = VarContext::make(bnames, gnames);
    }
  }

  const VarContext& context() const noexcept { return ctx_; }
  const VarContext& formal_context() const noexcept { return formal_; }
  const std::vector<Polynomial>& base_generators() const noexcept { return base_; }
  const std::vector<Polynomial>& algebra_generators() const noexcept { return alg_; }
  DegreeMeasure measure() const noexcept { return measure_; }
  bool full_ring() const noexcept { return full_ring_; }

  Subalgebra with_measure(DegreeMeasure m) const {
    Subalgebra s = *this;
    s.measure_ = m;
    return s;
  }

  /// Generator polynomial behind formal symbol i (algebra symbols first).
  const Polynomial& symbol_value(std::size_t i) const {
    return i < alg_.size() ? alg_[i] : base_.at(i - alg_.size());
  }

  /// Substitutes generators for the formal symbols.
  Polynomial evaluate(const Polynomial& formal_expr) const {
    if (formal_expr.is_zero()) return Polynomial(ctx_);
    if (!(formal_expr.context() == formal_)) throw StructuralError("expression is not in the formal context");
    if (full_ring_) return formal_expr;
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < formal_.size(); ++i) images.push_back(symbol_value(i));
    return lndkit::evaluate(formal_expr, images, ctx_);
  }

  std::uint64_t weight(std::size_t symbol) const {
    if (measure_ == DegreeMeasure::count) return 1;
    return std::max<std::uint64_t>(1, symbol_value(symbol).total_degree().value_or(1));
  }

  /// (algebra part, base part) formal degree of a formal monomial.
  std::pair<std::uint64_t, std::uint64_t> formal_degree(const Monomial& m) const {
    std::uint64_t a = 0, b = 0;
    for (std::size_t i = 0; i < m.size(); ++i) (i < alg_.size() ? a : b) += m[i] * weight(i);
    return {a, b};
  }

  /// Largest part-degree over the terms of a formal expression.
  std::uint64_t formal_degree(const Polynomial& expr) const {
    std::uint64_t d = 0;
    for (const auto& [m, c] : expr.terms()) {
      auto [a, b] = formal_degree(m);
      d = std::max({d, a, b});
    }
    return d;
  }

 private:
  VarContext ctx_;
  VarContext formal_;
  std::vector<Polynomial> base_;
  std::vector<Polynomial> alg_;
  DegreeMeasure measure_;
  bool full_ring_;
};

/// Formal expression of a target over the generators, re-verified on creation.
struct MembershipWitness {
  Polynomial target;
  Polynomial expression;
  std::size_t bound = 0;
};

struct MembershipResult {
  std::optional<MembershipWitness> witness;
  std::size_t bound = 0;
  bool found() const noexcept { return witness.has_value(); }
};

/// All generator products b * a with base part b and algebra part a of formal
/// degree <= d each, in a fixed deterministic order (ascending combined
/// degree, then descending exponent vectors).
class ProductSpace {
 public:
  struct Candidate {
    Monomial formal;  // exponents over the formal context
    std::size_t alg;  // index into algebra_products()
    std::size_t base;  // index into base_products()
    Polynomial value;
  };

  ProductSpace(const Subalgebra& s, std::size_t d) : s_(&s), d_(d) {
    const std::size_t k = s.algebra_generators().size();
    const std::size_t b = s.base_generators().size();
    const VarContext& ctx = s.context();

    auto enumerate = [&](std::size_t first, std::size_t count) {
      std::vector<std::vector<std::uint32_t>> out;
      std::vector<std::uint32_t> cur(count, 0);
      std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t i, std::uint64_t left) {
        if (i == count) {
          out.push_back(cur);
          return;
        }
        std::uint64_t w = s.weight(first + i);
        for (std::uint32_t e = 0; e * w <= left; ++e) {
          cur[i] = e;
          rec(i + 1, left - e * w);
        }
        cur[i] = 0;
      };
      rec(0, d);
      auto deg = [&](const std::vector<std::uint32_t>& e) {
        std::uint64_t t = 0;
        for (std::size_t i = 0; i < e.size(); ++i) t += e[i] * s.weight(first + i);
        return t;
      };
      std::stable_sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
        auto dx = deg(x), dy = deg(y);
        return dx != dy ? dx < dy : x > y;
      });
      return out;
    };

    auto build_values = [&](std::size_t first, const std::vector<std::vector<std::uint32_t>>& exps,
                            std::map<std::vector<std::uint32_t>, Polynomial>& cache) {
      std::vector<Polynomial> vals;
      for (const auto& e : exps) {
        vals.push_back(product_value(e, first, cache, ctx));
      }
      return vals;
    };

    auto alg_exps = enumerate(0, k);
    alg_values_ = build_values(0, alg_exps, alg_cache_);
    alg_exps_ = alg_exps;

    // Base products are deduplicated by value: (X^2)^3 and (X^3)^2 coincide.
    auto base_exps = enumerate(k, b);
    std::map<std::vector<std::uint32_t>, Polynomial> base_cache;
    auto base_vals = build_values(k, base_exps, base_cache);
    for (std::size_t i = 0; i < base_exps.size(); ++i) {
      bool dup = std::any_of(base_values_.begin(), base_values_.end(),
                             [&](const Polynomial& p) { return p == base_vals[i]; });
      if (dup) continue;
      base_exps_.push_back(base_exps[i]);
      base_values_.push_back(base_vals[i]);
    }

    std::vector<std::tuple<std::uint64_t, std::size_t, std::size_t>> order;
    for (std::size_t a = 0; a < alg_exps_.size(); ++a)
      for (std::size_t bb = 0; bb < base_exps_.size(); ++bb)
        order.emplace_back(part_degree(alg_exps_[a], 0) + part_degree(base_exps_[bb], k), a, bb);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
    for (const auto& [deg, a, bb] : order) {
      Monomial m(k + b);
      for (std::size_t i = 0; i < k; ++i) m[i] = alg_exps_[a][i];
      for (std::size_t i = 0; i < b; ++i) m[k + i] = base_exps_[bb][i];
      candidates_.push_back({std::move(m), a, bb, alg_values_[a] * base_values_[bb]});
    }
  }

  const Subalgebra& subalgebra() const noexcept { return *s_; }
  std::size_t bound() const noexcept { return d_; }
  const std::vector<Candidate>& candidates() const noexcept { return candidates_; }
  const std::vector<Polynomial>& base_products() const noexcept { return base_values_; }
  std::vector<Monomial> base_formals() const {
    const std::size_t k = s_->algebra_generators().size();
    std::vector<Monomial> out;
    for (const auto& e : base_exps_) {
      Monomial m(s_->formal_context().size());
      for (std::size_t i = 0; i < e.size(); ++i) m[k + i] = e[i];
      out.push_back(std::move(m));
    }
    return out;
  }

  /// D(candidate) from the images of the algebra generators, by Leibniz over
  /// the formal product (base generators are constants of D).
  Polynomial derivative(const Candidate& c, const std::vector<Polynomial>& images) const {
    if (cached_images_ != &images || cached_images_size_ != images.size()) {
      deriv_cache_.clear();
      cached_images_ = &images;
      cached_images_size_ = images.size();
    }
    auto it = deriv_cache_.find(c.alg);
    if (it == deriv_cache_.end()) {
      const VarContext& ctx = s_->context();
      const auto& e = alg_exps_[c.alg];
      Polynomial acc(ctx);
      for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j] == 0 || images[j].is_zero()) continue;
        auto lower = e;
        lower[j] -= 1;
        acc += Rational(e[j]) * images[j] * product_value(lower, 0, alg_cache_, ctx);
      }
      it = deriv_cache_.emplace(c.alg, std::move(acc)).first;
    }
    return it->second * base_values_[c.base];
  }

  Polynomial formal_term(const Candidate& c, const Rational& coef) const {
    return Polynomial::term(s_->formal_context(), c.formal, coef);
  }

 private:
  std::uint64_t part_degree(const std::vector<std::uint32_t>& e, std::size_t first) const {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < e.size(); ++i) t += e[i] * s_->weight(first + i);
    return t;
  }

  Polynomial product_value(const std::vector<std::uint32_t>& e, std::size_t first,
                           std::map<std::vector<std::uint32_t>, Polynomial>& cache, const VarContext& ctx) const {
    auto it = cache.find(e);
    if (it != cache.end()) return it->second;
    std::size_t j = e.size();
    for (std::size_t i = e.size(); i-- > 0;)
      if (e[i]) {
        j = i;
        break;
      }
    Polynomial v = Polynomial::constant(ctx, Rational(1));
    if (j != e.size()) {
      auto lower = e;
      lower[j] -= 1;
      v = product_value(lower, first, cache, ctx) * s_->symbol_value(first + j);
    }
    cache.emplace(e, v);
    return v;
  }

  const Subalgebra* s_;
  std::size_t d_;
  std::vector<std::vector<std::uint32_t>> alg_exps_;
  std::vector<Polynomial> alg_values_;
  std::vector<std::vector<std::uint32_t>> base_exps_;
  std::vector<Polynomial> base_values_;
  std::vector<Candidate> candidates_;
  mutable std::map<std::vector<std::uint32_t>, Polynomial> alg_cache_;
  mutable std::map<std::size_t, Polynomial> deriv_cache_;
  mutable const std::vector<Polynomial>* cached_images_ = nullptr;
  mutable std::size_t cached_images_size_ = 0;
};

using MonoVec = SparseVector<Monomial, LexGreater>;

inline MonoVec to_vec(const Polynomial& p) { return MonoVec(p.terms().begin(), p.terms().end()); }

inline Polynomial from_vec(const VarContext& ctx, const MonoVec& v) {
  Polynomial p(ctx);
  for (const auto& [m, c] : v) p.add_term(m, c);
  return p;
}

/// Reusable span of S at bound d for repeated membership queries.
class MembershipOracle {
 public:
  MembershipOracle(const Subalgebra& s, std::size_t d) : s_(s), d_(d) {
    if (d < 1) throw PreconditionError("degree bound must be at least 1");
    if (s_.full_ring()) return;
    space_ = std::make_unique<ProductSpace>(s_, d);
    for (std::size_t i = 0; i < space_->candidates().size(); ++i)
      echelon_.insert(to_vec(space_->candidates()[i].value), i);
  }

  MembershipResult member(const Polynomial& f) const {
    MembershipResult r{std::nullopt, d_};
    if (!f.is_zero() && !(f.context() == s_.context())) throw StructuralError("membership target in foreign context");
    Polynomial expr(s_.formal_context());
    if (s_.full_ring()) {
      // The candidates are exactly the monomials within both budgets.
      for (const auto& [m, c] : f.terms()) {
        auto [a, b] = s_.formal_degree(m);
        if (a > d_ || b > d_) return r;
      }
      expr = rebase(f, s_.formal_context());
    } else {
      auto comb = echelon_.express(to_vec(f));
      if (!comb) return r;
      for (const auto& [label, c] : *comb) expr += space_->formal_term(space_->candidates()[label], c);
    }
    if (!(s_.evaluate(expr) == f)) throw DomainError("internal: membership witness failed re-verification");
    r.witness = MembershipWitness{f, std::move(expr), d_};
    return r;
  }

 private:
  const Subalgebra& s_;
  std::size_t d_;
  std::unique_ptr<ProductSpace> space_;
  EchelonSpace<Monomial, LexGreater> echelon_;
};

/// f as a Q-combination of generator products within bound d.
inline MembershipResult subalgebra_member(const Polynomial& f, const Subalgebra& s, std::size_t d) {
  return MembershipOracle(s, d).member(f);
}

/// Images of the algebra generators under an ambient derivation operator.
template <DerivationOperator D>
std::vector<Polynomial> generator_images(const D& d, const Subalgebra& s) {
  std::vector<Polynomial> out;
  for (const auto& g : s.algebra_generators()) out.push_back(d.apply(g));
  return out;
}

struct RestrictionResult {
  bool restricted = false;
  std::vector<Polynomial> images;             // per algebra generator
  std::vector<MembershipWitness> witnesses;   // per algebra generator, when restricted
  std::optional<std::pair<Polynomial, Polynomial>> failure;  // (g, D(g))
};

/// Checks D(A) in A on generators: every D(g) must be a member at bound d
/// and base generators must be D-constants.
template <DerivationOperator D>
RestrictionResult restrict_derivation(const D& d, const Subalgebra& s, std::size_t bound) {
  RestrictionResult r;
  for (const auto& b : s.base_generators()) {
    Polynomial db = d.apply(b);
    if (!db.is_zero()) {
      r.failure = std::pair{b, db};
      return r;
    }
  }
  MembershipOracle oracle(s, bound);
  for (const auto& g : s.algebra_generators()) {
    Polynomial dg = d.apply(g);
    auto m = oracle.member(dg);
    if (!m.found()) {
      r.failure = std::pair{g, dg};
      r.images.clear();
      r.witnesses.clear();
      return r;
    }
    r.images.push_back(std::move(dg));
    r.witnesses.push_back(std::move(*m.witness));
  }
  r.restricted = true;
  return r;
}

struct SubalgebraFpfResult {
  /// a_i (formal expressions over the generators) with sum a_i * D(g_i) == 1.
  std::optional<std::vector<Polynomial>> cofactors;
  std::size_t bound = 0;
  /// Set when every image vanishes at the origin: then sum a_i D(g_i) does
  /// too, so no bound can succeed.
  bool origin_obstruction = false;
  bool found() const noexcept { return cofactors.has_value(); }
};

/// Bounded search for sum a_i D(g_i) = 1 with a_i in the degree-<=d span of S.
inline SubalgebraFpfResult subalgebra_fpf(const std::vector<Polynomial>& images, const Subalgebra& s,
                                          std::size_t d) {
  if (images.size() != s.algebra_generators().size())
    throw StructuralError("one image per algebra generator required");
  SubalgebraFpfResult r;
  r.bound = d;
  if (std::all_of(images.begin(), images.end(), [](const Polynomial& p) {
        return p.is_zero() || p.coefficient(Monomial(p.context().size())) == 0;
      })) {
    r.origin_obstruction = true;
    return r;
  }
  ProductSpace space(s, d);
  EchelonSpace<Monomial, LexGreater> ech;
  std::vector<std::pair<std::size_t, std::size_t>> labels;  // (generator, candidate)
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].is_zero()) continue;
    for (std::size_t c = 0; c < space.candidates().size(); ++c) {
      labels.emplace_back(i, c);
      ech.insert(to_vec(space.candidates()[c].value * images[i]), labels.size() - 1);
    }
  }
  const VarContext& ctx = s.context();
  Polynomial one = Polynomial::constant(ctx, Rational(1));
  auto comb = ech.express(to_vec(one));
  if (!comb) return r;
  std::vector<Polynomial> cof(images.size(), Polynomial(s.formal_context()));
  for (const auto& [label, c] : *comb) {
    auto [i, cand] = labels[label];
    cof[i] += space.formal_term(space.candidates()[cand], c);
  }
  Polynomial check(ctx);
  for (std::size_t i = 0; i < images.size(); ++i) check += s.evaluate(cof[i]) * images[i];
  if (!(check == one)) throw DomainError("internal: fpf cofactors failed re-verification");
  r.cofactors = std::move(cof);
  return r;
}

struct KernelBasis {
  std::vector<Polynomial> elements;     // canonical reduced echelon basis
  std::vector<Polynomial> expressions;  // formal expression of each element
  std::size_t bound = 0;
};

namespace detail {
// D-part ranks above value-part so that echelon rows led by the value block
// are exactly the kernel elements.
struct BlockKeyGreater {
  bool operator()(const std::pair<int, Monomial>& a, const std::pair<int, Monomial>& b) const {
    if (a.first != b.first) return a.first < b.first;
    return LexGreater{}(a.second, b.second);
  }
};
}  // namespace detail

/// Null space of D on the degree-<=d span of S, as a canonical basis.
inline KernelBasis kernel_up_to_degree(const std::vector<Polynomial>& images, const Subalgebra& s, std::size_t d) {
  if (images.size() != s.algebra_generators().size())
    throw StructuralError("one image per algebra generator required");
  const VarContext& ctx = s.context();
  ProductSpace space(s, d);
  using Key = std::pair<int, Monomial>;
  EchelonSpace<Key, detail::BlockKeyGreater> ech;
  const auto& cands = space.candidates();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    SparseVector<Key, detail::BlockKeyGreater> v;
    const Polynomial dc = space.derivative(cands[i], images);
    for (const auto& [m, c] : dc.terms()) v.emplace(Key{0, m}, c);
    for (const auto& [m, c] : cands[i].value.terms()) v.emplace(Key{1, m}, c);
    ech.insert(std::move(v), i);
  }
  // Kernel rows, then a canonical reduced basis of their span.
  std::vector<Combination> kernel_combs;
  EchelonSpace<Monomial, LexGreater> canon;
  for (const auto& row : ech.rows()) {
    if (row.vec.begin()->first.first != 1) continue;
    MonoVec v;
    for (const auto& [k, c] : row.vec) v.emplace(k.second, c);
    kernel_combs.push_back(row.comb);
    canon.insert(std::move(v), kernel_combs.size() - 1);
  }
  KernelBasis out;
  out.bound = d;
  for (const auto& row : canon.reduced_rows()) {
    Combination total;
    for (const auto& [k, c] : row.comb) axpy(total, c, kernel_combs[k]);
    Polynomial expr(s.formal_context());
    Polynomial dval(ctx);
    for (const auto& [label, c] : total) {
      expr += space.formal_term(cands[label], c);
      dval += c * space.derivative(cands[label], images);
    }
    Polynomial value = from_vec(ctx, row.vec);
    if (!(s.evaluate(expr) == value) || !dval.is_zero())
      throw DomainError("internal: kernel element failed re-verification");
    out.elements.push_back(std::move(value));
    out.expressions.push_back(std::move(expr));
  }
  return out;
}

}  // namespace lndkit
