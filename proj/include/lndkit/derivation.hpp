#pragma once

#include <algorithm>
#include <concepts>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lndkit/gcd.hpp"
#include "lndkit/groebner.hpp"
#include "lndkit/polynomial.hpp"

namespace lndkit {

/// Anything that acts as a derivation on (a subalgebra of) its ambient ring.
template <class D>
concept DerivationOperator = requires(const D& d, const Polynomial& p) {
  { d.apply(p) } -> std::convertible_to<Polynomial>;
};

/// An R-derivation of the full polynomial ring of a context, where R is
/// generated by the coefficient variables. Determined by the images of the
/// main variables; coefficient variables are killed.
class Derivation {
 public:
  Derivation() = default;

  Derivation(VarContext ctx, std::vector<Polynomial> images) : ctx_(std::move(ctx)), images_(std::move(images)) {
    if (images_.size() != ctx_.num_main())
      throw StructuralError("derivation needs exactly one image per main variable");
    for (auto& img : images_) {
      if (img.is_zero()) {
        img = Polynomial(ctx_);
      } else if (!(img.context() == ctx_)) {
        throw StructuralError("derivation image lives in a foreign context");
      }
    }
  }

  /// Images keyed by main-variable name; every main variable exactly once.
  static Derivation from_map(const VarContext& ctx, const std::map<std::string, Polynomial>& images) {
    std::vector<Polynomial> v(ctx.num_main(), Polynomial(ctx));
    std::vector<bool> seen(ctx.num_main(), false);
    for (const auto& [name, img] : images) {
      auto idx = ctx.index_of(name);
      if (!idx) throw StructuralError("unknown variable " + name);
      if (!ctx.is_main(*idx)) throw StructuralError("derivation image given for coefficient variable " + name);
      seen[*idx] = true;
      v[*idx] = img;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) throw StructuralError("derivation has no image for main variable " + ctx.name(i));
    return Derivation(ctx, std::move(v));
  }

  /// The partial derivative with respect to one main variable.
  static Derivation partial(const VarContext& ctx, std::string_view var) {
    std::vector<Polynomial> v(ctx.num_main(), Polynomial(ctx));
    std::size_t i = ctx.require(var);
    if (!ctx.is_main(i)) throw StructuralError("partial derivation along a coefficient variable");
    v[i] = Polynomial::constant(ctx, Rational(1));
    return Derivation(ctx, std::move(v));
  }

  const VarContext& context() const noexcept { return ctx_; }
  const std::vector<Polynomial>& images() const noexcept { return images_; }
  const Polynomial& image(std::size_t main_index) const { return images_.at(main_index); }

  bool is_zero() const {
    return std::all_of(images_.begin(), images_.end(), [](const auto& p) { return p.is_zero(); });
  }

  /// Leibniz extension: D(p) = sum over main x of dp/dx * D(x).
  Polynomial apply(const Polynomial& p) const {
    if (!p.is_zero()) p.check_same(Polynomial(ctx_));
    Polynomial out(ctx_);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i].is_zero() || !p.involves(i)) continue;
      out += partial_derivative(p, i) * images_[i];
    }
    return out;
  }

  Derivation scaled(const Polynomial& c) const {
    std::vector<Polynomial> v;
    for (const auto& img : images_) v.push_back(img * c);
    return Derivation(ctx_, std::move(v));
  }

  /// Job-file text form, e.g. "X: t, Y: -t*X + 1".
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (i) s += ", ";
      s += ctx_.name(i) + ": " + images_[i].to_string();
    }
    return s;
  }

 private:
  VarContext ctx_;
  std::vector<Polynomial> images_;
};

/// Type-erased derivation operator (restrictions, retraction-induced
/// derivations, test doubles).
class AnyDerivation {
 public:
  AnyDerivation() = default;
  template <DerivationOperator D>
    requires(!std::same_as<std::remove_cvref_t<D>, AnyDerivation>)
  AnyDerivation(D d) : fn_([d = std::move(d)](const Polynomial& p) { return Polynomial(d.apply(p)); }) {}

  explicit AnyDerivation(std::function<Polynomial(const Polynomial&)> fn) : fn_(std::move(fn)) {}

  Polynomial apply(const Polynomial& p) const { return fn_(p); }

 private:
  std::function<Polynomial(const Polynomial&)> fn_;
};

template <DerivationOperator D>
Polynomial iterate(const D& d, Polynomial p, std::size_t n) {
  for (std::size_t k = 0; k < n && !p.is_zero(); ++k) p = d.apply(p);
  return p;
}

/// Smallest n <= bound with D^n(p) == 0.
template <DerivationOperator D>
std::optional<std::size_t> nilpotency_index(const D& d, Polynomial p, std::size_t bound) {
  for (std::size_t n = 0; n <= bound; ++n) {
    if (p.is_zero()) return n;
    if (n < bound) p = d.apply(p);
  }
  return std::nullopt;
}

struct NilpotencyVerdict {
  enum class Status { certified_lnd, inconclusive };
  Status status = Status::inconclusive;
  /// Per checked generator: the least n with D^n(g) == 0 (empty when the bound ran out).
  std::vector<std::optional<std::size_t>> indices;
  std::size_t bound = 0;

  bool certified() const noexcept { return status == Status::certified_lnd; }
};

/// Certifies local nilpotency on a generating set: the LND locus is a
/// subalgebra, so it suffices that each generator is killed by some iterate.
template <DerivationOperator D>
NilpotencyVerdict nilpotency_verdict_on(const D& d, const std::vector<Polynomial>& generators,
                                        std::size_t bound) {
  if (bound < 1) throw PreconditionError("nilpotency bound must be at least 1");
  NilpotencyVerdict v;
  v.bound = bound;
  bool all = true;
  for (const auto& g : generators) {
    auto idx = nilpotency_index(d, g, bound);
    all = all && idx.has_value();
    v.indices.push_back(idx);
  }
  v.status = all ? NilpotencyVerdict::Status::certified_lnd : NilpotencyVerdict::Status::inconclusive;
  return v;
}

inline constexpr std::size_t kDefaultNilpotencyBound = 64;

/// Nilpotency on the main variables of the full ring.
inline NilpotencyVerdict nilpotency_verdict(const Derivation& d, std::size_t bound = kDefaultNilpotencyBound) {
  std::vector<Polynomial> vars;
  for (std::size_t i = 0; i < d.context().num_main(); ++i) vars.push_back(Polynomial::variable(d.context(), i));
  return nilpotency_verdict_on(d, vars, bound);
}

inline constexpr std::size_t kMaxTriangularVars = 8;

/// An ordering x1 < ... < xn of main variables (as indices) with D(xi)
/// involving only coefficient variables and x1..x(i-1), if one exists.
/// Orderings are tried in lexicographic order of index permutations.
inline std::optional<std::vector<std::size_t>> is_triangular(const Derivation& d) {
  const std::size_t n = d.context().num_main();
  if (n > kMaxTriangularVars)
    throw UnsupportedSizeError("triangularity search supports at most 8 main variables");
  // deps[i][j]: D(x_i) involves x_j.
  std::vector<std::vector<bool>> deps(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) deps[i][j] = d.image(i).involves(j);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    bool ok = true;
    for (std::size_t pos = 0; pos < n && ok; ++pos)
      for (std::size_t later = pos; later < n && ok; ++later) ok = !deps[perm[pos]][perm[later]];
    if (ok) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

/// Sum over main variables of d(D(x))/dx.
inline Polynomial divergence(const Derivation& d) {
  Polynomial out(d.context());
  for (std::size_t i = 0; i < d.context().num_main(); ++i) out += partial_derivative(d.image(i), i);
  return out;
}

struct IrreducibilityVerdict {
  bool irreducible = false;
  Polynomial common_divisor;  // lex-monic gcd of the images
};

/// D is irreducible on the full ring iff the gcd of its images is a unit.
inline IrreducibilityVerdict is_irreducible(const Derivation& d) {
  if (d.is_zero()) throw DomainError("irreducibility of the zero derivation");
  Polynomial g(d.context());
  for (const auto& img : d.images()) {
    if (img.is_zero()) continue;
    g = g.is_zero() ? lex_monic(img) : gcd(g, img);
  }
  return {g.is_constant(), g};
}

struct FixedPointFreeVerdict {
  /// a_x per main variable with sum a_x * D(x) == 1; empty for No.
  std::optional<std::vector<Polynomial>> cofactors;
  bool fixed_point_free() const noexcept { return cofactors.has_value(); }
};

/// D(A)A == A on the full ring, decided by Groebner unit membership in the
/// ideal of the images.
inline FixedPointFreeVerdict is_fixed_point_free(const Derivation& d) {
  const VarContext& ctx = d.context();
  std::vector<std::size_t> nonzero;
  std::vector<Polynomial> gens;
  for (std::size_t i = 0; i < d.images().size(); ++i) {
    if (d.image(i).is_zero()) continue;
    nonzero.push_back(i);
    gens.push_back(d.image(i));
  }
  if (gens.empty()) return {};
  Polynomial one = Polynomial::constant(ctx, Rational(1));
  IdealMembership m = ideal_member(one, gens);
  if (!m.member()) return {};
  std::vector<Polynomial> cof(ctx.num_main(), Polynomial(ctx));
  for (std::size_t k = 0; k < nonzero.size(); ++k) cof[nonzero[k]] = (*m.cofactors)[k];
  Polynomial check(ctx);
  for (std::size_t i = 0; i < cof.size(); ++i) check += cof[i] * d.image(i);
  if (!(check == one)) throw DomainError("internal: fixed-point-free cofactors failed re-verification");
  return {std::move(cof)};
}

}  // namespace lndkit
