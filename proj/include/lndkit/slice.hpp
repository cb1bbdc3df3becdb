#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lndkit/derivation.hpp"
#include "lndkit/gcd.hpp"
#include "lndkit/subalgebra.hpp"

namespace lndkit {

namespace detail {
inline Polynomial one(const VarContext& ctx) { return Polynomial::constant(ctx, Rational(1)); }

template <DerivationOperator D>
void require_slice(const D& d, const Polynomial& s) {
  if (!(Polynomial(d.apply(s)) == one(s.context())))
    throw DomainError("not a slice: D(" + s.to_string() + ") != 1");
}
}  // namespace detail

struct SliceResult {
  std::optional<Polynomial> slice;
  std::optional<MembershipWitness> witness;  // s over the generators of S
  std::size_t bound = 0;                     // bound searched (or the one that succeeded)
  bool found() const noexcept { return slice.has_value(); }
};

/// Solves D(s) = 1 over the degree-<=k span of S for k = 1..d. The answer is
/// the normal form of any solution modulo the kernel span at that bound, so
/// it is independent of elimination order and carries no kernel pivot terms.
template <DerivationOperator D>
SliceResult find_slice(const D& d, const Subalgebra& s, std::size_t bound) {
  SliceResult r;
  r.bound = bound;
  const VarContext& ctx = s.context();
  auto images = generator_images(d, s);
  for (std::size_t k = 1; k <= bound; ++k) {
    ProductSpace space(s, k);
    const auto& cands = space.candidates();
    EchelonSpace<Monomial, LexGreater> image_space;
    for (std::size_t i = 0; i < cands.size(); ++i) image_space.insert(to_vec(space.derivative(cands[i], images)), i);
    auto comb = image_space.express(to_vec(detail::one(ctx)));
    if (!comb) continue;
    Polynomial particular(ctx);
    for (const auto& [label, c] : *comb) particular += c * cands[label].value;

    auto kernel = kernel_up_to_degree(images, s, k);
    EchelonSpace<Monomial, LexGreater> kspace;
    for (std::size_t i = 0; i < kernel.elements.size(); ++i) kspace.insert(to_vec(kernel.elements[i]), i);
    Polynomial slice = from_vec(ctx, kspace.residue(to_vec(particular)));

    detail::require_slice(d, slice);
    auto w = subalgebra_member(slice, s, k);
    if (!w.found()) throw DomainError("internal: slice left the span it was solved in");
    r.slice = std::move(slice);
    r.witness = std::move(w.witness);
    r.bound = k;
    return r;
  }
  return r;
}

/// Dixmier map pi_s(a) = sum_i (1/i!) (-s)^i D^i(a).
template <DerivationOperator D>
Polynomial dixmier(const D& d, const Polynomial& s, const Polynomial& a,
                   std::size_t bound = kDefaultNilpotencyBound) {
  detail::require_slice(d, s);
  const VarContext& ctx = s.context();
  Polynomial result(ctx);
  Polynomial di = a;
  Polynomial neg_s_pow = detail::one(ctx);
  Rational inv_fact(1);
  for (std::size_t i = 0; !di.is_zero(); ++i) {
    if (i > bound) throw DomainError("D is not nilpotent on " + a.to_string() + " within " + std::to_string(bound));
    if (i > 0) {
      inv_fact /= Rational(static_cast<long>(i));
      neg_s_pow *= -s;
    }
    result += inv_fact * neg_s_pow * di;
    di = d.apply(di);
  }
  return result;
}

/// pi_s of every algebra generator of S, zeros dropped, duplicates removed.
template <DerivationOperator D>
std::vector<Polynomial> kernel_generators(const D& d, const Polynomial& s, const Subalgebra& sub) {
  std::vector<Polynomial> out;
  for (const auto& g : sub.algebra_generators()) {
    Polynomial k = dixmier(d, s, g);
    if (k.is_zero() || std::find(out.begin(), out.end(), k) != out.end()) continue;
    out.push_back(std::move(k));
  }
  return out;
}

struct SliceCertificate {
  Polynomial slice;
  std::vector<Polynomial> kernel_generators;
  /// Ker(D)[s] as R[k1, ..., km, s]: formal symbols g1..gm are the kernel
  /// generators and g(m+1) is the slice.
  Subalgebra kernel_algebra;
  /// Per algebra generator of S.
  std::vector<MembershipWitness> reexpression;
};

struct SliceTheoremResult {
  std::optional<SliceCertificate> certificate;
  std::vector<Polynomial> missing;
  std::size_t bound = 0;
  bool certified() const noexcept { return certificate.has_value(); }
};

/// Re-expresses every algebra generator of S in R[kernel generators, s].
template <DerivationOperator D>
SliceTheoremResult verify_slice_theorem(const D& d, const Polynomial& s, const Subalgebra& sub, std::size_t bound) {
  detail::require_slice(d, s);
  SliceTheoremResult r;
  r.bound = bound;
  auto ks = kernel_generators(d, s, sub);
  for (const auto& k : ks)
    if (!Polynomial(d.apply(k)).is_zero()) throw DomainError("internal: kernel generator not annihilated");
  std::vector<Polynomial> gens = ks;
  gens.push_back(s);
  Subalgebra kernel_algebra(sub.context(), sub.base_generators(), gens, sub.measure());
  MembershipOracle oracle(kernel_algebra, bound);
  std::vector<MembershipWitness> witnesses;
  for (const auto& g : sub.algebra_generators()) {
    auto m = oracle.member(g);
    if (m.found())
      witnesses.push_back(std::move(*m.witness));
    else
      r.missing.push_back(g);
  }
  if (r.missing.empty())
    r.certificate = SliceCertificate{s, std::move(ks), std::move(kernel_algebra), std::move(witnesses)};
  return r;
}

/// B = R[W, U1, ..., Un] (the context's main variables) with a retraction
/// phi: B -> A onto the subalgebra S, phi(W) = W.
struct RetractionSpec {
  Subalgebra target;
  std::string w;
  std::map<std::string, Polynomial> phi;  // U_i -> phi(U_i)
  std::size_t bound = 6;                  // membership bound for phi(U_i) in S
};

/// D = phi o d/dW, as an operator on the ambient ring (a derivation on A).
class RetractionDerivation {
 public:
  RetractionDerivation(const VarContext& ctx, std::size_t w, std::vector<Polynomial> phi_images)
      : ctx_(ctx), w_(w), phi_(std::move(phi_images)) {}

  Polynomial phi(const Polynomial& p) const { return p.is_zero() ? Polynomial(ctx_) : evaluate(p, phi_, ctx_); }
  Polynomial apply(const Polynomial& p) const { return phi(partial_derivative(p, w_)); }

 private:
  VarContext ctx_;
  std::size_t w_;
  std::vector<Polynomial> phi_;  // per variable of the context
};

struct RetractionLnd {
  RetractionDerivation derivation;
  std::vector<Polynomial> images;  // per algebra generator of the target
  NilpotencyVerdict nilpotency;
};

inline RetractionLnd lnd_from_retraction(const RetractionSpec& spec) {
  const Subalgebra& s = spec.target;
  const VarContext& ctx = s.context();
  std::size_t w = ctx.require(spec.w);
  if (!ctx.is_main(w)) throw StructuralError("W must be a main variable");
  std::vector<Polynomial> phi;
  for (std::size_t i = 0; i < ctx.size(); ++i) phi.push_back(Polynomial::variable(ctx, i));
  std::vector<Polynomial> phi_u;
  for (const auto& [name, img] : spec.phi) {
    std::size_t u = ctx.require(name);
    if (!ctx.is_main(u) || u == w) throw StructuralError("retraction image given for " + name + ", which is not some U_i");
    if (!img.is_zero() && !(img.context() == ctx)) throw StructuralError("retraction image in foreign context");
    if (!partial_derivative(img, w).is_zero())
      throw StructuralError("d/dW of phi(" + name + ") is nonzero");
    phi[u] = img;
    phi_u.push_back(img);
  }
  for (std::size_t i = 0; i < ctx.num_main(); ++i)
    if (i != w && !spec.phi.contains(ctx.name(i)))
      throw StructuralError("retraction has no image for " + ctx.name(i));
  RetractionDerivation d(ctx, w, phi);
  for (const auto& g : s.algebra_generators())
    if (!(d.phi(g) == g)) throw StructuralError("retraction does not fix generator " + g.to_string());
  MembershipOracle oracle(s, spec.bound);
  for (const auto& img : phi_u)
    if (!oracle.member(img).found())
      throw StructuralError("phi(U) = " + img.to_string() + " not found in the target algebra");

  Polynomial wp = Polynomial::variable(ctx, w);
  if (!(d.apply(wp) == detail::one(ctx))) throw DomainError("D(W) != 1");
  for (const auto& img : phi_u)
    if (!d.apply(img).is_zero()) throw DomainError("D(phi(U)) != 0");

  // D^i = phi o d^i/dW^i on A, so W-degree + 1 iterations suffice.
  std::size_t bound = 1;
  for (const auto& g : s.algebra_generators()) bound = std::max<std::size_t>(bound, g.degree_in(w).value_or(0) + 1);
  auto verdict = nilpotency_verdict_on(d, s.algebra_generators(), bound);
  if (!verdict.certified()) throw DomainError("retraction derivation failed the nilpotency post-check");
  auto images = generator_images(d, s);
  return RetractionLnd{std::move(d), std::move(images), std::move(verdict)};
}

/// g = N(V, U0) / t^k with N over the coordinate context (coefficient
/// variables of the ambient ring, main variables V and U0).
struct CoordinateWitness {
  Polynomial numerator;
  std::uint32_t t_power = 0;
};

inline VarContext coordinate_context(const VarContext& ambient) {
  return VarContext::make(ambient.coeff_vars(), {"V", "U0"});
}

struct ComplementaryResult {
  std::optional<std::uint32_t> alpha;
  std::vector<Polynomial> images;  // per algebra generator
  NilpotencyVerdict nilpotency;
  /// Failing generator at each rejected alpha.
  std::vector<std::pair<std::uint32_t, Polynomial>> trace;
  bool found() const noexcept { return alpha.has_value(); }
};

/// D(g) = t^alpha * dN_g/dU0 / t^k_g for the least admissible alpha.
inline ComplementaryResult complementary_lnd(const Subalgebra& s, const Polynomial& v, const Polynomial& u0,
                                             const Polynomial& t, const std::vector<CoordinateWitness>& witnesses,
                                             std::uint32_t alpha_cap, std::size_t bound) {
  const VarContext& ctx = s.context();
  if (witnesses.size() != s.algebra_generators().size())
    throw StructuralError("one coordinate witness per algebra generator required");
  if (t.is_zero() || !t.only_involves([&](std::size_t i) { return !ctx.is_main(i); }))
    throw PreconditionError("t must be a nonzero base element");
  VarContext coord = coordinate_context(ctx);
  std::vector<Polynomial> images;
  for (const auto& c : ctx.coeff_vars()) images.push_back(Polynomial::variable(ctx, c));
  // coordinate context order: V, U0, then coefficient variables
  images.insert(images.begin(), {v, u0});
  auto to_ambient = [&](const Polynomial& p) { return p.is_zero() ? Polynomial(ctx) : evaluate(p, images, ctx); };

  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    const auto& w = witnesses[i];
    if (!w.numerator.is_zero() && !(w.numerator.context() == coord))
      throw StructuralError("coordinate witness must live in the (coefficients; V, U0) context");
    if (!(to_ambient(w.numerator) == s.algebra_generators()[i] * t.pow(w.t_power)))
      throw PreconditionError("coordinate witness does not evaluate to " + s.algebra_generators()[i].to_string());
  }

  ComplementaryResult r;
  MembershipOracle oracle(s, bound);
  const std::size_t u0_index = 1;
  for (std::uint32_t alpha = 0; alpha <= alpha_cap; ++alpha) {
    std::vector<Polynomial> out;
    std::optional<Polynomial> failed;
    for (std::size_t i = 0; i < witnesses.size() && !failed; ++i) {
      Polynomial num = to_ambient(partial_derivative(witnesses[i].numerator, u0_index)) * t.pow(alpha);
      auto q = divide_exact(num, t.pow(witnesses[i].t_power));
      if (!q || !oracle.member(*q).found())
        failed = s.algebra_generators()[i];
      else
        out.push_back(std::move(*q));
    }
    if (failed) {
      r.trace.emplace_back(alpha, *failed);
      continue;
    }
    r.alpha = alpha;
    r.images = std::move(out);
    break;
  }
  if (!r.alpha) return r;

  // In coordinates D = t^alpha d/dU0, so D^n(g) vanishes once n exceeds deg_U0 N_g.
  r.nilpotency.bound = 0;
  r.nilpotency.status = NilpotencyVerdict::Status::certified_lnd;
  for (const auto& w : witnesses) {
    std::size_t n = w.numerator.degree_in(u0_index).value_or(0) + (w.numerator.is_zero() ? 0 : 1);
    Polynomial p = w.numerator;
    for (std::size_t k = 0; k < n; ++k) p = partial_derivative(p, u0_index);
    if (!p.is_zero()) r.nilpotency.status = NilpotencyVerdict::Status::inconclusive;
    r.nilpotency.indices.push_back(n);
    r.nilpotency.bound = std::max(r.nilpotency.bound, n);
  }
  return r;
}

/// Images of the complementary derivation, extended to all of S by Leibniz
/// through membership witnesses.
class SubalgebraDerivation {
 public:
  SubalgebraDerivation(const Subalgebra& s, std::vector<Polynomial> images, std::size_t bound)
      : s_(&s), images_(std::move(images)), bound_(bound) {}

  /// Only defined on elements of S found at the bound.
  Polynomial apply(const Polynomial& p) const {
    if (p.is_zero()) return Polynomial(s_->context());
    auto m = subalgebra_member(p, *s_, bound_);
    if (!m.found()) throw DomainError(p.to_string() + " not found in the subalgebra at bound " + std::to_string(bound_));
    const Polynomial& e = m.witness->expression;
    Polynomial out(s_->context());
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i].is_zero()) continue;
      out += s_->evaluate(partial_derivative(e, i)) * images_[i];
    }
    return out;
  }

 private:
  const Subalgebra* s_;
  std::vector<Polynomial> images_;
  std::size_t bound_;
};

struct TranscendenceResult {
  /// a_0..a_j (values in the base) with sum a_i x^i == 0, if one was found.
  std::optional<std::vector<Polynomial>> relation;
  /// The same coefficients over the base symbols.
  std::vector<Polynomial> formal;
  std::size_t bound = 0;
  bool no_relation() const noexcept { return !relation.has_value(); }
};

/// Searches a_0 + a_1 x + ... + a_n x^n = 0 with a_i in the degree-<=n base span.
template <DerivationOperator D>
TranscendenceResult transcendence_check(const D& d, const Polynomial& x, const Subalgebra& s, std::size_t n) {
  Polynomial dx = d.apply(x);
  if (!dx.is_constant() || dx.is_zero()) throw PreconditionError("D(x) is not a unit");
  const VarContext& ctx = s.context();
  TranscendenceResult r;
  r.bound = n;
  Subalgebra base(ctx, s.base_generators(), {}, s.measure());
  ProductSpace space(base, n);
  // independent basis of the base span first
  std::vector<std::size_t> basis;
  {
    EchelonSpace<Monomial, LexGreater> e;
    for (std::size_t i = 0; i < space.candidates().size(); ++i)
      if (e.insert(to_vec(space.candidates()[i].value), i).independent) basis.push_back(i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> labels;  // (power, basis candidate)
  EchelonSpace<Monomial, LexGreater> e;
  Polynomial xp = detail::one(ctx);
  for (std::size_t i = 0; i <= n; ++i, xp *= x) {
    for (std::size_t b : basis) {
      labels.emplace_back(i, b);
      auto ins = e.insert(to_vec(space.candidates()[b].value * xp), labels.size() - 1);
      if (ins.independent) continue;
      std::vector<Polynomial> vals(i + 1, Polynomial(ctx));
      std::vector<Polynomial> formal(i + 1, Polynomial(s.formal_context()));
      for (const auto& [label, c] : ins.relation) {
        auto [pw, cand] = labels[label];
        vals[pw] += c * space.candidates()[cand].value;
        Monomial m(s.formal_context().size());
        const auto& fm = space.candidates()[cand].formal;
        for (std::size_t k = 0; k < fm.size(); ++k) m[s.algebra_generators().size() + k] = fm[k];
        formal[pw] += Polynomial::term(s.formal_context(), m, c);
      }
      Polynomial check(ctx), xq = detail::one(ctx);
      for (std::size_t k = 0; k <= i; ++k, xq *= x) check += vals[k] * xq;
      if (!check.is_zero()) throw DomainError("internal: relation failed re-verification");
      r.relation = std::move(vals);
      r.formal = std::move(formal);
      return r;
    }
  }
  return r;
}

struct ProportionalityResult {
  std::optional<Polynomial> factor;
  std::optional<Polynomial> counterexample;
  bool proportional() const noexcept { return factor.has_value(); }
};

/// With sum a_i D(u_i) = 1, c := sum a_i D1(u_i) and D1 = c D is checked on generators.
template <DerivationOperator D1, DerivationOperator D>
ProportionalityResult proportionality_check(const D1& d1, const D& d,
                                            const std::vector<std::pair<Polynomial, Polynomial>>& fpf_witness,
                                            const Subalgebra& s) {
  const VarContext& ctx = s.context();
  Polynomial sum(ctx), c(ctx);
  for (const auto& [a, u] : fpf_witness) {
    sum += a * Polynomial(d.apply(u));
    c += a * Polynomial(d1.apply(u));
  }
  if (!(sum == detail::one(ctx))) throw PreconditionError("fixed-point-free witness does not sum to 1");
  ProportionalityResult r;
  for (const auto& g : s.algebra_generators()) {
    if (!(Polynomial(d1.apply(g)) == c * Polynomial(d.apply(g)))) {
      r.counterexample = g;
      return r;
    }
  }
  r.factor = c;
  return r;
}

}  // namespace lndkit
