#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lndkit/derivation.hpp"

namespace lndkit::harness {

/// Draws from a seeded 64-bit Mersenne twister with plain modular reduction,
/// so sequences do not depend on the standard library's distributions.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  Rational nonzero_rational() {
    long num = range(1, 4) * (below(2) ? -1 : 1);
    return make_rational(num, range(1, 3));
  }

 private:
  std::mt19937_64 rng_;
};

/// Seed of the i-th member of a seeded family (splitmix64 finalizer).
inline std::uint64_t member_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + i + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct RandomProfile {
  std::size_t coeff_vars = 1;  // 1 or 2: t (and u)
  unsigned degree = 3;         // image degree bound
  bool fpf = true;
};

inline VarContext random_context(const RandomProfile& p) {
  if (p.coeff_vars < 1 || p.coeff_vars > 2) throw PreconditionError("random profile allows 1 or 2 coefficient variables");
  return VarContext::make(p.coeff_vars == 1 ? std::vector<std::string>{"t"} : std::vector<std::string>{"t", "u"},
                          {"X", "Y"});
}

/// Random polynomial in the given variables with total degree <= deg and 1..max_terms terms.
inline Polynomial random_poly(Draw& r, const VarContext& ctx, const std::vector<std::size_t>& vars, unsigned deg,
                              unsigned max_terms) {
  Polynomial p(ctx);
  auto n = r.range(1, max_terms);
  for (long k = 0; k < n; ++k) {
    Monomial m(ctx.size());
    auto d = r.below(deg + 1);
    for (std::uint64_t e = 0; e < d; ++e) m[vars[r.below(vars.size())]] += 1;
    p.add_term(m, r.nonzero_rational());
  }
  return p;
}

struct RandomLnd {
  Derivation derivation;
  std::string construction;
};

/// Triangular derivation on two main variables, fixed point free when asked:
///   D(X) = c,    D(Y) = q(R, X)             (c a nonzero rational), or
///   D(X) = p(R), D(Y) = 1 + p*q(R, X)       (cofactors -q and 1).
/// The non-fpf shape is D(X) = 0, D(Y) = X*b(R, X), whose images lie in (X).
inline RandomLnd random_triangular_lnd(std::uint64_t seed, const RandomProfile& profile) {
  if (profile.degree < 1 || profile.degree > 3) throw PreconditionError("random profile image degree must be 1..3");
  VarContext ctx = random_context(profile);
  Draw r(seed);
  std::vector<std::size_t> coeff, coeff_x{0};
  for (std::size_t i = 0; i < profile.coeff_vars; ++i) coeff.push_back(2 + i);
  coeff_x.insert(coeff_x.end(), coeff.begin(), coeff.end());
  for (int attempt = 0;; ++attempt) {
    RandomLnd out;
    if (!profile.fpf) {
      Polynomial b = random_poly(r, ctx, coeff_x, profile.degree - 1, 3);
      if (b.is_zero()) continue;
      out = {Derivation(ctx, {Polynomial(ctx), Polynomial::variable(ctx, 0) * b}), "X*b"};
      if (is_fixed_point_free(out.derivation).fixed_point_free())
        throw DomainError("internal: non-fpf construction produced a unit");
      return out;
    }
    if (profile.degree == 1 || r.below(2) == 0) {
      Polynomial c = Polynomial::constant(ctx, r.nonzero_rational());
      out = {Derivation(ctx, {c, random_poly(r, ctx, coeff_x, profile.degree, 3)}), "constant"};
    } else {
      Polynomial p = random_poly(r, ctx, coeff, 1 + static_cast<unsigned>(r.below(profile.degree - 1)), 2);
      if (p.is_constant()) continue;
      unsigned room = profile.degree - static_cast<unsigned>(p.total_degree().value_or(0));
      Polynomial q = random_poly(r, ctx, coeff_x, room, 3);
      out = {Derivation(ctx, {p, Polynomial::constant(ctx, Rational(1)) + p * q}), "unit-combination"};
    }
    if (is_fixed_point_free(out.derivation).fixed_point_free()) return out;
    if (attempt > 100) throw DomainError("internal: could not build a fixed point free derivation");
  }
}

/// Job text of the i-th member of a family.
inline std::string family_member_job(const std::string& family_id, const std::string& kind, std::uint64_t seed,
                                     std::size_t i) {
  std::uint64_t s = member_seed(seed, i);
  std::ostringstream o;
  o << "id: " << family_id << "-" << (i + 1) << "\n";
  o << "tags: " << kind << "\n";
  if (kind == "triangular-fpf" || kind == "triangular-nonfpf") {
    bool fpf = kind == "triangular-fpf";
    auto lnd = random_triangular_lnd(s, {1, 3, fpf});
    const auto& d = lnd.derivation;
    o << "doc: seed " << s << ", " << lnd.construction << "\n";
    o << "ring.coeff: t\nring.main: X, Y\nbase: full\nalgebra: full\n";
    o << "derivation D: X -> " << d.images()[0] << ", Y -> " << d.images()[1] << "\n";
    o << "task nil nilpotency: derivation = D\n";
    o << "task fpf fixed_point_free: derivation = D\n";
    o << "expect nil: verdict = certified_lnd; provenance = TRIVIAL: triangular derivations are locally nilpotent\n";
    if (fpf) {
      o << "task slice find_slice: derivation = D; bound = 8; as = s\n";
      o << "task cert verify_slice_theorem: derivation = D; slice = $s\n";
      o << "expect fpf: verdict = yes; provenance = TRIVIAL: unit in the image ideal by construction\n";
      o << "expect slice: verdict = slice; provenance = PAPER: Theorem A, fixed point free LNDs have a slice\n";
      o << "expect cert: verdict = certificate; provenance = PAPER: slice theorem, A = Ker(D)[s]\n";
    } else {
      o << "task slice find_slice: derivation = D; bound = 6\n";
      o << "expect fpf: verdict = no; provenance = DERIVED: all images lie in (X), Groebner check\n";
      o << "expect slice: verdict = none_up_to_bound; provenance = TRIVIAL: image ideal is proper\n";
    }
  } else if (kind == "a1-proportional") {
    // A = R[aT, bT] with R = Q[a] and b = c0 + c1*a comaximal with a.
    Draw r(s);
    Rational c0 = r.nonzero_rational(), c1 = r.nonzero_rational();
    VarContext ctx = VarContext::make({"a"}, {"T"});
    std::vector<std::size_t> avar{1};
    Polynomial b = Polynomial::constant(ctx, c0) + c1 * Polynomial::variable(ctx, "a");
    Polynomial c = random_poly(r, ctx, avar, 2, 2);
    if (c.is_zero()) c = Polynomial::constant(ctx, Rational(2));
    Polynomial T = Polynomial::variable(ctx, "T");
    o << "doc: seed " << s << "; A = R[aT, bT] with (a, b) the unit ideal of R = Q[a]\n";
    o << "ring.coeff: a\nring.main: T\nbase: a\n";
    o << "algebra: " << (Polynomial::variable(ctx, "a") * T) << ", " << (b * T) << "\n";
    o << "derivation D: T -> 1\n";
    o << "derivation D1: T -> " << c << "\n";
    o << "task fpf subalgebra_fpf: derivation = D; bound = 2\n";
    o << "task prop proportionality: derivation1 = D1; derivation = D; witness = auto\n";
    o << "expect fpf: verdict = yes; provenance = DERIVED: alpha*a + beta*b = 1 with constant alpha, beta\n";
    o << "expect prop: verdict = proportional; values = " << c
      << "; provenance = PAPER: Prop 3.3, D1 = (sum a_i D1(u_i)) D\n";
  } else {
    throw PreconditionError("unknown family " + kind);
  }
  return o.str();
}

}  // namespace lndkit::harness
