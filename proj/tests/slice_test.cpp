#include <gtest/gtest.h>

#include <random>

#include "lndkit/slice.hpp"
#include "test_support.hpp"

namespace lndkit {
namespace {

using testing::P;
using testing::random_poly;

const VarContext kXY = VarContext::make({}, {"X", "Y"});
const VarContext kTXY = VarContext::make({"t"}, {"X", "Y"});
const VarContext kEx = VarContext::make({"X"}, {"V", "W"});

Derivation D(const VarContext& ctx, std::map<std::string, std::string> images) {
  std::map<std::string, Polynomial> m;
  for (const auto& [k, v] : images) m.emplace(k, P(ctx, v));
  return Derivation::from_map(ctx, m);
}

std::vector<Polynomial> polys(const VarContext& ctx, std::initializer_list<const char*> texts) {
  std::vector<Polynomial> out;
  for (auto t : texts) out.push_back(P(ctx, t));
  return out;
}

const Derivation kTilted = D(kTXY, {{"X", "t"}, {"Y", "1 - t*X"}});

TEST(Slice, FindSliceExamples) {
  auto r = find_slice(Derivation::partial(kXY, "Y"), Subalgebra::full(kXY), 1);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.slice, P(kXY, "Y"));

  r = find_slice(kTilted, Subalgebra::full(kTXY), 3);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.slice, P(kTXY, "Y + 1/2*X^2"));
  EXPECT_EQ(kTilted.apply(*r.slice), P(kTXY, "1"));

  r = find_slice(D(kXY, {{"X", "Y"}, {"Y", "0"}}), Subalgebra::full(kXY), 10);
  EXPECT_FALSE(r.found());
  EXPECT_EQ(r.bound, 10u);
}

TEST(Slice, DixmierExamples) {
  auto dy = Derivation::partial(kXY, "Y");
  Polynomial y = P(kXY, "Y");
  EXPECT_TRUE(dixmier(dy, y, y).is_zero());
  EXPECT_EQ(dixmier(dy, y, P(kXY, "X")), P(kXY, "X"));

  Polynomial s = P(kTXY, "Y + 1/2*X^2");
  EXPECT_EQ(dixmier(kTilted, s, P(kTXY, "X")), P(kTXY, "X") - P(kTXY, "t") * s);
  EXPECT_THROW(dixmier(D(kXY, {{"X", "Y"}, {"Y", "0"}}), P(kXY, "X"), P(kXY, "X")), DomainError);
}

TEST(Slice, KernelGeneratorsExamples) {
  auto ks = kernel_generators(Derivation::partial(kXY, "Y"), P(kXY, "Y"), Subalgebra::full(kXY));
  EXPECT_EQ(ks, polys(kXY, {"X"}));

  Polynomial s = P(kTXY, "Y + 1/2*X^2");
  ks = kernel_generators(kTilted, s, Subalgebra::full(kTXY));
  ASSERT_EQ(ks.size(), 2u);
  EXPECT_EQ(ks[0], P(kTXY, "X - t*Y - 1/2*t*X^2"));
  for (const auto& k : ks) EXPECT_TRUE(kTilted.apply(k).is_zero());
}

TEST(Slice, VerifySliceTheoremExamples) {
  auto r = verify_slice_theorem(Derivation::partial(kXY, "Y"), P(kXY, "Y"), Subalgebra::full(kXY), 2);
  ASSERT_TRUE(r.certified());
  const auto& c = *r.certificate;
  EXPECT_EQ(c.reexpression[0].expression, P(c.kernel_algebra.formal_context(), "g1"));
  EXPECT_EQ(c.reexpression[1].expression, P(c.kernel_algebra.formal_context(), "g2"));

  Polynomial s = P(kTXY, "Y + 1/2*X^2");
  auto full = Subalgebra::full(kTXY);
  r = verify_slice_theorem(kTilted, s, full, 4);
  ASSERT_TRUE(r.certified());
  const auto& t = *r.certificate;
  const auto& f = t.kernel_algebra.formal_context();
  // X = K + t s, with g1 = K, g2 = pi_s(Y), g3 = s.
  EXPECT_EQ(t.reexpression[0].expression, P(f, "g1 + r1*g3"));
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(t.kernel_algebra.evaluate(t.reexpression[i].expression), full.algebra_generators()[i]);
  // Y = s - 1/2 (K + t s)^2 holds as well.
  Polynomial K = P(kTXY, "X - t*Y - 1/2*t*X^2");
  Polynomial Kts = K + P(kTXY, "t") * s;
  EXPECT_EQ(s - Rational(1, 2) * Kts * Kts, P(kTXY, "Y"));

  EXPECT_THROW(verify_slice_theorem(D(kXY, {{"X", "Y"}, {"Y", "0"}}), P(kXY, "X"), Subalgebra::full(kXY), 2),
               DomainError);
}

TEST(Slice, RetractionExamples) {
  auto ctx = VarContext::make({}, {"W", "U"});
  auto id = lnd_from_retraction({Subalgebra::full(ctx), "W", {{"U", P(ctx, "U")}}});
  EXPECT_EQ(id.images, polys(ctx, {"1", "0"}));

  // B = Q[t][W, U1, U2], A = Q[t][W, U1 + U2^2], phi(U1) = U1 + U2^2, phi(U2) = 0.
  auto b = VarContext::make({"t"}, {"W", "U1", "U2"});
  Subalgebra a(b, polys(b, {"t"}), polys(b, {"W", "U1 + U2^2"}));
  auto r = lnd_from_retraction({a, "W", {{"U1", P(b, "U1 + U2^2")}, {"U2", P(b, "0")}}});
  EXPECT_EQ(r.images, polys(b, {"1", "0"}));
  EXPECT_TRUE(r.nilpotency.certified());
  EXPECT_TRUE(r.derivation.apply(P(b, "U1 + U2^2")).is_zero());

  EXPECT_THROW(lnd_from_retraction({a, "W", {{"U1", P(b, "U1 + W")}, {"U2", P(b, "0")}}}), StructuralError);
  EXPECT_THROW(lnd_from_retraction({a, "W", {{"U1", P(b, "U1")}, {"U2", P(b, "0")}}}), StructuralError);
}

TEST(Slice, RetractionFallingFactorials) {
  auto ctx = VarContext::make({}, {"W", "U1"});
  auto r = lnd_from_retraction({Subalgebra::full(ctx), "W", {{"U1", P(ctx, "U1")}}});
  EXPECT_EQ(r.derivation.apply(P(ctx, "U1*W^3")), P(ctx, "3*U1*W^2"));
  EXPECT_TRUE(iterate(r.derivation, P(ctx, "U1*W^3"), 4).is_zero());
  for (std::uint32_t m = 0; m <= 7; ++m) {
    Polynomial g = P(ctx, "U1") * P(ctx, "W").pow(m);
    for (std::uint32_t i = 1; i <= m; ++i) {
      Rational ff(1);
      for (std::uint32_t j = 0; j < i; ++j) ff *= Rational(static_cast<long>(m - j));
      ASSERT_EQ(iterate(r.derivation, g, i), ff * P(ctx, "U1") * P(ctx, "W").pow(m - i));
    }
    ASSERT_TRUE(iterate(r.derivation, g, m + 1).is_zero());
  }
}

Subalgebra example_53() {
  return Subalgebra(kEx, polys(kEx, {"X^2", "X^3"}),
                    polys(kEx, {"V", "W + X*V^2*W^2", "X^2*W", "X^3*W", "X^2*W^2", "X^2*V*W", "X^2*W^3",
                                "X^2*W^4", "X^2*V*W^3"}));
}

std::vector<CoordinateWitness> example_53_witnesses() {
  auto c = coordinate_context(kEx);
  return {{P(c, "V"), 0}, {P(c, "X^2*U0 + X*V^2*U0^2"), 2}, {P(c, "U0"), 0},
          {P(c, "X*U0"), 0}, {P(c, "U0^2"), 1}, {P(c, "V*U0"), 0},
          {P(c, "U0^3"), 2}, {P(c, "U0^4"), 3}, {P(c, "V*U0^3"), 2}};
}

TEST(Slice, ComplementaryExamples) {
  auto ctx = VarContext::make({"t"}, {"V", "U"});
  auto c = coordinate_context(ctx);
  auto full = Subalgebra::full(ctx);
  auto r = complementary_lnd(full, P(ctx, "V"), P(ctx, "U"), P(ctx, "t"), {{P(c, "V"), 0}, {P(c, "U0"), 0}}, 3, 2);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.alpha, 0u);
  EXPECT_EQ(r.images, polys(ctx, {"0", "1"}));

  // With U0 = t*U the witness U = U0/t needs alpha >= 1.
  std::vector<CoordinateWitness> w{{P(c, "V"), 0}, {P(c, "U0"), 1}};
  r = complementary_lnd(full, P(ctx, "V"), P(ctx, "t*U"), P(ctx, "t"), w, 0, 2);
  EXPECT_FALSE(r.found());
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].second, P(ctx, "U"));
  r = complementary_lnd(full, P(ctx, "V"), P(ctx, "t*U"), P(ctx, "t"), w, 1, 2);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.alpha, 1u);
  EXPECT_EQ(r.images, polys(ctx, {"0", "1"}));
}

TEST(Slice, ComplementaryExample53) {
  auto s = example_53();
  auto r = complementary_lnd(s, P(kEx, "V"), P(kEx, "X^2*W"), P(kEx, "X^2"), example_53_witnesses(), 4, 6);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.alpha, 2u);
  EXPECT_TRUE(r.images[0].is_zero());
  EXPECT_EQ(r.images[2], P(kEx, "X^4"));
  EXPECT_TRUE(r.nilpotency.certified());
  // The same images as the ambient derivation X^2 d/dW.
  Derivation amb = D(kEx, {{"V", "0"}, {"W", "X^2"}});
  EXPECT_EQ(r.images, generator_images(amb, s));
  auto fpf = subalgebra_fpf(r.images, s, 10);
  EXPECT_FALSE(fpf.found());
  EXPECT_TRUE(fpf.origin_obstruction);

  Subalgebra rv(kEx, s.base_generators(), polys(kEx, {"V"}));
  for (const auto& k : kernel_up_to_degree(r.images, s, 6).elements) EXPECT_TRUE(subalgebra_member(k, rv, 6).found()) << k;
}

TEST(Slice, TranscendenceExamples) {
  auto dy = Derivation::partial(kXY, "Y");
  EXPECT_TRUE(transcendence_check(dy, P(kXY, "Y"), Subalgebra::full(kXY), 5).no_relation());

  auto ctx = VarContext::make({"X"}, {"Y"});
  Subalgebra r(ctx, polys(ctx, {"X^2", "X^3"}), polys(ctx, {"Y"}));
  AnyDerivation sham([&](const Polynomial&) { return P(ctx, "1"); });
  auto rel = transcendence_check(sham, P(ctx, "X^2"), r, 1);
  ASSERT_FALSE(rel.no_relation());
  ASSERT_EQ(rel.formal.size(), 2u);
  EXPECT_EQ(rel.formal[0], P(r.formal_context(), "-r1"));
  EXPECT_EQ(rel.formal[1], P(r.formal_context(), "1"));

  EXPECT_TRUE(transcendence_check(kTilted, P(kTXY, "Y + 1/2*X^2"), Subalgebra::full(kTXY), 4).no_relation());
  EXPECT_THROW(transcendence_check(kTilted, P(kTXY, "X"), Subalgebra::full(kTXY), 2), PreconditionError);
}

TEST(Slice, ProportionalityExamples) {
  auto dy = Derivation::partial(kXY, "Y");
  auto full = Subalgebra::full(kXY);
  std::vector<std::pair<Polynomial, Polynomial>> w{{P(kXY, "1"), P(kXY, "Y")}};
  auto r = proportionality_check(dy.scaled(P(kXY, "3")), dy, w, full);
  ASSERT_TRUE(r.proportional());
  EXPECT_EQ(*r.factor, P(kXY, "3"));

  r = proportionality_check(Derivation::partial(kXY, "X"), dy, w, full);
  ASSERT_FALSE(r.proportional());
  EXPECT_EQ(*r.counterexample, P(kXY, "X"));

  std::vector<std::pair<Polynomial, Polynomial>> bad{{P(kXY, "2"), P(kXY, "Y")}};
  EXPECT_THROW(proportionality_check(dy, dy, bad, full), PreconditionError);
}

TEST(Slice, DixmierIsAHomomorphismIntoTheKernel) {
  std::mt19937_64 rng(61);
  std::vector<std::pair<Derivation, Polynomial>> cases{
      {kTilted, P(kTXY, "Y + 1/2*X^2")},
      {D(kTXY, {{"X", "1"}, {"Y", "-2*t*X"}}), P(kTXY, "X")},
      {D(kTXY, {{"X", "0"}, {"Y", "1"}}), P(kTXY, "Y")},
  };
  for (const auto& [d, s] : cases) {
    EXPECT_TRUE(dixmier(d, s, s).is_zero());
    for (int i = 0; i < 500; ++i) {
      Polynomial p = random_poly(rng, kTXY, 3, 3), q = random_poly(rng, kTXY, 3, 3);
      Polynomial pp = dixmier(d, s, p), pq = dixmier(d, s, q);
      ASSERT_EQ(dixmier(d, s, p * q), pp * pq);
      ASSERT_TRUE(d.apply(pp).is_zero());
    }
    auto full = Subalgebra::full(kTXY);
    for (const auto& k : kernel_up_to_degree(generator_images(d, full), full, 3).elements)
      EXPECT_EQ(dixmier(d, s, k), k);
  }
}

}  // namespace
}  // namespace lndkit
