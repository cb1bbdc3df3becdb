#include <gtest/gtest.h>

#include <random>

#include "lndkit/derivation.hpp"
#include "test_support.hpp"

namespace lndkit {
namespace {

using testing::P;
using testing::random_poly;

const VarContext kXY = VarContext::make({}, {"X", "Y"});
const VarContext kTXY = VarContext::make({"t"}, {"X", "Y"});
const VarContext kXYZ = VarContext::make({}, {"X", "Y", "Z"});

Derivation D(const VarContext& ctx, std::map<std::string, std::string> images) {
  std::map<std::string, Polynomial> m;
  for (const auto& [k, v] : images) m.emplace(k, P(ctx, v));
  return Derivation::from_map(ctx, m);
}

TEST(Derivation, ApplyExamples) {
  EXPECT_EQ(Derivation::partial(kXY, "Y").apply(P(kXY, "X*Y")), P(kXY, "X"));
  Derivation d = D(kTXY, {{"X", "t"}, {"Y", "1 - t*X"}});
  // d(1/2 X^2) = X * t, so Y + 1/2 X^2 is mapped to 1 - tX + tX = 1.
  EXPECT_EQ(d.apply(P(kTXY, "Y + 1/2*X^2")), P(kTXY, "1"));
  // With the extra t: d(1/2 t X^2) = t X * t = t^2 X.
  EXPECT_EQ(d.apply(P(kTXY, "Y + 1/2*t*X^2")), P(kTXY, "1 - t*X + t^2*X"));
  EXPECT_TRUE(d.apply(P(kTXY, "7")).is_zero());
}

TEST(Derivation, FromMapValidation) {
  EXPECT_THROW(D(kXY, {{"X", "1"}}), StructuralError);
  EXPECT_THROW(D(kXY, {{"X", "1"}, {"Y", "0"}, {"Z", "0"}}), StructuralError);
  EXPECT_THROW(D(kTXY, {{"X", "1"}, {"Y", "0"}, {"t", "1"}}), StructuralError);
}

TEST(Derivation, IterateExamples) {
  auto ctx = VarContext::make({"U"}, {"W"});
  auto dw = Derivation::partial(ctx, "W");
  EXPECT_EQ(iterate(dw, P(ctx, "W^3"), 3), P(ctx, "6"));
  EXPECT_TRUE(iterate(dw, P(ctx, "(U^2 + 1)*W^2"), 3).is_zero());
  EXPECT_TRUE(iterate(D(kXY, {{"X", "Y"}, {"Y", "0"}}), P(kXY, "X"), 2).is_zero());
}

TEST(Derivation, NilpotencyExamples) {
  auto v = nilpotency_verdict(Derivation::partial(kXY, "Y"), 5);
  ASSERT_TRUE(v.certified());
  EXPECT_EQ(v.indices[0], 1u);
  EXPECT_EQ(v.indices[1], 2u);

  v = nilpotency_verdict(D(kXY, {{"X", "X"}, {"Y", "0"}}), 10);
  EXPECT_FALSE(v.certified());
  EXPECT_EQ(v.bound, 10u);
  EXPECT_FALSE(v.indices[0].has_value());

  // X -> Y -> 1 -> 0.
  v = nilpotency_verdict(D(kXY, {{"X", "Y"}, {"Y", "1"}}), 5);
  ASSERT_TRUE(v.certified());
  EXPECT_EQ(v.indices[0], 3u);
  EXPECT_EQ(v.indices[1], 2u);
  EXPECT_THROW(nilpotency_verdict(Derivation::partial(kXY, "Y"), 0), PreconditionError);
}

TEST(Derivation, TriangularExamples) {
  auto o = is_triangular(D(kTXY, {{"X", "t"}, {"Y", "1 - t*X"}}));
  ASSERT_TRUE(o);
  EXPECT_EQ(*o, (std::vector<std::size_t>{0, 1}));
  EXPECT_FALSE(is_triangular(D(kXY, {{"X", "Y"}, {"Y", "X"}})));
  o = is_triangular(D(kXYZ, {{"X", "0"}, {"Y", "X^2"}, {"Z", "Y"}}));
  ASSERT_TRUE(o);
  EXPECT_EQ(*o, (std::vector<std::size_t>{0, 1, 2}));
  o = is_triangular(D(kXYZ, {{"X", "Z"}, {"Y", "X"}, {"Z", "1"}}));
  ASSERT_TRUE(o);
  EXPECT_EQ(*o, (std::vector<std::size_t>{2, 0, 1}));
  std::vector<std::string> nine;
  for (int i = 0; i < 9; ++i) nine.push_back("x" + std::to_string(i));
  auto big = VarContext::make({}, nine);
  EXPECT_THROW(is_triangular(Derivation(big, std::vector<Polynomial>(9, Polynomial(big)))), UnsupportedSizeError);
}

TEST(Derivation, DivergenceExamples) {
  EXPECT_TRUE(divergence(Derivation::partial(kXY, "Y")).is_zero());
  EXPECT_TRUE(divergence(D(kXY, {{"X", "X"}, {"Y", "-Y"}})).is_zero());
  EXPECT_EQ(divergence(D(kXY, {{"X", "X*Y"}, {"Y", "0"}})), P(kXY, "Y"));
}

TEST(Derivation, IrreducibleExamples) {
  EXPECT_TRUE(is_irreducible(Derivation::partial(kXY, "Y")).irreducible);
  auto v = is_irreducible(D(kTXY, {{"X", "t*Y"}, {"Y", "t*X"}}));
  EXPECT_FALSE(v.irreducible);
  EXPECT_EQ(v.common_divisor, P(kTXY, "t"));
  EXPECT_TRUE(is_irreducible(D(kXY, {{"X", "X^2"}, {"Y", "1"}})).irreducible);
  EXPECT_THROW(is_irreducible(D(kXY, {{"X", "0"}, {"Y", "0"}})), DomainError);
}

TEST(Derivation, FixedPointFreeExamples) {
  auto v = is_fixed_point_free(Derivation::partial(kXY, "Y"));
  ASSERT_TRUE(v.fixed_point_free());
  EXPECT_EQ((*v.cofactors)[1], P(kXY, "1"));
  EXPECT_FALSE(is_fixed_point_free(D(kXY, {{"X", "Y"}, {"Y", "0"}})).fixed_point_free());
  EXPECT_FALSE(is_fixed_point_free(D(kXY, {{"X", "0"}, {"Y", "0"}})).fixed_point_free());

  Derivation d = D(kTXY, {{"X", "t"}, {"Y", "1 - t*X"}});
  v = is_fixed_point_free(d);
  ASSERT_TRUE(v.fixed_point_free());
  // X * t + 1 * (1 - tX) = 1.
  EXPECT_EQ((*v.cofactors)[0] * P(kTXY, "t") + (*v.cofactors)[1] * P(kTXY, "1 - t*X"), P(kTXY, "1"));
  EXPECT_EQ((*v.cofactors)[0], P(kTXY, "X"));
  EXPECT_EQ((*v.cofactors)[1], P(kTXY, "1"));
}

std::vector<Derivation> families(std::mt19937_64& rng) {
  std::vector<Derivation> out;
  out.push_back(D(kTXY, {{"X", "t"}, {"Y", "1 - t*X"}}));
  out.push_back(D(kTXY, {{"X", "X*Y"}, {"Y", "t - Y^2"}}));
  std::vector<std::size_t> tx{0, 2};
  out.push_back(Derivation(kTXY, {random_poly(rng, kTXY, 2, 3, {2}), random_poly(rng, kTXY, 3, 4, tx)}));
  return out;
}

TEST(Derivation, LeibnizAndLinearity) {
  std::mt19937_64 rng(41);
  for (const auto& d : families(rng)) {
    for (int i = 0; i < 1000; ++i) {
      Polynomial p = random_poly(rng, kTXY, 3, 3);
      Polynomial q = random_poly(rng, kTXY, 3, 3);
      ASSERT_EQ(d.apply(p * q), p * d.apply(q) + q * d.apply(p));
      Polynomial c = random_poly(rng, kTXY, 2, 2, {2});
      ASSERT_EQ(d.apply(c * p), c * d.apply(p));
    }
  }
}

TEST(Derivation, TriangularImpliesCertified) {
  std::mt19937_64 rng(42);
  std::vector<std::size_t> tx{0, 2};
  for (int i = 0; i < 200; ++i) {
    Derivation d(kTXY, {random_poly(rng, kTXY, 3, 3, {2}), random_poly(rng, kTXY, 3, 3, tx)});
    ASSERT_TRUE(is_triangular(d));
    std::size_t maxdeg = 0;
    for (const auto& img : d.images()) maxdeg = std::max<std::size_t>(maxdeg, img.total_degree().value_or(0));
    std::size_t bound = 1;
    for (std::size_t k = 0; k < kTXY.num_main(); ++k) bound *= maxdeg + 1;
    bound = std::max<std::size_t>(bound, 2);
    ASSERT_TRUE(nilpotency_verdict(d, bound).certified()) << d.to_string();
  }
}

}  // namespace
}  // namespace lndkit
