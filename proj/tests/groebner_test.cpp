#include <gtest/gtest.h>

#include <random>

#include "lndkit/groebner.hpp"
#include "test_support.hpp"

namespace lndkit {
namespace {

using testing::P;
using testing::random_poly;

const VarContext kXY = VarContext::make({}, {"X", "Y"});

std::vector<Polynomial> gens(std::initializer_list<const char*> texts) {
  std::vector<Polynomial> out;
  for (auto t : texts) out.push_back(P(kXY, t));
  return out;
}

TEST(Groebner, NormalFormExamples) {
  auto order = MonomialOrder::degrevlex(kXY);
  auto nf = reduce_by(P(kXY, "X^2"), gens({"X"}), order);
  EXPECT_TRUE(nf.remainder.is_zero());
  EXPECT_EQ(nf.quotients[0], P(kXY, "X"));

  nf = reduce_by(P(kXY, "Y"), gens({"X"}), order);
  EXPECT_EQ(nf.remainder, P(kXY, "Y"));
  EXPECT_TRUE(nf.quotients[0].is_zero());

  // X^2 + X = 1 * X^2 + X.
  nf = reduce_by(P(kXY, "X^2 + X"), gens({"X^2"}), order);
  EXPECT_EQ(nf.remainder, P(kXY, "X"));
  EXPECT_EQ(nf.quotients[0], P(kXY, "1"));
}

TEST(Groebner, BuchbergerExamples) {
  for (auto order : {MonomialOrder::lex(kXY), MonomialOrder::degrevlex(kXY)}) {
    auto gb = buchberger(gens({"X", "Y"}), order);
    EXPECT_EQ(gb.generators().size(), 2u);
    EXPECT_TRUE(gb.satisfies_buchberger_criterion());

    gb = buchberger(gens({"X + Y", "X - Y"}), order);
    std::set<std::string> got;
    for (const auto& g : gb.generators()) got.insert(g.to_string());
    EXPECT_EQ(got, (std::set<std::string>{"X", "Y"}));
    EXPECT_TRUE(gb.cofactors_consistent());

    gb = buchberger(gens({"X^2", "X^2 + X"}), order);
    ASSERT_EQ(gb.generators().size(), 1u);
    EXPECT_EQ(gb.generators()[0], P(kXY, "X"));
    EXPECT_TRUE(gb.cofactors_consistent());
  }
}

TEST(Groebner, IdealMemberExamples) {
  auto yes = ideal_member(P(kXY, "1"), gens({"X", "1 - X"}));
  ASSERT_TRUE(yes.member());
  EXPECT_EQ((*yes.cofactors)[0], P(kXY, "1"));
  EXPECT_EQ((*yes.cofactors)[1], P(kXY, "1"));

  EXPECT_FALSE(ideal_member(P(kXY, "1"), gens({"Y"})).member());

  auto x = ideal_member(P(kXY, "X"), gens({"X^2", "X^2 + X"}));
  ASSERT_TRUE(x.member());
  EXPECT_EQ((*x.cofactors)[0], P(kXY, "-1"));
  EXPECT_EQ((*x.cofactors)[1], P(kXY, "1"));

  EXPECT_THROW(ideal_member(P(kXY, "1"), {}), DomainError);
}

TEST(Groebner, OrderIsAWellOrderCompatibleWithMultiplication) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<unsigned> e(0, 4);
  auto ctx = VarContext::make({"t"}, {"X", "Y"});
  std::vector<MonomialOrder> orders{MonomialOrder::lex(ctx), MonomialOrder::degrevlex(ctx),
                                    MonomialOrder(OrderKind::lex, {2, 0, 1}),
                                    MonomialOrder(OrderKind::degrevlex, {1, 2, 0})};
  auto rnd = [&] { return Monomial({e(rng), e(rng), e(rng)}); };
  for (const auto& o : orders) {
    for (int i = 0; i < 500; ++i) {
      Monomial a = rnd(), b = rnd(), c = rnd();
      bool ab = o.greater(a, b), ba = o.greater(b, a);
      ASSERT_FALSE(ab && ba);
      ASSERT_EQ(ab || ba, !(a == b));
      ASSERT_EQ(o.greater(a * c, b * c), ab);
      ASSERT_FALSE(o.greater(Monomial(3), a));  // 1 is minimal
      if (ab && o.greater(b, c)) ASSERT_TRUE(o.greater(a, c));
    }
  }
  EXPECT_THROW(MonomialOrder(OrderKind::lex, {0, 0, 1}), StructuralError);
}

TEST(Groebner, RandomBasesAreReducedAndSound) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 60; ++i) {
    std::vector<Polynomial> g;
    for (int k = 0; k < 3; ++k) g.push_back(random_poly(rng, kXY, 3, 3));
    if (std::all_of(g.begin(), g.end(), [](auto& p) { return p.is_zero(); })) continue;
    for (auto order : {MonomialOrder::lex(kXY), MonomialOrder::degrevlex(kXY)}) {
      auto gb = buchberger(g, order);
      ASSERT_TRUE(gb.satisfies_buchberger_criterion());
      ASSERT_TRUE(gb.cofactors_consistent());
      const auto& B = gb.generators();
      for (std::size_t a = 0; a < B.size(); ++a) {
        ASSERT_EQ(order.leading_term(B[a]).second, Rational(1));
        for (std::size_t b = 0; b < B.size(); ++b) {
          if (a == b) continue;
          Monomial la = order.leading_term(B[a]).first;
          for (const auto& [m, c] : B[b].terms()) ASSERT_FALSE(la.divides(m));
        }
      }
      for (const auto& input : g) ASSERT_TRUE(gb.normal_form(input).remainder.is_zero());
    }
  }
}

}  // namespace
}  // namespace lndkit
