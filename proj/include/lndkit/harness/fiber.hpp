#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lndkit/subalgebra.hpp"

namespace lndkit::harness {

/// A rational point of the base (values for coefficient variables) and
/// claimed coordinates of the fiber over it.
struct FiberWitness {
  std::map<std::string, Rational> point;
  std::vector<Polynomial> coordinates;
  std::size_t bound = 0;
};

struct FiberResult {
  enum class Direction { coordinate_not_in_fiber, generator_not_reachable };
  bool pass = false;
  std::optional<Direction> direction;
  std::optional<Polynomial> element;
  std::vector<Polynomial> specialized_generators;
};

inline std::string to_string(FiberResult::Direction d) {
  return d == FiberResult::Direction::coordinate_not_in_fiber ? "coordinate_not_in_fiber" : "generator_not_reachable";
}

/// Specializes the coefficient variables at the point (main variables stay).
inline Polynomial specialize(const Polynomial& p, const std::map<std::string, Rational>& point) {
  if (p.is_zero()) return p;
  const VarContext& ctx = p.context();
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    auto it = point.find(ctx.name(i));
    if (!ctx.is_main(i) && it == point.end()) throw PreconditionError("point leaves " + ctx.name(i) + " unassigned");
    images.push_back(ctx.is_main(i) ? Polynomial::variable(ctx, i) : Polynomial::constant(ctx, it->second));
  }
  return evaluate(p, images, ctx);
}

/// Both containments over the residue field Q: coordinates in the
/// specialized algebra, specialized generators in Q[coordinates].
inline FiberResult check_fiber_witness(const Subalgebra& s, const FiberWitness& w) {
  const VarContext& ctx = s.context();
  for (const auto& [name, v] : w.point) {
    auto idx = ctx.index_of(name);
    if (!idx || ctx.is_main(*idx)) throw PreconditionError("point assigns " + name + ", not a coefficient variable");
  }
  for (const auto& b : s.base_generators()) (void)specialize(b, w.point);

  FiberResult r;
  for (const auto& g : s.algebra_generators()) {
    Polynomial sg = specialize(g, w.point);
    if (sg.is_zero() || sg.is_constant()) continue;
    if (std::find(r.specialized_generators.begin(), r.specialized_generators.end(), sg) == r.specialized_generators.end())
      r.specialized_generators.push_back(sg);
  }
  std::vector<Polynomial> coords;
  for (const auto& c : w.coordinates) {
    Polynomial sc = specialize(c, w.point);
    if (sc.is_zero() || sc.is_constant() ||
        std::find(coords.begin(), coords.end(), sc) != coords.end()) {
      r.direction = FiberResult::Direction::coordinate_not_in_fiber;
      r.element = c;
      return r;
    }
    coords.push_back(sc);
  }
  Subalgebra fiber(ctx, {}, r.specialized_generators, s.measure());
  Subalgebra claimed(ctx, {}, coords, s.measure());
  MembershipOracle in_fiber(fiber, w.bound), in_claimed(claimed, w.bound);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!in_fiber.member(coords[i]).found()) {
      r.direction = FiberResult::Direction::coordinate_not_in_fiber;
      r.element = w.coordinates[i];
      return r;
    }
  }
  for (const auto& g : r.specialized_generators) {
    if (!in_claimed.member(g).found()) {
      r.direction = FiberResult::Direction::generator_not_reachable;
      r.element = g;
      return r;
    }
  }
  r.pass = true;
  return r;
}

}  // namespace lndkit::harness
