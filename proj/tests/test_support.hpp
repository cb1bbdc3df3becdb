#pragma once

#include <random>
#include <string>
#include <vector>

#include "lndkit/parse.hpp"
#include "lndkit/polynomial.hpp"

namespace lndkit::testing {

inline Polynomial P(const VarContext& ctx, const std::string& text) { return parse_polynomial(text, ctx); }

/// Random polynomial with small integer-ratio coefficients.
inline Polynomial random_poly(std::mt19937_64& rng, const VarContext& ctx, unsigned max_degree,
                              unsigned max_terms, const std::vector<std::size_t>& vars = {}) {
  std::vector<std::size_t> use = vars;
  if (use.empty())
    for (std::size_t i = 0; i < ctx.size(); ++i) use.push_back(i);
  std::uniform_int_distribution<int> nterms(0, static_cast<int>(max_terms));
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 3);
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> pick(0, use.size() - 1);
  Polynomial p(ctx);
  int n = nterms(rng);
  for (int k = 0; k < n; ++k) {
    Monomial m(ctx.size());
    unsigned d = deg(rng);
    for (unsigned e = 0; e < d && !use.empty(); ++e) m[use[pick(rng)]] += 1;
    p.add_term(m, make_rational(num(rng), den(rng)));
  }
  return p;
}

}  // namespace lndkit::testing
