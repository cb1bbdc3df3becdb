#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <vector>

namespace lndkit {

/// Exponent vector, one entry per context variable (main first, then coefficient).
struct Monomial {
  std::vector<std::uint32_t> exps;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> e) : exps(std::move(e)) {}

  std::size_t size() const noexcept { return exps.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps[i]; }
  std::uint32_t& operator[](std::size_t i) { return exps[i]; }

  std::uint64_t total_degree() const {
    return std::accumulate(exps.begin(), exps.end(), std::uint64_t{0});
  }

  bool is_one() const {
    return std::all_of(exps.begin(), exps.end(), [](auto e) { return e == 0; });
  }

  bool divides(const Monomial& other) const {
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (exps[i] > other.exps[i]) return false;
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.exps[i] = a.exps[i] + b.exps[i];
    return r;
  }

  /// Requires divisor.divides(*this).
  Monomial divided_by(const Monomial& divisor) const {
    Monomial r(size());
    for (std::size_t i = 0; i < size(); ++i) r.exps[i] = exps[i] - divisor.exps[i];
    return r;
  }

  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.exps[i] = std::max(a.exps[i], b.exps[i]);
    return r;
  }

  friend Monomial gcd(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.exps[i] = std::min(a.exps[i], b.exps[i]);
    return r;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  // Plain lex on the exponent vector; variable 0 is most significant.
  friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.exps <=> b.exps; }
};

/// Descending lex: the canonical storage order of polynomial terms.
struct LexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return a.exps > b.exps; }
};

}  // namespace lndkit
