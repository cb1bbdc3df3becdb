#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "lndkit/rational.hpp"

namespace lndkit {

/// Sparse coordinate vector; Compare puts the leading coordinate first.
template <class Key, class Compare>
using SparseVector = std::map<Key, Rational, Compare>;

/// Sparse combination over candidate labels.
using Combination = std::map<std::size_t, Rational>;

inline void axpy(Combination& acc, const Rational& c, const Combination& x) {
  if (c == 0) return;
  for (const auto& [k, v] : x) {
    auto [it, fresh] = acc.try_emplace(k, c * v);
    if (!fresh) {
      it->second += c * v;
      if (it->second == 0) acc.erase(it);
    }
  }
}

/// Incremental row-echelon basis of a span of sparse vectors, with each
/// basis row remembering its expression in the inserted (labelled) vectors.
///
/// Rows have distinct leading coordinates and leading coefficient 1. Inserting
/// a dependent vector yields the linear relation among labels that it closes.
template <class Key, class Compare>
class EchelonSpace {
 public:
  using Vec = SparseVector<Key, Compare>;

  struct Row {
    Vec vec;
    Combination comb;
  };

  struct InsertResult {
    bool independent = false;
    /// For a dependent insert: coefficients with sum(c_label * vector_label) == 0.
    Combination relation;
  };

  InsertResult insert(Vec v, std::size_t label) {
    Combination comb{{label, Rational(1)}};
    reduce(v, comb, -1);
    if (v.empty()) return {false, std::move(comb)};
    Rational lead = v.begin()->second;
    if (lead != 1) {
      Rational inv = Rational(1) / lead;
      for (auto& [k, c] : v) c *= inv;
      for (auto& [k, c] : comb) c *= inv;
    }
    pivots_.emplace(v.begin()->first, rows_.size());
    rows_.push_back({std::move(v), std::move(comb)});
    return {true, {}};
  }

  /// Coefficients over labels reproducing v exactly, if v lies in the span.
  std::optional<Combination> express(Vec v) const {
    Combination acc;
    reduce(v, acc, 1);
    if (!v.empty()) return std::nullopt;
    return acc;
  }

  /// Residue of v modulo the span (zero iff v is in the span).
  Vec residue(Vec v) const {
    Combination scratch;
    reduce(v, scratch, 1);
    return v;
  }

  const std::vector<Row>& rows() const noexcept { return rows_; }
  std::size_t rank() const noexcept { return rows_.size(); }

  /// Rows in fully reduced echelon form (no row contains another row's pivot),
  /// ordered by pivot.
  std::vector<Row> reduced_rows() const {
    std::vector<Row> out;
    out.reserve(rows_.size());
    for (const auto& [key, idx] : pivots_) {
      Row r = rows_[idx];
      Vec tail = r.vec;
      Rational lead = tail.begin()->second;
      tail.erase(tail.begin());
      Combination delta;
      reduce(tail, delta, -1);
      Vec full;
      full.emplace(r.vec.begin()->first, lead);
      full.insert(tail.begin(), tail.end());
      axpy(r.comb, Rational(1), delta);
      r.vec = std::move(full);
      out.push_back(std::move(r));
    }
    return out;
  }

 private:
  // Eliminates every pivot coordinate from v, top down. acc accumulates
  // sign * c * row.comb for each subtracted c * row.
  void reduce(Vec& v, Combination& acc, int sign) const {
    auto it = v.begin();
    while (it != v.end()) {
      auto p = pivots_.find(it->first);
      if (p == pivots_.end()) {
        ++it;
        continue;
      }
      const Row& row = rows_[p->second];
      Key key = it->first;
      Rational c = it->second;
      for (const auto& [k, x] : row.vec) {
        auto [slot, fresh] = v.try_emplace(k, -c * x);
        if (!fresh) {
          slot->second -= c * x;
          if (slot->second == 0) v.erase(slot);
        }
      }
      axpy(acc, sign > 0 ? c : Rational(-c), row.comb);
      it = v.upper_bound(key);
    }
  }

  std::vector<Row> rows_;
  std::map<Key, std::size_t, Compare> pivots_;
};

}  // namespace lndkit
