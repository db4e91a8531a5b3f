#pragma once

// Exact sparse linear algebra over Q used by the classical data generator and
// the rational solver.

#include "semiflag/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace semiflag::linalg {

using QVec = std::map<std::size_t, Rational>;

/// y += a * x, dropping entries that cancel.
inline void axpy(QVec& y, const Rational& a, const QVec& x) {
  if (a == 0) return;
  for (const auto& [i, v] : x) {
    auto it = y.find(i);
    if (it == y.end()) {
      y.emplace(i, a * v);
    } else {
      it->second += a * v;
      if (it->second == 0) y.erase(it);
    }
  }
}

inline QVec scaled(QVec x, const Rational& a) {
  if (a == 0) return {};
  for (auto& [i, v] : x) v *= a;
  return x;
}

inline Rational entry(const QVec& x, std::size_t i) {
  auto it = x.find(i);
  return it == x.end() ? Rational(0) : it->second;
}

/// Forward-eliminated span of a list of vectors. Decomposes vectors of the
/// span as combinations of the inputs.
class SpanSolver {
 public:
  SpanSolver() = default;

  explicit SpanSolver(const std::vector<QVec>& vectors) : n_(vectors.size()) {
    for (std::size_t k = 0; k < vectors.size(); ++k) {
      QVec v = vectors[k];
      QVec combo{{k, Rational(1)}};
      reduce(v, combo);
      if (v.empty()) {
        independent_ = false;
        continue;
      }
      const std::size_t p = v.begin()->first;
      rows_.push_back({std::move(v), p, std::move(combo)});
    }
  }

  bool independent() const { return independent_; }
  std::size_t rank() const { return rows_.size(); }

  /// Coefficients c with w = sum c_k v_k, or nullopt if w is outside the span.
  /// Requires independent inputs for the answer to be unique.
  std::optional<std::vector<Rational>> solve(QVec w) const {
    QVec combo;
    reduce(w, combo);
    if (!w.empty()) return std::nullopt;
    std::vector<Rational> out(n_, Rational(0));
    for (const auto& [k, c] : combo) out[k] = -c;
    return out;
  }

  bool contains(QVec w) const {
    QVec combo;
    reduce(w, combo);
    return w.empty();
  }

 private:
  struct Row {
    QVec v;
    std::size_t pivot;
    QVec combo;
  };

  // Eliminates pivots from v; combo tracks v's expression (v_original - sum).
  void reduce(QVec& v, QVec& combo) const {
    for (const auto& row : rows_) {
      auto it = v.find(row.pivot);
      if (it == v.end()) continue;
      const Rational c = it->second / row.v.at(row.pivot);
      axpy(v, -c, row.v);
      axpy(combo, -c, row.combo);
    }
  }

  std::vector<Row> rows_;
  std::size_t n_ = 0;
  bool independent_ = true;
};

/// Dense square-matrix inverse; nullopt when singular.
inline std::optional<std::vector<std::vector<Rational>>> invert(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Rational d = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace semiflag::linalg
