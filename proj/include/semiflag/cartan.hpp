#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace semiflag {

enum class CartanType { A1, A1xA1, A2, A3 };

/// Simply-laced finite-type Cartan datum. Indices are 0-based internally and
/// 1-based in every text encoding.
struct CartanDatum {
  CartanType type = CartanType::A1;
  std::vector<std::vector<int>> matrix;

  static CartanDatum make(CartanType t) {
    CartanDatum c;
    c.type = t;
    switch (t) {
      case CartanType::A1: c.matrix = {{2}}; break;
      case CartanType::A1xA1: c.matrix = {{2, 0}, {0, 2}}; break;
      case CartanType::A2: c.matrix = {{2, -1}, {-1, 2}}; break;
      case CartanType::A3: c.matrix = {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}; break;
    }
    return c;
  }

  static CartanDatum parse(std::string_view label) {
    if (label == "A1") return make(CartanType::A1);
    if (label == "A1xA1") return make(CartanType::A1xA1);
    if (label == "A2") return make(CartanType::A2);
    if (label == "A3") return make(CartanType::A3);
    throw std::invalid_argument("unsupported Cartan type: " + std::string(label));
  }

  std::size_t rank() const { return matrix.size(); }
  int a(std::size_t i, std::size_t j) const { return matrix[i][j]; }

  std::string label() const {
    switch (type) {
      case CartanType::A1: return "A1";
      case CartanType::A1xA1: return "A1xA1";
      case CartanType::A2: return "A2";
      case CartanType::A3: return "A3";
    }
    return "?";
  }

  friend bool operator==(const CartanDatum& x, const CartanDatum& y) { return x.type == y.type; }
};

/// Dominant weight in fundamental-weight coordinates.
struct Weight {
  std::vector<unsigned> n;

  static Weight zero(std::size_t rank) { return Weight{std::vector<unsigned>(rank, 0)}; }
  static Weight fundamental(std::size_t rank, std::size_t i) {
    Weight w = zero(rank);
    w.n.at(i) = 1;
    return w;
  }

  /// "1,0,2" style; the number of entries must equal rank.
  static Weight parse(std::string_view text, std::size_t rank) {
    Weight w;
    std::string item;
    std::stringstream ss{std::string(text)};
    while (std::getline(ss, item, ',')) {
      if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("malformed weight: " + std::string(text));
      w.n.push_back(static_cast<unsigned>(std::stoul(item)));
    }
    if (w.n.size() != rank)
      throw std::invalid_argument("weight " + std::string(text) + " does not match rank " +
                                  std::to_string(rank));
    return w;
  }

  std::size_t rank() const { return n.size(); }
  unsigned height() const {
    unsigned h = 0;
    for (unsigned x : n) h += x;
    return h;
  }
  bool is_zero() const { return height() == 0; }

  std::set<std::size_t> supp() const {
    std::set<std::size_t> s;
    for (std::size_t i = 0; i < n.size(); ++i)
      if (n[i] != 0) s.insert(i);
    return s;
  }

  std::string key() const {
    std::string out;
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(n[i]);
    }
    return out;
  }

  friend Weight operator+(const Weight& x, const Weight& y) {
    if (x.rank() != y.rank()) throw std::invalid_argument("weight rank mismatch");
    Weight r = x;
    for (std::size_t i = 0; i < r.n.size(); ++i) r.n[i] += y.n[i];
    return r;
  }

  /// x - y when y <= x coordinatewise.
  friend Weight operator-(const Weight& x, const Weight& y) {
    Weight r = x;
    for (std::size_t i = 0; i < r.n.size(); ++i) {
      if (y.n[i] > x.n[i]) throw std::invalid_argument("weight difference is not dominant");
      r.n[i] -= y.n[i];
    }
    return r;
  }

  friend auto operator<=>(const Weight&, const Weight&) = default;
  friend bool operator==(const Weight&, const Weight&) = default;
};

using JSubset = std::set<std::size_t>;

inline std::set<std::size_t> complement(const JSubset& J, std::size_t rank) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < rank; ++i)
    if (!J.count(i)) out.insert(i);
  return out;
}

/// supp(lambda) == I - J
inline bool in_XJ(const Weight& w, const JSubset& J) { return w.supp() == complement(J, w.rank()); }

/// supp(lambda) contained in I - J
inline bool in_XJbar(const Weight& w, const JSubset& J) {
  for (std::size_t i : w.supp())
    if (J.count(i)) return false;
  return true;
}

/// All weights with support in I - J and 1 <= height <= max_height, ordered by
/// height then lexicographically descending.
inline std::vector<Weight> weights_up_to(std::size_t rank, const JSubset& J, unsigned max_height) {
  std::vector<Weight> out;
  const auto free = complement(J, rank);
  for (unsigned h = 1; h <= max_height; ++h) {
    std::vector<Weight> level;
    // enumerate compositions of h over the free indices
    std::vector<std::size_t> idx(free.begin(), free.end());
    if (idx.empty()) break;
    std::vector<unsigned> parts(idx.size(), 0);
    auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
      if (pos + 1 == idx.size()) {
        parts[pos] = left;
        Weight x = Weight::zero(rank);
        for (std::size_t k = 0; k < idx.size(); ++k) x.n[idx[k]] = parts[k];
        level.push_back(x);
        return;
      }
      for (unsigned v = left + 1; v-- > 0;) {
        parts[pos] = v;
        self(self, pos + 1, left - v);
      }
    };
    rec(rec, 0, h);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

inline std::string format_index_set(const std::set<std::size_t>& s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : s) {
    if (!first) out += ',';
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

/// "1,3" (1-based) -> {0, 2}; empty string is the empty set.
inline JSubset parse_index_set(std::string_view text, std::size_t rank) {
  JSubset J;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("malformed index set: " + std::string(text));
    const auto i = std::stoul(item);
    if (i < 1 || i > rank) throw std::invalid_argument("index out of range: " + item);
    J.insert(i - 1);
  }
  return J;
}

}  // namespace semiflag
