#pragma once

// Weyl groups of the supported types, independent of the module machinery.
// Elements are identified by their image of rho; Bruhat order comes from the
// subword property and is cross-checked against the lifting recursion.

#include "semiflag/cartan.hpp"

#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

namespace semiflag {

class WeylGroup {
 public:
  using Vec = std::vector<int>;

  explicit WeylGroup(const CartanDatum& c) : cartan_(c) {
    const std::size_t r = c.rank();
    Vec rho(r, 1);
    index_.emplace(rho, 0);
    images_.push_back(rho);
    words_.push_back({});
    std::queue<std::size_t> todo;
    todo.push(0);
    // BFS gives shortest words; left multiplication s_i w
    while (!todo.empty()) {
      const std::size_t w = todo.front();
      todo.pop();
      for (std::size_t i = 0; i < r; ++i) {
        Vec img = reflect(i, images_[w]);
        if (index_.count(img)) continue;
        index_.emplace(img, images_.size());
        images_.push_back(img);
        auto word = words_[w];
        word.insert(word.begin(), i);
        words_.push_back(std::move(word));
        todo.push(images_.size() - 1);
      }
    }
    below_.resize(size());
    for (std::size_t w = 0; w < size(); ++w) below_[w] = subword_ideal(w);
    if (!cross_check()) throw std::logic_error("Bruhat order: subword and lifting criteria disagree");
  }

  std::size_t size() const { return images_.size(); }
  std::size_t length(std::size_t w) const { return words_[w].size(); }
  const std::vector<std::size_t>& reduced_word(std::size_t w) const { return words_[w]; }
  std::size_t identity() const { return 0; }

  bool leq(std::size_t u, std::size_t w) const { return below_[w].count(u) > 0; }

  std::size_t bruhat_pairs() const {
    std::size_t n = 0;
    for (const auto& s : below_) n += s.size();
    return n;
  }

  /// s_{i1} ... s_{ik} as an element index.
  std::size_t element(const std::vector<std::size_t>& word) const {
    Vec v(cartan_.rank(), 1);
    for (auto it = word.rbegin(); it != word.rend(); ++it) v = reflect(*it, v);
    return index_.at(v);
  }

  std::size_t mul_left(std::size_t i, std::size_t w) const { return index_.at(reflect(i, images_[w])); }
  std::size_t mul_right(std::size_t w, std::size_t i) const {
    auto word = words_[w];
    word.push_back(i);
    return element(word);
  }

  std::string format(std::size_t w) const {
    if (words_[w].empty()) return "e";
    std::string s;
    for (std::size_t i : words_[w]) s += "s" + std::to_string(i + 1);
    return s;
  }

 private:
  // s_i(mu) = mu - <mu, alpha_i^vee> alpha_i in fundamental-weight coordinates
  Vec reflect(std::size_t i, const Vec& mu) const {
    Vec out = mu;
    const int c = mu[i];
    for (std::size_t j = 0; j < out.size(); ++j) out[j] -= c * cartan_.a(i, j);
    return out;
  }

  std::set<std::size_t> subword_ideal(std::size_t w) const {
    const auto& word = words_[w];
    std::set<std::size_t> out;
    const std::size_t n = word.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<std::size_t> sub;
      for (std::size_t k = 0; k < n; ++k)
        if (mask & (std::size_t{1} << k)) sub.push_back(word[k]);
      out.insert(element(sub));
    }
    return out;
  }

  // u <= w iff, for s with ws < w: (us < u ? us <= ws : u <= ws).
  bool lifting_leq(std::size_t u, std::size_t w, std::map<std::pair<std::size_t, std::size_t>, bool>& memo) const {
    if (length(w) == 0) return u == w;
    if (length(u) > length(w)) return false;
    auto key = std::make_pair(u, w);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::size_t s = words_[w].back();
    const std::size_t ws = mul_right(w, s);
    const std::size_t us = mul_right(u, s);
    const bool res = length(us) < length(u) ? lifting_leq(us, ws, memo) : lifting_leq(u, ws, memo);
    memo[key] = res;
    return res;
  }

  bool cross_check() const {
    std::map<std::pair<std::size_t, std::size_t>, bool> memo;
    for (std::size_t u = 0; u < size(); ++u)
      for (std::size_t w = 0; w < size(); ++w)
        if (lifting_leq(u, w, memo) != leq(u, w)) return false;
    return true;
  }

  CartanDatum cartan_;
  std::map<Vec, std::size_t> index_;
  std::vector<Vec> images_;
  std::vector<std::vector<std::size_t>> words_;
  std::vector<std::set<std::size_t>> below_;
};

}  // namespace semiflag
