#pragma once

// Experiments over the one-element semifield: exhaustive enumeration of
// P^J({1}), comparison with Bruhat pairs, and tropical fibers.

#include "semiflag/flag_points.hpp"
#include "semiflag/weyl.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace semiflag {

using OnePoint = FlagPoint<OneElement>;
using TropPoint = FlagPoint<TropicalInt>;

struct Enumeration {
  std::vector<OnePoint> points;
  std::size_t candidates = 0;
  std::size_t ambiguous = 0;
  std::vector<std::pair<OnePoint, std::string>> rejected;
};

inline std::vector<std::vector<std::size_t>> nonempty_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t b = 0; b < n; ++b)
      if (mask & (std::size_t{1} << b)) s.push_back(b);
    out.push_back(std::move(s));
  }
  return out;
}

/// Every assignment of nonempty supports to the fundamental components that
/// passes the consistency check at depth d. The result is sorted.
inline Enumeration enumerate_one(DataStore& store, const JSubset& J, unsigned d,
                                 std::optional<std::uint64_t> shuffle_seed = std::nullopt) {
  const auto free = complement(J, store.rank());
  std::vector<std::size_t> idx(free.begin(), free.end());
  std::vector<std::vector<std::vector<std::size_t>>> choices;
  for (std::size_t i : idx) choices.push_back(nonempty_subsets(store.fundamental(i)->dim()));

  std::vector<OnePoint> candidates;
  std::vector<std::size_t> pick(idx.size(), 0);
  while (true) {
    OnePoint p{store.cartan(), J, {}, true, 0};
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto m = store.fundamental(idx[k]);
      auto v = SemiVector<OneElement>::zero_of(*m);
      for (std::size_t b : choices[k][pick[k]]) v.set(b, Ext<OneElement>::one());
      p.components.emplace(idx[k], std::move(v));
    }
    candidates.push_back(std::move(p));
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  if (shuffle_seed) {
    Rng rng(*shuffle_seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);
  }

  Enumeration out;
  out.candidates = candidates.size();
  for (auto& p : candidates) {
    const auto res = check_consistency(store, p, d);
    if (res.ambiguous) ++out.ambiguous;
    if (res.ok) {
      p.verified_depth = d;
      out.points.push_back(std::move(p));
    } else {
      out.rejected.push_back({std::move(p), res.witness});
    }
  }
  std::sort(out.points.begin(), out.points.end());
  return out;
}

struct ConjectureReport {
  std::string type;
  unsigned depth = 0;
  std::size_t points = 0;
  std::size_t candidates = 0;
  std::size_t ambiguous = 0;
  std::size_t bruhat_pairs = 0;
  std::size_t weyl_order = 0;
  bool match = false;
  std::vector<OnePoint> witnesses;
};

/// Compares |P^{}({1})| at depth d with the number of Bruhat pairs. Records
/// agreement only; nothing is asserted.
inline ConjectureReport conjecture_check(DataStore& store, unsigned d) {
  const auto en = enumerate_one(store, {}, d);
  const WeylGroup W(store.cartan());
  ConjectureReport rep;
  rep.type = store.cartan().label();
  rep.depth = d;
  rep.points = en.points.size();
  rep.candidates = en.candidates;
  rep.ambiguous = en.ambiguous;
  rep.bruhat_pairs = W.bruhat_pairs();
  rep.weyl_order = W.size();
  rep.match = rep.points == rep.bruhat_pairs;
  rep.witnesses = en.points;
  return rep;
}

/// The tropical point with coefficient one exactly on the support of p.
inline TropPoint tropical_lift(const OnePoint& p) {
  TropPoint q{p.cartan, p.J, {}, true, p.verified_depth};
  for (const auto& [i, v] : p.components) {
    SemiVector<TropicalInt> w(v.space(), v.dim());
    for (const auto& [b, x] : v) w.set(b, Ext<TropicalInt>::one());
    q.components.emplace(i, std::move(w));
  }
  return q;
}

struct FiberSample {
  OnePoint target;
  std::vector<TropPoint> points;
  std::size_t generated = 0;
};

/// Tropical points over `target`. Seeds are the basepoint and the tropical
/// lifts of the given {1}-points; each seed is moved by every single-letter
/// word +i:k, -i:k with k in [lo, hi] (and, with two_letter, every product of
/// two such letters). Points whose image in P({1}) is the target are kept.
inline FiberSample fiber_sample(DataStore& store, const OnePoint& target, const std::vector<OnePoint>& seeds,
                                std::int64_t lo, std::int64_t hi, bool two_letter = false) {
  if (!target.J.empty()) throw DomainError("fibers are sampled for J = {} only");
  FiberSample out{normalize(target), {}, 0};
  std::vector<TropPoint> starts{basepoint<TropicalInt>(store, {})};
  for (const auto& s : seeds) starts.push_back(tropical_lift(s));

  std::vector<Gen<TropicalInt>> letters;
  for (std::size_t i = 0; i < store.rank(); ++i)
    for (std::int64_t k = lo; k <= hi; ++k) {
      letters.push_back(pos<TropicalInt>(i, k));
      letters.push_back(neg<TropicalInt>(i, k));
    }
  std::vector<Word<TropicalInt>> words{{}};
  for (const auto& g : letters) words.push_back({g});
  if (two_letter)
    for (const auto& g : letters)
      for (const auto& h : letters) words.push_back({g, h});

  std::set<TropPoint> seen;
  const auto collapse = collapse_hom<TropicalInt>();
  for (const auto& s : starts)
    for (const auto& w : words) {
      ++out.generated;
      TropPoint q = act(store, w, s);
      if (!(map_semifield(q, collapse) == out.target)) continue;
      if (seen.insert(q).second) out.points.push_back(q);
    }
  std::sort(out.points.begin(), out.points.end());
  return out;
}

/// "1=b0,b1;2=b2" -> the {1}-point with those supports.
inline OnePoint parse_support_point(DataStore& store, const JSubset& J, const std::string& text) {
  OnePoint p{store.cartan(), J, {}, true, 0};
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("malformed support: " + part);
    const auto I = parse_index_set(part.substr(0, eq), store.rank());
    if (I.size() != 1 || J.count(*I.begin())) throw std::invalid_argument("bad component index in " + part);
    const auto m = store.fundamental(*I.begin());
    auto v = SemiVector<OneElement>::zero_of(*m);
    std::stringstream labels(part.substr(eq + 1));
    std::string label;
    while (std::getline(labels, label, ',')) v.set(m->index_of(label), Ext<OneElement>::one());
    if (v.is_zero()) throw std::invalid_argument("empty support in " + part);
    p.components.insert_or_assign(*I.begin(), std::move(v));
  }
  if (p.components.size() != complement(J, store.rank()).size())
    throw std::invalid_argument("support point must give every component outside J");
  return p;
}

}  // namespace semiflag
