#pragma once

// Generators i^k, (-i)^k, t_i^k of the monoid G(K) and their action on V(K)
// and on tensor objects. A word g1 g2 ... gn acts as the composite
// g1(g2(...gn(v))), i.e. the rightmost letter acts first.

#include "semiflag/based_module.hpp"
#include "semiflag/sampling.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace semiflag {

enum class GenKind { Pos, Neg, Torus };

template <Semifield S>
struct Gen {
  GenKind kind = GenKind::Pos;
  std::size_t i = 0;
  Value<S> k = S::one();

  friend bool operator==(const Gen& a, const Gen& b) { return a.kind == b.kind && a.i == b.i && a.k == b.k; }
};

template <Semifield S>
using Word = std::vector<Gen<S>>;

template <Semifield S>
Gen<S> pos(std::size_t i, Value<S> k) {
  return {GenKind::Pos, i, std::move(k)};
}
template <Semifield S>
Gen<S> neg(std::size_t i, Value<S> k) {
  return {GenKind::Neg, i, std::move(k)};
}
template <Semifield S>
Gen<S> torus(std::size_t i, Value<S> k) {
  return {GenKind::Torus, i, std::move(k)};
}

template <Semifield S>
SemiVector<S> gen_apply(const Gen<S>& g, const BasedModule& m, const SemiVector<S>& v) {
  if (v.space() != m.id() || v.dim() != m.dim())
    throw DomainError("vector over " + v.space() + " acted on in " + m.id());
  if (g.i >= m.rank()) throw DomainError("generator index out of range for " + m.id());
  if (g.kind == GenKind::Torus) {
    SemiVector<S> r(v.space(), v.dim());
    for (const auto& [b, x] : v) r.set(b, Ext<S>(S::mul(sf_pow<S>(g.k, m.weights[g.i][b]), x)));
    return r;
  }
  SemiVector<S> r = v;
  for (std::size_t n = 1; n <= m.nil_bound(g.i); ++n) {
    const NatMatrix* op = g.kind == GenKind::Pos ? m.E(g.i, n) : m.F(g.i, n);
    r = vk_add(r, vk_scale(Ext<S>(sf_pow<S>(g.k, static_cast<std::int64_t>(n))), apply_nat_matrix(*op, v)));
  }
  return r;
}

template <Semifield S>
SemiVector<S> word_apply(const Word<S>& w, const BasedModule& m, SemiVector<S> v) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) v = gen_apply(*it, m, v);
  return v;
}

/// g acting on V (x) V' by b (x) b' -> E(K)(g b, g b'), extended additively.
template <Semifield S>
SemiVector<S> tensor_gen_apply(const Gen<S>& g, const TensorBasis& tb, const SemiVector<S>& x) {
  if (x.space() != tb.id() || x.dim() != tb.size()) throw DomainError("vector does not live on " + tb.id());
  SemiVector<S> r = SemiVector<S>::zero_of(tb);
  for (const auto& [s, c] : x) {
    auto [b, b2] = tb.split(s);
    const auto gb = gen_apply(g, *tb.left, SemiVector<S>::unit_of(*tb.left, b));
    const auto gb2 = gen_apply(g, *tb.right, SemiVector<S>::unit_of(*tb.right, b2));
    r = vk_add(r, vk_scale(Ext<S>(c), e_k(tb, gb, gb2)));
  }
  return r;
}

template <Semifield S>
SemiVector<S> tensor_word_apply(const Word<S>& w, const TensorBasis& tb, SemiVector<S> x) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) x = tensor_gen_apply(*it, tb, x);
  return x;
}

template <Semifield From, Semifield To>
Word<To> map_word(const SemifieldHom<From, To>& h, const Word<From>& w) {
  Word<To> out;
  for (const auto& g : w) out.push_back({g.kind, g.i, h.map(g.k)});
  return out;
}

/// Tokens "+i:k", "-i:k", "ti:k" or "t,i:k"; indices 1-based.
template <Semifield S>
Gen<S> parse_gen(const std::string& token, std::size_t rank) {
  const auto colon = token.find(':');
  if (colon == std::string::npos || colon == 0) throw std::invalid_argument("malformed generator: " + token);
  std::string head = token.substr(0, colon);
  GenKind kind;
  if (head[0] == '+') {
    kind = GenKind::Pos;
    head.erase(0, 1);
  } else if (head[0] == '-') {
    kind = GenKind::Neg;
    head.erase(0, 1);
  } else if (head[0] == 't') {
    kind = GenKind::Torus;
    head.erase(0, head.size() > 1 && head[1] == ',' ? 2 : 1);
  } else {
    throw std::invalid_argument("malformed generator: " + token);
  }
  if (head.empty() || head.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("malformed generator index: " + token);
  const auto i = std::stoul(head);
  if (i < 1 || i > rank) throw std::invalid_argument("generator index out of range: " + token);
  return {kind, i - 1, S::parse(token.substr(colon + 1))};
}

template <Semifield S>
Word<S> parse_word(const std::string& text, std::size_t rank) {
  Word<S> w;
  std::istringstream in(text);
  std::string token;
  while (in >> token) w.push_back(parse_gen<S>(token, rank));
  return w;
}

template <Semifield S>
std::string format_gen(const Gen<S>& g) {
  const char* prefix = g.kind == GenKind::Pos ? "+" : g.kind == GenKind::Neg ? "-" : "t";
  return prefix + std::to_string(g.i + 1) + ":" + S::format(g.k);
}

template <Semifield S>
std::string format_word(const Word<S>& w) {
  std::string out;
  for (const auto& g : w) {
    if (!out.empty()) out += ' ';
    out += format_gen(g);
  }
  return out;
}

template <Semifield S>
Word<S> random_word(Rng& rng, std::size_t rank, std::size_t max_len, bool with_torus = true) {
  Word<S> w(std::uniform_int_distribution<std::size_t>(0, max_len)(rng));
  for (auto& g : w) {
    const int kinds = with_torus ? 2 : 1;
    g.kind = static_cast<GenKind>(std::uniform_int_distribution<int>(0, kinds)(rng));
    g.i = random_index(rng, rank);
    g.k = random_value<S>(rng);
  }
  return w;
}

enum class Relation { R1, R2, R3, R4, R5, R6 };

inline constexpr Relation kAllRelations[] = {Relation::R1, Relation::R2, Relation::R3,
                                             Relation::R4, Relation::R5, Relation::R6};

inline std::string relation_name(Relation r) { return "R" + std::to_string(static_cast<int>(r) + 1); }

inline std::string relation_statement(Relation r) {
  switch (r) {
    case Relation::R1: return "i^k i^k' = i^(k+k')";
    case Relation::R2: return "(-i)^k (-i)^k' = (-i)^(k+k')";
    case Relation::R3: return "t_i^k t_i^k' = t_i^(kk')";
    case Relation::R4: return "t_i^k j^k' = j^(k' k^a_ij) t_i^k, t_i^k (-j)^k' = (-j)^(k' k^-a_ij) t_i^k";
    case Relation::R5: return "i^k j^k' = j^k' i^k and (-i)^k (-j)^k' = (-j)^k' (-i)^k when a_ij = 0";
    case Relation::R6: return "i^k (-j)^k' = (-j)^k' i^k for i != j";
  }
  return "";
}

struct RelationReport {
  std::string relation;
  std::string semifield;
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::vector<std::string> failures;

  bool ok() const { return passed == trials && failures.empty(); }
};

/// Evaluates both sides of a relation on random vectors of the given modules.
/// Trials are drawn only from modules where the relation has an instance.
template <Semifield S>
RelationReport relation_check(Relation rel, const std::vector<ModulePtr>& modules, std::size_t trials,
                              std::uint64_t seed) {
  RelationReport rep{relation_name(rel), std::string(S::name), 0, 0, {}};
  Rng rng(seed);
  struct Slot {
    ModulePtr m;
    std::size_t i, j;
  };
  std::vector<Slot> slots;
  for (const auto& m : modules)
    for (std::size_t i = 0; i < m->rank(); ++i)
      for (std::size_t j = 0; j < m->rank(); ++j) {
        const bool same = i == j;
        const int a = m->cartan.a(i, j);
        const bool eligible = (rel == Relation::R1 || rel == Relation::R2 || rel == Relation::R3) ? same
                              : rel == Relation::R4                                           ? true
                              : rel == Relation::R5                                           ? (!same && a == 0)
                                                                                              : !same;
        if (eligible) slots.push_back({m, i, j});
      }
  if (slots.empty()) return rep;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& slot = slots[random_index(rng, slots.size())];
    const BasedModule& m = *slot.m;
    const std::size_t i = slot.i, j = slot.j;
    const auto v = random_vector<S>(rng, m);
    const Value<S> k = random_value<S>(rng);
    const Value<S> k2 = random_value<S>(rng);
    std::vector<std::pair<Word<S>, Word<S>>> sides;
    switch (rel) {
      case Relation::R1: sides.push_back({{pos<S>(i, k), pos<S>(i, k2)}, {pos<S>(i, S::add(k, k2))}}); break;
      case Relation::R2: sides.push_back({{neg<S>(i, k), neg<S>(i, k2)}, {neg<S>(i, S::add(k, k2))}}); break;
      case Relation::R3: sides.push_back({{torus<S>(i, k), torus<S>(i, k2)}, {torus<S>(i, S::mul(k, k2))}}); break;
      case Relation::R4: {
        const int a = m.cartan.a(i, j);
        sides.push_back({{torus<S>(i, k), pos<S>(j, k2)}, {pos<S>(j, S::mul(k2, sf_pow<S>(k, a))), torus<S>(i, k)}});
        sides.push_back({{torus<S>(i, k), neg<S>(j, k2)}, {neg<S>(j, S::mul(k2, sf_pow<S>(k, -a))), torus<S>(i, k)}});
        break;
      }
      case Relation::R5:
        sides.push_back({{pos<S>(i, k), pos<S>(j, k2)}, {pos<S>(j, k2), pos<S>(i, k)}});
        sides.push_back({{neg<S>(i, k), neg<S>(j, k2)}, {neg<S>(j, k2), neg<S>(i, k)}});
        break;
      case Relation::R6: sides.push_back({{pos<S>(i, k), neg<S>(j, k2)}, {neg<S>(j, k2), pos<S>(i, k)}}); break;
    }
    bool ok = true;
    for (const auto& [lhs, rhs] : sides) {
      if (!(word_apply(lhs, m, v) == word_apply(rhs, m, v))) {
        ok = false;
        if (rep.failures.size() < 5)
          rep.failures.push_back(m.id() + ": " + format_word(lhs) + " vs " + format_word(rhs));
      }
    }
    ++rep.trials;
    if (ok) ++rep.passed;
  }
  return rep;
}

}  // namespace semiflag
