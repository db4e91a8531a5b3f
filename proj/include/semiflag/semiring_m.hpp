#pragma once

// The semiring M(K) = sum over lambda in X_Jbar of V(lambda)(K), with the
// multiplication given by transposes of Gamma(K), and its characters.

#include "semiflag/flag_points.hpp"

#include <map>

namespace semiflag {

template <Semifield S>
struct MElem {
  CartanDatum cartan;
  JSubset J;
  /// Nonzero components only.
  std::map<Weight, SemiVector<S>> components;

  friend bool operator==(const MElem& a, const MElem& b) {
    return a.cartan == b.cartan && a.J == b.J && a.components == b.components;
  }

  SemiVector<S> at(const Weight& lambda, DataStore& store) const {
    auto it = components.find(lambda);
    return it == components.end() ? SemiVector<S>::zero_of(*store.module(lambda)) : it->second;
  }

  unsigned max_height() const {
    unsigned h = 0;
    for (const auto& [w, v] : components) h = std::max(h, w.height());
    return h;
  }
};

namespace detail {

template <Semifield S>
void require_same_domain(const MElem<S>& a, const MElem<S>& b) {
  if (!(a.cartan == b.cartan) || a.J != b.J) throw DomainError("elements of different semirings M(K)");
}

template <Semifield S>
void put(MElem<S>& m, const Weight& w, SemiVector<S> v) {
  if (v.is_zero())
    m.components.erase(w);
  else
    m.components.insert_or_assign(w, std::move(v));
}

}  // namespace detail

template <Semifield S>
MElem<S> m_zero(const CartanDatum& c, const JSubset& J) {
  return {c, J, {}};
}

/// The basis element of V(0) with coefficient one.
template <Semifield S>
MElem<S> m_one(DataStore& store, const JSubset& J) {
  MElem<S> m{store.cartan(), J, {}};
  const Weight zero = Weight::zero(store.rank());
  const auto v0 = store.module(zero);
  m.components.emplace(zero, SemiVector<S>::unit_of(*v0, v0->highest));
  return m;
}

/// The single basis element b of V(lambda) with coefficient k.
template <Semifield S>
MElem<S> m_basis(DataStore& store, const JSubset& J, const Weight& lambda, std::size_t b, const Ext<S>& k) {
  if (!in_XJbar(lambda, J)) throw DomainError("weight " + lambda.key() + " is not supported on I - J");
  MElem<S> m{store.cartan(), J, {}};
  detail::put(m, lambda, vk_scale(k, SemiVector<S>::unit_of(*store.module(lambda), b)));
  return m;
}

template <Semifield S>
MElem<S> m_add(const MElem<S>& a, const MElem<S>& b) {
  detail::require_same_domain(a, b);
  MElem<S> r = a;
  for (const auto& [w, v] : b.components) {
    auto it = r.components.find(w);
    if (it == r.components.end())
      r.components.emplace(w, v);
    else
      it->second = vk_add(it->second, v);
  }
  return r;
}

template <Semifield S>
MElem<S> m_scale(const Ext<S>& k, const MElem<S>& a) {
  MElem<S> r{a.cartan, a.J, {}};
  for (const auto& [w, v] : a.components) detail::put(r, w, vk_scale(k, v));
  return r;
}

/// mu(b1, b1') = sum_b e_{b,b1,b1'} b, extended bilinearly.
template <Semifield S>
MElem<S> m_mul(DataStore& store, const MElem<S>& a, const MElem<S>& b) {
  detail::require_same_domain(a, b);
  MElem<S> r{a.cartan, a.J, {}};
  for (const auto& [l1, u] : a.components)
    for (const auto& [l2, v] : b.components) {
      const auto t = store.gamma(l1, l2);
      const auto contrib = gamma_transpose_k(*t, e_k(store, l1, l2, u, v));
      const Weight sum = l1 + l2;
      auto it = r.components.find(sum);
      if (it == r.components.end())
        detail::put(r, sum, contrib);
      else
        detail::put(r, sum, vk_add(it->second, contrib));
    }
  return r;
}

template <Semifield S>
MElem<S> random_melem(Rng& rng, DataStore& store, const JSubset& J, unsigned max_height) {
  MElem<S> m{store.cartan(), J, {}};
  std::vector<Weight> weights{Weight::zero(store.rank())};
  for (const auto& w : weights_up_to(store.rank(), J, max_height)) weights.push_back(w);
  const std::size_t parts = 1 + random_index(rng, 2);
  for (std::size_t k = 0; k < parts; ++k) {
    const Weight& w = weights[random_index(rng, weights.size())];
    detail::put(m, w, random_vector<S>(rng, *store.module(w)));
  }
  return m;
}

/// A map M(K) -> K^! determined by its values x_{lambda,b} on basis elements,
/// stored up to a height bound.
template <Semifield S>
struct Character {
  CartanDatum cartan;
  JSubset J;
  unsigned depth = 0;
  std::map<Weight, SemiVector<S>> table;
};

/// chi(b) = x_{lambda,b} for the expanded collection of p, up to height d.
template <Semifield S>
Character<S> char_from_point(DataStore& store, const FlagPoint<S>& p, unsigned d) {
  Expansion<S> ex(store, p);
  const auto res = check_consistency(ex, d);
  if (!res.ok) throw NoSolution("point is not consistent at depth " + std::to_string(d) + ": " + res.witness);
  Character<S> chi{p.cartan, p.J, d, {}};
  const Weight zero = Weight::zero(store.rank());
  chi.table.emplace(zero, ex.get(zero));
  for (const auto& w : weights_up_to(store.rank(), p.J, d)) chi.table.emplace(w, ex.get(w));
  return chi;
}

template <Semifield S>
Ext<S> char_eval(const Character<S>& chi, const MElem<S>& m) {
  if (!(chi.cartan == m.cartan) || chi.J != m.J) throw DomainError("character and element differ in domain");
  Ext<S> acc = Ext<S>::bottom();
  for (const auto& [w, v] : m.components) {
    if (w.height() > chi.depth)
      throw DepthError("weight " + w.key() + " exceeds the character depth " + std::to_string(chi.depth));
    const auto& x = chi.table.at(w);
    for (const auto& [b, c] : v) acc = ext_add(acc, ext_mul(Ext<S>(c), x[b]));
  }
  return acc;
}

/// Reads the fundamental components off a character.
template <Semifield S>
FlagPoint<S> point_from_char(const Character<S>& chi) {
  FlagPoint<S> p{chi.cartan, chi.J, {}, false, 0};
  for (std::size_t i : complement(chi.J, chi.cartan.rank())) {
    const Weight wi = Weight::fundamental(chi.cartan.rank(), i);
    auto it = chi.table.find(wi);
    if (it == chi.table.end() || it->second.is_zero())
      throw NoSolution("character vanishes on V(omega_" + std::to_string(i + 1) + "); not a point of C*(K)");
    p.components.emplace(i, it->second);
  }
  return normalize(std::move(p));
}

template <Semifield S>
io::json melem_to_json(const MElem<S>& m, DataStore& store) {
  io::json comps = io::json::object();
  for (const auto& [w, v] : m.components) {
    const auto mod = store.module(w);
    io::json c = io::json::object();
    for (const auto& [b, x] : v) c[mod->basis[b]] = S::format(x);
    comps[w.key()] = std::move(c);
  }
  io::json J = io::json::array();
  for (std::size_t j : m.J) J.push_back(j + 1);
  return io::json{{"schema", "semiflag/melem"},   {"version", 1},
                  {"cartan", m.cartan.label()},   {"J", std::move(J)},
                  {"semifield", std::string(S::name)}, {"components", std::move(comps)}};
}

template <Semifield S>
MElem<S> melem_from_json(const io::json& j, DataStore& store) {
  return io::detail::guarded([&] {
    io::detail::check_header(j, "semiflag/melem", 1);
    if (CartanDatum::parse(j.at("cartan").get<std::string>()) != store.cartan())
      throw ValidationError("element file is for another Cartan type");
    if (j.at("semifield").get<std::string>() != S::name)
      throw DomainError("element file is over " + j.at("semifield").get<std::string>());
    MElem<S> m{store.cartan(), {}, {}};
    for (const auto& x : j.value("J", io::json::array())) {
      const auto k = x.get<std::size_t>();
      if (k < 1 || k > store.rank()) throw ValidationError("J index out of range");
      m.J.insert(k - 1);
    }
    for (const auto& [key, comp] : j.at("components").items()) {
      const Weight w = Weight::parse(key, store.rank());
      if (!in_XJbar(w, m.J)) throw ValidationError("component " + key + " is not supported on I - J");
      const auto mod = store.module(w);
      auto v = SemiVector<S>::zero_of(*mod);
      for (const auto& [label, c] : comp.items()) v.set(mod->index_of(label), Ext<S>::parse(c.template get<std::string>()));
      detail::put(m, w, std::move(v));
    }
    return m;
  });
}

}  // namespace semiflag
