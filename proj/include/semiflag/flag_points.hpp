#pragma once

// Points of the partial flag manifold P^J(K): collections of fundamental
// components modulo independent rescaling, their higher components x_lambda
// obtained by solving Gamma(K)(x_lambda) = E(K)(x_mu, x_omega_i), and the
// depth-bounded consistency check.

#include "semiflag/monoid.hpp"
#include "semiflag/store.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace semiflag {

/// The point has no higher component at some weight.
struct NoSolution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two distinct verified preimages under Gamma(K) were found.
struct AmbiguousSolution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation past the verified depth of a point.
struct DepthError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal invariant failed; indicates a data or logic bug.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

template <Semifield S>
struct FlagPoint {
  CartanDatum cartan;
  JSubset J;
  /// x_{omega_i} for every i in I - J, over V(omega_i).
  std::map<std::size_t, SemiVector<S>> components;
  bool normalized = false;
  unsigned verified_depth = 0;

  friend bool operator==(const FlagPoint& a, const FlagPoint& b) {
    return a.cartan == b.cartan && a.J == b.J && a.components == b.components;
  }
  friend bool operator<(const FlagPoint& a, const FlagPoint& b) {
    if (a.components.size() != b.components.size()) return a.components.size() < b.components.size();
    for (auto ia = a.components.begin(), ib = b.components.begin(); ia != a.components.end(); ++ia, ++ib) {
      if (ia->first != ib->first) return ia->first < ib->first;
      std::vector<std::pair<std::size_t, std::string>> ka, kb;
      for (const auto& [k, v] : ia->second) ka.push_back({k, S::format(v)});
      for (const auto& [k, v] : ib->second) kb.push_back({k, S::format(v)});
      if (ka != kb) return ka < kb;
    }
    return false;
  }
};

template <Semifield S>
FlagPoint<S> basepoint(DataStore& store, const JSubset& J) {
  FlagPoint<S> p{store.cartan(), J, {}, true, 0};
  for (std::size_t i : complement(J, store.rank())) {
    const auto m = store.fundamental(i);
    p.components.emplace(i, SemiVector<S>::unit_of(*m, m->highest));
  }
  return p;
}

template <Semifield S>
SemiVector<S> normalize_vector(const SemiVector<S>& v) {
  if (v.is_zero()) throw DomainError("cannot normalize the zero vector");
  return vk_scale(Ext<S>(S::inv(v[v.leading()].value())), v);
}

/// Scales every component so that its first supported coefficient is one.
template <Semifield S>
FlagPoint<S> normalize(FlagPoint<S> p) {
  for (auto& [i, v] : p.components) {
    if (v.is_zero()) throw DomainError("component " + std::to_string(i + 1) + " is zero");
    v = normalize_vector(v);
  }
  p.normalized = true;
  return p;
}

template <Semifield S>
bool points_equal(const FlagPoint<S>& p, const FlagPoint<S>& q) {
  if (!(p.cartan == q.cartan) || p.J != q.J) throw DomainError("points of different flag manifolds");
  return normalize(p).components == normalize(q).components;
}

namespace detail {

template <Semifield S>
constexpr bool idempotent_semifield = std::is_same_v<S, TropicalInt> || std::is_same_v<S, OneElement>;

// a <= b in the order a + b = a, with bottom as the top element.
template <Semifield S>
Ext<S> order_max(const Ext<S>& a, const Ext<S>& b) {
  if (a.is_bottom() || b.is_bottom()) return Ext<S>::bottom();
  return S::add(a.value(), b.value()) == a.value() ? b : a;
}

// Residuation for idempotent K: the least (in the K-order) candidate is forced
// entrywise; it is verified and then checked for uniqueness.
template <Semifield S>
SemiVector<S> solve_idempotent(const GammaTable& t, const SemiVector<S>& y) {
  std::vector<std::vector<std::size_t>> cols(t.tensor_size());
  SemiVector<S> x(source_space_id(t), t.source_dim);
  std::vector<Ext<S>> hat(t.source_dim);
  for (std::size_t b = 0; b < t.source_dim; ++b) {
    if (t.rows[b].empty()) throw InvariantError("empty Gamma row in " + t.id());
    Ext<S> acc = y[t.rows[b].front().first];
    for (const auto& [s, c] : t.rows[b]) {
      acc = order_max(acc, y[s]);
      cols[s].push_back(b);
    }
    hat[b] = acc;
    x.set(b, acc);
  }
  if (!(gamma_k(t, x) == y)) throw NoSolution("no preimage under Gamma(" + t.id() + ")");
  for (std::size_t b = 0; b < t.source_dim; ++b) {
    if (hat[b].is_bottom()) continue;
    bool forced = false;
    for (const auto& [s, c] : t.rows[b]) {
      if (!(y[s] == hat[b])) continue;
      bool alone = true;
      for (std::size_t other : cols[s])
        if (other != b && hat[other] == y[s]) alone = false;
      if (alone) {
        forced = true;
        break;
      }
    }
    if (!forced)
      throw AmbiguousSolution("Gamma(" + t.id() + ") has several preimages; coefficient at index " +
                              std::to_string(b) + " is free");
  }
  return x;
}

inline SemiVector<PosRational> solve_rational(const GammaTable& t, const GammaLeftInverse& inv,
                                              const SemiVector<PosRational>& y) {
  const std::size_t n = t.source_dim;
  SemiVector<PosRational> x(source_space_id(t), n);
  for (std::size_t b = 0; b < n; ++b) {
    Rational acc = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto yk = y[inv.rows[k]];
      if (!yk.is_bottom() && inv.inverse[b][k] != 0) acc += inv.inverse[b][k] * yk.value();
    }
    if (acc < 0) throw NoSolution("preimage under Gamma(" + t.id() + ") has a negative coefficient");
    if (acc > 0) x.set(b, Ext<PosRational>(acc));
  }
  if (!(gamma_k(t, x) == y)) throw NoSolution("no preimage under Gamma(" + t.id() + ")");
  return x;
}

}  // namespace detail

/// The unique x with Gamma(lambda, lambda2)(K)(x) = y.
template <Semifield S>
SemiVector<S> solve_gamma(DataStore& store, const Weight& lambda, const Weight& lambda2, const SemiVector<S>& y) {
  const auto t = store.gamma(lambda, lambda2);
  if constexpr (std::is_same_v<S, PosRational>) {
    return detail::solve_rational(*t, *store.gamma_inverse(lambda, lambda2), y);
  } else {
    static_assert(detail::idempotent_semifield<S>, "no Gamma solver for this semifield");
    return detail::solve_idempotent(*t, y);
  }
}

template <Semifield S>
SemiVector<S> e_k(DataStore& store, const Weight& lambda, const Weight& lambda2, const SemiVector<S>& x,
                  const SemiVector<S>& x2) {
  return e_k(TensorBasis(store.module(lambda), store.module(lambda2)), x, x2);
}

/// Lazily computed higher components x_lambda of a point.
template <Semifield S>
class Expansion {
 public:
  Expansion(DataStore& store, FlagPoint<S> p) : store_(&store), p_(std::move(p)) {
    if (!(p_.cartan == store.cartan())) throw DomainError("point and data store differ in Cartan type");
  }

  const FlagPoint<S>& point() const { return p_; }
  DataStore& store() const { return *store_; }

  const SemiVector<S>& get(const Weight& lambda) {
    auto it = cache_.find(lambda);
    if (it != cache_.end()) return it->second;
    if (!in_XJbar(lambda, p_.J))
      throw DomainError("weight " + lambda.key() + " is not supported on I - J = " +
                        format_index_set(complement(p_.J, lambda.rank())));
    return cache_.emplace(lambda, compute(lambda)).first->second;
  }

  std::size_t cached() const { return cache_.size(); }

 private:
  SemiVector<S> compute(const Weight& lambda) {
    const std::size_t r = store_->rank();
    if (lambda.is_zero()) {
      const auto m = store_->module(lambda);
      return SemiVector<S>::unit_of(*m, m->highest);
    }
    const auto supp = lambda.supp();
    if (lambda.height() == 1) return p_.components.at(*supp.begin());
    std::optional<SemiVector<S>> x;
    for (std::size_t i : supp) {
      const Weight wi = Weight::fundamental(r, i);
      const Weight mu = lambda - wi;
      const auto target = e_k(*store_, mu, wi, get(mu), get(wi));
      if (!x) {
        x = solve_gamma(*store_, mu, wi, target);
        continue;
      }
      if (!(gamma_k(*store_->gamma(mu, wi), *x) == target))
        throw NoSolution("x_" + lambda.key() + " solved from one decomposition fails Gamma(" + mu.key() + "; " +
                         wi.key() + ")");
    }
    return *x;
  }

  DataStore* store_;
  FlagPoint<S> p_;
  std::map<Weight, SemiVector<S>> cache_;
};

template <Semifield S>
SemiVector<S> expand(DataStore& store, const FlagPoint<S>& p, const Weight& lambda) {
  Expansion<S> ex(store, p);
  return ex.get(lambda);
}

struct ConsistencyResult {
  bool ok = true;
  unsigned depth = 0;
  std::size_t equations = 0;
  std::string witness;
  bool ambiguous = false;
};

/// Checks Gamma(K)(x_{lambda+lambda2}) = E(K)(x_lambda, x_lambda2) for every
/// pair with supports in I - J and height(lambda + lambda2) <= d.
template <Semifield S>
ConsistencyResult check_consistency(Expansion<S>& ex, unsigned d) {
  ConsistencyResult res;
  res.depth = d;
  const auto& p = ex.point();
  for (const auto& [i, v] : p.components)
    if (v.is_zero()) return {false, d, 0, "component " + std::to_string(i + 1) + " is zero", false};
  const auto weights = weights_up_to(p.cartan.rank(), p.J, d);
  try {
    for (const auto& w : weights) ex.get(w);
    for (std::size_t a = 0; a < weights.size(); ++a)
      for (std::size_t b = a; b < weights.size(); ++b) {
        const Weight& l1 = weights[a];
        const Weight& l2 = weights[b];
        if (l1.height() + l2.height() > d) continue;
        const auto lhs = gamma_k(*ex.store().gamma(l1, l2), ex.get(l1 + l2));
        const auto rhs = e_k(ex.store(), l1, l2, ex.get(l1), ex.get(l2));
        ++res.equations;
        if (!(lhs == rhs)) {
          res.ok = false;
          res.witness = "(" + l1.key() + ") + (" + l2.key() + ")";
          return res;
        }
      }
  } catch (const NoSolution& e) {
    res.ok = false;
    res.witness = e.what();
  } catch (const AmbiguousSolution& e) {
    res.ok = false;
    res.ambiguous = true;
    res.witness = e.what();
  }
  return res;
}

template <Semifield S>
ConsistencyResult check_consistency(DataStore& store, const FlagPoint<S>& p, unsigned d) {
  Expansion<S> ex(store, p);
  return check_consistency(ex, d);
}

/// The point with verified_depth raised to d; throws NoSolution on failure.
template <Semifield S>
FlagPoint<S> verified(DataStore& store, FlagPoint<S> p, unsigned d) {
  const auto res = check_consistency(store, p, d);
  if (!res.ok) throw NoSolution("consistency fails at depth " + std::to_string(d) + ": " + res.witness);
  p.verified_depth = d;
  return p;
}

/// Acts component by component, then normalizes. If the input carries a
/// verified depth, consistency at that depth is re-checked.
template <Semifield S>
FlagPoint<S> act(DataStore& store, const Word<S>& w, const FlagPoint<S>& p) {
  FlagPoint<S> q = p;
  for (auto& [i, v] : q.components) {
    v = word_apply(w, *store.fundamental(i), v);
    if (v.is_zero()) throw InvariantError("a generator sent component " + std::to_string(i + 1) + " to zero");
  }
  q = normalize(std::move(q));
  if (q.verified_depth > 0) {
    const auto res = check_consistency(store, q, q.verified_depth);
    if (!res.ok) throw InvariantError("action broke consistency: " + res.witness);
  }
  return q;
}

template <Semifield From, Semifield To>
FlagPoint<To> map_semifield(const FlagPoint<From>& p, const SemifieldHom<From, To>& h) {
  FlagPoint<To> q{p.cartan, p.J, {}, false, p.verified_depth};
  for (const auto& [i, v] : p.components) {
    SemiVector<To> w(v.space(), v.dim());
    for (const auto& [b, x] : v) w.set(b, hom_apply(h, Ext<From>(x)));
    q.components.emplace(i, std::move(w));
  }
  return normalize(std::move(q));
}

/// x_lambda read over Q with bottom as 0, verified against Gamma over Q.
struct ClassicalCollection {
  std::map<Weight, std::vector<Rational>> x;
  std::size_t equations = 0;
};

inline ClassicalCollection to_classical(DataStore& store, const FlagPoint<PosRational>& p, unsigned d) {
  Expansion<PosRational> ex(store, p);
  ClassicalCollection out;
  const auto weights = weights_up_to(p.cartan.rank(), p.J, d);
  for (const auto& w : weights) {
    const auto& v = ex.get(w);
    std::vector<Rational> dense(v.dim(), Rational(0));
    for (const auto& [b, c] : v) dense[b] = c;
    out.x.emplace(w, std::move(dense));
  }
  for (std::size_t a = 0; a < weights.size(); ++a)
    for (std::size_t b = a; b < weights.size(); ++b) {
      const Weight& l1 = weights[a];
      const Weight& l2 = weights[b];
      if (l1.height() + l2.height() > d) continue;
      const auto& t = *store.gamma(l1, l2);
      const auto& xs = out.x.at(l1 + l2);
      const auto& x1 = out.x.at(l1);
      const auto& x2 = out.x.at(l2);
      std::vector<Rational> lhs(t.tensor_size(), Rational(0));
      for (std::size_t s = 0; s < t.source_dim; ++s)
        for (const auto& [idx, c] : t.rows[s]) lhs[idx] += xs[s] * c;
      for (std::size_t u = 0; u < x1.size(); ++u)
        for (std::size_t v = 0; v < x2.size(); ++v)
          if (lhs[u * x2.size() + v] != x1[u] * x2[v])
            throw InvariantError("Gamma(x_" + (l1 + l2).key() + ") differs from x_" + l1.key() + " (x) x_" +
                                 l2.key() + " over Q");
      ++out.equations;
    }
  return out;
}

template <Semifield S>
io::json point_to_json(const FlagPoint<S>& p, DataStore& store) {
  io::json comps = io::json::object();
  for (const auto& [i, v] : p.components) {
    const auto m = store.fundamental(i);
    io::json c = io::json::object();
    for (const auto& [b, x] : v) c[m->basis[b]] = S::format(x);
    comps[std::to_string(i + 1)] = std::move(c);
  }
  io::json J = io::json::array();
  for (std::size_t j : p.J) J.push_back(j + 1);
  return io::json{{"schema", "semiflag/point"},
                  {"version", 1},
                  {"cartan", p.cartan.label()},
                  {"J", std::move(J)},
                  {"semifield", std::string(S::name)},
                  {"components", std::move(comps)},
                  {"normalized", p.normalized},
                  {"verified_depth", p.verified_depth}};
}

template <Semifield S>
FlagPoint<S> point_from_json(const io::json& j, DataStore& store) {
  return io::detail::guarded([&] {
    io::detail::check_header(j, "semiflag/point", 1);
    if (CartanDatum::parse(j.at("cartan").get<std::string>()) != store.cartan())
      throw ValidationError("point file is for another Cartan type");
    if (j.at("semifield").get<std::string>() != S::name)
      throw DomainError("point file is over " + j.at("semifield").get<std::string>() + ", expected " +
                        std::string(S::name));
    FlagPoint<S> p;
    p.cartan = store.cartan();
    for (const auto& x : j.at("J")) {
      const auto k = x.get<std::size_t>();
      if (k < 1 || k > store.rank()) throw ValidationError("J index out of range");
      p.J.insert(k - 1);
    }
    const auto& comps = j.at("components");
    for (std::size_t i : complement(p.J, store.rank())) {
      const std::string key = std::to_string(i + 1);
      if (!comps.contains(key)) throw ValidationError("point lacks component " + key);
      const auto m = store.fundamental(i);
      auto v = SemiVector<S>::zero_of(*m);
      for (const auto& [label, c] : comps[key].items()) v.set(m->index_of(label), Ext<S>::parse(c.template get<std::string>()));
      if (v.is_zero()) throw ValidationError("component " + key + " is zero");
      p.components.emplace(i, std::move(v));
    }
    if (comps.size() != p.components.size()) throw ValidationError("point has components inside J");
    p.normalized = j.value("normalized", false);
    p.verified_depth = j.value("verified_depth", 0u);
    return p;
  });
}

}  // namespace semiflag
