#include "catch_amalgamated.hpp"

#include "semiflag/explorer.hpp"
#include "semiflag/flag_points.hpp"

using namespace semiflag;

namespace {

const CartanDatum kA1 = CartanDatum::make(CartanType::A1);
const CartanDatum kA2 = CartanDatum::make(CartanType::A2);

// All subsets X of the source basis whose Gamma rows cover exactly the support Y.
std::vector<std::set<std::size_t>> subset_preimages(const GammaTable& t, const std::set<std::size_t>& y) {
  std::vector<std::size_t> allowed;
  for (std::size_t b = 0; b < t.source_dim; ++b) {
    bool inside = true;
    for (const auto& [s, c] : t.rows[b]) inside = inside && y.count(s);
    if (inside) allowed.push_back(b);
  }
  std::vector<std::set<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << allowed.size()); ++mask) {
    std::set<std::size_t> x, cover;
    for (std::size_t k = 0; k < allowed.size(); ++k)
      if (mask & (std::size_t{1} << k)) {
        x.insert(allowed[k]);
        for (const auto& [s, c] : t.rows[allowed[k]]) cover.insert(s);
      }
    if (cover == y) out.push_back(x);
  }
  return out;
}

template <Semifield S>
std::set<std::size_t> support(const SemiVector<S>& v) {
  std::set<std::size_t> s;
  for (const auto& [b, x] : v) s.insert(b);
  return s;
}

SemiVector<OneElement> from_support(const std::string& space, std::size_t dim, const std::set<std::size_t>& s) {
  SemiVector<OneElement> v(space, dim);
  for (auto b : s) v.set(b, Ext<OneElement>::one());
  return v;
}

}  // namespace

TEST_CASE("basepoint and normalization") {
  DataStore store(kA2);
  const auto p = basepoint<TropicalInt>(store, {});
  REQUIRE(p.components.size() == 2);
  for (const auto& [i, v] : p.components) {
    CHECK(v.support_size() == 1);
    CHECK(v[0] == Ext<TropicalInt>(0));
  }
  const auto pj = basepoint<PosRational>(store, {1});
  CHECK(pj.components.size() == 1);
  CHECK(pj.components.count(0) == 1);

  auto q = p;
  q.components.at(0).set(0, Ext<TropicalInt>(5));
  q.components.at(0).set(2, Ext<TropicalInt>(7));
  const auto n = normalize(q);
  CHECK(n.components.at(0)[0] == Ext<TropicalInt>(0));
  CHECK(n.components.at(0)[2] == Ext<TropicalInt>(2));
  CHECK(points_equal(q, n));
  CHECK_FALSE(points_equal(p, n));

  auto z = p;
  z.components.at(1) = SemiVector<TropicalInt>::zero_of(*store.fundamental(1));
  CHECK_THROWS_AS(normalize(z), DomainError);
  CHECK_THROWS_AS(points_equal(p, basepoint<TropicalInt>(store, {0})), DomainError);
}

TEST_CASE("A1 expansion matches the closed form over Q and over the tropical integers") {
  DataStore store(kA1);
  const Rational t(3, 5);
  FlagPoint<PosRational> p = basepoint<PosRational>(store, {});
  p.components.at(0).set(1, Ext<PosRational>(t));
  Expansion<PosRational> ex(store, p);
  for (unsigned n = 1; n <= 5; ++n) {
    const auto& x = ex.get(Weight{{n}});
    REQUIRE(x.dim() == n + 1);
    Rational power = 1;
    for (std::size_t k = 0; k <= n; ++k) {
      CHECK(x[k] == Ext<PosRational>(power));
      power *= t;
    }
  }
  CHECK(check_consistency(ex, 5).ok);

  FlagPoint<TropicalInt> q = basepoint<TropicalInt>(store, {});
  q.components.at(0).set(1, Ext<TropicalInt>(-4));
  Expansion<TropicalInt> eq(store, q);
  for (unsigned n = 1; n <= 5; ++n)
    for (std::size_t k = 0; k <= n; ++k) CHECK(eq.get(Weight{{n}})[k] == Ext<TropicalInt>(-4 * static_cast<int>(k)));
}

TEST_CASE("the {1} solver agrees with brute force over subsets") {
  for (auto [type, l, l2] : std::vector<std::tuple<CartanType, Weight, Weight>>{
           {CartanType::A1, Weight{{1}}, Weight{{1}}},
           {CartanType::A1, Weight{{2}}, Weight{{1}}},
           {CartanType::A2, Weight{{1, 0}}, Weight{{0, 1}}},
           {CartanType::A2, Weight{{1, 0}}, Weight{{1, 0}}},
           {CartanType::A2, Weight{{1, 1}}, Weight{{1, 0}}},
           {CartanType::A1xA1, Weight{{1, 1}}, Weight{{0, 1}}}}) {
    DataStore store(CartanDatum::make(type));
    const auto t = store.gamma(l, l2);
    const auto left = store.module(l), right = store.module(l2);
    const TensorBasis tb(left, right);
    std::size_t unique = 0, none = 0, many = 0;
    for (const auto& a : nonempty_subsets(left->dim()))
      for (const auto& b : nonempty_subsets(right->dim())) {
        std::set<std::size_t> y;
        for (auto x : a)
          for (auto z : b) y.insert(tb.index(x, z));
        const auto oracle = subset_preimages(*t, y);
        const auto target = from_support(tb.id(), tb.size(), y);
        INFO(t->id());
        if (oracle.empty()) {
          ++none;
          CHECK_THROWS_AS(solve_gamma(store, l, l2, target), NoSolution);
        } else if (oracle.size() == 1) {
          ++unique;
          CHECK(support(solve_gamma(store, l, l2, target)) == oracle.front());
        } else {
          ++many;
          CHECK_THROWS_AS(solve_gamma(store, l, l2, target), AmbiguousSolution);
        }
      }
    CHECK(unique > 0);
    CHECK(unique + none + many == (std::size_t{1} << left->dim()) * (std::size_t{1} << right->dim()) -
                                     (std::size_t{1} << left->dim()) - (std::size_t{1} << right->dim()) + 1);
  }
}

TEST_CASE("the tropical solver agrees with brute force on small values") {
  DataStore store(kA2);
  const Weight l{{1, 0}}, l2{{0, 1}};
  const auto t = store.gamma(l, l2);
  const TensorBasis tb(store.module(l), store.module(l2));
  const std::vector<Ext<TropicalInt>> values{Ext<TropicalInt>::bottom(), Ext<TropicalInt>(0), Ext<TropicalInt>(1),
                                           Ext<TropicalInt>(2)};
  Rng rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    auto v = random_vector<TropicalInt>(rng, *tb.left, true);
    auto v2 = random_vector<TropicalInt>(rng, *tb.right, true);
    for (auto* w : {&v, &v2}) {
      SemiVector<TropicalInt> clipped(w->space(), w->dim());
      for (const auto& [b, x] : *w) clipped.set(b, Ext<TropicalInt>(std::abs(x) % 2));
      *w = clipped;
    }
    const auto y = e_k(tb, v, v2);
    std::vector<SemiVector<TropicalInt>> found;
    const std::size_t n = t->source_dim;
    std::vector<std::size_t> digit(n, 0);
    while (true) {
      SemiVector<TropicalInt> x(source_space_id(*t), n);
      for (std::size_t b = 0; b < n; ++b) x.set(b, values[digit[b]]);
      if (gamma_k(*t, x) == y) found.push_back(x);
      std::size_t k = 0;
      while (k < n && ++digit[k] == values.size()) digit[k++] = 0;
      if (k == n) break;
    }
    if (found.empty())
      CHECK_THROWS_AS(solve_gamma(store, l, l2, y), NoSolution);
    else if (found.size() == 1)
      CHECK(solve_gamma(store, l, l2, y) == found.front());
    else
      CHECK_THROWS_AS(solve_gamma(store, l, l2, y), AmbiguousSolution);
  }
}

TEST_CASE("the rational solver inverts Gamma and rejects non-images") {
  DataStore store(kA2);
  const Weight l{{1, 1}}, l2{{0, 1}};
  const auto t = store.gamma(l, l2);
  Rng rng(4);
  for (int k = 0; k < 40; ++k) {
    const auto x = random_vector<PosRational>(rng, *store.module(l + l2));
    CHECK(solve_gamma(store, l, l2, gamma_k(*t, x)) == x);
  }
  const TensorBasis tb(store.module(l), store.module(l2));
  auto y = SemiVector<PosRational>::zero_of(tb);
  y.set(tb.index(0, 1), Ext<PosRational>(Rational(1)));
  CHECK_THROWS_AS(solve_gamma(store, l, l2, y), NoSolution);
}

TEST_CASE("the action preserves consistency and the example of the CLI") {
  DataStore store(kA1);
  const auto p = verified(store, basepoint<PosRational>(store, {}), 3);
  const auto q = act(store, parse_word<PosRational>("-1:2/3", 1), p);
  CHECK(q.components.at(0)[0] == Ext<PosRational>(Rational(1)));
  CHECK(q.components.at(0)[1] == Ext<PosRational>(Rational(2, 3)));
  CHECK(q.verified_depth == 3);

  DataStore s2(kA2);
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const auto w = random_word<PosRational>(rng, 2, 5);
    const auto r = act(s2, w, verified(s2, basepoint<PosRational>(s2, {}), 3));
    CHECK(check_consistency(s2, r, 4).ok);
    const auto tw = random_word<TropicalInt>(rng, 2, 5);
    CHECK(check_consistency(s2, act(s2, tw, basepoint<TropicalInt>(s2, {})), 4).ok);
    const auto ow = map_word(collapse_hom<TropicalInt>(), tw);
    CHECK(check_consistency(s2, act(s2, ow, basepoint<OneElement>(s2, {})), 4).ok);
  }
}

TEST_CASE("the action on partial flags with J nonempty") {
  DataStore store(kA2);
  const JSubset J{1};
  const auto p = act(store, parse_word<TropicalInt>("-1:2 -2:5 -1:-1", 2), basepoint<TropicalInt>(store, J));
  CHECK(p.components.size() == 1);
  CHECK(check_consistency(store, p, 4).ok);
  CHECK_THROWS_AS(expand(store, p, Weight{{0, 1}}), DomainError);
}

TEST_CASE("rational points are consistent over Q") {
  DataStore store(kA2);
  Rng rng(77);
  for (int k = 0; k < 10; ++k) {
    const auto p = act(store, random_word<PosRational>(rng, 2, 6), basepoint<PosRational>(store, {}));
    const auto cc = to_classical(store, p, 4);
    CHECK(cc.equations > 0);
    Expansion<PosRational> ex(store, p);
    for (const auto& [w, dense] : cc.x)
      for (std::size_t b = 0; b < dense.size(); ++b)
        CHECK((dense[b] == 0 ? Ext<PosRational>::bottom() : Ext<PosRational>(dense[b])) == ex.get(w)[b]);
  }
}

TEST_CASE("semifield maps commute with the action") {
  DataStore store(kA2);
  Rng rng(19);
  const auto collapse = collapse_hom<TropicalInt>();
  const auto scale = tropical_scaling_hom(2);
  const auto q_collapse = collapse_hom<PosRational>();
  for (int k = 0; k < 20; ++k) {
    const auto w = random_word<TropicalInt>(rng, 2, 5);
    const auto p = act(store, random_word<TropicalInt>(rng, 2, 3), basepoint<TropicalInt>(store, {}));
    CHECK(map_semifield(act(store, w, p), collapse) == act(store, map_word(collapse, w), map_semifield(p, collapse)));
    CHECK(map_semifield(act(store, w, p), scale) == act(store, map_word(scale, w), map_semifield(p, scale)));
    const auto mapped = map_semifield(p, scale);
    CHECK(check_consistency(store, mapped, 4).ok);

    const auto wq = random_word<PosRational>(rng, 2, 4);
    const auto pq = act(store, wq, basepoint<PosRational>(store, {}));
    CHECK(check_consistency(store, map_semifield(pq, q_collapse), 4).ok);
  }
}

TEST_CASE("an unsupported pair of components is rejected") {
  DataStore store(kA1);
  FlagPoint<OneElement> p = basepoint<OneElement>(store, {});
  p.components.at(0) = SemiVector<OneElement>::zero_of(*store.fundamental(0));
  const auto res = check_consistency(store, p, 3);
  CHECK_FALSE(res.ok);
  CHECK_THROWS_AS(verified(store, p, 3), NoSolution);
}

TEST_CASE("point files round trip and reject malformed input") {
  DataStore store(kA2);
  const auto p = act(store, parse_word<PosRational>("-1:2/3 -2:5", 2), basepoint<PosRational>(store, {}));
  const auto j = point_to_json(p, store);
  const auto back = point_from_json<PosRational>(io::parse(io::dump(j)), store);
  CHECK(back == p);
  CHECK(io::dump(point_to_json(back, store)) == io::dump(j));

  CHECK_THROWS_AS(point_from_json<TropicalInt>(j, store), DomainError);
  auto bad_version = j;
  bad_version["version"] = 2;
  CHECK_THROWS_AS(point_from_json<PosRational>(bad_version, store), ValidationError);
  auto missing = j;
  missing["components"].erase("2");
  CHECK_THROWS_AS(point_from_json<PosRational>(missing, store), ValidationError);
  auto negative = j;
  negative["components"]["1"]["b0"] = "-1";
  CHECK_THROWS_AS(point_from_json<PosRational>(negative, store), ValidationError);
  auto label = j;
  label["components"]["1"]["b9"] = "1";
  CHECK_THROWS_AS(point_from_json<PosRational>(label, store), ValidationError);
  DataStore other(kA1);
  CHECK_THROWS_AS(point_from_json<PosRational>(j, other), ValidationError);
}
