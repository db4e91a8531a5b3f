#include "catch_amalgamated.hpp"

#include "semiflag/sampling.hpp"
#include "semiflag/store.hpp"

using namespace semiflag;

namespace {

const CartanDatum kA1 = CartanDatum::make(CartanType::A1);
const CartanDatum kA2 = CartanDatum::make(CartanType::A2);

Weight w1(unsigned a) { return Weight{{a}}; }

template <Semifield S>
SemiVector<S> vec(const BasedModule& m, std::initializer_list<std::pair<std::size_t, Ext<S>>> entries) {
  auto v = SemiVector<S>::zero_of(m);
  for (const auto& [b, k] : entries) v.set(b, k);
  return v;
}

}  // namespace

TEST_CASE("vk_add and vk_scale examples") {
  DataStore store(kA1);
  const auto m = store.module(w1(1));
  using Q = Ext<PosRational>;
  const auto u = vec<PosRational>(*m, {{0, Q(Rational(1, 2))}});
  const auto v = vec<PosRational>(*m, {{0, Q(Rational(1, 3))}, {1, Q(Rational(2))}});
  CHECK(vk_add(u, v) == vec<PosRational>(*m, {{0, Q(Rational(5, 6))}, {1, Q(Rational(2))}}));
  CHECK(vk_scale(Q(Rational(3)), v) == vec<PosRational>(*m, {{0, Q(Rational(1))}, {1, Q(Rational(6))}}));
  CHECK(vk_scale(Q::bottom(), v).is_zero());

  using T = Ext<TropicalInt>;
  const auto a = vec<TropicalInt>(*m, {{0, T(4)}});
  const auto b = vec<TropicalInt>(*m, {{0, T(-1)}, {1, T(2)}});
  CHECK(vk_add(a, b) == vec<TropicalInt>(*m, {{0, T(-1)}, {1, T(2)}}));
}

TEMPLATE_TEST_CASE("V(K) is a K^!-semimodule", "", PosRational, TropicalInt, OneElement) {
  using S = TestType;
  DataStore store(kA2);
  const auto m = store.module(Weight{{1, 1}});
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto u = random_vector<S>(rng, *m), v = random_vector<S>(rng, *m), w = random_vector<S>(rng, *m);
    const auto k = random_ext<S>(rng), l = random_ext<S>(rng);
    CHECK(vk_add(u, v) == vk_add(v, u));
    CHECK(vk_add(vk_add(u, v), w) == vk_add(u, vk_add(v, w)));
    CHECK(vk_add(u, SemiVector<S>::zero_of(*m)) == u);
    CHECK(vk_scale(k, vk_add(u, v)) == vk_add(vk_scale(k, u), vk_scale(k, v)));
    CHECK(vk_scale(ext_add(k, l), u) == vk_add(vk_scale(k, u), vk_scale(l, u)));
    CHECK(vk_scale(ext_mul(k, l), u) == vk_scale(k, vk_scale(l, u)));
    CHECK(vk_scale(Ext<S>::one(), u) == u);
  }
}

TEST_CASE("mixing bases is a domain error") {
  DataStore store(kA1);
  const auto a = SemiVector<OneElement>::unit_of(*store.module(w1(1)), 0);
  const auto b = SemiVector<OneElement>::unit_of(*store.module(w1(2)), 0);
  CHECK_THROWS_AS(vk_add(a, b), DomainError);
  const auto t = store.gamma(w1(1), w1(1));
  CHECK_THROWS_AS(gamma_k(*t, a), DomainError);
}

TEST_CASE("transported matrices: example and functoriality") {
  DataStore store(kA1);
  const auto m = store.module(w1(2));
  using Q = Ext<PosRational>;
  // e^(1) b2 = b1 and f^(1) b1 = 2 b2 in V(2 omega)
  const auto b2 = SemiVector<PosRational>::unit_of(*m, 2);
  CHECK(apply_nat_matrix(*m->E(0, 1), b2) == vec<PosRational>(*m, {{1, Q(Rational(1))}}));
  const auto b1 = vec<PosRational>(*m, {{1, Q(Rational(1, 4))}});
  CHECK(apply_nat_matrix(*m->F(0, 1), b1) == vec<PosRational>(*m, {{2, Q(Rational(1, 2))}}));

  Rng rng(3);
  const auto big = store.module(Weight{{4}});
  for (int t = 0; t < 50; ++t) {
    const auto v = random_vector<TropicalInt>(rng, *big);
    const auto& f1 = *big->F(0, 1);
    const auto& e2 = *big->E(0, 2);
    CHECK(apply_nat_matrix(compose(e2, f1), v) == apply_nat_matrix(e2, apply_nat_matrix(f1, v)));
    CHECK(apply_nat_matrix(NatMatrix::identity(big->dim()), v) == v);
    const auto x = random_vector<PosRational>(rng, *big);
    CHECK(apply_nat_matrix(compose(e2, f1), x) == apply_nat_matrix(e2, apply_nat_matrix(f1, x)));
  }
}

TEST_CASE("E(K) example") {
  DataStore store(kA1);
  const auto m = store.module(w1(1));
  const TensorBasis t(m, m);
  using T = Ext<TropicalInt>;
  const auto v = vec<TropicalInt>(*m, {{0, T(0)}, {1, T(3)}});
  const auto v2 = vec<TropicalInt>(*m, {{1, T(-2)}});
  auto expect = SemiVector<TropicalInt>::zero_of(t);
  expect.set(t.index(0, 1), T(-2));
  expect.set(t.index(1, 1), T(1));
  CHECK(e_k(t, v, v2) == expect);
  CHECK(e_k(t, SemiVector<TropicalInt>::zero_of(*m), v2).is_zero());
}

TEST_CASE("Gamma(K) on A1 omega x omega") {
  DataStore store(kA1);
  const auto t = store.gamma(w1(1), w1(1));
  // b0 -> b0 x b0, b1 -> b0 x b1 + b1 x b0, b2 -> b1 x b1
  REQUIRE(t->rows.size() == 3);
  CHECK(t->rows[0] == std::vector<std::pair<std::size_t, std::uint64_t>>{{0, 1}});
  CHECK(t->rows[1] == std::vector<std::pair<std::size_t, std::uint64_t>>{{1, 1}, {2, 1}});
  CHECK(t->rows[2] == std::vector<std::pair<std::size_t, std::uint64_t>>{{3, 1}});

  const auto src = store.module(w1(2));
  using Q = Ext<PosRational>;
  auto x = vec<PosRational>(*src, {{1, Q(Rational(2))}, {2, Q(Rational(1, 3))}});
  const auto y = gamma_k(*t, x);
  CHECK(y[0].is_bottom());
  CHECK(y[1] == Q(Rational(2)));
  CHECK(y[2] == Q(Rational(2)));
  CHECK(y[3] == Q(Rational(1, 3)));
  CHECK(gamma_transpose_k(*t, y) == vec<PosRational>(*src, {{1, Q(Rational(4))}, {2, Q(Rational(1, 3))}}));
}

TEMPLATE_TEST_CASE("Gamma(K) is additive and K^!-linear", "", PosRational, TropicalInt, OneElement) {
  using S = TestType;
  DataStore store(kA2);
  const Weight l{{1, 0}}, l2{{0, 1}};
  const auto t = store.gamma(l, l2);
  const auto src = store.module(l + l2);
  Rng rng(17);
  for (int k = 0; k < 100; ++k) {
    const auto u = random_vector<S>(rng, *src), v = random_vector<S>(rng, *src);
    const auto c = random_ext<S>(rng);
    CHECK(gamma_k(*t, vk_add(u, v)) == vk_add(gamma_k(*t, u), gamma_k(*t, v)));
    CHECK(gamma_k(*t, vk_scale(c, u)) == vk_scale(c, gamma_k(*t, u)));
  }
}

TEST_CASE("GammaTable::validate rejects corrupted tables") {
  DataStore store(kA1);
  const auto src = store.module(w1(2));
  const auto one = store.module(w1(1));
  GammaTable t = *store.gamma(w1(1), w1(1));
  CHECK_NOTHROW(t.validate(*src, *one, *one));

  GammaTable bad_top = t;
  bad_top.rows[0][0].second = 2;
  CHECK_THROWS_AS(bad_top.validate(*src, *one, *one), ValidationError);

  GammaTable bad_weight = t;
  bad_weight.rows[1].push_back({3, 1});
  CHECK_THROWS_AS(bad_weight.validate(*src, *one, *one), ValidationError);

  GammaTable bad_shape = t;
  bad_shape.rows.pop_back();
  CHECK_THROWS_AS(bad_shape.validate(*src, *one, *one), ValidationError);
}

TEST_CASE("BasedModule::validate rejects broken gradings") {
  DataStore store(kA1);
  BasedModule m = *store.module(w1(2));
  CHECK_NOTHROW(m.validate());
  BasedModule shifted = m;
  shifted.e[0][0].add(0, 0, 1);
  CHECK_THROWS_AS(shifted.validate(), ValidationError);
  BasedModule top = m;
  top.weights[0][0] = 1;
  CHECK_THROWS_AS(top.validate(), ValidationError);
}

TEST_CASE("NatMatrix basics") {
  NatMatrix a(2, 2);
  a.add(1, 0, 2);
  a.add(1, 0, 3);
  CHECK(a.at(1, 0) == 5);
  CHECK(a.at(0, 1) == 0);
  a.add(0, 1, 0);
  CHECK(a.col[1].empty());
  CHECK_THROWS_AS(a.add(2, 0, 1), std::out_of_range);
  const auto sq = compose(a, a);
  CHECK(sq.is_zero());
  CHECK(compose(a, NatMatrix::identity(2)) == a);
}
