#include "catch_amalgamated.hpp"

#include "semiflag/store.hpp"

#include <filesystem>

using namespace semiflag;
using classical::build_classical_module;
using classical::generate_module;
using linalg::QVec;

namespace {

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

std::size_t weyl_dim(const CartanDatum& c, const Weight& w) {
  const auto& n = w.n;
  switch (c.type) {
    case CartanType::A1: return n[0] + 1;
    case CartanType::A1xA1: return (n[0] + 1) * (n[1] + 1);
    case CartanType::A2: return (n[0] + 1) * (n[1] + 1) * (n[0] + n[1] + 2) / 2;
    case CartanType::A3: {
      const std::size_t a = n[0], b = n[1], d = n[2];
      return (a + 1) * (b + 1) * (d + 1) * (a + b + 2) * (b + d + 2) * (a + b + d + 3) / 12;
    }
  }
  return 0;
}

std::vector<std::pair<CartanDatum, Weight>> sample_catalog() {
  std::vector<std::pair<CartanDatum, Weight>> out;
  const auto a1 = CartanDatum::make(CartanType::A1);
  for (unsigned a = 0; a <= 5; ++a) out.push_back({a1, Weight{{a}}});
  const auto a11 = CartanDatum::make(CartanType::A1xA1);
  for (unsigned a = 0; a <= 2; ++a)
    for (unsigned b = 0; b <= 2; ++b) out.push_back({a11, Weight{{a, b}}});
  const auto a2 = CartanDatum::make(CartanType::A2);
  for (unsigned a = 0; a <= 3; ++a)
    for (unsigned b = 0; a + b <= 3; ++b) out.push_back({a2, Weight{{a, b}}});
  const auto a3 = CartanDatum::make(CartanType::A3);
  for (const auto& w : classical::a3_catalog()) out.push_back({a3, w});
  return out;
}

// Gamma read off the inclusion V(l + l2) in amb(l) (x) amb(l2): the canonical
// vectors of V(l + l2), built in the concatenated ambient, expanded in the
// products of canonical vectors of V(l) and V(l2).
std::vector<std::map<std::size_t, Rational>> inclusion_gamma(const CartanDatum& c, const Weight& l, const Weight& l2) {
  const auto left = build_classical_module(c, l);
  const auto right = build_classical_module(c, l2);
  auto factors = classical::default_factors(l);
  for (auto i : classical::default_factors(l2)) factors.push_back(i);
  const auto src = build_classical_module(c, l + l2, factors);
  const std::size_t right_amb = right.ambient.dim();

  std::vector<QVec> products;
  std::vector<std::size_t> labels;
  for (std::size_t x = 0; x < left.dim(); ++x)
    for (std::size_t y = 0; y < right.dim(); ++y) {
      QVec p;
      for (const auto& [i, a] : left.canonical[x])
        for (const auto& [j, b] : right.canonical[y]) p[i * right_amb + j] = a * b;
      products.push_back(std::move(p));
      labels.push_back(x * right.dim() + y);
    }
  const linalg::SpanSolver solver(products);
  std::vector<std::map<std::size_t, Rational>> rows;
  for (const auto& v : src.canonical) {
    const auto sol = solver.solve(v);
    REQUIRE(sol.has_value());
    std::map<std::size_t, Rational> row;
    for (std::size_t k = 0; k < sol->size(); ++k)
      if ((*sol)[k] != 0) row[labels[k]] = (*sol)[k];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_CASE("A1 operators match the closed form") {
  const auto c = CartanDatum::make(CartanType::A1);
  for (unsigned n = 0; n <= 6; ++n) {
    const auto m = generate_module(c, Weight{{n}});
    REQUIRE(m.dim() == n + 1);
    for (std::size_t k = 0; k <= n; ++k) CHECK(m.weights[0][k] == static_cast<int>(n) - 2 * static_cast<int>(k));
    for (std::size_t p = 1; p <= n; ++p)
      for (std::size_t k = 0; k <= n; ++k)
        for (std::size_t d = 0; d <= n; ++d) {
          const std::uint64_t e_expect = (k >= p && d == k - p) ? binom(n - k + p, p) : 0;
          const std::uint64_t f_expect = (k + p <= n && d == k + p) ? binom(k + p, p) : 0;
          CHECK(m.E(0, p)->at(d, k) == e_expect);
          CHECK(m.F(0, p)->at(d, k) == f_expect);
        }
    CHECK(m.E(0, n + 1) == nullptr);
  }
}

TEST_CASE("dimensions match the Weyl dimension formula") {
  for (const auto& [c, w] : sample_catalog()) {
    INFO(c.label() << " " << w.key());
    const auto m = generate_module(c, w);
    CHECK(m.dim() == weyl_dim(c, w));
    CHECK(m.highest == 0);
    CHECK(m.basis[0] == "b0");
  }
}

TEST_CASE("every catalog entry passes the relation checker") {
  for (const auto& [c, w] : sample_catalog()) {
    INFO(c.label() << " " << w.key());
    const auto m = generate_module(c, w);
    CHECK(classical::verify_chevalley(m).empty());
  }
}

TEST_CASE("the relation checker notices a corrupted operator") {
  const auto c = CartanDatum::make(CartanType::A2);
  auto m = generate_module(c, Weight{{1, 1}});
  auto& col = m.f[0][0].col[0];
  REQUIRE(!col.empty());
  col[0].second += 1;
  CHECK_FALSE(classical::verify_chevalley(m).empty());
}

TEST_CASE("minuscule fundamentals have 0/1 operators") {
  for (auto t : {CartanType::A2, CartanType::A3, CartanType::A1xA1}) {
    const auto c = CartanDatum::make(t);
    for (std::size_t i = 0; i < c.rank(); ++i) {
      const auto m = generate_module(c, Weight::fundamental(c.rank(), i));
      for (std::size_t j = 0; j < c.rank(); ++j) {
        CHECK(m.nil_bound(j) <= 1);
        for (const auto* mat : {m.E(j, 1), m.F(j, 1)})
          if (mat)
            for (const auto& column : mat->col)
              for (const auto& [d, v] : column) CHECK(v == 1);
      }
    }
  }
}

TEST_CASE("outside the catalog is an error") {
  const auto a3 = CartanDatum::make(CartanType::A3);
  CHECK_THROWS_AS(generate_module(a3, Weight{{1, 1, 0}}), classical::CatalogError);
  CHECK_THROWS_AS(generate_module(a3, Weight{{5, 0, 0}}), classical::CatalogError);
  CHECK_THROWS_AS(CartanDatum::parse("G2"), std::invalid_argument);
}

TEST_CASE("Gamma agrees with the tensor inclusion oracle") {
  struct Case {
    CartanType t;
    Weight l, l2;
  };
  const std::vector<Case> cases{
      {CartanType::A1, Weight{{1}}, Weight{{1}}},       {CartanType::A1, Weight{{2}}, Weight{{1}}},
      {CartanType::A1, Weight{{1}}, Weight{{3}}},       {CartanType::A1xA1, Weight{{1, 0}}, Weight{{0, 1}}},
      {CartanType::A1xA1, Weight{{1, 1}}, Weight{{1, 0}}}, {CartanType::A2, Weight{{1, 0}}, Weight{{0, 1}}},
      {CartanType::A2, Weight{{1, 0}}, Weight{{1, 0}}},  {CartanType::A2, Weight{{1, 1}}, Weight{{1, 0}}},
      {CartanType::A2, Weight{{1, 0}}, Weight{{1, 1}}},  {CartanType::A2, Weight{{2, 0}}, Weight{{0, 1}}},
      {CartanType::A3, Weight{{1, 0, 0}}, Weight{{1, 0, 0}}}, {CartanType::A3, Weight{{0, 0, 1}}, Weight{{0, 0, 2}}},
  };
  for (const auto& cs : cases) {
    const auto c = CartanDatum::make(cs.t);
    INFO(c.label() << " " << cs.l.key() << " + " << cs.l2.key());
    DataStore store(c);
    const auto t = store.gamma(cs.l, cs.l2);
    const auto oracle = inclusion_gamma(c, cs.l, cs.l2);
    REQUIRE(oracle.size() == t->rows.size());
    for (std::size_t b = 0; b < oracle.size(); ++b) {
      std::map<std::size_t, Rational> got;
      for (const auto& [s, v] : t->rows[b]) got[s] = Rational(v);
      CHECK(got == oracle[b]);
    }
  }
}

TEST_CASE("Gamma constants are natural and equivariant for all A2 pairs up to height 3") {
  const auto c = CartanDatum::make(CartanType::A2);
  DataStore store(c);
  for (const auto& l : weights_up_to(2, {}, 2))
    for (const auto& l2 : weights_up_to(2, {}, 3 - l.height())) {
      const auto t = store.gamma(l, l2);
      CHECK_NOTHROW(t->validate(*store.module(l + l2), *store.module(l), *store.module(l2)));
    }
}

TEST_CASE("module and gamma files round trip") {
  const auto c = CartanDatum::make(CartanType::A2);
  DataStore store(c);
  const Weight l{{1, 1}}, l2{{1, 0}};
  const auto m = store.module(l + l2);
  const auto text = io::dump(io::module_to_json(*m));
  const auto back = io::module_from_json(io::parse(text));
  CHECK(back.basis == m->basis);
  CHECK(back.e == m->e);
  CHECK(back.f == m->f);
  CHECK(back.weights == m->weights);
  CHECK(io::dump(io::module_to_json(back)) == text);

  const auto t = store.gamma(l, l2);
  const auto gj = io::gamma_to_json(*t, *m, *store.module(l), *store.module(l2));
  const auto tb = io::gamma_from_json(io::parse(io::dump(gj)), *m, *store.module(l), *store.module(l2));
  CHECK(tb.rows == t->rows);
}

TEST_CASE("malformed files are rejected") {
  const auto c = CartanDatum::make(CartanType::A1);
  const auto m = generate_module(c, Weight{{2}});
  const auto good = io::module_to_json(m);

  auto wrong_version = good;
  wrong_version["version"] = 99;
  CHECK_THROWS_AS(io::module_from_json(wrong_version), ValidationError);

  auto wrong_schema = good;
  wrong_schema["schema"] = "semiflag/other";
  CHECK_THROWS_AS(io::module_from_json(wrong_schema), ValidationError);

  auto negative = good;
  negative["ops"]["1"]["1"]["f"]["b0"]["b1"] = -1;
  CHECK_THROWS_AS(io::module_from_json(negative), ValidationError);

  auto zero = good;
  zero["ops"]["1"]["1"]["f"]["b0"]["b1"] = 0;
  CHECK_THROWS_AS(io::module_from_json(zero), ValidationError);

  auto fractional = good;
  fractional["ops"]["1"]["1"]["f"]["b0"]["b1"] = 0.5;
  CHECK_THROWS_AS(io::module_from_json(fractional), ValidationError);

  auto unknown_label = good;
  unknown_label["ops"]["1"]["1"]["f"]["b0"]["b7"] = 1;
  CHECK_THROWS_AS(io::module_from_json(unknown_label), ValidationError);

  auto missing = good;
  missing.erase("weights");
  CHECK_THROWS_AS(io::module_from_json(missing), ValidationError);

  CHECK_THROWS_AS(io::parse("{not json"), ValidationError);
}

TEST_CASE("the data store writes once and reloads identical data") {
  const auto dir = std::filesystem::temp_directory_path() / "semiflag_test_store";
  std::filesystem::remove_all(dir);
  const auto c = CartanDatum::make(CartanType::A2);
  const Weight l{{1, 0}}, l2{{0, 1}};
  std::string first_module, first_gamma;
  {
    DataStore store(c, dir);
    store.gamma(l, l2);
    REQUIRE(std::filesystem::exists(*store.module_path(l + l2)));
    REQUIRE(std::filesystem::exists(*store.gamma_path(l, l2)));
    first_module = io::read_file(*store.module_path(l + l2));
    first_gamma = io::read_file(*store.gamma_path(l, l2));
  }
  {
    DataStore store(c, dir);
    const auto t = store.gamma(l, l2);
    CHECK(t->rows == classical::compute_gamma_table(*store.module(l + l2), *store.module(l), *store.module(l2)).rows);
    CHECK(io::read_file(*store.module_path(l + l2)) == first_module);
    CHECK(io::read_file(*store.gamma_path(l, l2)) == first_gamma);
  }
  {
    // a file holding the wrong module is refused
    std::filesystem::copy_file(*DataStore(c, dir).module_path(l), *DataStore(c, dir).module_path(Weight{{2, 0}}));
    DataStore store(c, dir);
    CHECK_THROWS_AS(store.module(Weight{{2, 0}}), ValidationError);
  }
  std::filesystem::remove_all(dir);
}
