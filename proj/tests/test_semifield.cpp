#include "catch_amalgamated.hpp"

#include "semiflag/sampling.hpp"
#include "semiflag/semifield.hpp"

using namespace semiflag;

using TExt = Ext<TropicalInt>;
using QExt = Ext<PosRational>;
using OExt = Ext<OneElement>;

namespace {

struct Plain {
  using value_type = Rational;
  static constexpr std::string_view name = "plain";
  static value_type add(const value_type& a, const value_type& b) { return a + b; }
  static value_type mul(const value_type& a, const value_type& b) { return a * b; }
  static value_type inv(const value_type& a) { return 1 / a; }
  static value_type one() { return 1; }
  static value_type parse(std::string_view t) { return parse_rational(t); }
  static std::string format(const value_type& a) { return to_string(a); }
};

}  // namespace

TEST_CASE("bottom is neutral for addition and absorbing for multiplication") {
  const QExt a(Rational(3, 4));
  CHECK(ext_add(QExt::bottom(), a) == a);
  CHECK(ext_add(a, QExt::bottom()) == a);
  CHECK(ext_add(QExt::bottom(), QExt::bottom()).is_bottom());
  CHECK(ext_mul(QExt::bottom(), a).is_bottom());
  CHECK(ext_mul(a, QExt::bottom()).is_bottom());
}

TEST_CASE("ext_add examples") {
  CHECK(ext_add(TExt(2), TExt(3)) == TExt(2));
  CHECK(ext_add(QExt(Rational(1, 2)), QExt(Rational(1, 3))) == QExt(Rational(5, 6)));
  CHECK(ext_add(OExt::one(), OExt::one()) == OExt::one());
}

TEST_CASE("ext_mul examples") {
  CHECK(ext_mul(TExt(2), TExt(3)) == TExt(5));
  CHECK(ext_mul(OExt::one(), OExt::one()) == OExt::one());
  CHECK(ext_mul(QExt(Rational(2, 3)), QExt(Rational(3, 4))) == QExt(Rational(1, 2)));
}

TEST_CASE("nat_scale examples") {
  CHECK(nat_scale(0, QExt(Rational(5))).is_bottom());
  CHECK(nat_scale(0, TExt(5)).is_bottom());
  CHECK(nat_scale(3, TExt(7)) == TExt(7));
  CHECK(nat_scale(2, QExt(Rational(1, 3))) == QExt(Rational(2, 3)));
  CHECK(nat_scale(4, QExt::bottom()).is_bottom());
}

TEST_CASE("fallback nat_scale and pow agree with the specialised ones") {
  static_assert(Semifield<Plain>);
  for (std::uint64_t c = 1; c < 20; ++c) CHECK(sf_nat_scale<Plain>(c, Rational(2, 7)) == Rational(2 * c, 7));
  CHECK(sf_pow<Plain>(Rational(2, 3), 5) == Rational(32, 243));
  CHECK(sf_pow<Plain>(Rational(2, 3), -2) == Rational(9, 4));
  CHECK(sf_pow<Plain>(Rational(2, 3), 0) == 1);
}

TEMPLATE_TEST_CASE("K^! laws on random samples", "", PosRational, TropicalInt, OneElement) {
  using S = TestType;
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    const auto a = random_ext<S>(rng), b = random_ext<S>(rng), c = random_ext<S>(rng);
    CHECK(ext_add(a, b) == ext_add(b, a));
    CHECK(ext_mul(a, b) == ext_mul(b, a));
    CHECK(ext_add(ext_add(a, b), c) == ext_add(a, ext_add(b, c)));
    CHECK(ext_mul(ext_mul(a, b), c) == ext_mul(a, ext_mul(b, c)));
    CHECK(ext_mul(a, ext_add(b, c)) == ext_add(ext_mul(a, b), ext_mul(a, c)));
    CHECK(ext_mul(a, Ext<S>::one()) == a);
    if (!a.is_bottom()) CHECK(S::mul(S::inv(a.value()), a.value()) == S::one());
    const std::uint64_t n = rng() % 7, m = rng() % 7;
    CHECK(nat_scale<S>(n + m, a) == ext_add(nat_scale<S>(n, a), nat_scale<S>(m, a)));
  }
}

TEST_CASE("parsing and formatting") {
  CHECK(PosRational::parse("6/4") == Rational(3, 2));
  CHECK(PosRational::format(Rational(3, 2)) == "3/2");
  CHECK_THROWS_AS(PosRational::parse("-1/2"), std::invalid_argument);
  CHECK_THROWS_AS(PosRational::parse("0"), std::invalid_argument);
  CHECK_THROWS_AS(PosRational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(PosRational::parse("x"), std::invalid_argument);
  CHECK(TropicalInt::parse("-12") == -12);
  CHECK_THROWS_AS(TropicalInt::parse("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(OneElement::parse("2"), std::invalid_argument);
  CHECK(TExt::parse("o").is_bottom());
  CHECK(TExt::parse("4") == TExt(4));
  CHECK(QExt::bottom().str() == "o");
  CHECK(parse_tag("tropical") == SemifieldTag::TropicalInt);
  CHECK_THROWS_AS(parse_tag("real"), std::invalid_argument);
}

TEST_CASE("tropical overflow is reported") {
  const auto big = std::numeric_limits<std::int64_t>::max();
  CHECK_THROWS_AS(TropicalInt::mul(big, 1), std::overflow_error);
  CHECK_THROWS_AS(TropicalInt::pow(big, 2), std::overflow_error);
}

TEST_CASE("homomorphisms") {
  const auto collapse = collapse_hom<TropicalInt>();
  CHECK(hom_apply(collapse, TExt(5)) == OExt::one());
  CHECK(hom_apply(collapse, TExt::bottom()).is_bottom());
  const auto id = identity_hom<PosRational>();
  CHECK(hom_apply(id, QExt(Rational(2, 9))) == QExt(Rational(2, 9)));

  std::vector<std::int64_t> trop{-7, -2, 0, 1, 3, 8};
  CHECK(check_hom_laws(tropical_scaling_hom(3), trop));
  CHECK(check_hom_laws(collapse, trop));
  const SemifieldHom<TropicalInt, TropicalInt> shift{"shift", [](std::int64_t a) { return a + 1; }};
  CHECK_FALSE(check_hom_laws(shift, trop));

  std::vector<Rational> q{Rational(1, 2), Rational(3), Rational(5, 7)};
  CHECK(check_hom_laws(collapse_hom<PosRational>(), q));
  CHECK(check_hom_laws(identity_hom<PosRational>(), q));

  const auto composed = compose(collapse_hom<TropicalInt>(), tropical_scaling_hom(2));
  CHECK(hom_apply(composed, TExt(4)) == OExt::one());
  CHECK_THROWS_AS(tropical_scaling_hom(0), std::invalid_argument);
}
