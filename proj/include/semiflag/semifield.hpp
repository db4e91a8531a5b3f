#pragma once

// Semifields, the extended coefficient domain K^! = K + {o}, and homomorphisms.
//
// A semifield is a type with static add/mul/inv/one over a value_type, plus
// parse/format for the text encodings. Three instances ship with the library;
// anything satisfying the Semifield concept can be plugged into the templates.

#include "semiflag/rational.hpp"

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace semiflag {

enum class SemifieldTag { PosRational, TropicalInt, OneElement };

/// Raised when values from different semifields (or bases) are combined.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class S>
concept Semifield = requires(const typename S::value_type& a, const typename S::value_type& b,
                             std::string_view text) {
  typename S::value_type;
  { S::name } -> std::convertible_to<std::string_view>;
  { S::add(a, b) } -> std::same_as<typename S::value_type>;
  { S::mul(a, b) } -> std::same_as<typename S::value_type>;
  { S::inv(a) } -> std::same_as<typename S::value_type>;
  { S::one() } -> std::same_as<typename S::value_type>;
  { S::parse(text) } -> std::same_as<typename S::value_type>;
  { S::format(a) } -> std::same_as<std::string>;
  { a == b } -> std::convertible_to<bool>;
};

/// Positive rationals, stored reduced, arbitrary precision.
struct PosRational {
  using value_type = Rational;
  static constexpr std::string_view name = "rational";
  static constexpr SemifieldTag tag = SemifieldTag::PosRational;

  static value_type add(const value_type& a, const value_type& b) { return a + b; }
  static value_type mul(const value_type& a, const value_type& b) { return a * b; }
  static value_type inv(const value_type& a) { return value_type(1) / a; }
  static value_type one() { return value_type(1); }
  static value_type nat_scale(std::uint64_t c, const value_type& a) { return a * c; }

  static value_type parse(std::string_view text) {
    value_type v = parse_rational(text);
    if (v <= 0) throw std::invalid_argument("not a positive rational: " + std::string(text));
    return v;
  }
  static std::string format(const value_type& a) { return to_string(a); }
};

/// Integers with add = min, mul = +. The unit is 0.
struct TropicalInt {
  using value_type = std::int64_t;
  static constexpr std::string_view name = "tropical";
  static constexpr SemifieldTag tag = SemifieldTag::TropicalInt;

  static value_type add(value_type a, value_type b) { return a < b ? a : b; }
  static value_type mul(value_type a, value_type b) {
    value_type r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("tropical product overflow");
    return r;
  }
  static value_type inv(value_type a) {
    if (a == std::numeric_limits<value_type>::min())
      throw std::overflow_error("tropical inverse overflow");
    return -a;
  }
  static value_type one() { return 0; }
  static value_type nat_scale(std::uint64_t, value_type a) { return a; }
  static value_type pow(value_type a, std::int64_t n) {
    value_type r;
    if (__builtin_mul_overflow(a, n, &r)) throw std::overflow_error("tropical power overflow");
    return r;
  }

  static value_type parse(std::string_view text) {
    std::string s(text);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not an integer: " + s);
    }
    if (used != s.size()) throw std::invalid_argument("not an integer: " + s);
    return v;
  }
  static std::string format(value_type a) { return std::to_string(a); }
};

/// The semifield {1}.
struct OneElement {
  struct value_type {
    friend constexpr bool operator==(value_type, value_type) { return true; }
    friend constexpr auto operator<=>(value_type, value_type) { return std::strong_ordering::equal; }
  };
  static constexpr std::string_view name = "one";
  static constexpr SemifieldTag tag = SemifieldTag::OneElement;

  static value_type add(value_type, value_type) { return {}; }
  static value_type mul(value_type, value_type) { return {}; }
  static value_type inv(value_type) { return {}; }
  static value_type one() { return {}; }
  static value_type nat_scale(std::uint64_t, value_type) { return {}; }
  static value_type pow(value_type, std::int64_t) { return {}; }

  static value_type parse(std::string_view text) {
    if (text != "1") throw std::invalid_argument("the one-element semifield only has 1");
    return {};
  }
  static std::string format(value_type) { return "1"; }
};

template <Semifield S>
using Value = typename S::value_type;

/// a^n for any integer n; negative exponents go through inv.
template <Semifield S>
Value<S> sf_pow(const Value<S>& a, std::int64_t n) {
  if constexpr (requires { S::pow(a, n); }) {
    return S::pow(a, n);
  } else {
    if (n < 0) return S::inv(sf_pow<S>(a, -n));
    Value<S> result = S::one();
    Value<S> base = a;
    while (n > 0) {
      if (n & 1) result = S::mul(result, base);
      n >>= 1;
      if (n > 0) base = S::mul(base, base);
    }
    return result;
  }
}

/// c-fold sum a + ... + a, c >= 1.
template <Semifield S>
Value<S> sf_nat_scale(std::uint64_t c, const Value<S>& a) {
  if constexpr (requires { S::nat_scale(c, a); }) {
    return S::nat_scale(c, a);
  } else {
    // double-and-add
    std::optional<Value<S>> acc;
    Value<S> base = a;
    while (c > 0) {
      if (c & 1) acc = acc ? S::add(*acc, base) : base;
      c >>= 1;
      if (c > 0) base = S::add(base, base);
    }
    return *acc;
  }
}

/// An element of K^!: either the adjoined symbol o (bottom) or a value of K.
template <Semifield S>
class Ext {
 public:
  using semifield = S;

  Ext() = default;  // bottom
  Ext(Value<S> v) : v_(std::move(v)) {}  // NOLINT(google-explicit-constructor)

  static Ext bottom() { return Ext(); }
  static Ext one() { return Ext(S::one()); }

  bool is_bottom() const { return !v_.has_value(); }
  const Value<S>& value() const {
    if (!v_) throw DomainError("value() on bottom element");
    return *v_;
  }

  friend bool operator==(const Ext& a, const Ext& b) {
    if (a.is_bottom() || b.is_bottom()) return a.is_bottom() == b.is_bottom();
    return *a.v_ == *b.v_;
  }

  std::string str() const { return is_bottom() ? std::string("o") : S::format(*v_); }

  static Ext parse(std::string_view text) {
    if (text == "o") return bottom();
    return Ext(S::parse(text));
  }

 private:
  std::optional<Value<S>> v_;
};

template <Semifield S>
Ext<S> ext_add(const Ext<S>& a, const Ext<S>& b) {
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  return Ext<S>(S::add(a.value(), b.value()));
}

template <Semifield S>
Ext<S> ext_mul(const Ext<S>& a, const Ext<S>& b) {
  if (a.is_bottom() || b.is_bottom()) return Ext<S>::bottom();
  return Ext<S>(S::mul(a.value(), b.value()));
}

template <Semifield S>
Ext<S> nat_scale(std::uint64_t c, const Ext<S>& k) {
  if (c == 0 || k.is_bottom()) return Ext<S>::bottom();
  return Ext<S>(sf_nat_scale<S>(c, k.value()));
}

/// A map of semifields From -> To. Homomorphism laws are the caller's claim;
/// check_hom_laws samples them.
template <Semifield From, Semifield To>
struct SemifieldHom {
  std::string name;
  std::function<Value<To>(const Value<From>&)> map;
};

template <Semifield From, Semifield To>
Ext<To> hom_apply(const SemifieldHom<From, To>& h, const Ext<From>& k) {
  if (k.is_bottom()) return Ext<To>::bottom();
  return Ext<To>(h.map(k.value()));
}

template <Semifield S>
SemifieldHom<S, S> identity_hom() {
  return {"identity", [](const Value<S>& v) { return v; }};
}

/// The unique homomorphism K -> {1}.
template <Semifield S>
SemifieldHom<S, OneElement> collapse_hom() {
  return {"collapse", [](const Value<S>&) { return OneElement::value_type{}; }};
}

/// a -> c*a on the tropical integers, c >= 1, preserves min and +.
inline SemifieldHom<TropicalInt, TropicalInt> tropical_scaling_hom(std::int64_t c) {
  if (c < 1) throw std::invalid_argument("tropical scaling factor must be positive");
  return {"scale" + std::to_string(c), [c](std::int64_t a) { return TropicalInt::pow(a, c); }};
}

template <Semifield A, Semifield B, Semifield C>
SemifieldHom<A, C> compose(const SemifieldHom<B, C>& g, const SemifieldHom<A, B>& f) {
  return {g.name + "*" + f.name, [g, f](const Value<A>& a) { return g.map(f.map(a)); }};
}

/// True when h preserves add, mul and one on every pair drawn from samples.
template <Semifield From, Semifield To, class Range>
bool check_hom_laws(const SemifieldHom<From, To>& h, const Range& samples) {
  if (!(h.map(From::one()) == To::one())) return false;
  for (const auto& a : samples)
    for (const auto& b : samples) {
      if (!(h.map(From::add(a, b)) == To::add(h.map(a), h.map(b)))) return false;
      if (!(h.map(From::mul(a, b)) == To::mul(h.map(a), h.map(b)))) return false;
    }
  return true;
}

inline std::string_view tag_name(SemifieldTag tag) {
  switch (tag) {
    case SemifieldTag::PosRational: return PosRational::name;
    case SemifieldTag::TropicalInt: return TropicalInt::name;
    case SemifieldTag::OneElement: return OneElement::name;
  }
  return "?";
}

inline SemifieldTag parse_tag(std::string_view text) {
  if (text == PosRational::name) return SemifieldTag::PosRational;
  if (text == TropicalInt::name) return SemifieldTag::TropicalInt;
  if (text == OneElement::name) return SemifieldTag::OneElement;
  throw std::invalid_argument("unknown semifield: " + std::string(text));
}

template <class T>
struct type_tag {
  using type = T;
};

/// Calls fn(type_tag<S>{}) for the built-in semifield named by tag.
template <class Fn>
decltype(auto) with_semifield(SemifieldTag tag, Fn&& fn) {
  switch (tag) {
    case SemifieldTag::PosRational: return fn(type_tag<PosRational>{});
    case SemifieldTag::TropicalInt: return fn(type_tag<TropicalInt>{});
    case SemifieldTag::OneElement: return fn(type_tag<OneElement>{});
  }
  throw std::invalid_argument("unknown semifield tag");
}

}  // namespace semiflag
