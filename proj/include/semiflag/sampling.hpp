#pragma once

// Seeded random values, vectors and words for the property suites.

#include "semiflag/based_module.hpp"
#include "semiflag/semifield.hpp"

#include <random>

namespace semiflag {

using Rng = std::mt19937_64;

template <Semifield S>
Value<S> random_value(Rng& rng) {
  if constexpr (std::is_same_v<S, PosRational>) {
    std::uniform_int_distribution<int> d(1, 9);
    const int num = d(rng);
    const int den = d(rng);
    return Rational(num, den);
  } else if constexpr (std::is_same_v<S, TropicalInt>) {
    return std::uniform_int_distribution<std::int64_t>(-9, 9)(rng);
  } else {
    return S::one();
  }
}

/// Bottom with probability 1/4, otherwise a random value.
template <Semifield S>
Ext<S> random_ext(Rng& rng) {
  if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) return Ext<S>::bottom();
  return Ext<S>(random_value<S>(rng));
}

template <Semifield S>
SemiVector<S> random_vector(Rng& rng, const std::string& space, std::size_t dim, bool nonzero = false) {
  SemiVector<S> v(space, dim);
  do {
    for (std::size_t b = 0; b < dim; ++b) {
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
      v.set(b, Ext<S>(random_value<S>(rng)));
    }
  } while (nonzero && v.is_zero());
  return v;
}

template <Semifield S>
SemiVector<S> random_vector(Rng& rng, const BasedModule& m, bool nonzero = false) {
  return random_vector<S>(rng, m.id(), m.dim(), nonzero);
}

inline std::size_t random_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace semiflag
