#pragma once

// The classical side: irreducible modules V(lambda) over exact rationals,
// realized inside tensor products of minuscule fundamental modules, with an
// explicit canonical basis. From these we extract the natural-number
// divided-power matrices and the structure constants of Gamma.
//
// Canonical basis rules:
//  * every weight space one-dimensional (A1, A1xA1, the multiplicity-free A3
//    catalog): the basis vector of weight mu is the positive generator of the
//    lattice spanned by divided-power monomials applied to the highest vector.
//  * A2: the monomials f1^(a) f2^(b) f1^(c), f2^(a) f1^(b) f2^(c) with b >= a+c
//    applied to the highest vector; zero images dropped, coincident ones merged.
// Either way the result is screened: every operator entry must be natural.

#include "semiflag/based_module.hpp"
#include "semiflag/linalg.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace semiflag::classical {

using linalg::QVec;

struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PositivityError : ValidationError {
  using ValidationError::ValidationError;
};

struct EquivarianceError : ValidationError {
  using ValidationError::ValidationError;
};

/// Bumped whenever the catalog or the basis conventions change.
inline constexpr int kCatalogVersion = 1;

/// A3 modules with every weight space one-dimensional, as explicit coordinates.
inline std::vector<Weight> a3_catalog() {
  std::vector<Weight> out{Weight{{0, 0, 0}}, Weight{{0, 1, 0}}};
  for (unsigned n = 1; n <= 4; ++n) {
    out.push_back(Weight{{n, 0, 0}});
    out.push_back(Weight{{0, 0, n}});
  }
  return out;
}

inline bool in_catalog(const CartanDatum& c, const Weight& lambda) {
  if (lambda.rank() != c.rank()) return false;
  if (c.type != CartanType::A3) return true;
  const auto list = a3_catalog();
  return std::find(list.begin(), list.end(), lambda) != list.end();
}

/// A minuscule fundamental module with 0/1 operator entries.
struct FundamentalModel {
  std::size_t dim = 0;
  std::vector<std::vector<int>> weights;                           // [i][b]
  std::vector<std::vector<std::optional<std::size_t>>> e, f;       // [i][b] -> target
};

inline FundamentalModel fundamental_model(const CartanDatum& c, std::size_t k) {
  const std::size_t r = c.rank();
  FundamentalModel m;
  if (c.type == CartanType::A1xA1) {
    m.dim = 2;
    m.weights.assign(r, std::vector<int>(2, 0));
    m.e.assign(r, std::vector<std::optional<std::size_t>>(2));
    m.f = m.e;
    m.weights[k] = {1, -1};
    m.e[k][1] = 0;
    m.f[k][0] = 1;
    return m;
  }
  // Type A_r: V(omega_{k+1}) = k+1 -th exterior power of the natural module, basis =
  // (k+1)-subsets of {0..r} in lexicographic order; e_i swaps i+1 -> i.
  const std::size_t n = r + 1;
  const std::size_t size = k + 1;
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == size) {
      subsets.push_back(cur);
      return;
    }
    for (std::size_t x = start; x < n; ++x) {
      cur.push_back(x);
      self(self, x + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  m.dim = subsets.size();
  m.weights.assign(r, std::vector<int>(m.dim, 0));
  m.e.assign(r, std::vector<std::optional<std::size_t>>(m.dim));
  m.f = m.e;
  auto find = [&](const std::vector<std::size_t>& s) {
    return static_cast<std::size_t>(std::find(subsets.begin(), subsets.end(), s) - subsets.begin());
  };
  for (std::size_t b = 0; b < m.dim; ++b) {
    const auto& s = subsets[b];
    auto has = [&](std::size_t x) { return std::find(s.begin(), s.end(), x) != s.end(); };
    for (std::size_t i = 0; i < r; ++i) {
      m.weights[i][b] = (has(i) ? 1 : 0) - (has(i + 1) ? 1 : 0);
      if (has(i + 1) && !has(i)) {
        auto t = s;
        std::replace(t.begin(), t.end(), i + 1, i);
        m.e[i][b] = find(t);
      }
      if (has(i) && !has(i + 1)) {
        auto t = s;
        std::replace(t.begin(), t.end(), i, i + 1);
        m.f[i][b] = find(t);
      }
    }
  }
  return m;
}

/// Tensor product of fundamental models, with the classical coproduct.
class AmbientModel {
 public:
  AmbientModel() = default;
  explicit AmbientModel(std::vector<FundamentalModel> factors) : factors_(std::move(factors)) {
    stride_.resize(factors_.size());
    dim_ = 1;
    for (std::size_t j = factors_.size(); j-- > 0;) {
      stride_[j] = dim_;
      dim_ *= factors_[j].dim;
    }
  }

  std::size_t dim() const { return dim_; }

  int weight(std::size_t i, std::size_t idx) const {
    int w = 0;
    for (std::size_t j = 0; j < factors_.size(); ++j)
      w += factors_[j].weights[i][(idx / stride_[j]) % factors_[j].dim];
    return w;
  }

  QVec apply_e(std::size_t i, const QVec& v) const { return apply(i, v, true); }
  QVec apply_f(std::size_t i, const QVec& v) const { return apply(i, v, false); }

  QVec divided_e(std::size_t i, std::size_t n, QVec v) const {
    for (std::size_t k = 1; k <= n && !v.empty(); ++k) v = linalg::scaled(apply_e(i, v), Rational(1, k));
    return v;
  }
  QVec divided_f(std::size_t i, std::size_t n, QVec v) const {
    for (std::size_t k = 1; k <= n && !v.empty(); ++k) v = linalg::scaled(apply_f(i, v), Rational(1, k));
    return v;
  }

  /// Index of the tensor of highest vectors.
  std::size_t highest() const { return 0; }

 private:
  QVec apply(std::size_t i, const QVec& v, bool raise) const {
    QVec out;
    for (const auto& [idx, c] : v)
      for (std::size_t j = 0; j < factors_.size(); ++j) {
        const std::size_t d = (idx / stride_[j]) % factors_[j].dim;
        const auto& t = raise ? factors_[j].e[i][d] : factors_[j].f[i][d];
        if (!t) continue;
        const std::size_t target = idx - d * stride_[j] + *t * stride_[j];
        auto it = out.find(target);
        if (it == out.end())
          out.emplace(target, c);
        else if ((it->second += c) == 0)
          out.erase(it);
      }
    return out;
  }

  std::vector<FundamentalModel> factors_;
  std::vector<std::size_t> stride_;
  std::size_t dim_ = 1;
};

/// Fundamental indices, with multiplicity, whose tensor contains V(lambda).
inline std::vector<std::size_t> default_factors(const Weight& lambda) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < lambda.rank(); ++i)
    for (unsigned k = 0; k < lambda.n[i]; ++k) out.push_back(i);
  return out;
}

/// V(lambda) over Q with its canonical basis in ambient coordinates.
struct RationalModule {
  CartanDatum cartan;
  Weight lambda;
  AmbientModel ambient;
  std::vector<QVec> canonical;
  std::vector<std::string> descriptors;
  std::vector<std::vector<unsigned>> depth;  // [b] = coefficients c with wt = lambda - sum c_i alpha_i
  std::vector<std::vector<int>> weights;     // [i][b]
  std::size_t highest = 0;

  std::size_t dim() const { return canonical.size(); }

  /// Coordinates of an ambient vector in the canonical basis; throws if the
  /// vector does not lie in V(lambda).
  std::vector<Rational> coordinates(const QVec& w) const {
    std::vector<Rational> out(dim(), Rational(0));
    if (w.empty()) return out;
    const auto key = weight_key(w.begin()->first);
    auto it = solvers_.find(key);
    if (it == solvers_.end()) throw ValidationError("vector outside the weights of V(" + lambda.key() + ")");
    auto sol = it->second.solver.solve(w);
    if (!sol) throw ValidationError("vector outside V(" + lambda.key() + ")");
    for (std::size_t k = 0; k < sol->size(); ++k) out[it->second.members[k]] = (*sol)[k];
    return out;
  }

  void index_weight_spaces() {
    solvers_.clear();
    std::map<std::vector<int>, std::vector<std::size_t>> groups;
    for (std::size_t b = 0; b < dim(); ++b) groups[weight_key(canonical[b].begin()->first)].push_back(b);
    for (auto& [key, members] : groups) {
      std::vector<QVec> vecs;
      for (std::size_t b : members) vecs.push_back(canonical[b]);
      linalg::SpanSolver solver(vecs);
      if (!solver.independent()) throw ValidationError("canonical basis of V(" + lambda.key() + ") is dependent");
      solvers_[key] = {members, std::move(solver)};
    }
  }

 private:
  std::vector<int> weight_key(std::size_t idx) const {
    std::vector<int> k(cartan.rank());
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = ambient.weight(i, idx);
    return k;
  }

  struct WeightSpaceSolver {
    std::vector<std::size_t> members;
    linalg::SpanSolver solver;
  };
  std::map<std::vector<int>, WeightSpaceSolver> solvers_;
};

namespace detail {

struct WeightSpace {
  std::vector<unsigned> c;
  std::vector<QVec> span;  // independent spanning vectors
};

// Weight spaces of U^- applied to the highest vector, level by level.
inline std::map<std::vector<unsigned>, WeightSpace> weight_spaces(const AmbientModel& amb, std::size_t rank) {
  std::map<std::vector<unsigned>, WeightSpace> out;
  std::vector<unsigned> top(rank, 0);
  out[top] = {top, {QVec{{amb.highest(), Rational(1)}}}};
  std::vector<std::vector<unsigned>> level{top};
  while (!level.empty()) {
    std::map<std::vector<unsigned>, std::vector<QVec>> next;
    for (const auto& c : level)
      for (std::size_t i = 0; i < rank; ++i) {
        auto child = c;
        ++child[i];
        for (const auto& v : out[c].span) {
          QVec w = amb.apply_f(i, v);
          if (!w.empty()) next[child].push_back(std::move(w));
        }
      }
    level.clear();
    for (auto& [c, cands] : next) {
      std::vector<QVec> basis;
      for (auto& w : cands) {
        std::vector<QVec> trial = basis;
        trial.push_back(w);
        linalg::SpanSolver s(trial);
        if (s.independent()) basis = std::move(trial);
      }
      out[c] = {c, std::move(basis)};
      level.push_back(c);
    }
  }
  return out;
}

inline std::optional<Rational> ratio(const QVec& w, const QVec& v) {
  // w = r * v ?
  if (w.empty() || v.empty() || w.size() != v.size()) return std::nullopt;
  const Rational r = w.begin()->second / linalg::entry(v, w.begin()->first);
  for (const auto& [k, x] : w) {
    auto it = v.find(k);
    if (it == v.end() || it->second * r != x) return std::nullopt;
  }
  return r;
}

struct Candidate {
  std::vector<unsigned> c;
  QVec vec;
  std::string descriptor;
};

inline std::vector<Candidate> lattice_rule(const AmbientModel& amb, const CartanDatum& cartan,
                                           const Weight& lambda,
                                           const std::map<std::vector<unsigned>, WeightSpace>& spaces) {
  const std::size_t r = cartan.rank();
  std::map<std::vector<unsigned>, QVec> gen;
  std::vector<Candidate> out;
  for (const auto& [c, space] : spaces) {
    if (space.span.size() > 1)
      throw CatalogError(cartan.label() + " V(" + lambda.key() +
                         ") has a weight space of dimension > 1; not in the catalog");
  }
  // process by depth
  std::vector<std::vector<unsigned>> order;
  for (const auto& [c, s] : spaces) order.push_back(c);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return std::accumulate(a.begin(), a.end(), 0u) < std::accumulate(b.begin(), b.end(), 0u);
  });
  for (const auto& c : order) {
    const QVec& v = spaces.at(c).span.front();
    if (std::accumulate(c.begin(), c.end(), 0u) == 0) {
      gen[c] = v;
      out.push_back({c, v, "hw"});
      continue;
    }
    std::optional<Rational> g;
    for (std::size_t i = 0; i < r; ++i)
      for (unsigned a = 1; a <= c[i]; ++a) {
        auto parent = c;
        parent[i] -= a;
        auto it = gen.find(parent);
        if (it == gen.end()) continue;
        QVec w = amb.divided_f(i, a, it->second);
        if (w.empty()) continue;
        auto q = ratio(w, v);
        if (!q || *q <= 0) throw ValidationError("lattice rule: non-positive monomial image");
        g = g ? rational_gcd(*g, *q) : *q;
      }
    if (!g) throw ValidationError("lattice rule: weight space not reached by monomials");
    QVec b = linalg::scaled(v, *g);
    gen[c] = b;
    out.push_back({c, std::move(b), "lattice"});
  }
  return out;
}

inline std::vector<Candidate> a2_monomial_rule(const AmbientModel& amb, const Weight& lambda) {
  const unsigned bound = lambda.height();
  std::vector<Candidate> out;
  auto push = [&](std::size_t i, std::size_t j, unsigned a, unsigned b, unsigned c) {
    // f_i^(a) f_j^(b) f_i^(c) applied to the highest vector
    QVec v{{amb.highest(), Rational(1)}};
    v = amb.divided_f(i, c, std::move(v));
    v = amb.divided_f(j, b, std::move(v));
    v = amb.divided_f(i, a, std::move(v));
    if (v.empty()) return;
    std::vector<unsigned> depth(2, 0);
    depth[i] = a + c;
    depth[j] = b;
    for (const auto& cand : out)
      if (cand.c == depth && cand.vec == v) return;
    out.push_back({depth, std::move(v),
                   "f" + std::to_string(i + 1) + "^" + std::to_string(a) + " f" + std::to_string(j + 1) + "^" +
                       std::to_string(b) + " f" + std::to_string(i + 1) + "^" + std::to_string(c)});
  };
  for (unsigned a = 0; a <= bound; ++a)
    for (unsigned c = 0; c <= bound; ++c)
      for (unsigned b = a + c; b <= bound; ++b) push(0, 1, a, b, c);
  for (unsigned a = 0; a <= bound; ++a)
    for (unsigned c = 0; c <= bound; ++c)
      for (unsigned b = a + c; b <= bound; ++b) push(1, 0, a, b, c);
  return out;
}

}  // namespace detail

enum class BasisRule { Lattice, A2Monomial };

inline BasisRule default_rule(const CartanDatum& c) {
  return c.type == CartanType::A2 ? BasisRule::A2Monomial : BasisRule::Lattice;
}

/// Builds V(lambda) inside the tensor product of the given fundamentals
/// (default: each omega_i repeated n_i times, in index order).
inline RationalModule build_classical_module(const CartanDatum& cartan, const Weight& lambda,
                                             std::optional<std::vector<std::size_t>> factors = std::nullopt,
                                             std::optional<BasisRule> rule = std::nullopt) {
  if (!in_catalog(cartan, lambda))
    throw CatalogError("(" + cartan.label() + ", " + lambda.key() + ") is not in catalog version " +
                       std::to_string(kCatalogVersion));
  const auto fl = factors.value_or(default_factors(lambda));
  {
    Weight check = Weight::zero(cartan.rank());
    for (std::size_t i : fl) ++check.n.at(i);
    if (!(check == lambda)) throw std::invalid_argument("factor list does not sum to lambda");
  }
  std::vector<FundamentalModel> models;
  for (std::size_t i : fl) models.push_back(fundamental_model(cartan, i));
  RationalModule m;
  m.cartan = cartan;
  m.lambda = lambda;
  m.ambient = AmbientModel(std::move(models));

  const auto spaces = detail::weight_spaces(m.ambient, cartan.rank());
  const BasisRule use = rule.value_or(default_rule(cartan));
  if (use == BasisRule::A2Monomial && cartan.type != CartanType::A2)
    throw CatalogError("the monomial rule is specific to A2");
  auto cands = use == BasisRule::Lattice ? detail::lattice_rule(m.ambient, cartan, lambda, spaces)
                                         : detail::a2_monomial_rule(m.ambient, lambda);

  // counts per weight must match the weight-space dimensions
  std::map<std::vector<unsigned>, std::size_t> count;
  for (const auto& cand : cands) ++count[cand.c];
  for (const auto& [c, space] : spaces) {
    if (space.span.empty()) continue;
    if (count[c] != space.span.size())
      throw ValidationError("canonical basis candidates do not match the weight multiplicities of V(" +
                            lambda.key() + ")");
  }

  auto total = [](const std::vector<unsigned>& c) { return std::accumulate(c.begin(), c.end(), 0u); };
  std::stable_sort(cands.begin(), cands.end(), [&](const auto& x, const auto& y) {
    if (total(x.c) != total(y.c)) return total(x.c) < total(y.c);
    if (x.c != y.c) return x.c > y.c;
    return x.descriptor < y.descriptor;
  });
  m.weights.assign(cartan.rank(), {});
  for (auto& cand : cands) {
    for (std::size_t i = 0; i < cartan.rank(); ++i) m.weights[i].push_back(m.ambient.weight(i, cand.vec.begin()->first));
    m.depth.push_back(cand.c);
    m.descriptors.push_back(cand.descriptor);
    m.canonical.push_back(std::move(cand.vec));
  }
  m.highest = 0;
  m.index_weight_spaces();
  return m;
}

inline std::string basis_label(std::size_t b) { return "b" + std::to_string(b); }

/// Expresses every e_i^(n), f_i^(n) in the canonical basis and checks that all
/// entries are natural numbers.
inline BasedModule extract_nat_operators(const RationalModule& m) {
  BasedModule out;
  out.cartan = m.cartan;
  out.lambda = m.lambda;
  out.highest = m.highest;
  out.weights = m.weights;
  for (std::size_t b = 0; b < m.dim(); ++b) out.basis.push_back(basis_label(b));
  const std::size_t r = m.cartan.rank();
  out.e.resize(r);
  out.f.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    const auto [lo, hi] = std::minmax_element(m.weights[i].begin(), m.weights[i].end());
    const std::size_t bound = static_cast<std::size_t>(*hi - *lo) / 2;
    for (std::size_t n = 1; n <= bound; ++n) {
      for (bool raise : {true, false}) {
        NatMatrix mat(m.dim(), m.dim());
        for (std::size_t b = 0; b < m.dim(); ++b) {
          QVec w = raise ? m.ambient.divided_e(i, n, m.canonical[b]) : m.ambient.divided_f(i, n, m.canonical[b]);
          const auto coords = m.coordinates(w);
          for (std::size_t d = 0; d < coords.size(); ++d) {
            if (coords[d] == 0) continue;
            if (!is_natural(coords[d]))
              throw PositivityError(std::string(raise ? "e" : "f") + "_" + std::to_string(i + 1) + "^(" +
                                    std::to_string(n) + ") on V(" + m.lambda.key() + ") maps " + basis_label(b) +
                                    " to " + to_string(coords[d]) + " * " + basis_label(d));
            mat.add(d, b, to_u64(coords[d]));
          }
        }
        (raise ? out.e : out.f)[i].push_back(std::move(mat));
      }
    }
  }
  out.validate();
  return out;
}

/// Sums over the nonzero terms of (A (x) B) applied to a tensor vector.
inline void tensor_apply_add(QVec& out, const NatMatrix* a, const NatMatrix* b, std::size_t right_dim,
                             const QVec& v) {
  for (const auto& [s, c] : v) {
    const std::size_t x = s / right_dim, y = s % right_dim;
    auto images = [](const NatMatrix* m, std::size_t idx) {
      std::vector<std::pair<std::size_t, std::uint64_t>> r;
      if (!m)
        r.push_back({idx, 1});
      else
        r = m->col[idx];
      return r;
    };
    for (const auto& [x2, c1] : images(a, x))
      for (const auto& [y2, c2] : images(b, y)) {
        const std::size_t t = x2 * right_dim + y2;
        auto it = out.find(t);
        if (it == out.end())
          out.emplace(t, c * c1 * c2);
        else if ((it->second += c * c1 * c2) == 0)
          out.erase(it);
      }
  }
}

/// The equivariant map V(lambda+lambda2) -> V(lambda) (x) V(lambda2) sending the
/// highest vector to the tensor of highest vectors, solved weight by weight
/// from the top using the f_i^(n) equivariance equations.
inline GammaTable compute_gamma_table(const BasedModule& src, const BasedModule& left, const BasedModule& right) {
  if (!(src.lambda == left.lambda + right.lambda))
    throw std::invalid_argument("compute_gamma_table: weights do not add up");
  const std::size_t r = src.rank();
  GammaTable t;
  t.cartan = src.cartan;
  t.lambda = left.lambda;
  t.lambda2 = right.lambda;
  t.source_dim = src.dim();
  t.left_dim = left.dim();
  t.right_dim = right.dim();

  auto wkey = [&](std::size_t b) {
    std::vector<int> k(r);
    for (std::size_t i = 0; i < r; ++i) k[i] = src.weights[i][b];
    return k;
  };
  std::map<std::vector<int>, std::vector<std::size_t>> groups;
  std::vector<std::vector<int>> order;
  for (std::size_t b = 0; b < src.dim(); ++b) {
    auto k = wkey(b);
    if (!groups.count(k)) order.push_back(k);
    groups[k].push_back(b);
  }
  // the basis is ordered by depth, so first appearance is a valid top-down order
  std::vector<std::optional<QVec>> gamma(src.dim());
  gamma[src.highest] = QVec{{left.highest * right.dim() + right.highest, Rational(1)}};

  for (const auto& key : order) {
    const auto& members = groups[key];
    if (members.size() == 1 && members[0] == src.highest) continue;
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t k = 0; k < members.size(); ++k) pos[members[k]] = k;

    struct Equation {
      std::vector<Rational> lhs;
      QVec rhs;
    };
    std::vector<Equation> eqs;
    for (std::size_t bp = 0; bp < src.dim(); ++bp) {
      if (!gamma[bp]) continue;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t n = 1; n <= src.nil_bound(i); ++n) {
          const auto& col = src.F(i, n)->col[bp];
          if (col.empty() || !pos.count(col.front().first)) continue;
          Equation eq{std::vector<Rational>(members.size(), Rational(0)), {}};
          for (const auto& [d, c] : col) {
            if (!pos.count(d)) throw EquivarianceError("f-image spans several weights");
            eq.lhs[pos[d]] = Rational(c);
          }
          for (std::size_t a = 0; a <= n; ++a) {
            const NatMatrix* fa = a == 0 ? nullptr : left.F(i, a);
            const NatMatrix* fb = n - a == 0 ? nullptr : right.F(i, n - a);
            if ((a > 0 && !fa) || (n - a > 0 && !fb)) continue;
            tensor_apply_add(eq.rhs, fa, fb, right.dim(), *gamma[bp]);
          }
          eqs.push_back(std::move(eq));
        }
    }
    // Gaussian elimination carrying the right-hand sides.
    const std::size_t m = members.size();
    std::vector<std::size_t> pivot_row(m, eqs.size());
    std::size_t next = 0;
    for (std::size_t col = 0; col < m; ++col) {
      std::size_t p = next;
      while (p < eqs.size() && eqs[p].lhs[col] == 0) ++p;
      if (p == eqs.size()) throw EquivarianceError("Gamma recursion is underdetermined at V(" + src.lambda.key() + ")");
      std::swap(eqs[p], eqs[next]);
      const Rational d = eqs[next].lhs[col];
      for (auto& x : eqs[next].lhs) x /= d;
      eqs[next].rhs = linalg::scaled(eqs[next].rhs, Rational(1) / d);
      for (std::size_t q = 0; q < eqs.size(); ++q) {
        if (q == next || eqs[q].lhs[col] == 0) continue;
        const Rational f = eqs[q].lhs[col];
        for (std::size_t j = 0; j < m; ++j) eqs[q].lhs[j] -= f * eqs[next].lhs[j];
        linalg::axpy(eqs[q].rhs, -f, eqs[next].rhs);
      }
      pivot_row[col] = next++;
    }
    for (std::size_t q = next; q < eqs.size(); ++q)
      if (!eqs[q].rhs.empty())
        throw EquivarianceError("conflicting equivariance equations for Gamma at V(" + src.lambda.key() + ")");
    for (std::size_t col = 0; col < m; ++col) gamma[members[col]] = eqs[pivot_row[col]].rhs;
  }

  t.rows.resize(src.dim());
  for (std::size_t b = 0; b < src.dim(); ++b) {
    if (!gamma[b]) throw EquivarianceError("Gamma left undetermined on " + src.basis[b]);
    for (const auto& [s, c] : *gamma[b]) {
      if (!is_natural(c))
        throw PositivityError("Gamma(" + t.id() + ") coefficient " + to_string(c) + " at " + src.basis[b]);
      t.rows[b].push_back({s, to_u64(c)});
    }
  }
  t.validate(src, left, right);
  return t;
}

namespace detail {

using IntMat = std::vector<std::vector<BigInt>>;

inline IntMat dense(const NatMatrix* m, std::size_t n) {
  IntMat out(n, std::vector<BigInt>(n, 0));
  if (!m) return out;
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& [d, c] : m->col[s]) out[d][s] = c;
  return out;
}

inline IntMat mul(const IntMat& a, const IntMat& b) {
  const std::size_t n = a.size();
  IntMat out(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (b[k][j] != 0) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

inline IntMat lin(const IntMat& a, const BigInt& x, const IntMat& b, const BigInt& y) {
  IntMat out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = x * a[i][j] + y * b[i][j];
  return out;
}

inline bool is_zero(const IntMat& a) {
  for (const auto& row : a)
    for (const auto& x : row)
      if (x != 0) return false;
  return true;
}

}  // namespace detail

/// Checks the Chevalley and Serre relations and the divided-power recursion
/// exactly on the stored operators. Returns a list of failures (empty = ok).
inline std::vector<std::string> verify_chevalley(const BasedModule& m) {
  using detail::IntMat;
  std::vector<std::string> failures;
  const std::size_t n = m.dim();
  const std::size_t r = m.rank();
  std::vector<IntMat> e(r), f(r), h(r);
  for (std::size_t i = 0; i < r; ++i) {
    e[i] = detail::dense(m.E(i, 1), n);
    f[i] = detail::dense(m.F(i, 1), n);
    h[i] = IntMat(n, std::vector<BigInt>(n, 0));
    for (std::size_t b = 0; b < n; ++b) h[i][b][b] = m.weights[i][b];
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      IntMat comm = detail::lin(detail::mul(e[i], f[j]), 1, detail::mul(f[j], e[i]), -1);
      if (i == j) comm = detail::lin(comm, 1, h[i], -1);
      if (!detail::is_zero(comm))
        failures.push_back("[e" + std::to_string(i + 1) + ",f" + std::to_string(j + 1) + "] on " + m.id());
      if (i == j) continue;
      const int a = m.cartan.a(i, j);
      for (bool raise : {true, false}) {
        const auto& x = raise ? e : f;
        IntMat rel;
        if (a == 0) {
          rel = detail::lin(detail::mul(x[i], x[j]), 1, detail::mul(x[j], x[i]), -1);
        } else {
          // x_i^2 x_j - 2 x_i x_j x_i + x_j x_i^2
          const IntMat xi2 = detail::mul(x[i], x[i]);
          rel = detail::lin(detail::mul(xi2, x[j]), 1, detail::mul(detail::mul(x[i], x[j]), x[i]), -2);
          rel = detail::lin(rel, 1, detail::mul(x[j], xi2), 1);
        }
        if (!detail::is_zero(rel))
          failures.push_back(std::string(raise ? "Serre(e" : "Serre(f") + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ") on " + m.id());
      }
    }
  for (std::size_t i = 0; i < r; ++i)
    for (bool raise : {true, false})
      for (std::size_t k = 1; k <= m.nil_bound(i) + 1; ++k) {
        // x^(1) x^(k) = (k+1) x^(k+1)
        const IntMat xk = detail::dense(raise ? m.E(i, k) : m.F(i, k), n);
        const IntMat xk1 = detail::dense(raise ? m.E(i, k + 1) : m.F(i, k + 1), n);
        const IntMat lhs = detail::mul(raise ? e[i] : f[i], xk);
        if (!detail::is_zero(detail::lin(lhs, 1, xk1, -BigInt(k + 1))))
          failures.push_back("divided power recursion " + std::string(raise ? "e" : "f") + std::to_string(i + 1) +
                             "^(" + std::to_string(k + 1) + ") on " + m.id());
      }
  return failures;
}

/// Builds V(lambda), extracts its operators and checks the relations.
inline BasedModule generate_module(const CartanDatum& c, const Weight& lambda) {
  BasedModule m = extract_nat_operators(build_classical_module(c, lambda));
  const auto failures = verify_chevalley(m);
  if (!failures.empty()) throw ValidationError("relation failure: " + failures.front());
  return m;
}

}  // namespace semiflag::classical
