#pragma once

// Based modules (V, beta) with natural-number operator data, the semivector
// spaces V(K), and the maps E(K) and Gamma(K).

#include "semiflag/cartan.hpp"
#include "semiflag/semifield.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semiflag {

/// Raised when stored module or table data violates a structural invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sparse matrix with natural-number entries, stored by column:
/// col[src] lists (dst, c) with c > 0, sorted by dst.
struct NatMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> col;

  NatMatrix() = default;
  NatMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), col(c) {}

  static NatMatrix identity(std::size_t n) {
    NatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.col[i].push_back({i, 1});
    return m;
  }

  /// Adds c to entry (dst, src).
  void add(std::size_t dst, std::size_t src, std::uint64_t c) {
    if (c == 0) return;
    if (dst >= rows || src >= cols) throw std::out_of_range("NatMatrix index");
    auto& column = col[src];
    auto it = std::lower_bound(column.begin(), column.end(), dst,
                               [](const auto& e, std::size_t d) { return e.first < d; });
    if (it != column.end() && it->first == dst)
      it->second += c;
    else
      column.insert(it, {dst, c});
  }

  std::uint64_t at(std::size_t dst, std::size_t src) const {
    for (const auto& [d, c] : col.at(src))
      if (d == dst) return c;
    return 0;
  }

  bool is_zero() const {
    return std::all_of(col.begin(), col.end(), [](const auto& c) { return c.empty(); });
  }

  /// The product a * b (apply b first).
  friend NatMatrix compose(const NatMatrix& a, const NatMatrix& b) {
    if (a.cols != b.rows) throw DomainError("NatMatrix composition shape mismatch");
    NatMatrix r(a.rows, b.cols);
    for (std::size_t s = 0; s < b.cols; ++s)
      for (const auto& [mid, c1] : b.col[s])
        for (const auto& [d, c2] : a.col[mid]) r.add(d, s, c1 * c2);
    return r;
  }

  friend bool operator==(const NatMatrix&, const NatMatrix&) = default;
};

/// An irreducible highest-weight module with its canonical basis, the
/// divided-power operators e_i^(n), f_i^(n) as natural matrices, and the
/// weight functions l_i.
struct BasedModule {
  CartanDatum cartan;
  Weight lambda;
  std::vector<std::string> basis;
  std::size_t highest = 0;
  /// e[i][n-1] is e_i^(n) for n = 1..e[i].size(); higher powers vanish.
  std::vector<std::vector<NatMatrix>> e;
  std::vector<std::vector<NatMatrix>> f;
  /// weights[i][b] = l_i(b)
  std::vector<std::vector<int>> weights;

  std::size_t dim() const { return basis.size(); }
  std::size_t rank() const { return cartan.rank(); }
  std::string id() const { return cartan.label() + "[" + lambda.key() + "]"; }

  std::size_t nil_bound(std::size_t i) const { return e.at(i).size(); }

  /// e_i^(n), or nullptr when n exceeds the nilpotency bound.
  const NatMatrix* E(std::size_t i, std::size_t n) const {
    return (n >= 1 && n <= e.at(i).size()) ? &e[i][n - 1] : nullptr;
  }
  const NatMatrix* F(std::size_t i, std::size_t n) const {
    return (n >= 1 && n <= f.at(i).size()) ? &f[i][n - 1] : nullptr;
  }

  std::size_t index_of(const std::string& label) const {
    auto it = std::find(basis.begin(), basis.end(), label);
    if (it == basis.end()) throw ValidationError("unknown basis label " + label + " in " + id());
    return static_cast<std::size_t>(it - basis.begin());
  }

  /// Checks the structural invariants; throws ValidationError.
  void validate() const {
    const std::size_t r = rank();
    if (lambda.rank() != r) throw ValidationError(id() + ": weight rank mismatch");
    if (highest >= dim()) throw ValidationError(id() + ": highest index out of range");
    if (e.size() != r || f.size() != r || weights.size() != r)
      throw ValidationError(id() + ": operator tables do not match rank");
    for (std::size_t i = 0; i < r; ++i) {
      if (weights[i].size() != dim()) throw ValidationError(id() + ": weight table size");
      if (weights[i][highest] != static_cast<int>(lambda.n[i]))
        throw ValidationError(id() + ": l_i(highest) differs from lambda");
      const auto [lo, hi] = std::minmax_element(weights[i].begin(), weights[i].end());
      const std::size_t bound = static_cast<std::size_t>(*hi - *lo) / 2;
      if (e[i].size() != f[i].size())
        throw ValidationError(id() + ": e and f tables differ in length");
      if (e[i].size() > bound)
        throw ValidationError(id() + ": operators stored beyond the nilpotency bound");
      for (std::size_t n = 1; n <= e[i].size(); ++n) {
        for (const auto* mat : {&e[i][n - 1], &f[i][n - 1]}) {
          if (mat->rows != dim() || mat->cols != dim())
            throw ValidationError(id() + ": operator shape");
          const int shift = (mat == &e[i][n - 1] ? 2 : -2) * static_cast<int>(n);
          for (std::size_t s = 0; s < dim(); ++s)
            for (const auto& [d, c] : mat->col[s]) {
              if (c == 0) throw ValidationError(id() + ": explicit zero stored");
              if (weights[i][d] != weights[i][s] + shift)
                throw ValidationError(id() + ": operator breaks the weight grading");
            }
        }
      }
      if (!e[i].empty() && !e[i][0].col[highest].empty())
        throw ValidationError(id() + ": e_i does not kill the highest vector");
    }
  }
};

using ModulePtr = std::shared_ptr<const BasedModule>;

/// The basis beta x beta' of a tensor object; index = b * dim' + b'.
struct TensorBasis {
  ModulePtr left;
  ModulePtr right;

  TensorBasis(ModulePtr l, ModulePtr r) : left(std::move(l)), right(std::move(r)) {
    if (!left || !right) throw std::invalid_argument("TensorBasis needs two modules");
    if (!(left->cartan == right->cartan)) throw DomainError("TensorBasis over different types");
  }

  std::size_t size() const { return left->dim() * right->dim(); }
  std::size_t index(std::size_t b, std::size_t b2) const { return b * right->dim() + b2; }
  std::pair<std::size_t, std::size_t> split(std::size_t s) const {
    return {s / right->dim(), s % right->dim()};
  }
  std::string id() const { return left->id() + "x" + right->id(); }
  int weight(std::size_t i, std::size_t s) const {
    auto [b, b2] = split(s);
    return left->weights[i][b] + right->weights[i][b2];
  }
};

/// Structure constants of Gamma: V(lambda + lambda2) -> V(lambda) (x) V(lambda2).
struct GammaTable {
  CartanDatum cartan;
  Weight lambda;
  Weight lambda2;
  std::size_t source_dim = 0;
  std::size_t left_dim = 0;
  std::size_t right_dim = 0;
  /// rows[b] lists (tensor index, e_{b,s}) with e > 0, sorted by tensor index.
  std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> rows;

  Weight sum() const { return lambda + lambda2; }
  std::size_t tensor_size() const { return left_dim * right_dim; }
  std::string id() const {
    return cartan.label() + "[" + lambda.key() + "]x[" + lambda2.key() + "]";
  }

  /// As a natural matrix from beta_{lambda+lambda2} to the tensor basis.
  NatMatrix as_matrix() const {
    NatMatrix m(tensor_size(), source_dim);
    for (std::size_t b = 0; b < source_dim; ++b)
      for (const auto& [s, c] : rows[b]) m.add(s, b, c);
    return m;
  }

  /// Checks shapes, positivity, the unit row at the highest vector, and
  /// weight compatibility against the three modules.
  void validate(const BasedModule& src, const BasedModule& left, const BasedModule& right) const {
    if (!(src.lambda == sum()) || !(left.lambda == lambda) || !(right.lambda == lambda2))
      throw ValidationError(id() + ": module weights do not match the table");
    if (rows.size() != source_dim || source_dim != src.dim() || left_dim != left.dim() ||
        right_dim != right.dim())
      throw ValidationError(id() + ": table shape does not match modules");
    const std::size_t hs = left.highest * right_dim + right.highest;
    const auto& top = rows[src.highest];
    if (top.size() != 1 || top[0].first != hs || top[0].second != 1)
      throw ValidationError(id() + ": highest row is not the unit tensor");
    for (std::size_t b = 0; b < source_dim; ++b)
      for (const auto& [s, c] : rows[b]) {
        if (c == 0) throw ValidationError(id() + ": explicit zero constant");
        if (s >= tensor_size()) throw ValidationError(id() + ": tensor index out of range");
        for (std::size_t i = 0; i < cartan.rank(); ++i)
          if (src.weights[i][b] != left.weights[i][s / right_dim] + right.weights[i][s % right_dim])
            throw ValidationError(id() + ": weight-incompatible constant");
      }
  }
};

using GammaPtr = std::shared_ptr<const GammaTable>;

/// Finitely supported formal sum over a basis with coefficients in K^!.
/// Bottom coefficients are never stored, so equality is structural.
template <Semifield S>
class SemiVector {
 public:
  using value_type = Value<S>;

  SemiVector() = default;
  SemiVector(std::string space, std::size_t dim) : space_(std::move(space)), dim_(dim) {}

  static SemiVector zero(std::string space, std::size_t dim) { return SemiVector(std::move(space), dim); }
  static SemiVector unit(std::string space, std::size_t dim, std::size_t b) {
    SemiVector v(std::move(space), dim);
    v.set(b, Ext<S>::one());
    return v;
  }
  static SemiVector zero_of(const BasedModule& m) { return zero(m.id(), m.dim()); }
  static SemiVector unit_of(const BasedModule& m, std::size_t b) { return unit(m.id(), m.dim(), b); }
  static SemiVector zero_of(const TensorBasis& t) { return zero(t.id(), t.size()); }

  const std::string& space() const { return space_; }
  std::size_t dim() const { return dim_; }
  bool is_zero() const { return c_.empty(); }
  std::size_t support_size() const { return c_.size(); }

  Ext<S> operator[](std::size_t b) const {
    auto it = c_.find(b);
    return it == c_.end() ? Ext<S>::bottom() : Ext<S>(it->second);
  }

  void set(std::size_t b, const Ext<S>& k) {
    if (b >= dim_) throw std::out_of_range("SemiVector index " + std::to_string(b));
    if (k.is_bottom())
      c_.erase(b);
    else
      c_.insert_or_assign(b, k.value());
  }

  /// this[b] += k in K^!
  void accumulate(std::size_t b, const Ext<S>& k) {
    if (k.is_bottom()) return;
    if (b >= dim_) throw std::out_of_range("SemiVector index " + std::to_string(b));
    auto it = c_.find(b);
    if (it == c_.end())
      c_.emplace(b, k.value());
    else
      it->second = S::add(it->second, k.value());
  }

  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }

  /// The first supported index in basis order.
  std::size_t leading() const {
    if (c_.empty()) throw DomainError("leading() of the zero vector");
    return c_.begin()->first;
  }

  void require_same_space(const SemiVector& o) const {
    if (space_ != o.space_ || dim_ != o.dim_)
      throw DomainError("basis mismatch: " + space_ + " vs " + o.space_);
  }

  friend bool operator==(const SemiVector& a, const SemiVector& b) {
    return a.space_ == b.space_ && a.dim_ == b.dim_ && a.c_ == b.c_;
  }

 private:
  std::string space_;
  std::size_t dim_ = 0;
  std::map<std::size_t, value_type> c_;
};

template <Semifield S>
SemiVector<S> vk_add(const SemiVector<S>& u, const SemiVector<S>& v) {
  u.require_same_space(v);
  SemiVector<S> r = u;
  for (const auto& [b, k] : v) r.accumulate(b, Ext<S>(k));
  return r;
}

template <Semifield S>
SemiVector<S> vk_scale(const Ext<S>& k, const SemiVector<S>& v) {
  SemiVector<S> r(v.space(), v.dim());
  if (k.is_bottom()) return r;
  for (const auto& [b, x] : v) r.set(b, Ext<S>(S::mul(k.value(), x)));
  return r;
}

/// The transported morphism f(K) for a natural matrix f.
template <Semifield S>
SemiVector<S> apply_nat_matrix(const NatMatrix& m, const SemiVector<S>& v, const std::string& target_space) {
  if (m.cols != v.dim()) throw DomainError("matrix columns do not match vector basis " + v.space());
  SemiVector<S> r(target_space, m.rows);
  for (const auto& [b, x] : v)
    for (const auto& [d, c] : m.col[b]) r.accumulate(d, nat_scale<S>(c, Ext<S>(x)));
  return r;
}

/// Square-matrix convenience: output lives in the same space as v.
template <Semifield S>
SemiVector<S> apply_nat_matrix(const NatMatrix& m, const SemiVector<S>& v) {
  if (m.rows != m.cols) throw DomainError("target space required for non-square matrix");
  return apply_nat_matrix(m, v, v.space());
}

/// E(K): coefficient at (b, b') is v_b * v'_b'.
template <Semifield S>
SemiVector<S> e_k(const TensorBasis& t, const SemiVector<S>& v, const SemiVector<S>& v2) {
  if (v.space() != t.left->id() || v2.space() != t.right->id())
    throw DomainError("E(K) operands do not match " + t.id());
  SemiVector<S> r = SemiVector<S>::zero_of(t);
  for (const auto& [b, x] : v)
    for (const auto& [b2, y] : v2) r.set(t.index(b, b2), Ext<S>(S::mul(x, y)));
  return r;
}

inline std::string tensor_space_id(const GammaTable& t) {
  return t.cartan.label() + "[" + t.lambda.key() + "]x" + t.cartan.label() + "[" + t.lambda2.key() + "]";
}

inline std::string source_space_id(const GammaTable& t) {
  return t.cartan.label() + "[" + t.sum().key() + "]";
}

/// Gamma(K): V(lambda+lambda2)(K) -> (V(lambda) (x) V(lambda2))(K).
template <Semifield S>
SemiVector<S> gamma_k(const GammaTable& t, const SemiVector<S>& x) {
  if (x.space() != source_space_id(t) || x.dim() != t.source_dim)
    throw DomainError("Gamma(K) input " + x.space() + " does not match table " + t.id());
  SemiVector<S> r(tensor_space_id(t), t.tensor_size());
  for (const auto& [b, k] : x)
    for (const auto& [s, c] : t.rows[b]) r.accumulate(s, nat_scale<S>(c, Ext<S>(k)));
  return r;
}

/// The transpose of Gamma(K): tensor coefficients pulled back onto beta_{lambda+lambda2}.
template <Semifield S>
SemiVector<S> gamma_transpose_k(const GammaTable& t, const SemiVector<S>& w) {
  if (w.space() != tensor_space_id(t) || w.dim() != t.tensor_size())
    throw DomainError("transpose Gamma(K) input does not match table " + t.id());
  SemiVector<S> r(source_space_id(t), t.source_dim);
  for (std::size_t b = 0; b < t.source_dim; ++b)
    for (const auto& [s, c] : t.rows[b]) r.accumulate(b, nat_scale<S>(c, w[s]));
  return r;
}

}  // namespace semiflag
