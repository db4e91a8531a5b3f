#pragma once

// Per-Cartan-type cache of module data and Gamma tables. Data is read from a
// directory when present and otherwise generated (and written back when a
// directory was given).
//
// Layout under the data directory:
//   <type>/module_<n1-n2-...>.json
//   <type>/gamma_<lambda>_<lambda2>.json

#include "semiflag/classical.hpp"
#include "semiflag/serialize.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <utility>

namespace semiflag {

inline std::string file_key(const Weight& w) {
  std::string out;
  for (std::size_t i = 0; i < w.n.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(w.n[i]);
  }
  return out;
}

/// A left inverse of a Gamma table over Q: rows[k] is the tensor index used
/// for the k-th equation and inverse maps those entries back to the source.
struct GammaLeftInverse {
  std::vector<std::size_t> rows;
  std::vector<std::vector<Rational>> inverse;
};

inline GammaLeftInverse left_inverse(const GammaTable& t) {
  const std::size_t n = t.source_dim;
  // choose independent tensor rows greedily
  std::vector<linalg::QVec> row_vecs(t.tensor_size());
  for (std::size_t b = 0; b < n; ++b)
    for (const auto& [s, c] : t.rows[b]) row_vecs[s].emplace(b, Rational(c));
  GammaLeftInverse out;
  std::vector<linalg::QVec> chosen;
  for (std::size_t s = 0; s < row_vecs.size() && out.rows.size() < n; ++s) {
    if (row_vecs[s].empty()) continue;
    auto trial = chosen;
    trial.push_back(row_vecs[s]);
    if (linalg::SpanSolver(trial).independent()) {
      chosen = std::move(trial);
      out.rows.push_back(s);
    }
  }
  if (out.rows.size() != n) throw ValidationError("Gamma(" + t.id() + ") is not injective over Q");
  std::vector<std::vector<Rational>> square(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t k = 0; k < n; ++k)
    for (const auto& [b, c] : chosen[k]) square[k][b] = c;
  auto inv = linalg::invert(std::move(square));
  if (!inv) throw ValidationError("Gamma(" + t.id() + ") pivot block is singular");
  out.inverse = std::move(*inv);
  return out;
}

class DataStore {
 public:
  explicit DataStore(CartanDatum cartan, std::optional<std::filesystem::path> dir = std::nullopt)
      : cartan_(std::move(cartan)), dir_(std::move(dir)) {}

  const CartanDatum& cartan() const { return cartan_; }
  std::size_t rank() const { return cartan_.rank(); }

  ModulePtr module(const Weight& lambda) {
    if (lambda.rank() != rank()) throw DomainError("weight rank does not match " + cartan_.label());
    auto it = modules_.find(lambda);
    if (it != modules_.end()) return it->second;
    ModulePtr m;
    const auto path = module_path(lambda);
    if (path && std::filesystem::exists(*path)) {
      m = std::make_shared<BasedModule>(io::load_module(*path));
      if (!(m->cartan == cartan_) || !(m->lambda == lambda))
        throw ValidationError(path->string() + " does not hold " + cartan_.label() + " V(" + lambda.key() + ")");
    } else {
      m = std::make_shared<BasedModule>(classical::generate_module(cartan_, lambda));
      if (path) io::export_module(*m, *path);
    }
    modules_.emplace(lambda, m);
    return m;
  }

  ModulePtr fundamental(std::size_t i) { return module(Weight::fundamental(rank(), i)); }

  GammaPtr gamma(const Weight& lambda, const Weight& lambda2) {
    const auto key = std::make_pair(lambda, lambda2);
    auto it = gammas_.find(key);
    if (it != gammas_.end()) return it->second;
    const auto src = module(lambda + lambda2);
    const auto left = module(lambda);
    const auto right = module(lambda2);
    GammaPtr t;
    const auto path = gamma_path(lambda, lambda2);
    if (path && std::filesystem::exists(*path)) {
      t = std::make_shared<GammaTable>(io::gamma_from_json(io::parse(io::read_file(*path)), *src, *left, *right));
    } else {
      t = std::make_shared<GammaTable>(classical::compute_gamma_table(*src, *left, *right));
      if (path) io::write_file(*path, io::dump(io::gamma_to_json(*t, *src, *left, *right)));
    }
    gammas_.emplace(key, t);
    return t;
  }

  std::shared_ptr<const GammaLeftInverse> gamma_inverse(const Weight& lambda, const Weight& lambda2) {
    const auto key = std::make_pair(lambda, lambda2);
    auto it = inverses_.find(key);
    if (it != inverses_.end()) return it->second;
    auto inv = std::make_shared<const GammaLeftInverse>(left_inverse(*gamma(lambda, lambda2)));
    inverses_.emplace(key, inv);
    return inv;
  }

  std::size_t loaded_modules() const { return modules_.size(); }
  std::size_t loaded_gammas() const { return gammas_.size(); }

  std::vector<ModulePtr> modules() const {
    std::vector<ModulePtr> out;
    for (const auto& [w, m] : modules_) out.push_back(m);
    return out;
  }

  std::vector<std::tuple<Weight, Weight, GammaPtr>> gammas() const {
    std::vector<std::tuple<Weight, Weight, GammaPtr>> out;
    for (const auto& [k, t] : gammas_) out.emplace_back(k.first, k.second, t);
    return out;
  }

  std::optional<std::filesystem::path> module_path(const Weight& lambda) const {
    if (!dir_) return std::nullopt;
    return *dir_ / cartan_.label() / ("module_" + file_key(lambda) + ".json");
  }
  std::optional<std::filesystem::path> gamma_path(const Weight& lambda, const Weight& lambda2) const {
    if (!dir_) return std::nullopt;
    return *dir_ / cartan_.label() / ("gamma_" + file_key(lambda) + "_" + file_key(lambda2) + ".json");
  }

 private:
  CartanDatum cartan_;
  std::optional<std::filesystem::path> dir_;
  std::map<Weight, ModulePtr> modules_;
  std::map<std::pair<Weight, Weight>, GammaPtr> gammas_;
  std::map<std::pair<Weight, Weight>, std::shared_ptr<const GammaLeftInverse>> inverses_;
};

}  // namespace semiflag
