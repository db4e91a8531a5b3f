#pragma once

// JSON encodings of module data and Gamma tables. All coefficients are JSON
// integers; floats are rejected. Output is deterministic so that
// export -> load -> export is byte-identical.

#include "semiflag/based_module.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace semiflag::io {

using nlohmann::json;

inline constexpr int kModuleSchemaVersion = 1;
inline constexpr int kGammaSchemaVersion = 1;

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

inline void check_header(const json& j, const std::string& schema, int version) {
  require(j.is_object(), "document is not a JSON object");
  require(j.contains("schema") && j["schema"] == schema, "expected schema " + schema);
  require(j.contains("version") && j["version"].is_number_integer(), "missing schema version");
  require(j["version"].get<long long>() == version,
          "unsupported " + schema + " version " + j["version"].dump());
}

inline std::uint64_t positive_coefficient(const json& v, const std::string& where) {
  require(v.is_number_integer(), where + ": coefficient is not an integer");
  require(v.is_number_unsigned(), where + ": negative coefficient " + v.dump());
  const auto c = v.get<std::uint64_t>();
  require(c > 0, where + ": zero coefficient stored explicitly");
  return c;
}

// Rethrows JSON type errors as validation failures.
template <class Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

inline json weight_json(const Weight& w) { return json(w.n); }

inline Weight weight_from(const json& j, std::size_t rank) {
  require(j.is_array() && j.size() == rank, "weight does not match rank");
  Weight w;
  for (const auto& x : j) {
    require(x.is_number_unsigned(), "weight coordinate is not a natural number");
    w.n.push_back(x.get<unsigned>());
  }
  return w;
}

}  // namespace detail

inline json module_to_json(const BasedModule& m) {
  json ops = json::object();
  json weights = json::object();
  for (std::size_t i = 0; i < m.rank(); ++i) {
    json per_i = json::object();
    for (std::size_t n = 1; n <= m.nil_bound(i); ++n) {
      json entry = json::object();
      for (const char* kind : {"e", "f"}) {
        const NatMatrix& mat = kind[0] == 'e' ? *m.E(i, n) : *m.F(i, n);
        json cols = json::object();
        for (std::size_t s = 0; s < mat.cols; ++s) {
          if (mat.col[s].empty()) continue;
          json col = json::object();
          for (const auto& [d, c] : mat.col[s]) col[m.basis[d]] = c;
          cols[m.basis[s]] = std::move(col);
        }
        entry[kind] = std::move(cols);
      }
      per_i[std::to_string(n)] = std::move(entry);
    }
    ops[std::to_string(i + 1)] = std::move(per_i);
    weights[std::to_string(i + 1)] = m.weights[i];
  }
  return json{{"schema", "semiflag/module"},
              {"version", kModuleSchemaVersion},
              {"cartan", m.cartan.label()},
              {"lambda", detail::weight_json(m.lambda)},
              {"basis", m.basis},
              {"highest", m.basis.at(m.highest)},
              {"ops", std::move(ops)},
              {"weights", std::move(weights)}};
}

inline BasedModule module_from_json(const json& j) {
  return detail::guarded([&] {
  using detail::require;
  detail::check_header(j, "semiflag/module", kModuleSchemaVersion);
  for (const char* key : {"cartan", "lambda", "basis", "highest", "ops", "weights"})
    require(j.contains(key), std::string("module file lacks ") + key);
  BasedModule m;
  m.cartan = CartanDatum::parse(j["cartan"].get<std::string>());
  const std::size_t r = m.cartan.rank();
  m.lambda = detail::weight_from(j["lambda"], r);
  require(j["basis"].is_array() && !j["basis"].empty(), "basis must be a nonempty array");
  for (const auto& b : j["basis"]) m.basis.push_back(b.get<std::string>());
  {
    auto sorted = m.basis;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "duplicate basis label");
  }
  m.highest = m.index_of(j["highest"].get<std::string>());
  m.e.resize(r);
  m.f.resize(r);
  m.weights.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    const std::string key = std::to_string(i + 1);
    require(j["weights"].contains(key), "weights lack index " + key);
    m.weights[i] = j["weights"][key].get<std::vector<int>>();
    const json per_i = j["ops"].value(key, json::object());
    for (std::size_t n = 1; n <= per_i.size(); ++n) {
      const std::string nk = std::to_string(n);
      require(per_i.contains(nk), "operator powers for index " + key + " are not contiguous");
      for (const char* kind : {"e", "f"}) {
        NatMatrix mat(m.dim(), m.dim());
        const json cols = per_i[nk].value(kind, json::object());
        for (const auto& [src, col] : cols.items())
          for (const auto& [dst, c] : col.items())
            mat.add(m.index_of(dst), m.index_of(src),
                    detail::positive_coefficient(c, std::string(kind) + "_" + key + "^(" + nk + ")"));
        (kind[0] == 'e' ? m.e : m.f)[i].push_back(std::move(mat));
      }
    }
  }
  m.validate();
  return m;
  });
}

inline json gamma_to_json(const GammaTable& t, const BasedModule& src, const BasedModule& left,
                          const BasedModule& right) {
  json rows = json::object();
  for (std::size_t b = 0; b < t.source_dim; ++b) {
    json row = json::array();
    for (const auto& [s, c] : t.rows[b])
      row.push_back(json::array({left.basis[s / t.right_dim], right.basis[s % t.right_dim], c}));
    rows[src.basis[b]] = std::move(row);
  }
  return json{{"schema", "semiflag/gamma"},
              {"version", kGammaSchemaVersion},
              {"cartan", t.cartan.label()},
              {"lambda", detail::weight_json(t.lambda)},
              {"lambda2", detail::weight_json(t.lambda2)},
              {"rows", std::move(rows)}};
}

inline GammaTable gamma_from_json(const json& j, const BasedModule& src, const BasedModule& left,
                                  const BasedModule& right) {
  return detail::guarded([&] {
  using detail::require;
  detail::check_header(j, "semiflag/gamma", kGammaSchemaVersion);
  for (const char* key : {"cartan", "lambda", "lambda2", "rows"})
    require(j.contains(key), std::string("gamma file lacks ") + key);
  GammaTable t;
  t.cartan = CartanDatum::parse(j["cartan"].get<std::string>());
  require(t.cartan == src.cartan, "gamma file is for another Cartan type");
  t.lambda = detail::weight_from(j["lambda"], t.cartan.rank());
  t.lambda2 = detail::weight_from(j["lambda2"], t.cartan.rank());
  t.source_dim = src.dim();
  t.left_dim = left.dim();
  t.right_dim = right.dim();
  t.rows.resize(t.source_dim);
  require(j["rows"].is_object(), "rows must be an object");
  for (const auto& [label, row] : j["rows"].items()) {
    const std::size_t b = src.index_of(label);
    require(row.is_array(), "row " + label + " is not an array");
    for (const auto& entry : row) {
      require(entry.is_array() && entry.size() == 3, "row " + label + " has a malformed entry");
      const std::size_t s =
          left.index_of(entry[0].get<std::string>()) * t.right_dim + right.index_of(entry[1].get<std::string>());
      t.rows[b].push_back({s, detail::positive_coefficient(entry[2], "gamma row " + label)});
    }
    std::sort(t.rows[b].begin(), t.rows[b].end());
    for (std::size_t k = 1; k < t.rows[b].size(); ++k)
      require(t.rows[b][k].first != t.rows[b][k - 1].first, "row " + label + " repeats a tensor index");
  }
  t.validate(src, left, right);
  return t;
  });
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

inline void export_module(const BasedModule& m, const std::filesystem::path& path) {
  write_file(path, dump(module_to_json(m)));
}

inline BasedModule load_module(const std::filesystem::path& path) { return module_from_json(parse(read_file(path))); }

}  // namespace semiflag::io
