// semiflag: command-line front end for the flag-manifold library.
//
// Exit codes: 0 success, 1 validation failure, 2 usage error.

#include "semiflag/explorer.hpp"
#include "semiflag/semiring_m.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace sf = semiflag;
using sf::io::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string type = "A1";
  std::string semifield = "rational";
  std::string J;
  unsigned depth = 4;
  std::uint64_t seed = 1;
  std::string data_dir;
  bool json = false;
  std::string out;

  std::string lambda;
  std::string word;
  std::string point = "base";
  std::string hom = "collapse";
  std::string target;
  std::int64_t lo = -5, hi = 5;
  bool two_letter = false;
  std::string a, b, melem;
  std::size_t trials = 200;
  std::vector<std::string> types;
  std::vector<std::string> semifields;
};

sf::CartanDatum parse_type(const std::string& t) {
  try {
    return sf::CartanDatum::parse(t);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

sf::SemifieldTag parse_semifield(const std::string& s) {
  try {
    return sf::parse_tag(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::optional<std::filesystem::path> data_dir(const Options& o) {
  if (o.data_dir.empty()) return std::nullopt;
  return std::filesystem::path(o.data_dir);
}

sf::JSubset parse_J(const std::string& text, std::size_t rank) {
  try {
    return sf::parse_index_set(text, rank);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

json read_json(const std::string& path) { return sf::io::parse(sf::io::read_file(path)); }

void emit(const Options& o, const json& doc, const std::string& what) {
  if (o.out.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  sf::io::write_file(o.out, sf::io::dump(doc));
  if (o.json)
    std::cout << json{{"written", o.out}, {"kind", what}}.dump() << "\n";
  else
    std::cout << "wrote " << what << " to " << o.out << "\n";
}

std::string depth_caveat(unsigned d) {
  return "note: consistency verified for weights of height <= " + std::to_string(d) + " only";
}

template <sf::Semifield S>
std::string support_text(const sf::FlagPoint<S>& p, sf::DataStore& store) {
  std::string out;
  for (const auto& [i, v] : p.components) {
    if (!out.empty()) out += "; ";
    out += std::to_string(i + 1) + "={";
    const auto m = store.fundamental(i);
    bool first = true;
    for (const auto& [b, x] : v) {
      if (!first) out += ",";
      out += m->basis[b];
      if constexpr (!std::is_same_v<S, sf::OneElement>) out += ":" + S::format(x);
      first = false;
    }
    out += "}";
  }
  return out;
}

// Loads the point named by --point: "base" or a file.
struct LoadedPoint {
  sf::CartanDatum cartan;
  sf::SemifieldTag tag;
  json doc;  // empty for the basepoint
};

LoadedPoint locate_point(const Options& o) {
  if (o.point == "base") return {parse_type(o.type), parse_semifield(o.semifield), json()};
  json doc = read_json(o.point);
  if (!doc.is_object() || !doc.contains("cartan") || !doc.contains("semifield"))
    throw sf::ValidationError(o.point + " is not a point file");
  return {sf::CartanDatum::parse(doc["cartan"].get<std::string>()),
          sf::parse_tag(doc["semifield"].get<std::string>()), doc};
}

template <sf::Semifield S>
sf::FlagPoint<S> load_point(const LoadedPoint& lp, sf::DataStore& store, const Options& o) {
  if (lp.doc.is_null()) return sf::basepoint<S>(store, parse_J(o.J, store.rank()));
  return sf::point_from_json<S>(lp.doc, store);
}

int cmd_generate(const Options& o) {
  if (o.out.empty()) throw UsageError("generate needs --out");
  const auto c = parse_type(o.type);
  sf::DataStore store(c, std::filesystem::path(o.out));
  std::vector<sf::Weight> weights;
  std::optional<sf::Weight> lambda;
  if (!o.lambda.empty()) {
    try {
      lambda = sf::Weight::parse(o.lambda, c.rank());
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    weights.push_back(*lambda);
  }
  for (const auto& w : sf::weights_up_to(c.rank(), {}, o.depth))
    if (sf::classical::in_catalog(c, w)) weights.push_back(w);
  if (weights.empty()) throw UsageError("generate needs --lambda or a positive --depth");

  std::vector<std::string> skipped;
  for (const auto& w : weights) store.module(w);
  auto emit_pair = [&](const sf::Weight& l1, const sf::Weight& l2) {
    if (!sf::classical::in_catalog(c, l1 + l2) || !sf::classical::in_catalog(c, l1) ||
        !sf::classical::in_catalog(c, l2)) {
      skipped.push_back(l1.key() + " + " + l2.key());
      return;
    }
    store.gamma(l1, l2);
  };
  const auto all = sf::weights_up_to(c.rank(), {}, o.depth);
  for (const auto& l1 : all)
    for (const auto& l2 : all)
      if (l1.height() + l2.height() <= o.depth) emit_pair(l1, l2);
  if (lambda) {
    // every split lambda = mu + nu with mu, nu nonzero
    for (const auto& mu : sf::weights_up_to(c.rank(), {}, lambda->height() - 1)) {
      bool below = true;
      for (std::size_t i = 0; i < c.rank(); ++i) below = below && mu.n[i] <= lambda->n[i];
      if (below) emit_pair(mu, *lambda - mu);
    }
  }
  if (o.json) {
    std::cout << json{{"type", c.label()},
                      {"modules", store.loaded_modules()},
                      {"gamma_tables", store.loaded_gammas()},
                      {"skipped_pairs", skipped},
                      {"catalog_version", sf::classical::kCatalogVersion},
                      {"out", o.out}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "generated " << store.loaded_modules() << " modules and " << store.loaded_gammas()
              << " Gamma tables for " << c.label() << " in " << o.out << "\n";
    for (const auto& s : skipped) std::cout << "skipped (outside catalog): " << s << "\n";
  }
  return 0;
}

int cmd_act(const Options& o) {
  const auto lp = locate_point(o);
  sf::DataStore store(lp.cartan, data_dir(o));
  return sf::with_semifield(lp.tag, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto p = load_point<S>(lp, store, o);
    if (o.depth > 0 && p.verified_depth < o.depth && lp.doc.is_null()) p = sf::verified(store, p, o.depth);
    sf::Word<S> w;
    try {
      w = sf::parse_word<S>(o.word, store.rank());
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const auto q = sf::act(store, w, p);
    emit(o, sf::point_to_json(q, store), "point");
    return 0;
  });
}

int cmd_normalize(const Options& o) {
  const auto lp = locate_point(o);
  sf::DataStore store(lp.cartan, data_dir(o));
  return sf::with_semifield(lp.tag, [&](auto tag) {
    using S = typename decltype(tag)::type;
    emit(o, sf::point_to_json(sf::normalize(load_point<S>(lp, store, o)), store), "point");
    return 0;
  });
}

int cmd_check(const Options& o) {
  const auto lp = locate_point(o);
  sf::DataStore store(lp.cartan, data_dir(o));
  return sf::with_semifield(lp.tag, [&](auto tag) {
    using S = typename decltype(tag)::type;
    const auto p = load_point<S>(lp, store, o);
    const auto res = sf::check_consistency(store, p, o.depth);
    if (o.json) {
      std::cout << json{{"consistent", res.ok},
                        {"depth", res.depth},
                        {"equations", res.equations},
                        {"witness", res.witness},
                        {"ambiguous", res.ambiguous}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << (res.ok ? "consistent" : "inconsistent") << " at depth " << res.depth << " (" << res.equations
                << " equations checked)\n";
      if (!res.ok) std::cout << "witness: " << res.witness << "\n";
      std::cout << depth_caveat(o.depth) << "\n";
    }
    return res.ok ? 0 : 1;
  });
}

int cmd_map(const Options& o) {
  const auto lp = locate_point(o);
  sf::DataStore store(lp.cartan, data_dir(o));
  return sf::with_semifield(lp.tag, [&](auto tag) -> int {
    using S = typename decltype(tag)::type;
    const auto p = load_point<S>(lp, store, o);
    if (o.hom == "identity") {
      emit(o, sf::point_to_json(sf::map_semifield(p, sf::identity_hom<S>()), store), "point");
      return 0;
    }
    if (o.hom == "collapse") {
      emit(o, sf::point_to_json(sf::map_semifield(p, sf::collapse_hom<S>()), store), "point");
      return 0;
    }
    if (o.hom.rfind("scale", 0) == 0) {
      if constexpr (std::is_same_v<S, sf::TropicalInt>) {
        std::int64_t c = 0;
        try {
          c = std::stoll(o.hom.substr(5));
          const auto h = sf::tropical_scaling_hom(c);
          emit(o, sf::point_to_json(sf::map_semifield(p, h), store), "point");
          return 0;
        } catch (const std::invalid_argument& e) {
          throw UsageError(std::string("bad scaling homomorphism: ") + e.what());
        }
      } else {
        throw UsageError("scale<c> is a homomorphism of the tropical semifield");
      }
    }
    throw UsageError("unknown homomorphism " + o.hom + " (identity, collapse, scale<c>)");
  });
}

int cmd_enumerate(const Options& o) {
  sf::DataStore store(parse_type(o.type), data_dir(o));
  const auto J = parse_J(o.J, store.rank());
  const auto en = sf::enumerate_one(store, J, o.depth);
  if (o.json) {
    json pts = json::array();
    for (const auto& p : en.points) pts.push_back(sf::point_to_json(p, store));
    std::cout << json{{"type", store.cartan().label()},
                      {"J", sf::format_index_set(J)},
                      {"depth", o.depth},
                      {"candidates", en.candidates},
                      {"points", en.points.size()},
                      {"ambiguous", en.ambiguous},
                      {"enumerated", pts}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << store.cartan().label() << " J=" << sf::format_index_set(J) << " depth " << o.depth << ": "
              << en.points.size() << " points of " << en.candidates << " candidates\n";
    for (const auto& p : en.points) std::cout << "  " << support_text(p, store) << "\n";
    if (en.ambiguous) std::cout << en.ambiguous << " candidates hit an ambiguous Gamma preimage\n";
    std::cout << depth_caveat(o.depth) << "\n";
  }
  return 0;
}

int cmd_conjecture(const Options& o) {
  sf::DataStore store(parse_type(o.type), data_dir(o));
  const auto rep = sf::conjecture_check(store, o.depth);
  if (o.json) {
    json pts = json::array();
    for (const auto& p : rep.witnesses) pts.push_back(support_text(p, store));
    std::cout << json{{"type", rep.type},
                      {"depth", rep.depth},
                      {"points", rep.points},
                      {"candidates", rep.candidates},
                      {"ambiguous", rep.ambiguous},
                      {"weyl_order", rep.weyl_order},
                      {"bruhat_pairs", rep.bruhat_pairs},
                      {"match", rep.match},
                      {"witnesses", pts}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << rep.type << ": " << rep.points << " points of P({1}) at depth " << rep.depth << " vs "
              << rep.bruhat_pairs << " Bruhat pairs in W (|W| = " << rep.weyl_order << "): "
              << (rep.match ? "agree" : "disagree") << "\n";
    for (const auto& p : rep.witnesses) std::cout << "  " << support_text(p, store) << "\n";
    std::cout << depth_caveat(rep.depth) << "\n";
  }
  return 0;
}

int cmd_fiber(const Options& o) {
  sf::DataStore store(parse_type(o.type), data_dir(o));
  if (o.target.empty()) throw UsageError("fiber needs --target, e.g. 1=b0,b1");
  sf::OnePoint target;
  try {
    target = sf::parse_support_point(store, {}, o.target);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.lo > o.hi) throw UsageError("empty parameter range");
  const auto seeds = sf::enumerate_one(store, {}, o.depth).points;
  const auto fs = sf::fiber_sample(store, target, seeds, o.lo, o.hi, o.two_letter);
  if (o.json) {
    json pts = json::array();
    for (const auto& p : fs.points) pts.push_back(sf::point_to_json(p, store));
    std::cout << json{{"target", o.target},
                      {"range", {o.lo, o.hi}},
                      {"generated", fs.generated},
                      {"distinct", fs.points.size()},
                      {"points", pts}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "fiber over " << o.target << ": " << fs.points.size() << " distinct tropical points (from "
              << fs.generated << " generated, k in " << o.lo << ".." << o.hi << ")\n";
    for (const auto& p : fs.points) std::cout << "  " << support_text(p, store) << "\n";
  }
  return 0;
}

int cmd_mmul(const Options& o) {
  if (o.a.empty() || o.b.empty()) throw UsageError("mmul needs --a and --b element files");
  const json ja = read_json(o.a);
  const json jb = read_json(o.b);
  const auto c = sf::CartanDatum::parse(ja.at("cartan").get<std::string>());
  sf::DataStore store(c, data_dir(o));
  return sf::with_semifield(sf::parse_tag(ja.at("semifield").get<std::string>()), [&](auto tag) {
    using S = typename decltype(tag)::type;
    const auto x = sf::melem_from_json<S>(ja, store);
    const auto y = sf::melem_from_json<S>(jb, store);
    emit(o, sf::melem_to_json(sf::m_mul(store, x, y), store), "element");
    return 0;
  });
}

int cmd_mchar(const Options& o) {
  if (o.melem.empty()) throw UsageError("mchar needs --melem");
  const auto lp = locate_point(o);
  sf::DataStore store(lp.cartan, data_dir(o));
  const json jm = read_json(o.melem);
  return sf::with_semifield(lp.tag, [&](auto tag) {
    using S = typename decltype(tag)::type;
    const auto p = load_point<S>(lp, store, o);
    const auto m = sf::melem_from_json<S>(jm, store);
    const unsigned d = std::max(o.depth, m.max_height());
    const auto chi = sf::char_from_point(store, p, d);
    const auto value = sf::char_eval(chi, m);
    if (o.json)
      std::cout << json{{"value", value.str()}, {"depth", d}}.dump(2) << "\n";
    else
      std::cout << "chi(m) = " << value.str() << "\n" << depth_caveat(d) << "\n";
    return 0;
  });
}

std::vector<sf::ModulePtr> relation_modules(sf::DataStore& store) {
  std::vector<sf::ModulePtr> out;
  for (const auto& w : sf::weights_up_to(store.rank(), {}, 2))
    if (sf::classical::in_catalog(store.cartan(), w)) out.push_back(store.module(w));
  return out;
}

int cmd_relations(const Options& o) {
  std::vector<std::string> types = o.types.empty() ? std::vector<std::string>{"A1", "A1xA1", "A2", "A3"} : o.types;
  std::vector<std::string> fields =
      o.semifields.empty() ? std::vector<std::string>{"rational", "tropical", "one"} : o.semifields;
  std::vector<sf::ModulePtr> modules;
  std::vector<std::unique_ptr<sf::DataStore>> stores;
  for (const auto& t : types) {
    stores.push_back(std::make_unique<sf::DataStore>(parse_type(t), data_dir(o)));
    for (auto& m : relation_modules(*stores.back())) modules.push_back(m);
  }
  bool all_ok = true;
  json reports = json::array();
  for (const auto& f : fields) {
    const auto tag = parse_semifield(f);
    for (const auto rel : sf::kAllRelations) {
      const auto rep = sf::with_semifield(tag, [&](auto t) {
        using S = typename decltype(t)::type;
        return sf::relation_check<S>(rel, modules, o.trials, o.seed);
      });
      all_ok = all_ok && rep.ok();
      if (o.json) {
        reports.push_back(json{{"relation", rep.relation},
                               {"semifield", rep.semifield},
                               {"trials", rep.trials},
                               {"passed", rep.passed},
                               {"failures", rep.failures}});
      } else {
        std::cout << rep.relation << " [" << rep.semifield << "] " << rep.passed << "/" << rep.trials << " "
                  << (rep.ok() ? "pass" : "FAIL") << "  " << sf::relation_statement(rel) << "\n";
        for (const auto& f2 : rep.failures) std::cout << "    " << f2 << "\n";
      }
    }
  }
  if (o.json)
    std::cout << json{{"seed", o.seed}, {"all_pass", all_ok}, {"reports", reports}}.dump(2) << "\n";
  else
    std::cout << "seed " << o.seed << ": " << (all_ok ? "all relations pass" : "relation failures") << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial flag manifolds over semifields"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool with_semifield = true) {
    sub->add_option("--type", o.type, "Cartan type: A1, A1xA1, A2, A3");
    if (with_semifield) sub->add_option("--semifield", o.semifield, "rational, tropical or one");
    sub->add_option("--J", o.J, "subset J of I, 1-based, e.g. 2 or 1,3");
    sub->add_option("--depth", o.depth, "height bound for consistency checks");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--data-dir", o.data_dir, "directory with module and Gamma files");
    sub->add_flag("--json", o.json, "machine-readable output");
  };

  auto* gen = app.add_subcommand("generate", "generate module data and Gamma tables");
  common(gen, false);
  gen->add_option("--lambda", o.lambda, "highest weight, e.g. 1,1");
  gen->add_option("--out", o.out, "output directory")->required();
  o.depth = 4;

  auto* act = app.add_subcommand("act", "act on a point by a word");
  common(act);
  act->add_option("--word", o.word, "word such as \"-1:2/3 +2:5 t1:1/2\"")->required();
  act->add_option("--point", o.point, "point file or 'base'");
  act->add_option("--out", o.out, "write the resulting point here");

  auto* check = app.add_subcommand("check", "check consistency of a point");
  common(check);
  check->add_option("--point", o.point, "point file or 'base'");

  auto* norm = app.add_subcommand("normalize", "normalize a point");
  common(norm);
  norm->add_option("--point", o.point, "point file or 'base'");
  norm->add_option("--out", o.out, "write the resulting point here");

  auto* map = app.add_subcommand("map", "push a point along a semifield homomorphism");
  common(map);
  map->add_option("--point", o.point, "point file or 'base'");
  map->add_option("--hom", o.hom, "identity, collapse or scale<c> (tropical)");
  map->add_option("--out", o.out, "write the resulting point here");

  auto* en = app.add_subcommand("enumerate", "enumerate P^J({1})");
  common(en, false);

  auto* conj = app.add_subcommand("conjecture", "compare |P({1})| with Bruhat pairs");
  common(conj, false);

  auto* fib = app.add_subcommand("fiber", "sample a tropical fiber over a {1}-point");
  common(fib, false);
  fib->add_option("--target", o.target, "support point, e.g. \"1=b0,b1\" or \"1=b0;2=b1,b2\"");
  fib->add_option("--lo", o.lo, "smallest tropical parameter");
  fib->add_option("--hi", o.hi, "largest tropical parameter");
  fib->add_flag("--two-letter", o.two_letter, "also apply all two-letter words");

  auto* mmul = app.add_subcommand("mmul", "multiply two elements of M(K)");
  common(mmul);
  mmul->add_option("--a", o.a, "element file")->required();
  mmul->add_option("--b", o.b, "element file")->required();
  mmul->add_option("--out", o.out, "write the product here");

  auto* mchar = app.add_subcommand("mchar", "evaluate the character of a point on an element");
  common(mchar);
  mchar->add_option("--point", o.point, "point file or 'base'");
  mchar->add_option("--melem", o.melem, "element file")->required();

  auto* rel = app.add_subcommand("verify-relations", "check the monoid relations on random data");
  common(rel, false);
  rel->add_option("--trials", o.trials, "trials per relation and semifield");
  rel->add_option("--types", o.types, "Cartan types to draw modules from");
  rel->add_option("--semifields", o.semifields, "semifields to test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "generate") return cmd_generate(o);
    if (name == "act") return cmd_act(o);
    if (name == "check") return cmd_check(o);
    if (name == "normalize") return cmd_normalize(o);
    if (name == "map") return cmd_map(o);
    if (name == "enumerate") return cmd_enumerate(o);
    if (name == "conjecture") return cmd_conjecture(o);
    if (name == "fiber") return cmd_fiber(o);
    if (name == "mmul") return cmd_mmul(o);
    if (name == "mchar") return cmd_mchar(o);
    if (name == "verify-relations") return cmd_relations(o);
    throw UsageError("unknown subcommand " + name);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
