#include <doctest.h>

#include <set>

#include "tgk/flatten.hpp"
#include "testutil.hpp"

using namespace tgk;

namespace {

Uri alg(const std::string& rest) { return parse_uri(testutil::kAlgebraDoc + rest); }

}  // namespace

TEST_CASE("deref returns syntactic constants as-is") {
  TheoryGraph g = testutil::load_algebra_graph();
  Flattener flat(g);
  auto item = flat.deref(alg("?Magma?*"));
  REQUIRE(item.constant != nullptr);
  CHECK(item.constant->name.front() == "*");
  CHECK(!item.induced);
}

TEST_CASE("deref computes induced constants through import chains") {
  TheoryGraph g = testutil::load_algebra_graph();
  Flattener flat(g);
  auto item = flat.deref(alg("?Ring?add/grp/mon/mag/*"));
  REQUIRE(item.induced.has_value());
  CHECK(item.induced->origin == alg("?Magma?*"));
  CHECK(item.induced->uri == alg("?Ring?add/grp/mon/mag/*"));

  auto mult = flat.deref(alg("?Ring?mult/mag/*"));
  REQUIRE(mult.induced.has_value());
  CHECK(mult.induced->origin == alg("?Magma?*"));
  // two distinct induced constants from the same origin
  CHECK(mult.induced->uri != item.induced->uri);
}

TEST_CASE("deref translates the distributivity axiom through the instantiated import") {
  TheoryGraph g = testutil::load_algebra_graph();
  Flattener flat(g);
  auto item = flat.deref(alg("?Ring?dist/dist_l"));
  REQUIRE(item.induced.has_value());
  REQUIRE(item.induced->type.has_value());
  REQUIRE(item.induced->definiens.has_value());

  std::set<std::string> seen;
  for_each_symbol(*item.induced->type, [&](const Uri& u) { seen.insert(u.str()); });
  for_each_symbol(*item.induced->definiens, [&](const Uri& u) { seen.insert(u.str()); });
  CHECK(seen.count(testutil::kAlgebraDoc + "?Ring?mult/mag/*"));
  CHECK(seen.count(testutil::kAlgebraDoc + "?Ring?add/grp/mon/mag/*"));
  CHECK(!seen.count(testutil::kAlgebraDoc + "?Distrib?mag1/*"));
  CHECK(!seen.count(testutil::kAlgebraDoc + "?Distrib?mag2/*"));
}

TEST_CASE("paths across an instantiation are not canonical") {
  TheoryGraph g = testutil::load_algebra_graph();
  Flattener flat(g);
  CHECK(!flat.deref(alg("?Ring?dist/mag1/*")).found());
  CHECK(!flat.deref(alg("?Ring?dist/mag2/*")).found());
  CHECK(!flat.deref(alg("?Nope")).found());
  CHECK(!flat.deref(alg("?Ring?bogus/path")).found());
}

TEST_CASE("apply_morphism maps view assignments and leaves identity alone") {
  TheoryGraph g = testutil::load_algebra_graph();
  Flattener flat(g);
  Morphism v1 = Morphism::view_link(parse_uri(testutil::kViewsDoc + "?v1"));

  Term op = Term::symbol(alg("?CGroup?grp/mon/mag/*"));
  Term mapped = flat.apply_morphism(v1, op);
  REQUIRE(mapped.as_symbol() != nullptr);
  CHECK(mapped.as_symbol()->uri == alg("?Integers?+"));

  Morphism ident = Morphism::identity(alg("?CGroup"));
  CHECK(alpha_equal(flat.apply_morphism(ident, op), op));
}

TEST_CASE("meta-theory symbols pass through views untranslated") {
  TheoryGraph g = testutil::load_meta_graph();
  Flattener flat(g);
  const Theory* abgrp = g.theory(parse_uri(testutil::kMetaDoc + "?AbGrp"));
  REQUIRE(abgrp != nullptr);
  const Constant* comm = abgrp->find_constant("comm");
  REQUIRE(comm != nullptr);
  REQUIRE(comm->type.has_value());

  Morphism w = Morphism::view_link(parse_uri(testutil::kMetaDoc + "?w"));
  Term translated = flat.apply_morphism(w, *comm->type);

  bool saw_forall = false, saw_plus = false;
  for_each_symbol(translated, [&](const Uri& u) {
    if (u == parse_uri(testutil::kMetaDoc + "?FOL?forall")) saw_forall = true;
    if (u == parse_uri(testutil::kMetaDoc + "?Ints?plus")) saw_plus = true;
    CHECK(u != parse_uri(testutil::kMetaDoc + "?AbGrp?op"));
  });
  CHECK(saw_forall);  // the binder stays the meta-theory's symbol
  CHECK(saw_plus);
}

TEST_CASE("deref reaches meta-theory symbols under the reserved name") {
  TheoryGraph g = testutil::load_meta_graph();
  Flattener flat(g);
  auto item = flat.deref(parse_uri(testutil::kMetaDoc + "?AbGrp?meta/forall"));
  REQUIRE(item.induced.has_value());
  CHECK(item.induced->origin == parse_uri(testutil::kMetaDoc + "?FOL?forall"));

  // meta entries appear in the flat form only on request
  Uri abgrp = parse_uri(testutil::kMetaDoc + "?AbGrp");
  auto without = flat.flat_entries(abgrp, false);
  auto with = flat.flat_entries(abgrp, true);
  CHECK(without.size() == 2);  // op, comm
  CHECK(with.size() == 4);     // meta/forall, meta/equal, op, comm
}

TEST_CASE("the commutative diagram of the instantiated import holds") {
  TheoryGraph g = testutil::load_algebra_graph();
  Flattener flat(g);
  Morphism dist_mag1 = Morphism::import_link(alg("?Ring"), LocalName{"dist", "mag1"});
  Morphism mult_mag = Morphism::import_link(alg("?Ring"), LocalName{"mult", "mag"});

  MorphismTable a = flat.normalize(dist_mag1);
  MorphismTable b = flat.normalize(mult_mag);
  CHECK(a.domain == alg("?Magma"));
  CHECK(a.codomain == alg("?Ring"));
  CHECK(tables_equal(a, b));

  REQUIRE(a.map.size() == 1);
  const Term& image = a.map.begin()->second;
  REQUIRE(image.as_symbol() != nullptr);
  CHECK(image.as_symbol()->uri == alg("?Ring?mult/mag/*"));
}

TEST_CASE("a modular view composes to the view it extends") {
  TheoryGraph g = testutil::load_algebra_graph();
  Flattener flat(g);
  Morphism add = Morphism::import_link(alg("?Ring"), LocalName{"add"});
  Morphism v2 = Morphism::view_link(parse_uri(testutil::kViewsDoc + "?v2"));
  Morphism v1 = Morphism::view_link(parse_uri(testutil::kViewsDoc + "?v1"));

  MorphismTable left = flat.normalize(Morphism::compose(add, v2));
  MorphismTable right = flat.normalize(v1);
  CHECK(tables_equal(left, right));
}

TEST_CASE("identity normalizes to the pointwise identity table") {
  TheoryGraph g = testutil::load_algebra_graph();
  Flattener flat(g);
  MorphismTable t = flat.normalize(Morphism::identity(alg("?Magma")));
  REQUIRE(t.map.size() == 1);
  CHECK(t.map.begin()->first.str() == "*");
  REQUIRE(t.map.begin()->second.as_symbol() != nullptr);
  CHECK(t.map.begin()->second.as_symbol()->uri == alg("?Magma?*"));
}

TEST_CASE("normalization is total over the flat undefined constants") {
  TheoryGraph g = testutil::load_algebra_graph();
  Flattener flat(g);
  Morphism v2 = Morphism::view_link(parse_uri(testutil::kViewsDoc + "?v2"));
  MorphismTable t = flat.normalize(v2);
  // Ring's flat undefined constants: three additive, two multiplicative
  CHECK(t.map.size() == 5);
}

TEST_CASE("views without assignments for undefined constants are rejected") {
  Document doc;
  doc.base = Uri("http://t.org/d");
  Theory a;
  a.name = LocalName{"A"};
  a.declarations.push_back(Constant{LocalName{"c"}, std::nullopt, std::nullopt});
  Theory b;
  b.name = LocalName{"B"};
  View v;
  v.name = LocalName{"v"};
  v.from = parse_uri("http://t.org/d?A");
  v.to = parse_uri("http://t.org/d?B");
  doc.modules = {a, b, v};

  TheoryGraph g;
  g.add_document(doc);
  Flattener flat(g);
  CHECK_THROWS_WITH_AS(flat.normalize(Morphism::view_link(parse_uri("http://t.org/d?v"))),
                       doctest::Contains("UnmappedSymbol"), Error);
}

TEST_CASE("functoriality: composing then normalizing equals chaining tables") {
  TheoryGraph g = testutil::load_algebra_graph();
  Flattener flat(g);
  Morphism grp_chain = Morphism::import_link(alg("?CGroup"), LocalName{"grp", "mon", "mag"});
  Morphism v1 = Morphism::view_link(parse_uri(testutil::kViewsDoc + "?v1"));

  MorphismTable composed = flat.normalize(Morphism::compose(grp_chain, v1));
  MorphismTable first = flat.normalize(grp_chain);
  REQUIRE(composed.map.size() == first.map.size());
  for (const auto& [path, term] : first.map) {
    Term chained = flat.apply_morphism(v1, term);
    REQUIRE(composed.map.count(path));
    CHECK(alpha_equal(composed.map.at(path), chained));
  }
}

TEST_CASE("flattening lists each qualified constant exactly once in stable order") {
  TheoryGraph g = testutil::load_algebra_graph();
  Flattener flat(g);

  auto entries = flat.flat_entries(alg("?Ring"));
  std::vector<std::string> paths;
  for (const auto& e : entries) paths.push_back(e.path.str());
  CHECK(paths == std::vector<std::string>{"add/grp/mon/mag/*", "add/grp/mon/e", "add/grp/inv", "mult/mag/*",
                                          "mult/e", "dist/dist_l"});

  auto magma = flat.flat_entries(alg("?Magma"));
  REQUIRE(magma.size() == 1);
  CHECK(magma[0].path.str() == "*");

  // flat-form consistency: listed URIs dereference
  for (const auto& e : entries) {
    CHECK(flat.deref(alg("?Ring").with_sym(e.path)).found());
  }
}

namespace {

// Independent oracle: eager flattening by recursive copying, sharing
// nothing with the Flattener implementation.
std::set<std::string> eager_flatten(const TheoryGraph& g, const Uri& theory_uri) {
  const Theory* t = g.theory(theory_uri);
  REQUIRE(t != nullptr);
  std::set<std::string> out;
  for (const auto& d : t->declarations) {
    if (auto* c = std::get_if<Constant>(&d)) {
      out.insert(c->name.str());
    } else if (auto* imp = std::get_if<Import>(&d)) {
      for (const auto& inner : eager_flatten(g, imp->from)) {
        out.insert(imp->name.str() + "/" + inner);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("doubling chain blows up exponentially while the modular form stays linear") {
  // C0 holds one constant; every C(i+1) imports C(i) twice.
  Document doc;
  doc.base = Uri("http://t.org/chain");
  Theory c0;
  c0.name = LocalName{"C0"};
  c0.declarations.push_back(Constant{LocalName{"c"}, std::nullopt, std::nullopt});
  doc.modules.push_back(c0);
  const int depth = 10;
  for (int i = 1; i <= depth; ++i) {
    Theory ci;
    ci.name = LocalName{"C" + std::to_string(i)};
    Uri prev = parse_uri("http://t.org/chain?C" + std::to_string(i - 1));
    ci.declarations.push_back(Import{LocalName{"l"}, prev, {}});
    ci.declarations.push_back(Import{LocalName{"r"}, prev, {}});
    doc.modules.push_back(ci);
  }
  TheoryGraph g;
  g.add_document(doc);
  Flattener flat(g);

  long modular_size = 0;
  for (const auto& m : g.documents()[0]->modules) {
    modular_size += 1 + static_cast<long>(std::get<Theory>(m).declarations.size());
  }
  CHECK(modular_size == 2 + 3 * depth);  // linear in depth

  for (int n = 0; n <= depth; ++n) {
    Uri cn = parse_uri("http://t.org/chain?C" + std::to_string(n));
    auto entries = flat.flat_entries(cn);
    auto oracle = eager_flatten(g, cn);
    CHECK(entries.size() == static_cast<size_t>(1) << n);
    REQUIRE(entries.size() == oracle.size());
    for (const auto& e : entries) CHECK(oracle.count(e.path.str()));
  }
}

TEST_CASE("memoization does not change results") {
  TheoryGraph g = testutil::load_algebra_graph();
  Flattener flat(g);
  Uri uri = alg("?Ring?dist/dist_l");
  auto warm = flat.deref(uri);    // fills the cache
  auto cached = flat.deref(uri);  // served from cache
  flat.clear_cache();
  auto cold = flat.deref(uri);

  REQUIRE(warm.induced.has_value());
  REQUIRE(cached.induced.has_value());
  REQUIRE(cold.induced.has_value());
  CHECK(alpha_equal(*warm.induced->type, *cold.induced->type));
  CHECK(alpha_equal(*warm.induced->definiens, *cold.induced->definiens));
  CHECK(alpha_equal(*cached.induced->type, *cold.induced->type));
  CHECK(warm.induced->origin == cold.induced->origin);
}
