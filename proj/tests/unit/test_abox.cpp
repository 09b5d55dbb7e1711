#include <doctest.h>

#include "tgk/abox.hpp"
#include "testutil.hpp"

using namespace tgk;

namespace {

Uri alg(const std::string& rest) { return parse_uri(testutil::kAlgebraDoc + rest); }

FactSet algebra_facts() {
  FactSet out;
  for (const char* name : {"algebra1.omdoc", "views.omdoc"}) {
    FactSet facts = extract_abox(testutil::load_fixture(name));
    out.insert(facts.begin(), facts.end());
  }
  return out;
}

}  // namespace

TEST_CASE("extraction emits the expected structural facts") {
  FactSet facts = extract_abox(testutil::load_fixture("algebra1.omdoc"));

  CHECK(facts.count(AboxFact::rel(RelName::HasDomain, alg("?Ring?mult"), alg("?Monoid"))));
  CHECK(facts.count(AboxFact::rel(RelName::Imports, alg("?Ring"), alg("?Monoid"))));
  CHECK(facts.count(AboxFact::type(TypeName::Theory, alg("?Magma"))));
  CHECK(facts.count(AboxFact::type(TypeName::Constant, alg("?Magma?*"))));
  CHECK(facts.count(AboxFact::type(TypeName::UntypedConstant, alg("?Magma?*"))));
  CHECK(facts.count(AboxFact::rel(RelName::HasOccurrenceOfInType, alg("?Distrib?dist_l"), alg("?Distrib?mag1/*"))));
  CHECK(facts.count(AboxFact::rel(RelName::HasOccurrenceOfInDefiniens, alg("?Distrib?dist_l"), alg("?Distrib?mag2/*"))));
  CHECK(facts.count(AboxFact::type(TypeName::Notation, alg("?Magma?star"))));
  CHECK(facts.count(AboxFact::rel(RelName::HasNotationFor, alg("?Magma?star"), alg("?Magma?*"))));
  // the typed axiom is not untyped
  CHECK(!facts.count(AboxFact::type(TypeName::UntypedConstant, alg("?Distrib?dist_l"))));
}

TEST_CASE("an empty document compiles to its document fact alone") {
  Document doc;
  doc.base = Uri("http://t.org/empty");
  FactSet facts = extract_abox(doc);
  REQUIRE(facts.size() == 1);
  CHECK(*facts.begin() == AboxFact::type(TypeName::Document, Uri("http://t.org/empty")));
}

TEST_CASE("extraction is deterministic and serializes sorted") {
  Document doc = testutil::load_fixture("algebra1.omdoc");
  FactSet a = extract_abox(doc);
  FactSet b = extract_abox(doc);
  CHECK(a == b);
  std::string text = serialize_abox(a);
  CHECK(parse_abox(text) == a);
}

TEST_CASE("structure recovery matches the independently built skeleton") {
  for (const char* name : {"algebra1.omdoc", "views.omdoc", "meta.omdoc", "styles.omdoc"}) {
    Document doc = testutil::load_fixture(name);
    Skeleton recovered = recover_structure(extract_abox(doc));
    Skeleton expected = skeleton_of(doc);
    CHECK(recovered == expected);
  }
}

TEST_CASE("a single theory fact set recovers to one bare theory") {
  FactSet facts;
  facts.insert(AboxFact::type(TypeName::Document, Uri("http://t.org/d")));
  facts.insert(AboxFact::type(TypeName::Theory, parse_uri("http://t.org/d?T")));
  facts.insert(AboxFact::rel(RelName::DeclaredIn, parse_uri("http://t.org/d?T"), Uri("http://t.org/d")));
  Skeleton s = recover_structure(facts);
  CHECK(s.modules.size() == 1);
  CHECK(s.modules.begin()->second.kind == TypeName::Theory);
}

TEST_CASE("facts naming an unknown container are inconsistent") {
  FactSet facts;
  facts.insert(AboxFact::rel(RelName::DeclaredIn, parse_uri("http://t.org/d?T?c"), parse_uri("http://t.org/d?T")));
  CHECK_THROWS_WITH_AS(recover_structure(facts), doctest::Contains("InconsistentFacts"), Error);
}

TEST_CASE("transitive imports of Ring reach five theories") {
  FactSet facts = algebra_facts();
  auto result = query(facts, alg("?Ring"), parse_rel_expr("Imports+"));
  std::set<Uri> expected{alg("?CGroup"), alg("?Group"), alg("?Monoid"), alg("?Magma"), alg("?Distrib")};
  CHECK(result == expected);
}

TEST_CASE("inverse imports of Magma are its direct importers") {
  FactSet facts = algebra_facts();
  auto result = query(facts, alg("?Magma"), parse_rel_expr("Imports^-1"));
  CHECK(result == std::set<Uri>{alg("?Monoid"), alg("?Distrib")});
}

TEST_CASE("query algebra: union, composition, inverse involution") {
  FactSet facts = algebra_facts();
  FactIndex index(facts);
  Uri ring = alg("?Ring");

  auto u = query(index, ring, parse_rel_expr("Imports | HasMetaTheory"));
  auto a = query(index, ring, parse_rel_expr("Imports"));
  auto b = query(index, ring, parse_rel_expr("HasMetaTheory"));
  std::set<Uri> ab = a;
  ab.insert(b.begin(), b.end());
  CHECK(u == ab);

  // composition associates
  auto left = query(index, ring, parse_rel_expr("(Imports ; Imports) ; Imports"));
  auto right = query(index, ring, parse_rel_expr("Imports ; (Imports ; Imports)"));
  CHECK(left == right);

  // double inverse is extensionally the base relation
  auto inv2 = query(index, alg("?Magma"), parse_rel_expr("Imports^-1^-1"));
  auto base = query(index, alg("?Magma"), parse_rel_expr("Imports"));
  CHECK(inv2 == base);
}

namespace {

// Brute-force closure oracle: iterate R, R;R, R;R;R, ... to fixpoint.
std::set<Uri> closure_oracle(const FactIndex& index, const Uri& start, const RelExpr& base) {
  std::set<Uri> total;
  std::set<Uri> layer = query(index, start, base);
  while (true) {
    std::set<Uri> fresh;
    for (const auto& u : layer) {
      if (total.insert(u).second) fresh.insert(u);
    }
    if (fresh.empty()) return total;
    layer.clear();
    for (const auto& u : fresh) {
      auto next = query(index, u, base);
      layer.insert(next.begin(), next.end());
    }
  }
}

}  // namespace

TEST_CASE("transitive closure agrees with the iterated-compose oracle") {
  for (const char* name : {"algebra1.omdoc", "views.omdoc", "meta.omdoc", "styles.omdoc"}) {
    FactSet facts = extract_abox(testutil::load_fixture(name));
    FactIndex index(facts);
    for (const char* rel : {"Imports", "DependsOn", "DeclaredIn"}) {
      RelExpr base = parse_rel_expr(rel);
      RelExpr closed = parse_rel_expr(std::string(rel) + "+");
      std::set<Uri> individuals;
      for (const auto& f : facts) {
        individuals.insert(f.subject);
        if (!f.unary) individuals.insert(f.object);
      }
      for (const auto& ind : individuals) {
        CHECK(query(index, ind, closed) == closure_oracle(index, ind, base));
      }
    }
  }
}

TEST_CASE("relation expression surface syntax parses with the right precedence") {
  // closure binds tighter than inverse, inverse than composition, union last
  CHECK(parse_rel_expr("Imports+^-1").str() == "((Imports)+)^-1");
  CHECK(parse_rel_expr("Imports ; Imports | DependsOn").str() == "((Imports ; Imports) | DependsOn)");
  CHECK(parse_rel_expr("(Imports | DependsOn)+").str() == "((Imports | DependsOn))+");
  CHECK(parse_rel_expr("(Imports)+").str() == "(Imports)+");
  CHECK_THROWS_AS(parse_rel_expr("Bogus"), Error);
  CHECK_THROWS_AS(parse_rel_expr("Imports |"), Error);
  CHECK_THROWS_AS(parse_rel_expr("(Imports"), Error);
}

TEST_CASE("the ontology has exactly ten types and eleven relations") {
  CHECK(kTypeCount == 10);
  CHECK(kRelCount == 11);
  std::set<std::string> names;
  for (int i = 0; i < kTypeCount; ++i) names.insert(type_name_str(static_cast<TypeName>(i)));
  CHECK(names.size() == 10);
  std::set<std::string> rels;
  for (int i = 0; i < kRelCount; ++i) rels.insert(rel_name_str(static_cast<RelName>(i)));
  CHECK(rels.size() == 11);
  CHECK(rels.count("HasDomain"));
  CHECK(rels.count("HasOccurrenceOfInType"));
  CHECK(names.count("theory"));
  CHECK(names.count("constant"));
}
