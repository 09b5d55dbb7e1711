#include <doctest.h>

#include <algorithm>
#include <random>

#include "tgk/model.hpp"
#include "testutil.hpp"

using namespace tgk;

TEST_CASE("atomize emits a header atom and one atom per child") {
  Document doc;
  doc.base = Uri("http://a.org/d");
  Theory t;
  t.name = LocalName{"T"};
  t.declarations.push_back(Constant{LocalName{"s1"}, Term::symbol(parse_uri("http://a.org/d?T?tau")), std::nullopt});
  t.declarations.push_back(Constant{LocalName{"s2"}, Term::symbol(parse_uri("http://a.org/d?T?tau")), std::nullopt});
  doc.modules.push_back(t);

  auto atoms = atomize(doc);
  REQUIRE(atoms.size() == 3);
  CHECK(atoms[0].uri.str() == "http://a.org/d?T");
  CHECK(std::holds_alternative<TheoryHeader>(atoms[0].payload));
  CHECK(atoms[1].uri.str() == "http://a.org/d?T?s1");
  CHECK(atoms[2].uri.str() == "http://a.org/d?T?s2");
}

TEST_CASE("atomize of an empty document is empty") {
  Document doc;
  doc.base = Uri("http://a.org/d");
  CHECK(atomize(doc).empty());
}

TEST_CASE("assemble rebuilds the algebra fixture graph") {
  TheoryGraph direct = testutil::load_algebra_graph();
  std::vector<AtomicDecl> atoms;
  for (const auto& d : direct.documents()) {
    for (auto& a : atomize(*d)) atoms.push_back(std::move(a));
  }
  TheoryGraph rebuilt = assemble(atoms);
  CHECK(graph_equal(direct, rebuilt));
}

TEST_CASE("dependency-respecting permutations assemble to the same graph") {
  TheoryGraph direct = testutil::load_algebra_graph();
  std::vector<AtomicDecl> atoms;
  for (const auto& d : direct.documents()) {
    for (auto& a : atomize(*d)) atoms.push_back(std::move(a));
  }
  std::mt19937 rng(42);
  for (int round = 0; round < 20; ++round) {
    auto shuffled = testutil::dependency_respecting_permutation(atoms, rng);
    TheoryGraph rebuilt = assemble(shuffled);
    CHECK(graph_equal(direct, rebuilt));
  }
}

TEST_CASE("assemble rejects a child before its header") {
  Document doc;
  doc.base = Uri("http://a.org/d");
  Theory t;
  t.name = LocalName{"T"};
  t.declarations.push_back(Constant{LocalName{"s"}, std::nullopt, std::nullopt});
  doc.modules.push_back(t);
  auto atoms = atomize(doc);
  std::swap(atoms[0], atoms[1]);

  Assembler asmr;
  CHECK_THROWS_WITH_AS(asmr.feed(atoms[0]), doctest::Contains("OrphanAtom"), Error);
}

TEST_CASE("assemble rejects duplicate URIs") {
  AtomicDecl header{parse_uri("http://a.org/d?T"), TheoryHeader{}};
  Assembler asmr;
  asmr.feed(header);
  CHECK_THROWS_WITH_AS(asmr.feed(header), doctest::Contains("DuplicateUri"), Error);
}

TEST_CASE("lookup finds syntactic items but not induced ones") {
  TheoryGraph g = testutil::load_algebra_graph();
  auto star = g.lookup(parse_uri(testutil::kAlgebraDoc + "?Magma?*"));
  REQUIRE(star.constant != nullptr);
  CHECK(star.constant->name.front() == "*");

  auto induced = g.lookup(parse_uri(testutil::kAlgebraDoc + "?Ring?add/grp/mon/mag/*"));
  CHECK(!induced.found());

  auto nope = g.lookup(parse_uri(testutil::kAlgebraDoc + "?Nope"));
  CHECK(!nope.found());

  auto theory = g.lookup(parse_uri(testutil::kAlgebraDoc + "?Ring"));
  CHECK(theory.theory != nullptr);

  auto imp = g.lookup(parse_uri(testutil::kAlgebraDoc + "?Ring?add"));
  CHECK(imp.import != nullptr);

  auto assign = g.lookup(parse_uri(testutil::kAlgebraDoc + "?Ring?dist/mag1"));
  CHECK(assign.assignment != nullptr);
}

TEST_CASE("the algebra fixture atom count matches the hand count") {
  // 7 headers, 9 constants, 8 imports, 2 assignments, 1 notation.
  TheoryGraph g = testutil::load_algebra_graph();
  const Document* doc = g.document(Uri(testutil::kAlgebraDoc));
  REQUIRE(doc != nullptr);
  auto atoms = atomize(*doc);
  CHECK(atoms.size() == 27);
  int headers = 0;
  for (const auto& a : atoms) {
    if (std::holds_alternative<TheoryHeader>(a.payload)) ++headers;
  }
  CHECK(headers == 7);
}
