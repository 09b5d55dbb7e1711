#include <doctest.h>

#include "tgk/reader.hpp"
#include "testutil.hpp"

using namespace tgk;

TEST_CASE("the algebra fixture parses into seven modules") {
  Document doc = testutil::load_fixture("algebra1.omdoc");
  CHECK(doc.base.str() == testutil::kAlgebraDoc);
  REQUIRE(doc.modules.size() == 7);
  std::vector<std::string> names;
  for (const auto& m : doc.modules) names.push_back(module_name(m).str());
  CHECK(names == std::vector<std::string>{"Magma", "Monoid", "Group", "CGroup", "Distrib", "Ring", "Integers"});
}

TEST_CASE("references come out absolute") {
  Document doc = testutil::load_fixture("algebra1.omdoc");
  const auto* monoid = std::get_if<Theory>(doc.find_module(LocalName{"Monoid"}));
  REQUIRE(monoid != nullptr);
  const Import* mag = monoid->find_import("mag");
  REQUIRE(mag != nullptr);
  CHECK(mag->from.str() == testutil::kAlgebraDoc + "?Magma");

  const auto* distrib = std::get_if<Theory>(doc.find_module(LocalName{"Distrib"}));
  const Constant* ax = distrib->find_constant("dist_l");
  REQUIRE(ax != nullptr);
  REQUIRE(ax->type.has_value());
  bool saw_mag1 = false;
  for_each_symbol(*ax->type, [&](const Uri& u) {
    if (u.str() == testutil::kAlgebraDoc + "?Distrib?mag1/*") saw_mag1 = true;
    CHECK(u.is_absolute());
  });
  CHECK(saw_mag1);
}

TEST_CASE("a minimal document parses") {
  Document doc = parse_document_auto("<omdoc base=\"http://a.org/d\"><theory name=\"T\"/></omdoc>", "t");
  CHECK(doc.base.str() == "http://a.org/d");
  REQUIRE(doc.modules.size() == 1);
  CHECK(std::get<Theory>(doc.modules[0]).declarations.empty());
}

TEST_CASE("grammar errors carry source positions") {
  try {
    parse_document_auto("<omdoc base=\"http://a.org/d\">\n  <constant name=\"x\"/>\n</omdoc>", "bad.omdoc");
    FAIL("expected GrammarError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GrammarError);
    REQUIRE(e.at().has_value());
    CHECK(e.at()->line == 2);
    CHECK(e.at()->file == "bad.omdoc");
  }

  try {
    parse_document_auto(
        "<omdoc base=\"http://a.org/d\">\n  <theory name=\"T\">\n    <constant/>\n  </theory>\n</omdoc>",
        "bad2.omdoc");
    FAIL("expected GrammarError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GrammarError);
    REQUIRE(e.at().has_value());
    CHECK(e.at()->line == 3);
  }
}

TEST_CASE("unknown elements and text content are rejected") {
  CHECK_THROWS_AS(parse_document_auto("<omdoc base=\"http://a.org/d\"><bogus/></omdoc>", "t"), Error);
  CHECK_THROWS_AS(parse_document_auto("<omdoc base=\"http://a.org/d\">hello</omdoc>", "t"), Error);
  CHECK_THROWS_AS(parse_document_auto("<omdoc base=\"http://a.org/d\"><theory name=\"T\">", "t"), Error);
  CHECK_THROWS_AS(parse_document_auto("<root/>", "t"), Error);
  // broken UTF-8
  CHECK_THROWS_AS(parse_document_auto("<omdoc base=\"http://a.org/d\" x=\"\xff\"/>", "t"), Error);
}

TEST_CASE("empty document serializes to a bare root element") {
  Document doc;
  doc.base = Uri("http://a.org/d");
  CHECK(serialize_document(doc) == "<omdoc base=\"http://a.org/d\"/>\n");
}

TEST_CASE("parse then serialize round-trips every fixture structurally") {
  for (const char* name : {"algebra1.omdoc", "views.omdoc", "meta.omdoc", "styles.omdoc"}) {
    Document doc = testutil::load_fixture(name);
    std::string out = serialize_document(doc);
    Document back = parse_document(out, doc.base, name);
    TheoryGraph g1, g2;
    g1.add_document(doc);
    g2.add_document(back);
    CHECK(graph_equal(g1, g2));
  }
}

TEST_CASE("serialization is a fixpoint and preserves declaration order") {
  for (const char* name : {"algebra1.omdoc", "views.omdoc", "meta.omdoc", "styles.omdoc"}) {
    Document doc = testutil::load_fixture(name);
    std::string once = serialize_document(doc);
    Document back = parse_document(once, doc.base, name);
    std::string twice = serialize_document(back);
    CHECK(once == twice);

    // order-sensitive check: atom URIs in identical order
    auto a1 = atomize(doc);
    auto a2 = atomize(back);
    REQUIRE(a1.size() == a2.size());
    for (size_t i = 0; i < a1.size(); ++i) CHECK(a1[i].uri == a2[i].uri);
  }
}

TEST_CASE("parsing is deterministic") {
  std::string bytes = testutil::read_file(testutil::fixture_path("algebra1.omdoc"));
  Document d1 = parse_document_auto(bytes, "a");
  Document d2 = parse_document_auto(bytes, "a");
  TheoryGraph g1, g2;
  g1.add_document(d1);
  g2.add_document(d2);
  CHECK(graph_equal(g1, g2));
  CHECK(serialize_document(d1) == serialize_document(d2));
}

TEST_CASE("morphism text round-trips") {
  Uri ring = parse_uri(testutil::kAlgebraDoc + "?Ring");
  Morphism m = parse_morphism("??mult/mag", ring);
  REQUIRE(m.as_import() != nullptr);
  CHECK(m.as_import()->theory == ring);
  CHECK(m.as_import()->path.str() == "mult/mag");

  Uri views = parse_uri(testutil::kViewsDoc + "?v2");
  Morphism comp = parse_morphism(testutil::kAlgebraDoc + "?Ring?add;?v1", views);
  REQUIRE(comp.as_compose() != nullptr);
  CHECK(comp.as_compose()->first.as_import()->path.str() == "add");
  CHECK(comp.as_compose()->second.as_view()->view.str() == testutil::kViewsDoc + "?v1");

  Morphism ident = parse_morphism("id(" + testutil::kAlgebraDoc + "?Magma)", views);
  CHECK(ident.as_identity() != nullptr);
}
