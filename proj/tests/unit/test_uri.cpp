#include <doctest.h>

#include <random>

#include "tgk/uri.hpp"

using namespace tgk;

TEST_CASE("parse splits doc, module and symbol") {
  Uri u = parse_uri("http://cds.omdoc.org/math/algebra/algegra1.omdoc?Ring?mult/mon/*");
  CHECK(u.doc == "http://cds.omdoc.org/math/algebra/algegra1.omdoc");
  REQUIRE(u.mod.has_value());
  CHECK(u.mod->segments() == std::vector<std::string>{"Ring"});
  REQUIRE(u.sym.has_value());
  CHECK(u.sym->segments() == std::vector<std::string>{"mult", "mon", "*"});
}

TEST_CASE("parse accepts module-only and relative forms") {
  Uri m = parse_uri("http://a.org/d.omdoc?Magma");
  CHECK(m.doc == "http://a.org/d.omdoc");
  CHECK(m.mod->segments() == std::vector<std::string>{"Magma"});
  CHECK(!m.sym);

  Uri r = parse_uri("?Ring?add/grp/mon/mag/*");
  CHECK(r.doc.empty());
  CHECK(r.mod->str() == "Ring");
  CHECK(r.sym->str() == "add/grp/mon/mag/*");

  Uri d = parse_uri("http://a.org/d.omdoc");
  CHECK(d.is_doc_only());
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse_uri(""), Error);
  CHECK_THROWS_AS(parse_uri("d?A?b?c"), Error);        // three separators
  CHECK_THROWS_AS(parse_uri("d?A//B"), Error);         // empty segment
  CHECK_THROWS_AS(parse_uri("d?A?x//y"), Error);       // empty symbol segment
  CHECK_THROWS_AS(parse_uri("d??sym"), Error);         // symbol without module
  CHECK_THROWS_AS(parse_uri("d?A?x y"), Error);        // space is not a pchar
  CHECK_THROWS_AS(parse_uri("d?A?x%2"), Error);        // truncated escape
  CHECK_THROWS_AS(parse_uri("http://a.org/d#f?A"), Error);  // fragment
}

TEST_CASE("star and percent escapes round-trip through segments") {
  Uri u = parse_uri("http://a.org/d?Magma?*");
  CHECK(u.sym->front() == "*");
  CHECK(format_uri(u) == "http://a.org/d?Magma?*");

  Uri enc = parse_uri("http://a.org/d?Integers?%C2%B7");
  CHECK(enc.sym->front() == "\xC2\xB7");
  CHECK(format_uri(enc) == "http://a.org/d?Integers?%C2%B7");
}

TEST_CASE("format omits absent components") {
  CHECK(format_uri(Uri("d")) == "d");
  CHECK(format_uri(Uri("d", LocalName{"Ring"})) == "d?Ring");
  CHECK(format_uri(Uri("d", LocalName{"Ring"}, LocalName{"mult", "mag", "*"})) == "d?Ring?mult/mag/*");
}

TEST_CASE("resolution handles the three query-relative forms") {
  Uri base = parse_uri("http://a.org/d?Ring?mult");
  CHECK(format_uri(resolve_relative(base, "?Monoid?e")) == "http://a.org/d?Monoid?e");
  CHECK(format_uri(resolve_relative(base, "??e")) == "http://a.org/d?Ring?e");
  CHECK(format_uri(resolve_relative(base, "?/Inner?c")) == "http://a.org/d?Ring/Inner?c");
  CHECK(format_uri(resolve_relative(base, "?Monoid")) == "http://a.org/d?Monoid");
}

TEST_CASE("resolution against moduleless base needs context") {
  Uri base = parse_uri("http://a.org/d");
  CHECK_THROWS_AS(resolve_relative(base, "??sym"), Error);
  CHECK_THROWS_AS(resolve_relative(base, "?/M?c"), Error);
  CHECK_THROWS_AS(resolve_relative(parse_uri("?OnlyMod?x"), "??e"), Error);  // base not absolute
}

TEST_CASE("plain references resolve per RFC 3986") {
  Uri base = parse_uri("http://a.org/x/y/d.omdoc?Ring?mult");
  CHECK(resolve_relative(base, "other.omdoc?T?c").doc == "http://a.org/x/y/other.omdoc");
  CHECK(resolve_relative(base, "../up.omdoc").doc == "http://a.org/x/up.omdoc");
  CHECK(resolve_relative(base, "/root.omdoc?T").doc == "http://a.org/root.omdoc");
  CHECK(resolve_relative(base, "//b.org/e.omdoc").doc == "http://b.org/e.omdoc");
  CHECK(resolve_relative(base, "https://c.org/f?M?s").doc == "https://c.org/f");
  CHECK(resolve_relative(base, "./here.omdoc").doc == "http://a.org/x/y/here.omdoc");
}

TEST_CASE("resolution of an absolute base yields absolute URIs") {
  Uri base = parse_uri("http://a.org/x/d.omdoc?T?c");
  for (const char* ref : {"?M?s", "??s", "?/N?s", "e.omdoc?M", "../f.omdoc", "//h.org/g"}) {
    CHECK(resolve_relative(base, ref).is_absolute());
  }
}

namespace {

std::string random_segment(std::mt19937& rng) {
  static const std::string plain = "abcXYZ019-._~!$&'()*+,;=:@";
  std::uniform_int_distribution<int> len(1, 8);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(plain.size()) + 3);
  std::string s;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
    int k = pick(rng);
    if (k < static_cast<int>(plain.size())) {
      s += plain[static_cast<size_t>(k)];
    } else if (k == static_cast<int>(plain.size())) {
      s += ' ';  // must be escaped
    } else if (k == static_cast<int>(plain.size()) + 1) {
      s += '/';  // must be escaped inside a segment
    } else if (k == static_cast<int>(plain.size()) + 2) {
      s += '?';
    } else {
      s += "\xC3\xA9";  // é
    }
  }
  return s;
}

}  // namespace

TEST_CASE("parse(format(u)) is the identity on 1000 random URIs") {
  std::mt19937 rng(20260810);
  std::uniform_int_distribution<int> nseg(1, 4);
  std::uniform_int_distribution<int> shape(0, 2);
  for (int i = 0; i < 1000; ++i) {
    Uri u("http://fuzz.example/corpus/doc" + std::to_string(i % 17) + ".omdoc");
    int s = shape(rng);
    if (s >= 1) {
      std::vector<std::string> mod;
      for (int j = 0; j < nseg(rng); ++j) mod.push_back(random_segment(rng));
      u.mod = LocalName(mod);
    }
    if (s == 2) {
      std::vector<std::string> sym;
      for (int j = 0; j < nseg(rng); ++j) sym.push_back(random_segment(rng));
      u.sym = LocalName(sym);
    }
    Uri back = parse_uri(format_uri(u));
    REQUIRE(back == u);
  }
}
