#include <doctest.h>

#include "tgk/term.hpp"

using namespace tgk;

namespace {

Uri sym(const std::string& s) { return parse_uri(s); }

}  // namespace

TEST_CASE("alpha equivalence renames bound variables only") {
  Term forall = Term::symbol(sym("http://l.org/fol?FOL?forall"));
  Term lx = Term::bind(forall, {{"x", std::nullopt}}, Term::var("x"));
  Term ly = Term::bind(forall, {{"y", std::nullopt}}, Term::var("y"));
  Term free = Term::bind(forall, {{"y", std::nullopt}}, Term::var("z"));
  CHECK(alpha_equal(lx, ly));
  CHECK(!alpha_equal(lx, free));

  // free variables compare by name
  CHECK(alpha_equal(Term::var("a"), Term::var("a")));
  CHECK(!alpha_equal(Term::var("a"), Term::var("b")));
}

TEST_CASE("alpha equivalence is an equivalence relation") {
  Term f = Term::symbol(sym("http://l.org/d?T?f"));
  Term a = Term::bind(f, {{"x", std::nullopt}, {"y", std::nullopt}},
                      Term::apply(f, {Term::var("x"), Term::var("y")}));
  Term b = Term::bind(f, {{"u", std::nullopt}, {"v", std::nullopt}},
                      Term::apply(f, {Term::var("u"), Term::var("v")}));
  Term c = Term::bind(f, {{"p", std::nullopt}, {"q", std::nullopt}},
                      Term::apply(f, {Term::var("p"), Term::var("q")}));
  CHECK(alpha_equal(a, a));
  CHECK(alpha_equal(a, b));
  CHECK(alpha_equal(b, a));
  CHECK(alpha_equal(b, c));
  CHECK(alpha_equal(a, c));

  // swapped bound occurrences are different
  Term d = Term::bind(f, {{"u", std::nullopt}, {"v", std::nullopt}},
                      Term::apply(f, {Term::var("v"), Term::var("u")}));
  CHECK(!alpha_equal(a, d));
}

TEST_CASE("binder rejects duplicate variables, apply rejects empty args") {
  Term f = Term::symbol(sym("http://l.org/d?T?f"));
  CHECK_THROWS_AS(Term::bind(f, {{"x", std::nullopt}, {"x", std::nullopt}}, Term::var("x")), Error);
  CHECK_THROWS_AS(Term::apply(f, {}), Error);
}

TEST_CASE("map_symbols rewrites references everywhere") {
  Uri from = sym("http://l.org/d?A?c");
  Uri to = sym("http://l.org/d?B?imp/c");
  Term t = Term::bind(Term::symbol(sym("http://l.org/fol?FOL?forall")),
                      {{"x", Term::symbol(from)}},
                      Term::apply(Term::symbol(from), {Term::var("x")}));
  Term mapped = map_symbols(t, [&](const Uri& u) -> std::optional<Term> {
    if (u == from) return Term::symbol(to);
    return std::nullopt;
  });
  int hits = 0;
  for_each_symbol(mapped, [&](const Uri& u) {
    CHECK(u != from);
    if (u == to) ++hits;
  });
  CHECK(hits == 2);
}
