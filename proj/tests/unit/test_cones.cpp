#include <doctest.h>

#include "tgk/cones.hpp"
#include "testutil.hpp"

using namespace tgk;

namespace {

Uri alg(const std::string& rest) { return parse_uri(testutil::kAlgebraDoc + rest); }
Uri views(const std::string& rest) { return parse_uri(testutil::kViewsDoc + rest); }

FactIndex algebra_index() {
  FactSet out;
  for (const char* name : {"algebra1.omdoc", "views.omdoc"}) {
    FactSet facts = extract_abox(testutil::load_fixture(name));
    out.insert(facts.begin(), facts.end());
  }
  return FactIndex(out);
}

}  // namespace

TEST_CASE("backward cone of Ring per the figure") {
  FactIndex index = algebra_index();
  auto cone = backward_cone(index, alg("?Ring"), true);
  CHECK(cone == std::set<Uri>{alg("?Ring"), alg("?CGroup"), alg("?Group"), alg("?Monoid"), alg("?Magma"),
                              alg("?Distrib")});

  auto one_step = backward_cone(index, alg("?Ring"), false);
  CHECK(one_step == std::set<Uri>{alg("?Ring"), alg("?CGroup"), alg("?Monoid"), alg("?Distrib")});
}

TEST_CASE("a leaf's backward cone is itself") {
  FactIndex index = algebra_index();
  CHECK(backward_cone(index, alg("?Magma"), true) == std::set<Uri>{alg("?Magma")});
}

TEST_CASE("forward cone of Magma includes the views") {
  FactIndex index = algebra_index();
  auto cone = forward_cone(index, alg("?Magma"), true);
  CHECK(cone == std::set<Uri>{alg("?Magma"), alg("?Monoid"), alg("?Group"), alg("?CGroup"), alg("?Distrib"),
                              alg("?Ring"), views("?v1"), views("?v2")});

  auto one_step = forward_cone(index, alg("?Magma"), false);
  CHECK(one_step == std::set<Uri>{alg("?Magma"), alg("?Monoid"), alg("?Distrib")});
}

TEST_CASE("forward cone of a view codomain holds the views alone") {
  FactIndex index = algebra_index();
  auto cone = forward_cone(index, alg("?Integers"), true);
  CHECK(cone == std::set<Uri>{alg("?Integers"), views("?v1"), views("?v2")});
}

TEST_CASE("unknown modules are rejected") {
  FactIndex index = algebra_index();
  CHECK_THROWS_WITH_AS(backward_cone(index, alg("?Nope"), true), doctest::Contains("UnknownModule"), Error);
  // a constant is an individual but not a module
  CHECK_THROWS_WITH_AS(forward_cone(index, alg("?Magma?*"), true), doctest::Contains("UnknownModule"), Error);
}

TEST_CASE("duality holds for every module pair of the fixture") {
  FactIndex index = algebra_index();
  std::set<Uri> modules = index.individuals_of_type(TypeName::Theory);
  auto vs = index.individuals_of_type(TypeName::View);
  modules.insert(vs.begin(), vs.end());

  for (const auto& m : modules) {
    auto backward = backward_cone(index, m, true);
    for (const auto& n : modules) {
      bool n_in_backward_m = backward.count(n) > 0;
      bool m_in_forward_n = forward_cone(index, n, true).count(m) > 0;
      CHECK(n_in_backward_m == m_in_forward_n);
    }
  }
}

TEST_CASE("backward cones are closed under membership") {
  FactIndex index = algebra_index();
  std::set<Uri> modules = index.individuals_of_type(TypeName::Theory);
  for (const auto& m : modules) {
    auto cone = backward_cone(index, m, true);
    for (const auto& member : cone) {
      auto inner = backward_cone(index, member, true);
      for (const auto& u : inner) CHECK(cone.count(u));
    }
  }
}

TEST_CASE("cones agree with the query formulation") {
  FactIndex index = algebra_index();
  Uri ring = alg("?Ring");
  auto via_query = query(index, ring, parse_rel_expr("DependsOn+"));
  via_query.insert(ring);
  CHECK(backward_cone(index, ring, true) == via_query);
}

TEST_CASE("cone computation touches only the DependsOn index") {
  FactSet out;
  for (const char* name : {"algebra1.omdoc", "views.omdoc"}) {
    FactSet facts = extract_abox(testutil::load_fixture(name));
    out.insert(facts.begin(), facts.end());
  }
  FactIndex index(out);
  long before_other = index.total_lookups() - index.lookup_count(RelName::DependsOn);
  backward_cone(index, alg("?Ring"), true);
  forward_cone(index, alg("?Magma"), true);
  long after_other = index.total_lookups() - index.lookup_count(RelName::DependsOn);
  CHECK(after_other == before_other);
  CHECK(index.lookup_count(RelName::DependsOn) > 0);
}
