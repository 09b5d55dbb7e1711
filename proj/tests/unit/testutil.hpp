#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tgk/model.hpp"
#include "tgk/reader.hpp"

namespace testutil {

inline const std::string kAlgebraDoc = "http://cds.omdoc.org/math/algebra/algebra1.omdoc";
inline const std::string kViewsDoc = "http://cds.omdoc.org/math/algebra/views.omdoc";
inline const std::string kMetaDoc = "http://cds.omdoc.org/logics/meta.omdoc";
inline const std::string kStylesDoc = "http://cds.omdoc.org/styles/base.omdoc";

inline std::string fixture_path(const std::string& name) {
  return std::string(TGK_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline tgk::Document load_fixture(const std::string& name) {
  return tgk::parse_document_auto(read_file(fixture_path(name)), name);
}

inline tgk::TheoryGraph load_algebra_graph(bool with_views = true) {
  tgk::TheoryGraph g;
  g.add_document(load_fixture("algebra1.omdoc"));
  if (with_views) g.add_document(load_fixture("views.omdoc"));
  return g;
}

inline tgk::TheoryGraph load_meta_graph() {
  tgk::TheoryGraph g;
  g.add_document(load_fixture("meta.omdoc"));
  return g;
}

// Modules an atom refers to; used to order streams so that referenced
// headers arrive first.
inline std::vector<tgk::Uri> referenced_modules(const tgk::AtomicDecl& atom) {
  using namespace tgk;
  std::vector<Uri> out;
  auto add_term = [&out](const Term& t) {
    for_each_symbol(t, [&out](const Uri& u) { out.push_back(u.module()); });
  };
  std::function<void(const Morphism&)> add_morphism = [&](const Morphism& m) {
    if (auto* id = m.as_identity()) out.push_back(id->theory);
    if (auto* imp = m.as_import()) out.push_back(imp->theory);
    if (auto* v = m.as_view()) out.push_back(v->view);
    if (auto* c = m.as_compose()) {
      add_morphism(c->first);
      add_morphism(c->second);
    }
  };
  if (auto* th = std::get_if<TheoryHeader>(&atom.payload)) {
    if (th->meta) out.push_back(th->meta->module());
  } else if (auto* vh = std::get_if<ViewHeader>(&atom.payload)) {
    out.push_back(vh->from.module());
    out.push_back(vh->to.module());
  } else if (auto* sh = std::get_if<StyleHeader>(&atom.payload)) {
    for (const auto& u : sh->imports) out.push_back(u.module());
  } else if (auto* c = std::get_if<Constant>(&atom.payload)) {
    if (c->type) add_term(*c->type);
    if (c->definiens) add_term(*c->definiens);
  } else if (auto* ih = std::get_if<ImportHeader>(&atom.payload)) {
    out.push_back(ih->from.module());
  } else if (auto* aa = std::get_if<AssignmentAtom>(&atom.payload)) {
    if (auto* ca = std::get_if<ConstAssign>(&aa->assignment)) {
      add_term(ca->value);
    } else {
      add_morphism(std::get<ImportAssign>(aa->assignment).value);
    }
  }
  return out;
}

// Random topological order of the atom stream under the two stream
// constraints: container headers before children, referenced module
// headers before use.
inline std::vector<tgk::AtomicDecl> dependency_respecting_permutation(
    const std::vector<tgk::AtomicDecl>& atoms, std::mt19937& rng) {
  using namespace tgk;
  std::map<Uri, size_t> header_index;
  for (size_t i = 0; i < atoms.size(); ++i) {
    const auto& p = atoms[i].payload;
    if (std::holds_alternative<TheoryHeader>(p) || std::holds_alternative<ViewHeader>(p) ||
        std::holds_alternative<StyleHeader>(p)) {
      header_index[atoms[i].uri] = i;
    }
  }
  // import headers are containers for their assignment atoms
  std::map<Uri, size_t> import_index;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (std::holds_alternative<ImportHeader>(atoms[i].payload)) import_index[atoms[i].uri] = i;
  }

  std::vector<std::set<size_t>> deps(atoms.size());
  auto add_dep = [&](size_t i, const Uri& module) {
    auto it = header_index.find(module);
    if (it != header_index.end() && it->second != i) deps[i].insert(it->second);
  };
  for (size_t i = 0; i < atoms.size(); ++i) {
    const auto& atom = atoms[i];
    if (!std::holds_alternative<TheoryHeader>(atom.payload) &&
        !std::holds_alternative<ViewHeader>(atom.payload) &&
        !std::holds_alternative<StyleHeader>(atom.payload)) {
      add_dep(i, atom.uri.module());
    }
    if (auto* aa = std::get_if<AssignmentAtom>(&atom.payload)) {
      auto it = import_index.find(aa->container);
      if (it != import_index.end()) deps[i].insert(it->second);
      add_dep(i, aa->container.module());
    }
    if (auto* na = std::get_if<NotationAtom>(&atom.payload)) {
      add_dep(i, na->container.module());
    }
    for (const auto& m : referenced_modules(atom)) add_dep(i, m);
  }

  std::vector<size_t> ready;
  std::vector<size_t> pending(atoms.size());
  std::vector<std::vector<size_t>> dependents(atoms.size());
  for (size_t i = 0; i < atoms.size(); ++i) {
    pending[i] = deps[i].size();
    for (size_t d : deps[i]) dependents[d].push_back(i);
    if (deps[i].empty()) ready.push_back(i);
  }
  std::vector<tgk::AtomicDecl> out;
  out.reserve(atoms.size());
  while (!ready.empty()) {
    std::uniform_int_distribution<size_t> pick(0, ready.size() - 1);
    size_t k = pick(rng);
    size_t i = ready[k];
    ready.erase(ready.begin() + static_cast<long>(k));
    out.push_back(atoms[i]);
    for (size_t j : dependents[i]) {
      if (--pending[j] == 0) ready.push_back(j);
    }
  }
  if (out.size() != atoms.size()) throw std::runtime_error("cycle in atom dependencies");
  return out;
}

}  // namespace testutil
