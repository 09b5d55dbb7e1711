#include "tgk/model.hpp"

#include <algorithm>

namespace tgk {

Morphism Morphism::identity(Uri theory) {
  return Morphism(std::make_shared<const Node>(Identity{std::move(theory)}));
}

Morphism Morphism::import_link(Uri theory, LocalName path) {
  return Morphism(std::make_shared<const Node>(ImportLink{std::move(theory), std::move(path)}));
}

Morphism Morphism::view_link(Uri view) {
  return Morphism(std::make_shared<const Node>(ViewLink{std::move(view)}));
}

Morphism Morphism::compose(Morphism first, Morphism second) {
  return Morphism(std::make_shared<const Node>(Compose{std::move(first), std::move(second)}));
}

std::string Morphism::str() const {
  if (auto* id = as_identity()) return "id(" + id->theory.str() + ")";
  if (auto* imp = as_import()) return imp->theory.with_sym(imp->path).str();
  if (auto* v = as_view()) return v->view.str();
  const auto* c = as_compose();
  return c->first.str() + ";" + c->second.str();
}

bool Morphism::operator==(const Morphism& other) const {
  if (node().index() != other.node().index()) return false;
  if (auto* id = as_identity()) return id->theory == other.as_identity()->theory;
  if (auto* imp = as_import()) {
    return imp->theory == other.as_import()->theory && imp->path == other.as_import()->path;
  }
  if (auto* v = as_view()) return v->view == other.as_view()->view;
  const auto* a = as_compose();
  const auto* b = other.as_compose();
  return a->first == b->first && a->second == b->second;
}

const LocalName& assignment_target(const Assignment& a) {
  return std::visit([](const auto& x) -> const LocalName& { return x.target; }, a);
}

const Constant* Theory::find_constant(const std::string& name) const {
  for (const auto& d : declarations) {
    if (auto* c = std::get_if<Constant>(&d)) {
      if (c->name.size() == 1 && c->name.front() == name) return c;
    }
  }
  return nullptr;
}

const Import* Theory::find_import(const std::string& name) const {
  for (const auto& d : declarations) {
    if (auto* i = std::get_if<Import>(&d)) {
      if (i->name.size() == 1 && i->name.front() == name) return i;
    }
  }
  return nullptr;
}

std::vector<const Import*> Theory::imports() const {
  std::vector<const Import*> out;
  for (const auto& d : declarations) {
    if (auto* i = std::get_if<Import>(&d)) out.push_back(i);
  }
  return out;
}

std::vector<const Constant*> Theory::constants() const {
  std::vector<const Constant*> out;
  for (const auto& d : declarations) {
    if (auto* c = std::get_if<Constant>(&d)) out.push_back(c);
  }
  return out;
}

std::vector<const Notation*> Theory::notations() const {
  std::vector<const Notation*> out;
  for (const auto& d : declarations) {
    if (auto* n = std::get_if<Notation>(&d)) out.push_back(n);
  }
  return out;
}

const LocalName& module_name(const Module& m) {
  return std::visit([](const auto& x) -> const LocalName& { return x.name; }, m);
}

const Module* Document::find_module(const LocalName& name) const {
  for (const auto& m : modules) {
    if (module_name(m) == name) return &m;
  }
  return nullptr;
}

void TheoryGraph::add_document(Document doc) {
  if (doc_index_.count(doc.base.doc)) {
    throw Error(ErrorCode::DuplicateUri, "document already loaded", doc.base.str());
  }
  auto owned = std::make_unique<Document>(std::move(doc));
  size_t di = docs_.size();
  doc_index_[owned->base.doc] = di;
  for (size_t mi = 0; mi < owned->modules.size(); ++mi) {
    Uri uri = owned->module_uri(owned->modules[mi]);
    auto [it, inserted] = module_index_.emplace(uri, std::make_pair(di, mi));
    if (!inserted) throw Error(ErrorCode::DuplicateUri, "module already declared", uri.str());
  }
  docs_.push_back(std::move(owned));
}

const Document* TheoryGraph::document(const Uri& doc_uri) const {
  auto it = doc_index_.find(doc_uri.doc);
  return it == doc_index_.end() ? nullptr : docs_[it->second].get();
}

const Module* TheoryGraph::module(const Uri& mod_uri) const {
  auto it = module_index_.find(mod_uri.module());
  if (it == module_index_.end()) return nullptr;
  return &docs_[it->second.first]->modules[it->second.second];
}

const Theory* TheoryGraph::theory(const Uri& mod_uri) const {
  const Module* m = module(mod_uri);
  return m ? std::get_if<Theory>(m) : nullptr;
}

const View* TheoryGraph::view(const Uri& mod_uri) const {
  const Module* m = module(mod_uri);
  return m ? std::get_if<View>(m) : nullptr;
}

namespace {

// Finds an assignment in a container by target path, and the notation in a
// theory by name.
const Assignment* find_assignment(const std::vector<Assignment>& assignments, const LocalName& target) {
  for (const auto& a : assignments) {
    if (assignment_target(a) == target) return &a;
  }
  return nullptr;
}

}  // namespace

TheoryGraph::Lookup TheoryGraph::lookup(const Uri& uri) const {
  Lookup out;
  const Module* m = module(uri);
  if (!m) return out;
  if (!uri.sym) {
    out.theory = std::get_if<Theory>(m);
    out.view = std::get_if<View>(m);
    out.style = std::get_if<Style>(m);
    return out;
  }
  const LocalName& sym = *uri.sym;
  if (auto* view = std::get_if<View>(m)) {
    out.assignment = find_assignment(view->assignments, sym);
    return out;
  }
  if (auto* style = std::get_if<Style>(m)) {
    for (const auto& n : style->notations) {
      if (n.uri == uri) out.notation = &n;
    }
    return out;
  }
  const auto* theory = std::get_if<Theory>(m);
  if (sym.size() == 1) {
    out.constant = theory->find_constant(sym.front());
    if (!out.constant) out.import = theory->find_import(sym.front());
    if (!out.constant && !out.import) {
      for (const auto* n : theory->notations()) {
        if (n->uri == uri) out.notation = n;
      }
    }
    return out;
  }
  // Multi-segment: an assignment inside an import, addressed as imp/target.
  if (const Import* imp = theory->find_import(sym.front())) {
    out.assignment = find_assignment(imp->assignments, sym.tail(1));
  }
  return out;
}

std::vector<AtomicDecl> atomize(const Document& doc) {
  std::vector<AtomicDecl> atoms;
  for (const auto& m : doc.modules) {
    Uri mod_uri = doc.module_uri(m);
    if (auto* t = std::get_if<Theory>(&m)) {
      atoms.push_back({mod_uri, TheoryHeader{t->meta}});
      for (const auto& d : t->declarations) {
        if (auto* c = std::get_if<Constant>(&d)) {
          atoms.push_back({mod_uri.with_sym(c->name), *c});
        } else if (auto* i = std::get_if<Import>(&d)) {
          Uri imp_uri = mod_uri.with_sym(i->name);
          atoms.push_back({imp_uri, ImportHeader{i->from}});
          for (const auto& a : i->assignments) {
            atoms.push_back({mod_uri.with_sym(i->name.plus(assignment_target(a))), AssignmentAtom{imp_uri, a}});
          }
        } else if (auto* n = std::get_if<Notation>(&d)) {
          atoms.push_back({n->uri, NotationAtom{mod_uri, *n}});
        }
      }
    } else if (auto* v = std::get_if<View>(&m)) {
      atoms.push_back({mod_uri, ViewHeader{v->from, v->to}});
      for (const auto& a : v->assignments) {
        atoms.push_back({mod_uri.with_sym(assignment_target(a)), AssignmentAtom{mod_uri, a}});
      }
      for (const auto& n : v->notations) {
        atoms.push_back({n.uri, NotationAtom{mod_uri, n}});
      }
    } else if (auto* s = std::get_if<Style>(&m)) {
      atoms.push_back({mod_uri, StyleHeader{s->imports}});
      for (const auto& n : s->notations) {
        atoms.push_back({n.uri, NotationAtom{mod_uri, n}});
      }
    }
  }
  return atoms;
}

void Assembler::feed(const AtomicDecl& atom) {
  if (!seen_.emplace(atom.uri, true).second) {
    throw Error(ErrorCode::DuplicateUri, "atom with duplicate URI", atom.uri.str());
  }
  auto doc_it = docs_.find(atom.uri.doc);
  if (doc_it == docs_.end()) {
    doc_order_.push_back(atom.uri.doc);
    doc_it = docs_.emplace(atom.uri.doc, DocBuild{Document{Uri(atom.uri.doc)}, {}}).first;
  }
  DocBuild& build = doc_it->second;

  auto module_of = [&](const Uri& uri) -> Module* {
    if (!uri.mod) return nullptr;
    auto it = build.modules.find(*uri.mod);
    if (it == build.modules.end()) return nullptr;
    return &build.doc.modules[it->second];
  };

  if (auto* th = std::get_if<TheoryHeader>(&atom.payload)) {
    build.modules[*atom.uri.mod] = build.doc.modules.size();
    build.doc.modules.push_back(Theory{*atom.uri.mod, th->meta, {}});
    return;
  }
  if (auto* vh = std::get_if<ViewHeader>(&atom.payload)) {
    build.modules[*atom.uri.mod] = build.doc.modules.size();
    build.doc.modules.push_back(View{*atom.uri.mod, vh->from, vh->to, {}, {}});
    return;
  }
  if (auto* sh = std::get_if<StyleHeader>(&atom.payload)) {
    build.modules[*atom.uri.mod] = build.doc.modules.size();
    build.doc.modules.push_back(Style{*atom.uri.mod, sh->imports, {}});
    return;
  }

  Module* container = module_of(atom.uri);
  if (auto* c = std::get_if<Constant>(&atom.payload)) {
    if (!container || !std::holds_alternative<Theory>(*container)) {
      throw Error(ErrorCode::OrphanAtom, "constant before its theory header", atom.uri.str());
    }
    std::get<Theory>(*container).declarations.push_back(*c);
    return;
  }
  if (auto* ih = std::get_if<ImportHeader>(&atom.payload)) {
    if (!container || !std::holds_alternative<Theory>(*container)) {
      throw Error(ErrorCode::OrphanAtom, "import before its theory header", atom.uri.str());
    }
    std::get<Theory>(*container).declarations.push_back(Import{*atom.uri.sym, ih->from, {}});
    return;
  }
  if (auto* aa = std::get_if<AssignmentAtom>(&atom.payload)) {
    Module* holder = module_of(aa->container);
    if (!holder) throw Error(ErrorCode::OrphanAtom, "assignment before its container", atom.uri.str());
    if (auto* view = std::get_if<View>(holder)) {
      view->assignments.push_back(aa->assignment);
      return;
    }
    auto* theory = std::get_if<Theory>(holder);
    if (theory && aa->container.sym) {
      for (auto& d : theory->declarations) {
        if (auto* imp = std::get_if<Import>(&d)) {
          if (imp->name == *aa->container.sym) {
            imp->assignments.push_back(aa->assignment);
            return;
          }
        }
      }
    }
    throw Error(ErrorCode::OrphanAtom, "assignment before its import header", atom.uri.str());
  }
  const auto* na = std::get_if<NotationAtom>(&atom.payload);
  Module* holder = module_of(na->container);
  if (!holder) throw Error(ErrorCode::OrphanAtom, "notation before its container", atom.uri.str());
  if (auto* theory = std::get_if<Theory>(holder)) {
    theory->declarations.push_back(na->notation);
  } else if (auto* view = std::get_if<View>(holder)) {
    view->notations.push_back(na->notation);
  } else {
    std::get<Style>(*holder).notations.push_back(na->notation);
  }
}

std::vector<Document> Assembler::documents() {
  std::vector<Document> out;
  out.reserve(doc_order_.size());
  for (const auto& key : doc_order_) out.push_back(std::move(docs_.at(key).doc));
  docs_.clear();
  doc_order_.clear();
  seen_.clear();
  return out;
}

TheoryGraph Assembler::finish() {
  TheoryGraph graph;
  for (auto& doc : documents()) graph.add_document(std::move(doc));
  return graph;
}

TheoryGraph assemble(const std::vector<AtomicDecl>& atoms) {
  Assembler asmr;
  for (const auto& a : atoms) asmr.feed(a);
  return asmr.finish();
}

namespace {

// Declaration sets keyed by URI make the comparison order-insensitive.
std::map<Uri, AtomicDecl> atom_map(const TheoryGraph& g) {
  std::map<Uri, AtomicDecl> out;
  for (const auto& doc : g.documents()) {
    for (auto& atom : atomize(*doc)) out.emplace(atom.uri, std::move(atom));
  }
  return out;
}

}  // namespace

bool graph_equal(const TheoryGraph& a, const TheoryGraph& b) {
  return atom_map(a) == atom_map(b);
}

}  // namespace tgk
