#include "tgk/checker.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "tgk/flatten.hpp"
#include "tgk/xml.hpp"

namespace tgk {

const char* validation_level_name(ValidationLevel level) {
  switch (level) {
    case ValidationLevel::Grammar: return "grammar";
    case ValidationLevel::Structural: return "structural";
    case ValidationLevel::Typed: return "typed";
  }
  return "?";
}

bool ValidationReport::has_code(ErrorCode code) const {
  return std::any_of(errors.begin(), errors.end(), [&](const Issue& i) { return i.code == code; });
}

std::string ValidationReport::to_text() const {
  std::string out;
  const char* level = validation_level_name(achieved);
  for (const auto& e : errors) {
    out += std::string(level) + " " + error_code_name(e.code) + " " + e.where + " " + e.message + "\n";
  }
  for (const auto& w : warnings) {
    out += std::string(level) + " warning:" + std::string(error_code_name(w.code)) + " " + w.where + " " +
           w.message + "\n";
  }
  out += std::string(level) + " " + (ok() ? "ok" : "failed") + " checked=" + std::to_string(declarations_checked) +
         "\n";
  return out;
}

std::string ValidationReport::to_xml() const {
  XmlNode root;
  root.name = "report";
  root.attrs.emplace_back("requested", validation_level_name(requested));
  root.attrs.emplace_back("achieved", validation_level_name(achieved));
  root.attrs.emplace_back("checked", std::to_string(declarations_checked));
  for (const auto& e : errors) {
    XmlNode n;
    n.name = "error";
    n.attrs.emplace_back("code", error_code_name(e.code));
    n.attrs.emplace_back("at", e.where);
    n.attrs.emplace_back("message", e.message);
    root.children.push_back(std::move(n));
  }
  for (const auto& w : warnings) {
    XmlNode n;
    n.name = "warning";
    n.attrs.emplace_back("code", error_code_name(w.code));
    n.attrs.emplace_back("at", w.where);
    n.attrs.emplace_back("message", w.message);
    root.children.push_back(std::move(n));
  }
  return XmlWriter().finish(root);
}

std::set<TypeName> FactSetSource::kinds_of(const Uri& individual) const {
  return index_.types_of(individual);
}

std::optional<Uri> FactSetSource::domain_of(const Uri& import_or_view) const {
  const auto& objs = index_.objects(RelName::HasDomain, import_or_view);
  if (objs.size() != 1) return std::nullopt;
  return *objs.begin();
}

std::optional<Uri> FactSetSource::codomain_of(const Uri& import_or_view) const {
  const auto& objs = index_.objects(RelName::HasCodomain, import_or_view);
  if (objs.size() != 1) return std::nullopt;
  return *objs.begin();
}

std::optional<Uri> FactSetSource::meta_of(const Uri& theory) const {
  const auto& objs = index_.objects(RelName::HasMetaTheory, theory);
  if (objs.size() != 1) return std::nullopt;
  return *objs.begin();
}

std::set<Uri> FactSetSource::dependencies_of(const Uri& module) const {
  std::set<Uri> out = index_.objects(RelName::Imports, module);
  const auto& meta = index_.objects(RelName::HasMetaTheory, module);
  out.insert(meta.begin(), meta.end());
  return out;
}

namespace {

// Local atoms indexed for resolution, with the context as fallback.
class StructuralChecker {
 public:
  StructuralChecker(const std::vector<AtomicDecl>& atoms, const FactSource& context)
      : atoms_(atoms), context_(context) {}

  ValidationReport run() {
    collect();
    if (!report_.errors.empty()) {
      // duplicate URIs poison resolution; report and stop at grammar level
      finish();
      return report_;
    }
    check_references();
    check_cycles();
    finish();
    return report_;
  }

 private:
  const std::vector<AtomicDecl>& atoms_;
  const FactSource& context_;
  ValidationReport report_;

  std::map<Uri, const AtomicDecl*> by_uri_;
  std::map<Uri, const TheoryHeader*> theories_;
  std::map<Uri, const ViewHeader*> views_;
  std::set<Uri> styles_;
  std::map<Uri, const ImportHeader*> imports_;          // import uri -> header
  std::map<Uri, std::set<Uri>> members_;                // theory -> constant uris
  std::map<Uri, std::vector<const AssignmentAtom*>> assignments_;  // container -> atoms

  void error(ErrorCode code, const Uri& where, const std::string& message) {
    report_.errors.push_back({code, where.str(), message});
  }

  void collect() {
    for (const auto& atom : atoms_) {
      auto [it, inserted] = by_uri_.emplace(atom.uri, &atom);
      if (!inserted) {
        error(ErrorCode::DuplicateUri, atom.uri, "declared more than once");
        continue;
      }
      if (context_.knows(atom.uri)) {
        error(ErrorCode::DuplicateUri, atom.uri, "already declared in a committed document");
        continue;
      }
      if (auto* th = std::get_if<TheoryHeader>(&atom.payload)) {
        theories_[atom.uri] = th;
      } else if (auto* vh = std::get_if<ViewHeader>(&atom.payload)) {
        views_[atom.uri] = vh;
      } else if (std::holds_alternative<StyleHeader>(atom.payload)) {
        styles_.insert(atom.uri);
      } else if (std::holds_alternative<Constant>(atom.payload)) {
        members_[atom.uri.module()].insert(atom.uri);
      } else if (auto* ih = std::get_if<ImportHeader>(&atom.payload)) {
        imports_[atom.uri] = ih;
        members_[atom.uri.module()].insert(atom.uri);
      } else if (auto* aa = std::get_if<AssignmentAtom>(&atom.payload)) {
        assignments_[aa->container].push_back(aa);
      }
    }
    report_.declarations_checked = static_cast<long>(atoms_.size());
  }

  // ---- resolution ---------------------------------------------------

  bool is_local_module(const Uri& mod) const {
    return theories_.count(mod) || views_.count(mod) || styles_.count(mod);
  }

  bool theory_exists(const Uri& mod) const {
    if (theories_.count(mod)) return true;
    return context_.kinds_of(mod).count(TypeName::Theory) > 0;
  }

  bool view_exists(const Uri& mod) const {
    if (views_.count(mod)) return true;
    return context_.kinds_of(mod).count(TypeName::View) > 0;
  }

  std::optional<Uri> meta_of(const Uri& theory) const {
    auto it = theories_.find(theory);
    if (it != theories_.end()) return it->second->meta;
    return context_.meta_of(theory);
  }

  std::optional<Uri> import_domain(const Uri& import_uri) const {
    auto it = imports_.find(import_uri);
    if (it != imports_.end()) return it->second->from;
    if (context_.kinds_of(import_uri).count(TypeName::Import)) return context_.domain_of(import_uri);
    return std::nullopt;
  }

  bool constant_exists(const Uri& uri) const {
    auto it = members_.find(uri.module());
    if (it != members_.end() && it->second.count(uri)) {
      return std::holds_alternative<Constant>(by_uri_.at(uri)->payload);
    }
    return context_.kinds_of(uri).count(TypeName::Constant) > 0;
  }

  bool import_exists(const Uri& uri) const {
    if (imports_.count(uri)) return true;
    return context_.kinds_of(uri).count(TypeName::Import) > 0;
  }

  // Assignment targets covering a path make it non-canonical.
  bool path_is_redirected(const Uri& import_uri, const LocalName& rest) const {
    auto it = assignments_.find(import_uri);
    if (it != assignments_.end()) {
      for (const auto* aa : it->second) {
        if (rest.starts_with(assignment_target(aa->assignment))) return true;
      }
      return false;
    }
    // foreign import: assignment individuals live at import-uri/target
    for (size_t n = 1; n <= rest.size(); ++n) {
      LocalName prefix(std::vector<std::string>(rest.segments().begin(),
                                                rest.segments().begin() + static_cast<long>(n)));
      Uri candidate = import_uri.module().with_sym(import_uri.sym->plus(prefix));
      auto kinds = context_.kinds_of(candidate);
      if (kinds.count(TypeName::ConstantAssignment) || kinds.count(TypeName::ImportAssignment)) return true;
    }
    return false;
  }

  // Resolves a qualified constant path rooted at a theory. `allow_import`
  // lets the final segment name an import instead of a constant.
  bool resolve_in_theory(const Uri& theory, const LocalName& path, bool allow_import,
                         bool canonical_only) const {
    Uri current = theory;
    for (size_t i = 0; i < path.size(); ++i) {
      bool last = (i + 1 == path.size());
      const std::string& seg = path.segments()[i];
      Uri candidate = current.module().with_sym(LocalName{seg});
      if (last) {
        if (constant_exists(candidate)) return true;
        if (allow_import && import_exists(candidate)) return true;
      }
      if (seg == "meta") {
        auto meta = meta_of(current);
        if (meta && !import_exists(candidate)) {
          current = meta->module();
          continue;
        }
      }
      if (!import_exists(candidate)) return false;
      if (canonical_only && !last) {
        LocalName rest = path.tail(i + 1);
        if (path_is_redirected(candidate, rest)) return false;
      }
      auto domain = import_domain(candidate);
      if (!domain) return false;
      current = domain->module();
    }
    return false;
  }

  bool resolvable(const Uri& uri) const {
    if (uri.is_doc_only()) {
      return true;  // document references are not checked structurally
    }
    if (!uri.sym) {
      return is_local_module(uri) || !context_.kinds_of(uri).empty();
    }
    if (!theory_exists(uri.module())) return false;
    return resolve_in_theory(uri.module(), *uri.sym, /*allow_import=*/uri.sym->size() == 1,
                             /*canonical_only=*/true);
  }

  // ---- morphisms ----------------------------------------------------

  struct MorphType {
    Uri domain;
    Uri codomain;
  };

  std::optional<Uri> import_path_domain(const Uri& theory, const LocalName& path, const Uri& at) {
    Uri current = theory;
    for (const auto& seg : path.segments()) {
      Uri candidate = current.module().with_sym(LocalName{seg});
      if (seg == "meta" && !import_exists(candidate)) {
        auto meta = meta_of(current);
        if (meta) {
          current = meta->module();
          continue;
        }
      }
      if (!import_exists(candidate)) {
        error(ErrorCode::UnresolvedReference, at, "no import '" + seg + "' in " + current.str());
        return std::nullopt;
      }
      auto domain = import_domain(candidate);
      if (!domain) {
        error(ErrorCode::UnresolvedReference, candidate, "import has no resolvable domain");
        return std::nullopt;
      }
      current = domain->module();
    }
    return current;
  }

  std::optional<MorphType> morphism_type(const Morphism& m, const Uri& at) {
    if (auto* id = m.as_identity()) {
      if (!theory_exists(id->theory.module())) {
        error(ErrorCode::UnresolvedReference, id->theory, "identity of unknown theory");
        return std::nullopt;
      }
      return MorphType{id->theory.module(), id->theory.module()};
    }
    if (auto* link = m.as_import()) {
      if (!theory_exists(link->theory.module())) {
        error(ErrorCode::UnresolvedReference, link->theory, "morphism root is not a known theory");
        return std::nullopt;
      }
      auto domain = import_path_domain(link->theory.module(), link->path, at);
      if (!domain) return std::nullopt;
      return MorphType{*domain, link->theory.module()};
    }
    if (auto* vl = m.as_view()) {
      auto it = views_.find(vl->view);
      if (it != views_.end()) return MorphType{it->second->from.module(), it->second->to.module()};
      if (context_.kinds_of(vl->view).count(TypeName::View)) {
        auto dom = context_.domain_of(vl->view);
        auto cod = context_.codomain_of(vl->view);
        if (dom && cod) return MorphType{dom->module(), cod->module()};
      }
      error(ErrorCode::UnresolvedReference, vl->view, "morphism component is not a known view");
      return std::nullopt;
    }
    const auto* c = m.as_compose();
    auto first = morphism_type(c->first, at);
    auto second = morphism_type(c->second, at);
    if (!first || !second) return std::nullopt;
    if (first->codomain != second->domain) {
      error(ErrorCode::MorphismDomainMismatch, at,
            "composition mismatch: " + first->codomain.str() + " vs " + second->domain.str());
      return std::nullopt;
    }
    return MorphType{first->domain, second->codomain};
  }

  // ---- reference checking -------------------------------------------

  void check_term(const Uri& at, const Term& t) {
    for_each_symbol(t, [&](const Uri& u) {
      if (!resolvable(u)) error(ErrorCode::UnresolvedReference, at, "cannot resolve '" + u.str() + "'");
    });
  }

  void check_assignment(const Uri& container_theory_or_view, const Uri& atom_uri, const Uri& domain,
                        const Uri& expected_codomain, const AssignmentAtom& aa) {
    const LocalName& target = assignment_target(aa.assignment);
    if (auto* ca = std::get_if<ConstAssign>(&aa.assignment)) {
      if (!theory_exists(domain.module()) ||
          !resolve_in_theory(domain.module(), target, false, /*canonical_only=*/true)) {
        error(ErrorCode::UnresolvedReference, atom_uri, "assignment target '" + target.str() + "' not found in " +
                                                            domain.str());
      }
      check_term(atom_uri, ca->value);
    } else {
      const auto& ia = std::get<ImportAssign>(aa.assignment);
      auto target_domain = import_path_domain(domain.module(), target, atom_uri);
      if (!target_domain) return;
      auto mt = morphism_type(ia.value, atom_uri);
      if (!mt) return;
      if (mt->domain != target_domain->module()) {
        error(ErrorCode::MorphismDomainMismatch, atom_uri,
              "assigned morphism has domain " + mt->domain.str() + ", target needs " + target_domain->str());
      }
      if (mt->codomain != expected_codomain.module()) {
        error(ErrorCode::MorphismDomainMismatch, atom_uri,
              "assigned morphism has codomain " + mt->codomain.str() + ", expected " + expected_codomain.str());
      }
    }
    (void)container_theory_or_view;
  }

  void check_references() {
    for (const auto& atom : atoms_) {
      if (auto* th = std::get_if<TheoryHeader>(&atom.payload)) {
        if (th->meta && !theory_exists(th->meta->module())) {
          error(ErrorCode::UnresolvedReference, atom.uri, "meta-theory '" + th->meta->str() + "' not found");
        }
      } else if (auto* vh = std::get_if<ViewHeader>(&atom.payload)) {
        if (!theory_exists(vh->from.module())) {
          error(ErrorCode::UnresolvedReference, atom.uri, "view domain '" + vh->from.str() + "' not found");
        }
        if (!theory_exists(vh->to.module())) {
          error(ErrorCode::UnresolvedReference, atom.uri, "view codomain '" + vh->to.str() + "' not found");
        }
      } else if (auto* sh = std::get_if<StyleHeader>(&atom.payload)) {
        for (const auto& imp : sh->imports) {
          bool known = styles_.count(imp) || context_.kinds_of(imp).count(TypeName::Style);
          if (!known) error(ErrorCode::UnresolvedReference, atom.uri, "style import '" + imp.str() + "' not found");
        }
      } else if (auto* c = std::get_if<Constant>(&atom.payload)) {
        if (c->type) check_term(atom.uri, *c->type);
        if (c->definiens) check_term(atom.uri, *c->definiens);
      } else if (auto* ih = std::get_if<ImportHeader>(&atom.payload)) {
        if (!theory_exists(ih->from.module())) {
          error(ErrorCode::UnresolvedReference, atom.uri, "import domain '" + ih->from.str() + "' not found");
        }
      } else if (auto* aa = std::get_if<AssignmentAtom>(&atom.payload)) {
        // the container decides domain and codomain
        if (auto it = imports_.find(aa->container); it != imports_.end()) {
          check_assignment(aa->container.module(), atom.uri, it->second->from, aa->container.module(), *aa);
        } else if (auto vt = views_.find(aa->container.module()); vt != views_.end()) {
          check_assignment(aa->container.module(), atom.uri, vt->second->from, vt->second->to, *aa);
        } else {
          error(ErrorCode::UnresolvedReference, atom.uri, "assignment container not found");
        }
      } else if (auto* na = std::get_if<NotationAtom>(&atom.payload)) {
        // notation targets may point anywhere; only the module must exist
        const Uri& target = na->notation.target;
        if (target.mod && !target.doc.empty()) {
          bool known = is_local_module(target.module()) || !context_.kinds_of(target.module()).empty();
          if (!known) {
            error(ErrorCode::UnresolvedReference, atom.uri, "notation target '" + target.str() + "' not found");
          }
        }
      }
    }
  }

  // ---- cycles ---------------------------------------------------------

  void check_cycles() {
    // edges: imports plus meta, local atoms first, context for the rest
    std::map<Uri, std::set<Uri>> edges;
    for (const auto& [uri, header] : imports_) {
      edges[uri.module()].insert(header->from.module());
    }
    for (const auto& [uri, header] : theories_) {
      if (header->meta) edges[uri].insert(header->meta->module());
    }

    enum class Mark { White, Gray, Black };
    std::map<Uri, Mark> marks;
    std::function<bool(const Uri&)> visit = [&](const Uri& node) -> bool {
      auto [it, inserted] = marks.emplace(node, Mark::Gray);
      if (!inserted) {
        if (it->second == Mark::Gray) {
          error(ErrorCode::ImportCycle, node, "import/meta cycle detected");
          it->second = Mark::Black;
          return false;
        }
        return true;
      }
      std::set<Uri> next;
      auto local = edges.find(node);
      if (local != edges.end()) {
        next = local->second;
      } else {
        next = context_.dependencies_of(node);
      }
      for (const auto& n : next) {
        if (!visit(n)) break;
      }
      marks[node] = Mark::Black;
      return true;
    };
    for (const auto& [uri, header] : theories_) visit(uri);
  }

  void finish() {
    report_.requested = ValidationLevel::Structural;
    report_.achieved = report_.errors.empty() ? ValidationLevel::Structural : ValidationLevel::Grammar;
  }
};

}  // namespace

ValidationReport validate_structural(const std::vector<AtomicDecl>& atoms, const FactSource& context) {
  return StructuralChecker(atoms, context).run();
}

// --------------------------------------------------------------------------
// Stage 3

void PluginRegistry::add(std::shared_ptr<const FoundationPlugin> plugin) {
  by_meta_[plugin->meta_theory()] = std::move(plugin);
}

const FoundationPlugin* PluginRegistry::for_meta(const Uri& meta) const {
  auto it = by_meta_.find(meta.module());
  return it == by_meta_.end() ? nullptr : it->second.get();
}

void PluginRegistry::set_default(std::shared_ptr<const FoundationPlugin> plugin) {
  default_ = std::move(plugin);
}

namespace {

class SyntacticFoundation final : public FoundationPlugin {
 public:
  explicit SyntacticFoundation(int max_depth) : max_depth_(max_depth) {}

  Uri meta_theory() const override { return Uri(); }

  Judgment equal(const Flattener& graph, const Uri& theory, const Term& a, const Term& b) const override {
    (void)theory;
    bool exceeded = false;
    Term ea = expand(graph, a, max_depth_, exceeded);
    Term eb = expand(graph, b, max_depth_, exceeded);
    if (alpha_equal(ea, eb)) return Judgment::Yes;
    return exceeded ? Judgment::Unknown : Judgment::No;
  }

  Judgment has_type(const Flattener& graph, const Uri& theory, const Term& a, const Term& b) const override {
    const Term::SymbolRef* s = a.as_symbol();
    if (!s) return Judgment::Unknown;
    auto item = graph.deref(s->uri);
    std::optional<Term> declared;
    if (item.constant && item.constant->type) declared = item.constant->type;
    if (item.induced && item.induced->type) declared = item.induced->type;
    if (!declared) return Judgment::Unknown;
    return equal(graph, theory, *declared, b);
  }

 private:
  // Unfolds defined symbols up to the depth cap.
  Term expand(const Flattener& graph, const Term& t, int depth, bool& exceeded) const {
    if (depth <= 0) {
      bool has_defined = false;
      for_each_symbol(t, [&](const Uri& u) {
        auto item = graph.deref(u);
        if ((item.constant && item.constant->definiens) || (item.induced && item.induced->definiens)) {
          has_defined = true;
        }
      });
      if (has_defined) exceeded = true;
      return t;
    }
    return map_symbols(t, [&](const Uri& u) -> std::optional<Term> {
      auto item = graph.deref(u);
      std::optional<Term> definiens;
      if (item.constant && item.constant->definiens) definiens = item.constant->definiens;
      if (item.induced && item.induced->definiens) definiens = item.induced->definiens;
      if (!definiens) return std::nullopt;
      return expand(graph, *definiens, depth - 1, exceeded);
    });
  }

  int max_depth_;
};

Judgment check_with(const FoundationPlugin& plugin, const Flattener& flat, const Uri& theory, const Term& a,
                    const Term& b) {
  return plugin.has_type(flat, theory, a, b);
}

}  // namespace

std::shared_ptr<const FoundationPlugin> syntactic_foundation(int max_expansion_depth) {
  return std::make_shared<SyntacticFoundation>(max_expansion_depth);
}

ValidationReport validate_typed(const TheoryGraph& graph, const PluginRegistry& plugins) {
  ValidationReport report;
  report.requested = ValidationLevel::Typed;
  Flattener flat(graph);

  auto plugin_for = [&](const std::optional<Uri>& meta, const Uri& at) -> const FoundationPlugin* {
    if (meta) {
      if (const FoundationPlugin* p = plugins.for_meta(*meta)) return p;
      if (plugins.fallback()) return plugins.fallback();
      report.errors.push_back({ErrorCode::MissingPlugin, meta->str(),
                               "no foundation plugin registered for meta-theory (at " + at.str() + ")"});
      return nullptr;
    }
    if (plugins.fallback()) return plugins.fallback();
    report.errors.push_back({ErrorCode::MissingPlugin, at.str(), "no default foundation plugin registered"});
    return nullptr;
  };

  for (const auto& doc : graph.documents()) {
    for (const auto& m : doc->modules) {
      Uri self = doc->module_uri(m);
      if (auto* t = std::get_if<Theory>(&m)) {
        const FoundationPlugin* plugin = plugin_for(t->meta, self);
        if (!plugin) continue;
        for (const auto* c : t->constants()) {
          if (!c->type || !c->definiens) continue;  // only fully given constants are checked
          ++report.declarations_checked;
          Judgment j = check_with(*plugin, flat, self, *c->definiens, *c->type);
          Uri cu = self.with_sym(c->name);
          if (j == Judgment::No) {
            report.errors.push_back({ErrorCode::TypeMismatch, cu.str(), "definiens does not have the declared type"});
          } else if (j == Judgment::Unknown) {
            report.warnings.push_back({ErrorCode::TypeMismatch, cu.str(), "typing not decided by the foundation"});
          }
        }
      } else if (auto* v = std::get_if<View>(&m)) {
        const Theory* codomain = graph.theory(v->to);
        const FoundationPlugin* plugin = plugin_for(codomain ? codomain->meta : std::nullopt, self);
        if (!plugin) continue;
        Morphism link = Morphism::view_link(self);
        for (const auto& a : v->assignments) {
          auto* ca = std::get_if<ConstAssign>(&a);
          if (!ca) continue;
          auto item = flat.deref(v->from.module().with_sym(ca->target));
          std::optional<Term> declared;
          if (item.constant && item.constant->type) declared = item.constant->type;
          if (item.induced && item.induced->type) declared = item.induced->type;
          if (!declared) continue;
          ++report.declarations_checked;
          Term translated = flat.apply_morphism(link, *declared);
          Judgment j = check_with(*plugin, flat, v->to.module(), ca->value, translated);
          Uri au = self.with_sym(ca->target);
          if (j == Judgment::No) {
            report.errors.push_back({ErrorCode::TypeMismatch, au.str(), "assigned value does not have the translated type"});
          } else if (j == Judgment::Unknown) {
            report.warnings.push_back({ErrorCode::TypeMismatch, au.str(), "typing not decided by the foundation"});
          }
        }
      }
    }
  }
  report.achieved = report.ok() ? ValidationLevel::Typed : ValidationLevel::Structural;
  return report;
}

}  // namespace tgk
