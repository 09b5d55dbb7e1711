#include "tgk/flatten.hpp"

#include <algorithm>

namespace tgk {

namespace {

const std::string kMetaSegment = "meta";

bool is_meta_path(const LocalName& path) {
  return !path.empty() && path.front() == kMetaSegment;
}

}  // namespace

bool tables_equal(const MorphismTable& a, const MorphismTable& b) {
  if (a.domain != b.domain || a.codomain != b.codomain) return false;
  if (a.map.size() != b.map.size()) return false;
  for (const auto& [path, term] : a.map) {
    auto it = b.map.find(path);
    if (it == b.map.end() || !alpha_equal(term, it->second)) return false;
  }
  return true;
}

const Flattener::FlatTheory& Flattener::flat_theory(const Uri& theory_uri) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = flat_cache_.find(theory_uri);
    if (it != flat_cache_.end()) return *it->second;
  }
  auto built = std::make_shared<FlatTheory>();
  const Theory* t = graph_.theory(theory_uri);
  if (t) {
    std::vector<Uri> stack;
    build_flat(*t, theory_uri, built->entries, stack);
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = flat_cache_.emplace(theory_uri, std::move(built));
  return *it->second;
}

void Flattener::build_flat(const Theory& theory, const Uri& self, std::vector<FlatEntry>& out,
                           std::vector<Uri>& stack) const {
  if (std::find(stack.begin(), stack.end(), self) != stack.end()) {
    throw Error(ErrorCode::ImportCycle, "import cycle while flattening", self.str());
  }
  stack.push_back(self);

  // The meta-theory behaves like a distinguished import named `meta`,
  // listed ahead of the theory's own declarations.
  if (theory.meta) {
    const FlatTheory& meta_flat = flat_theory(theory.meta->module());
    for (const auto& e : meta_flat.entries) {
      FlatEntry entry;
      entry.path = LocalName{kMetaSegment}.plus(e.path);
      entry.origin = e.origin;
      entry.defined = e.defined;
      entry.under_meta = true;
      out.push_back(std::move(entry));
    }
  }

  for (const auto& d : theory.declarations) {
    if (auto* c = std::get_if<Constant>(&d)) {
      FlatEntry entry;
      entry.path = c->name;
      entry.origin = self.with_sym(c->name);
      entry.defined = c->definiens.has_value();
      out.push_back(std::move(entry));
    } else if (auto* imp = std::get_if<Import>(&d)) {
      const FlatTheory& inner = flat_theory(imp->from.module());
      for (const auto& e : inner.entries) {
        if (e.under_meta) continue;  // meta paths are not re-exported
        bool redirected = false;
        for (const auto& a : imp->assignments) {
          if (e.path.starts_with(assignment_target(a))) {
            redirected = true;
            break;
          }
        }
        if (redirected) continue;
        FlatEntry entry;
        entry.path = imp->name.plus(e.path);
        entry.origin = e.origin;
        entry.defined = e.defined;
        out.push_back(std::move(entry));
      }
    }
  }
  stack.pop_back();
}

std::vector<FlatEntry> Flattener::flat_entries(const Uri& theory, bool include_meta) const {
  const FlatTheory& flat = flat_theory(theory.module());
  std::vector<FlatEntry> out;
  out.reserve(flat.entries.size());
  for (const auto& e : flat.entries) {
    if (e.under_meta && !include_meta) continue;
    out.push_back(e);
  }
  return out;
}

Flattener::Deref Flattener::deref(const Uri& uri) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = deref_cache_.find(uri);
    if (it != deref_cache_.end()) return *it->second;
  }
  Deref result;
  const Module* mod = graph_.module(uri);
  if (mod && !uri.sym) {
    result.theory = std::get_if<Theory>(mod);
    result.view = std::get_if<View>(mod);
  } else if (mod && uri.sym) {
    if (const auto* theory = std::get_if<Theory>(mod)) {
      const LocalName& sym = *uri.sym;
      if (sym.size() == 1) {
        if (const Constant* c = theory->find_constant(sym.front())) {
          result.constant = c;
          result.constant_uri = uri;
        }
      } else {
        // Walk the qualified path: imports (or a leading `meta`) down to a
        // constant; paths covered by an instantiation are not canonical.
        Uri current = uri.module();
        const Theory* t = theory;
        bool meta_first = false;
        bool dead = false;
        Uri meta_root;
        for (size_t i = 0; i + 1 < sym.size() && !dead; ++i) {
          const std::string& seg = sym.segments()[i];
          if (i == 0 && seg == kMetaSegment && t->meta && !t->find_import(seg)) {
            meta_first = true;
            current = t->meta->module();
            meta_root = current;
            t = graph_.theory(current);
            if (!t) dead = true;
            continue;
          }
          const Import* imp = t->find_import(seg);
          if (!imp) {
            dead = true;
            break;
          }
          LocalName rest = sym.tail(i + 1);
          for (const auto& a : imp->assignments) {
            if (rest.starts_with(assignment_target(a))) {
              dead = true;
              break;
            }
          }
          if (dead) break;
          current = imp->from.module();
          t = graph_.theory(current);
          if (!t) dead = true;
        }
        if (!dead && t) {
          if (const Constant* c = t->find_constant(sym.back())) {
            LocalName prefix(std::vector<std::string>(sym.segments().begin(), sym.segments().end() - 1));
            Morphism via = [&]() {
              if (!meta_first) return Morphism::import_link(uri.module(), prefix);
              // skip the meta segment; translation happens inside the meta-theory
              if (prefix.size() == 1) return Morphism::identity(meta_root);
              return Morphism::import_link(meta_root, prefix.tail(1));
            }();
            InducedConstant induced{uri, current.with_sym(LocalName{sym.back()}), via, std::nullopt,
                                    std::nullopt};
            if (c->type) induced.type = apply_morphism(via, *c->type);
            if (c->definiens) induced.definiens = apply_morphism(via, *c->definiens);
            result.induced = std::move(induced);
          }
        }
      }
    }
  }
  auto cached = std::make_shared<Deref>(result);
  std::lock_guard<std::mutex> lock(mu_);
  deref_cache_.emplace(uri, std::move(cached));
  return result;
}

namespace {

// Single-import action on a domain symbol.
struct SymbolMapper {
  const Flattener& flat;

  std::optional<Term> apply_import_step(const Uri& codomain, const Import& imp, const Uri& u) const {
    if (!u.sym || u.module() != imp.from.module()) return std::nullopt;
    const LocalName& q = *u.sym;
    for (const auto& a : imp.assignments) {
      const LocalName& target = assignment_target(a);
      if (!q.starts_with(target)) continue;
      if (auto* ca = std::get_if<ConstAssign>(&a)) {
        if (q == target) return ca->value;
        continue;  // a constant target cannot be a proper prefix
      }
      const auto& ia = std::get<ImportAssign>(a);
      LocalName rest = q.tail(target.size());
      Uri target_domain = flat.morphism_domain(Morphism::import_link(imp.from.module(), target));
      Term origin = Term::symbol(rest.empty() ? target_domain : target_domain.with_sym(rest));
      return flat.apply_morphism(ia.value, origin);
    }
    return Term::symbol(codomain.with_sym(LocalName{imp.name.front()}.plus(q)));
  }
};

}  // namespace

Term Flattener::apply_morphism(const Morphism& m, const Term& t) const {
  if (auto* c = m.as_compose()) {
    return apply_morphism(c->second, apply_morphism(c->first, t));
  }
  return map_symbols(t, [&](const Uri& u) -> std::optional<Term> {
    if (m.as_identity()) return std::nullopt;
    if (auto* link = m.as_import()) {
      // decompose T?p1/.../pk as single steps, innermost first
      const Theory* t0 = graph_.theory(link->theory);
      if (!t0) throw Error(ErrorCode::UnresolvedReference, "morphism root is not a theory", link->theory.str());
      std::vector<std::pair<Uri, const Import*>> steps;  // (codomain, import)
      Uri current = link->theory.module();
      const Theory* walker = t0;
      for (const auto& seg : link->path.segments()) {
        if (seg == kMetaSegment && walker->meta && !walker->find_import(seg)) {
          // the meta step embeds symbols unchanged
          current = walker->meta->module();
          walker = graph_.theory(current);
          if (!walker) throw Error(ErrorCode::UnresolvedReference, "meta-theory missing", current.str());
          continue;
        }
        const Import* imp = walker->find_import(seg);
        if (!imp) {
          throw Error(ErrorCode::UnresolvedReference, "no import '" + seg + "'", current.str());
        }
        steps.emplace_back(current, imp);
        current = imp->from.module();
        walker = graph_.theory(current);
        if (!walker) throw Error(ErrorCode::UnresolvedReference, "import domain missing", imp->from.str());
      }
      Term out = Term::symbol(u);
      SymbolMapper mapper{*this};
      for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        out = map_symbols(out, [&](const Uri& v) { return mapper.apply_import_step(it->first, *it->second, v); });
      }
      if (auto* s = out.as_symbol(); s && s->uri == u) return std::nullopt;
      return out;
    }
    const auto* vl = m.as_view();
    const View* view = graph_.view(vl->view);
    if (!view) throw Error(ErrorCode::UnresolvedReference, "morphism component is not a view", vl->view.str());

    // explicit assignments for meta symbols are keyed by origin URI
    for (const auto& a : view->assignments) {
      if (auto* ca = std::get_if<ConstAssign>(&a)) {
        if (is_meta_path(ca->target)) {
          Deref origin = deref(view->from.module().with_sym(ca->target));
          if (origin.induced && origin.induced->origin == u) return ca->value;
        }
      }
    }
    if (!u.sym || u.module() != view->from.module()) return std::nullopt;
    const LocalName& q = *u.sym;
    for (const auto& a : view->assignments) {
      const LocalName& target = assignment_target(a);
      if (!q.starts_with(target)) continue;
      if (auto* ca = std::get_if<ConstAssign>(&a)) {
        if (q == target) return ca->value;
        continue;
      }
      const auto& ia = std::get<ImportAssign>(a);
      LocalName rest = q.tail(target.size());
      Uri target_domain = morphism_domain(Morphism::import_link(view->from.module(), target));
      Term origin = Term::symbol(rest.empty() ? target_domain : target_domain.with_sym(rest));
      return apply_morphism(ia.value, origin);
    }
    // defined constants translate through their definiens
    Deref item = deref(u);
    std::optional<Term> definiens;
    if (item.constant && item.constant->definiens) definiens = item.constant->definiens;
    if (item.induced && item.induced->definiens) definiens = item.induced->definiens;
    if (definiens) return apply_morphism(m, *definiens);
    throw Error(ErrorCode::UnmappedSymbol, "view has no assignment for undefined constant", u.str());
  });
}

Term Flattener::apply_to_path(const Morphism& m, const LocalName& path) const {
  Uri domain = morphism_domain(m);
  return apply_morphism(m, Term::symbol(domain.with_sym(path)));
}

Uri Flattener::morphism_domain(const Morphism& m) const {
  if (auto* id = m.as_identity()) return id->theory.module();
  if (auto* link = m.as_import()) {
    Uri current = link->theory.module();
    for (const auto& seg : link->path.segments()) {
      const Theory* t = graph_.theory(current);
      if (!t) throw Error(ErrorCode::UnresolvedReference, "not a theory", current.str());
      if (seg == kMetaSegment && t->meta && !t->find_import(seg)) {
        current = t->meta->module();
        continue;
      }
      const Import* imp = t->find_import(seg);
      if (!imp) throw Error(ErrorCode::UnresolvedReference, "no import '" + seg + "'", current.str());
      current = imp->from.module();
    }
    return current;
  }
  if (auto* vl = m.as_view()) {
    const View* v = graph_.view(vl->view);
    if (!v) throw Error(ErrorCode::UnresolvedReference, "not a view", vl->view.str());
    return v->from.module();
  }
  return morphism_domain(m.as_compose()->first);
}

Uri Flattener::morphism_codomain(const Morphism& m) const {
  if (auto* id = m.as_identity()) return id->theory.module();
  if (auto* link = m.as_import()) return link->theory.module();
  if (auto* vl = m.as_view()) {
    const View* v = graph_.view(vl->view);
    if (!v) throw Error(ErrorCode::UnresolvedReference, "not a view", vl->view.str());
    return v->to.module();
  }
  return morphism_codomain(m.as_compose()->second);
}

MorphismTable Flattener::normalize(const Morphism& m) const {
  MorphismTable table;
  table.domain = morphism_domain(m);
  table.codomain = morphism_codomain(m);
  for (const auto& e : flat_entries(table.domain, false)) {
    if (e.defined) continue;
    table.map.emplace(e.path, apply_to_path(m, e.path));
  }
  return table;
}

std::vector<Flattener::Deref> Flattener::flatten_theory(const Uri& theory, bool include_meta) const {
  std::vector<Deref> out;
  for (const auto& e : flat_entries(theory, include_meta)) {
    Deref d = deref(theory.module().with_sym(e.path));
    if (d.found()) out.push_back(std::move(d));
  }
  return out;
}

void Flattener::clear_cache() const {
  std::lock_guard<std::mutex> lock(mu_);
  flat_cache_.clear();
  deref_cache_.clear();
}

}  // namespace tgk
