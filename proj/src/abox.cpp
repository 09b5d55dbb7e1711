#include "tgk/abox.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace tgk {

const char* type_name_str(TypeName t) {
  switch (t) {
    case TypeName::Document: return "document";
    case TypeName::Theory: return "theory";
    case TypeName::View: return "view";
    case TypeName::Import: return "import";
    case TypeName::Constant: return "constant";
    case TypeName::ConstantAssignment: return "constant-assignment";
    case TypeName::ImportAssignment: return "import-assignment";
    case TypeName::Style: return "style";
    case TypeName::Notation: return "notation";
    case TypeName::UntypedConstant: return "untyped-constant";
  }
  return "?";
}

const char* rel_name_str(RelName r) {
  switch (r) {
    case RelName::DeclaredIn: return "DeclaredIn";
    case RelName::HasMetaTheory: return "HasMetaTheory";
    case RelName::HasDomain: return "HasDomain";
    case RelName::HasCodomain: return "HasCodomain";
    case RelName::Imports: return "Imports";
    case RelName::HasOccurrenceOfInType: return "HasOccurrenceOfInType";
    case RelName::HasOccurrenceOfInDefiniens: return "HasOccurrenceOfInDefiniens";
    case RelName::HasAssignmentFor: return "HasAssignmentFor";
    case RelName::DependsOn: return "DependsOn";
    case RelName::HasNotationFor: return "HasNotationFor";
    case RelName::StyleImports: return "StyleImports";
  }
  return "?";
}

TypeName parse_type_name(const std::string& s) {
  for (int i = 0; i < kTypeCount; ++i) {
    if (s == type_name_str(static_cast<TypeName>(i))) return static_cast<TypeName>(i);
  }
  throw Error(ErrorCode::UnknownRelation, "unknown type name '" + s + "'");
}

RelName parse_rel_name(const std::string& s) {
  for (int i = 0; i < kRelCount; ++i) {
    if (s == rel_name_str(static_cast<RelName>(i))) return static_cast<RelName>(i);
  }
  throw Error(ErrorCode::UnknownRelation, "unknown relation '" + s + "'");
}

std::string AboxFact::line() const {
  if (unary) return "U " + std::string(type_name_str(type_name())) + " " + subject.str();
  return "B " + std::string(rel_name_str(rel_name())) + " " + subject.str() + " " + object.str();
}

namespace {

// Occurrence and dependency facts for a term in a type or definiens slot.
void emit_term_facts(FactSet& out, const Uri& item, const Uri& module, const Term& t, RelName occurrence) {
  for_each_symbol(t, [&](const Uri& u) {
    out.insert(AboxFact::rel(occurrence, item, u));
    Uri target_module = u.module();
    if (target_module != module && u.mod) {
      out.insert(AboxFact::rel(RelName::DependsOn, module, target_module));
    }
  });
}

void emit_morphism_deps(FactSet& out, const Uri& module, const Morphism& m) {
  if (auto* id = m.as_identity()) {
    if (id->theory != module) out.insert(AboxFact::rel(RelName::DependsOn, module, id->theory));
  } else if (auto* imp = m.as_import()) {
    if (imp->theory != module) out.insert(AboxFact::rel(RelName::DependsOn, module, imp->theory));
  } else if (auto* v = m.as_view()) {
    if (v->view != module) out.insert(AboxFact::rel(RelName::DependsOn, module, v->view));
  } else if (auto* c = m.as_compose()) {
    emit_morphism_deps(out, module, c->first);
    emit_morphism_deps(out, module, c->second);
  }
}

void emit_assignment_facts(FactSet& out, const Uri& container, const Uri& module, const Uri& domain,
                           const Assignment& a) {
  const LocalName& target = assignment_target(a);
  Uri self = container.sym ? container.module().with_sym(container.sym->plus(target))
                           : container.with_sym(target);
  bool is_const = std::holds_alternative<ConstAssign>(a);
  out.insert(AboxFact::type(is_const ? TypeName::ConstantAssignment : TypeName::ImportAssignment, self));
  out.insert(AboxFact::rel(RelName::DeclaredIn, self, container));
  out.insert(AboxFact::rel(RelName::HasAssignmentFor, container, domain.with_sym(target)));
  if (is_const) {
    emit_term_facts(out, self, module, std::get<ConstAssign>(a).value, RelName::HasOccurrenceOfInDefiniens);
  } else {
    emit_morphism_deps(out, module, std::get<ImportAssign>(a).value);
  }
}

void emit_notation_facts(FactSet& out, const Uri& container, const Uri& module, const Notation& n) {
  out.insert(AboxFact::type(TypeName::Notation, n.uri));
  out.insert(AboxFact::rel(RelName::DeclaredIn, n.uri, container));
  out.insert(AboxFact::rel(RelName::HasNotationFor, n.uri, n.target));
  Uri target_module = n.target.module();
  if (n.target.mod && target_module != module) {
    out.insert(AboxFact::rel(RelName::DependsOn, module, target_module));
  }
}

}  // namespace

FactSet extract_abox(const Document& doc) {
  FactSet out;
  out.insert(AboxFact::type(TypeName::Document, doc.base));

  for (const auto& m : doc.modules) {
    Uri self = doc.module_uri(m);
    if (auto* t = std::get_if<Theory>(&m)) {
      out.insert(AboxFact::type(TypeName::Theory, self));
      out.insert(AboxFact::rel(RelName::DeclaredIn, self, doc.base));
      if (t->meta) {
        out.insert(AboxFact::rel(RelName::HasMetaTheory, self, *t->meta));
        out.insert(AboxFact::rel(RelName::DependsOn, self, *t->meta));
      }
      for (const auto& d : t->declarations) {
        if (auto* c = std::get_if<Constant>(&d)) {
          Uri cu = self.with_sym(c->name);
          out.insert(AboxFact::type(TypeName::Constant, cu));
          if (!c->type) out.insert(AboxFact::type(TypeName::UntypedConstant, cu));
          out.insert(AboxFact::rel(RelName::DeclaredIn, cu, self));
          if (c->type) emit_term_facts(out, cu, self, *c->type, RelName::HasOccurrenceOfInType);
          if (c->definiens) emit_term_facts(out, cu, self, *c->definiens, RelName::HasOccurrenceOfInDefiniens);
        } else if (auto* i = std::get_if<Import>(&d)) {
          Uri iu = self.with_sym(i->name);
          out.insert(AboxFact::type(TypeName::Import, iu));
          out.insert(AboxFact::rel(RelName::DeclaredIn, iu, self));
          out.insert(AboxFact::rel(RelName::HasDomain, iu, i->from));
          out.insert(AboxFact::rel(RelName::HasCodomain, iu, self));
          out.insert(AboxFact::rel(RelName::Imports, self, i->from));
          out.insert(AboxFact::rel(RelName::DependsOn, self, i->from));
          for (const auto& a : i->assignments) emit_assignment_facts(out, iu, self, i->from, a);
        } else {
          emit_notation_facts(out, self, self, std::get<Notation>(d));
        }
      }
    } else if (auto* v = std::get_if<View>(&m)) {
      out.insert(AboxFact::type(TypeName::View, self));
      out.insert(AboxFact::rel(RelName::DeclaredIn, self, doc.base));
      out.insert(AboxFact::rel(RelName::HasDomain, self, v->from));
      out.insert(AboxFact::rel(RelName::HasCodomain, self, v->to));
      out.insert(AboxFact::rel(RelName::DependsOn, self, v->from));
      out.insert(AboxFact::rel(RelName::DependsOn, self, v->to));
      for (const auto& a : v->assignments) emit_assignment_facts(out, self, self, v->from, a);
      for (const auto& n : v->notations) emit_notation_facts(out, self, self, n);
    } else {
      const auto& s = std::get<Style>(m);
      out.insert(AboxFact::type(TypeName::Style, self));
      out.insert(AboxFact::rel(RelName::DeclaredIn, self, doc.base));
      for (const auto& imp : s.imports) {
        out.insert(AboxFact::rel(RelName::StyleImports, self, imp));
        out.insert(AboxFact::rel(RelName::DependsOn, self, imp));
      }
      for (const auto& n : s.notations) emit_notation_facts(out, self, self, n);
    }
  }
  return out;
}

std::string serialize_abox(const FactSet& facts) {
  std::string out;
  for (const auto& f : facts) {
    out += f.line();
    out += '\n';
  }
  return out;
}

FactSet parse_abox(std::string_view text) {
  FactSet out;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;
    std::istringstream in(line);
    std::string kind, pred, a, b;
    in >> kind >> pred >> a;
    if (kind == "U") {
      out.insert(AboxFact::type(parse_type_name(pred), parse_uri(a)));
    } else if (kind == "B") {
      in >> b;
      out.insert(AboxFact::rel(parse_rel_name(pred), parse_uri(a), parse_uri(b)));
    } else {
      throw Error(ErrorCode::InconsistentFacts, "bad fact line '" + line + "'");
    }
  }
  return out;
}

FactIndex::FactIndex(const FactSet& facts) {
  for (const auto& f : facts) add(f);
}

void FactIndex::add(const AboxFact& fact) {
  if (fact.unary) {
    unary_[fact.subject].insert(fact.type_name());
    by_type_[fact.pred].insert(fact.subject);
  } else {
    forward_[{fact.pred, fact.subject}].insert(fact.object);
    backward_[{fact.pred, fact.object}].insert(fact.subject);
  }
}

const std::set<Uri>& FactIndex::objects(RelName r, const Uri& subject) const {
  ++lookups_[static_cast<size_t>(r)];
  auto it = forward_.find({static_cast<int>(r), subject});
  return it == forward_.end() ? empty_ : it->second;
}

const std::set<Uri>& FactIndex::subjects(RelName r, const Uri& object) const {
  ++lookups_[static_cast<size_t>(r)];
  auto it = backward_.find({static_cast<int>(r), object});
  return it == backward_.end() ? empty_ : it->second;
}

bool FactIndex::has_type(const Uri& individual, TypeName t) const {
  auto it = unary_.find(individual);
  return it != unary_.end() && it->second.count(t);
}

std::set<TypeName> FactIndex::types_of(const Uri& individual) const {
  auto it = unary_.find(individual);
  return it == unary_.end() ? std::set<TypeName>{} : it->second;
}

std::set<Uri> FactIndex::individuals_of_type(TypeName t) const {
  auto it = by_type_.find(static_cast<int>(t));
  return it == by_type_.end() ? std::set<Uri>{} : it->second;
}

long FactIndex::total_lookups() const {
  long sum = 0;
  for (long v : lookups_) sum += v;
  return sum;
}

RelExpr RelExpr::base(RelName r) { return RelExpr(std::make_shared<const Node>(Base{r})); }
RelExpr RelExpr::inverse(RelExpr e) { return RelExpr(std::make_shared<const Node>(Inverse{std::move(e)})); }
RelExpr RelExpr::compose(RelExpr a, RelExpr b) {
  return RelExpr(std::make_shared<const Node>(Compose{std::move(a), std::move(b)}));
}
RelExpr RelExpr::unite(RelExpr a, RelExpr b) {
  return RelExpr(std::make_shared<const Node>(Union{std::move(a), std::move(b)}));
}
RelExpr RelExpr::closure(RelExpr e) { return RelExpr(std::make_shared<const Node>(TransClosure{std::move(e)})); }

std::string RelExpr::str() const {
  if (auto* b = std::get_if<Base>(node_.get())) return rel_name_str(b->rel);
  if (auto* i = std::get_if<Inverse>(node_.get())) return "(" + i->inner.str() + ")^-1";
  if (auto* c = std::get_if<Compose>(node_.get())) return "(" + c->first.str() + " ; " + c->second.str() + ")";
  if (auto* u = std::get_if<Union>(node_.get())) return "(" + u->left.str() + " | " + u->right.str() + ")";
  return "(" + std::get<TransClosure>(*node_).inner.str() + ")+";
}

namespace {

// Recursive-descent parser for the relation expression surface syntax.
class RelParser {
 public:
  explicit RelParser(std::string_view text) : text_(text) {}

  RelExpr parse() {
    RelExpr e = parse_union();
    skip_space();
    if (pos_ != text_.size()) {
      throw Error(ErrorCode::UnknownRelation, "trailing input in relation expression '" + std::string(text_) + "'");
    }
    return e;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RelExpr parse_union() {
    RelExpr left = parse_compose();
    while (eat('|')) left = RelExpr::unite(std::move(left), parse_compose());
    return left;
  }

  RelExpr parse_compose() {
    RelExpr left = parse_postfix();
    while (eat(';')) left = RelExpr::compose(std::move(left), parse_postfix());
    return left;
  }

  RelExpr parse_postfix() {
    RelExpr e = parse_primary();
    for (;;) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '+') {
        ++pos_;
        e = RelExpr::closure(std::move(e));
      } else if (text_.substr(pos_, 3) == "^-1") {
        pos_ += 3;
        e = RelExpr::inverse(std::move(e));
      } else {
        return e;
      }
    }
  }

  RelExpr parse_primary() {
    skip_space();
    if (eat('(')) {
      RelExpr e = parse_union();
      if (!eat(')')) throw Error(ErrorCode::UnknownRelation, "missing ')' in relation expression");
      return e;
    }
    size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])))) ++pos_;
    if (pos_ == start) {
      throw Error(ErrorCode::UnknownRelation, "expected a relation name in '" + std::string(text_) + "'");
    }
    return RelExpr::base(parse_rel_name(std::string(text_.substr(start, pos_ - start))));
  }
};

std::set<Uri> eval(const FactIndex& index, const std::set<Uri>& from, const RelExpr& e, bool inverted);

std::set<Uri> step(const FactIndex& index, const std::set<Uri>& from, RelName r, bool inverted) {
  std::set<Uri> out;
  for (const auto& u : from) {
    const auto& next = inverted ? index.subjects(r, u) : index.objects(r, u);
    out.insert(next.begin(), next.end());
  }
  return out;
}

std::set<Uri> eval(const FactIndex& index, const std::set<Uri>& from, const RelExpr& e, bool inverted) {
  const auto& node = e.node();
  if (auto* b = std::get_if<RelExpr::Base>(&node)) return step(index, from, b->rel, inverted);
  if (auto* i = std::get_if<RelExpr::Inverse>(&node)) return eval(index, from, i->inner, !inverted);
  if (auto* c = std::get_if<RelExpr::Compose>(&node)) {
    // inverse of a composition flips the order
    const RelExpr& first = inverted ? c->second : c->first;
    const RelExpr& second = inverted ? c->first : c->second;
    return eval(index, eval(index, from, first, inverted), second, inverted);
  }
  if (auto* u = std::get_if<RelExpr::Union>(&node)) {
    std::set<Uri> out = eval(index, from, u->left, inverted);
    auto right = eval(index, from, u->right, inverted);
    out.insert(right.begin(), right.end());
    return out;
  }
  const auto& t = std::get<RelExpr::TransClosure>(node);
  std::set<Uri> reached;
  std::set<Uri> frontier = from;
  for (;;) {
    std::set<Uri> next = eval(index, frontier, t.inner, inverted);
    std::set<Uri> fresh;
    for (const auto& u : next) {
      if (reached.insert(u).second) fresh.insert(u);
    }
    if (fresh.empty()) return reached;
    frontier = std::move(fresh);
  }
}

}  // namespace

RelExpr parse_rel_expr(std::string_view text) { return RelParser(text).parse(); }

std::set<Uri> query(const FactIndex& index, const Uri& start, const RelExpr& e) {
  return eval(index, {start}, e, false);
}

std::set<Uri> query(const FactSet& facts, const Uri& start, const RelExpr& e) {
  FactIndex index(facts);
  return query(index, start, e);
}

// Built directly from the document model, independently of extract_abox,
// so the ABox round-trip has a real oracle to compare against.
Skeleton skeleton_of(const Document& doc) {
  Skeleton out;
  out.documents.insert(doc.base);

  auto note_occurrences = [&out](const Uri& item, const std::optional<Term>& t,
                                 std::set<std::pair<Uri, Uri>>& bucket) {
    if (!t) return;
    for_each_symbol(*t, [&](const Uri& u) { bucket.insert({item, u}); });
  };

  for (const auto& m : doc.modules) {
    Uri self = doc.module_uri(m);
    out.containment[self] = doc.base;
    if (auto* t = std::get_if<Theory>(&m)) {
      Skeleton::ModuleInfo info;
      info.kind = TypeName::Theory;
      info.meta = t->meta;
      out.modules[self] = std::move(info);
      for (const auto& d : t->declarations) {
        if (auto* c = std::get_if<Constant>(&d)) {
          Uri cu = self.with_sym(c->name);
          out.containment[cu] = self;
          Skeleton::DeclInfo ci;
          ci.kind = TypeName::Constant;
          ci.untyped = !c->type;
          out.decls[cu] = std::move(ci);
          note_occurrences(cu, c->type, out.type_occurrences);
          note_occurrences(cu, c->definiens, out.def_occurrences);
        } else if (auto* i = std::get_if<Import>(&d)) {
          Uri iu = self.with_sym(i->name);
          out.containment[iu] = self;
          Skeleton::DeclInfo ii;
          ii.kind = TypeName::Import;
          ii.from = i->from;
          out.decls[iu] = std::move(ii);
          out.imports_edges.insert({self, i->from});
          for (const auto& a : i->assignments) {
            const LocalName& target = assignment_target(a);
            Uri au = self.with_sym(i->name.plus(target));
            out.containment[au] = iu;
            Skeleton::DeclInfo ai;
            ai.kind = std::holds_alternative<ConstAssign>(a) ? TypeName::ConstantAssignment
                                                             : TypeName::ImportAssignment;
            out.decls[au] = std::move(ai);
            out.assignment_edges.insert({iu, i->from.with_sym(target)});
            if (auto* ca = std::get_if<ConstAssign>(&a)) {
              note_occurrences(au, ca->value, out.def_occurrences);
            }
          }
        } else {
          const auto& n = std::get<Notation>(d);
          out.containment[n.uri] = self;
          Skeleton::DeclInfo ni;
          ni.kind = TypeName::Notation;
          ni.notation_for = n.target;
          out.decls[n.uri] = std::move(ni);
        }
      }
    } else if (auto* v = std::get_if<View>(&m)) {
      Skeleton::ModuleInfo info;
      info.kind = TypeName::View;
      info.from = v->from;
      info.to = v->to;
      out.modules[self] = std::move(info);
      for (const auto& a : v->assignments) {
        const LocalName& target = assignment_target(a);
        Uri au = self.with_sym(target);
        out.containment[au] = self;
        Skeleton::DeclInfo ai;
        ai.kind = std::holds_alternative<ConstAssign>(a) ? TypeName::ConstantAssignment
                                                         : TypeName::ImportAssignment;
        out.decls[au] = std::move(ai);
        out.assignment_edges.insert({self, v->from.with_sym(target)});
        if (auto* ca = std::get_if<ConstAssign>(&a)) {
          note_occurrences(au, ca->value, out.def_occurrences);
        }
      }
      for (const auto& n : v->notations) {
        out.containment[n.uri] = self;
        Skeleton::DeclInfo ni;
        ni.kind = TypeName::Notation;
        ni.notation_for = n.target;
        out.decls[n.uri] = std::move(ni);
      }
    } else {
      const auto& s = std::get<Style>(m);
      Skeleton::ModuleInfo info;
      info.kind = TypeName::Style;
      info.style_imports.insert(s.imports.begin(), s.imports.end());
      out.modules[self] = std::move(info);
      for (const auto& n : s.notations) {
        out.containment[n.uri] = self;
        Skeleton::DeclInfo ni;
        ni.kind = TypeName::Notation;
        ni.notation_for = n.target;
        out.decls[n.uri] = std::move(ni);
      }
    }
  }
  return out;
}

Skeleton recover_structure(const FactSet& facts) {
  FactIndex index(facts);
  Skeleton out;

  auto the_one = [](const std::set<Uri>& s) -> std::optional<Uri> {
    if (s.size() == 1) return *s.begin();
    return std::nullopt;
  };

  for (const auto& f : facts) {
    if (!f.unary) continue;
    switch (f.type_name()) {
      case TypeName::Document:
        out.documents.insert(f.subject);
        break;
      case TypeName::Theory: {
        Skeleton::ModuleInfo info;
        info.kind = TypeName::Theory;
        info.meta = the_one(index.objects(RelName::HasMetaTheory, f.subject));
        out.modules[f.subject] = std::move(info);
        break;
      }
      case TypeName::View: {
        Skeleton::ModuleInfo info;
        info.kind = TypeName::View;
        info.from = the_one(index.objects(RelName::HasDomain, f.subject));
        info.to = the_one(index.objects(RelName::HasCodomain, f.subject));
        if (!info.from || !info.to) {
          throw Error(ErrorCode::InconsistentFacts, "view without domain or codomain", f.subject.str());
        }
        out.modules[f.subject] = std::move(info);
        break;
      }
      case TypeName::Style: {
        Skeleton::ModuleInfo info;
        info.kind = TypeName::Style;
        for (const auto& u : index.objects(RelName::StyleImports, f.subject)) info.style_imports.insert(u);
        out.modules[f.subject] = std::move(info);
        break;
      }
      case TypeName::Import: {
        Skeleton::DeclInfo info;
        info.kind = TypeName::Import;
        info.from = the_one(index.objects(RelName::HasDomain, f.subject));
        if (!info.from) throw Error(ErrorCode::InconsistentFacts, "import without domain", f.subject.str());
        out.decls[f.subject] = std::move(info);
        break;
      }
      case TypeName::Constant: {
        Skeleton::DeclInfo& info = out.decls[f.subject];
        info.kind = TypeName::Constant;
        break;
      }
      case TypeName::UntypedConstant:
        out.decls[f.subject].untyped = true;
        break;
      case TypeName::ConstantAssignment:
      case TypeName::ImportAssignment: {
        Skeleton::DeclInfo& info = out.decls[f.subject];
        info.kind = f.type_name();
        break;
      }
      case TypeName::Notation: {
        Skeleton::DeclInfo& info = out.decls[f.subject];
        info.kind = TypeName::Notation;
        info.notation_for = the_one(index.objects(RelName::HasNotationFor, f.subject));
        break;
      }
    }
  }

  for (const auto& f : facts) {
    if (f.unary) continue;
    switch (f.rel_name()) {
      case RelName::DeclaredIn: {
        bool container_known = out.modules.count(f.object) || out.documents.count(f.object) ||
                               out.decls.count(f.object);
        if (!container_known) {
          throw Error(ErrorCode::InconsistentFacts, "declaration in unknown container", f.subject.str());
        }
        out.containment[f.subject] = f.object;
        break;
      }
      case RelName::Imports:
        out.imports_edges.insert({f.subject, f.object});
        break;
      case RelName::HasOccurrenceOfInType:
        out.type_occurrences.insert({f.subject, f.object});
        break;
      case RelName::HasOccurrenceOfInDefiniens:
        out.def_occurrences.insert({f.subject, f.object});
        break;
      case RelName::HasAssignmentFor:
        out.assignment_edges.insert({f.subject, f.object});
        break;
      default:
        break;
    }
  }
  return out;
}

}  // namespace tgk
