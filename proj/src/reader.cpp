#include "tgk/reader.hpp"

#include <algorithm>

namespace tgk {

namespace {

Uri resolve_ref(const std::string& text, const Uri& base, const SourceRef& at) {
  try {
    return resolve_relative(base, text);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::GrammarError) throw;
    throw Error(e.code(), e.message() + " (in reference '" + text + "')", at);
  }
}

[[noreturn]] void unexpected(const XmlNode& node, const std::string& context) {
  throw Error(ErrorCode::GrammarError, "unexpected element '" + node.name + "' in " + context, node.at);
}

Term parse_term(const XmlNode& node, const Uri& base);

Term::BoundVar parse_bound_var(const XmlNode& node, const Uri& base) {
  if (node.name != "OMV") unexpected(node, "OMBVAR");
  Term::BoundVar var{node.require_attr("name"), std::nullopt};
  for (const auto& child : node.children) {
    if (child.name != "type" || var.type) unexpected(child, "bound variable");
    if (child.children.size() != 1) {
      throw Error(ErrorCode::GrammarError, "'type' must contain exactly one term", child.at);
    }
    var.type = parse_term(child.children[0], base);
  }
  return var;
}

Term parse_term(const XmlNode& node, const Uri& base) {
  if (node.name == "OMS") {
    if (!node.children.empty()) unexpected(node.children[0], "OMS");
    return Term::symbol(resolve_ref(node.require_attr("path"), base, node.at));
  }
  if (node.name == "OMV") {
    if (!node.children.empty()) unexpected(node.children[0], "OMV");
    return Term::var(node.require_attr("name"));
  }
  if (node.name == "OMA") {
    if (node.children.size() < 2) {
      throw Error(ErrorCode::GrammarError, "OMA needs a head and at least one argument", node.at);
    }
    Term head = parse_term(node.children[0], base);
    std::vector<Term> args;
    for (size_t i = 1; i < node.children.size(); ++i) args.push_back(parse_term(node.children[i], base));
    return Term::apply(std::move(head), std::move(args));
  }
  if (node.name == "OMBIND") {
    if (node.children.size() != 3 || node.children[1].name != "OMBVAR") {
      throw Error(ErrorCode::GrammarError, "OMBIND needs binder, OMBVAR and body", node.at);
    }
    Term binder = parse_term(node.children[0], base);
    std::vector<Term::BoundVar> vars;
    for (const auto& v : node.children[1].children) vars.push_back(parse_bound_var(v, base));
    if (vars.empty()) throw Error(ErrorCode::GrammarError, "OMBVAR must not be empty", node.children[1].at);
    Term body = parse_term(node.children[2], base);
    try {
      return Term::bind(std::move(binder), std::move(vars), std::move(body));
    } catch (const Error& e) {
      throw Error(e.code(), e.message(), node.at);
    }
  }
  unexpected(node, "term position");
}

LocalName parse_local(const std::string& text, const SourceRef& at) {
  try {
    return LocalName::parse(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::GrammarError, e.message(), at);
  }
}

LocalName parse_single_name(const std::string& text, const SourceRef& at) {
  LocalName n = parse_local(text, at);
  if (n.size() != 1) {
    throw Error(ErrorCode::GrammarError, "name '" + text + "' must be a single segment", at);
  }
  return n;
}

std::vector<Assignment> parse_assignments(const XmlNode& node, const Uri& decl_base) {
  std::vector<Assignment> out;
  for (const auto& child : node.children) {
    if (child.name != "assign") unexpected(child, "'" + node.name + "'");
    const std::string* symbol = child.attr("symbol");
    const std::string* import = child.attr("import");
    if (!!symbol == !!import) {
      throw Error(ErrorCode::GrammarError, "assign needs exactly one of 'symbol' or 'import'", child.at);
    }
    if (symbol) {
      if (child.children.size() != 1) {
        throw Error(ErrorCode::GrammarError, "symbol assignment must contain exactly one term", child.at);
      }
      out.push_back(ConstAssign{parse_local(*symbol, child.at), parse_term(child.children[0], decl_base)});
    } else {
      if (!child.children.empty()) unexpected(child.children[0], "import assignment");
      out.push_back(ImportAssign{parse_local(*import, child.at),
                                 parse_morphism(child.require_attr("morphism"), decl_base)});
    }
  }
  return out;
}

int parse_int_attr(const XmlNode& node, const char* key, int fallback) {
  const std::string* v = node.attr(key);
  if (!v) return fallback;
  try {
    return std::stoi(*v);
  } catch (...) {
    throw Error(ErrorCode::GrammarError, std::string("attribute '") + key + "' must be an integer", node.at);
  }
}

Notation parse_notation(const XmlNode& node, const Uri& container, size_t index) {
  Notation n;
  const std::string* name = node.attr("name");
  std::string own = name ? *name : "_n" + std::to_string(index);
  n.uri = container.with_sym(container.sym ? container.sym->plus(own) : LocalName{own});
  n.target = resolve_ref(node.require_attr("for"), container, node.at);
  n.role = parse_notation_role(node.require_attr("role"));
  if (const std::string* f = node.attr("fixity")) n.fixity = parse_fixity(*f);
  if (const std::string* op = node.attr("operator")) n.op = *op;
  n.prec_in = parse_int_attr(node, "prec-in", 0);
  n.prec_out = parse_int_attr(node, "prec-out", n.prec_in);
  if (const std::string* a = node.attr("assoc")) {
    if (*a != "left" && *a != "right") {
      throw Error(ErrorCode::GrammarError, "assoc must be 'left' or 'right'", node.at);
    }
    n.left_assoc = (*a == "left");
  }
  if (const std::string* b = node.attr("brackets")) {
    size_t space = b->find(' ');
    if (space == std::string::npos) {
      throw Error(ErrorCode::GrammarError, "brackets must be 'open close'", node.at);
    }
    n.bracket_open = b->substr(0, space);
    n.bracket_close = b->substr(space + 1);
  }
  if (const std::string* s = node.attr("separator")) n.separator = *s;
  if (const std::string* c = node.attr("component")) {
    n.components = {parse_int_attr(node, "component", 2)};
    (void)c;
  }
  if (n.fixity == Fixity::Infix && n.op.empty()) {
    throw Error(ErrorCode::GrammarError, "infix notation needs an operator", node.at);
  }
  return n;
}

Theory parse_theory(const XmlNode& node, const Uri& doc_base) {
  Theory t;
  t.name = parse_local(node.require_attr("name"), node.at);
  Uri self(doc_base.doc, t.name);
  if (const std::string* meta = node.attr("meta")) {
    t.meta = resolve_ref(*meta, doc_base, node.at);
  }
  size_t notation_index = 0;
  for (const auto& child : node.children) {
    if (child.name == "constant") {
      Constant c;
      c.name = parse_single_name(child.require_attr("name"), child.at);
      for (const auto& part : child.children) {
        if (part.name == "type" && !c.type) {
          if (part.children.size() != 1) {
            throw Error(ErrorCode::GrammarError, "'type' must contain exactly one term", part.at);
          }
          c.type = parse_term(part.children[0], self);
        } else if (part.name == "definition" && !c.definiens) {
          if (part.children.size() != 1) {
            throw Error(ErrorCode::GrammarError, "'definition' must contain exactly one term", part.at);
          }
          c.definiens = parse_term(part.children[0], self);
        } else {
          unexpected(part, "constant '" + c.name.str() + "'");
        }
      }
      t.declarations.push_back(std::move(c));
    } else if (child.name == "import") {
      Import i;
      i.name = parse_single_name(child.require_attr("name"), child.at);
      i.from = resolve_ref(child.require_attr("from"), doc_base, child.at);
      i.assignments = parse_assignments(child, self);
      t.declarations.push_back(std::move(i));
    } else if (child.name == "notation") {
      t.declarations.push_back(parse_notation(child, self, notation_index++));
    } else {
      unexpected(child, "theory '" + t.name.str() + "'");
    }
  }
  return t;
}

View parse_view(const XmlNode& node, const Uri& doc_base) {
  View v;
  v.name = parse_single_name(node.require_attr("name"), node.at);
  v.from = resolve_ref(node.require_attr("from"), doc_base, node.at);
  v.to = resolve_ref(node.require_attr("to"), doc_base, node.at);
  Uri self(doc_base.doc, v.name);
  size_t notation_index = 0;
  std::vector<XmlNode> assigns;
  for (const auto& child : node.children) {
    if (child.name == "notation") {
      v.notations.push_back(parse_notation(child, self, notation_index++));
    } else if (child.name == "assign") {
      assigns.push_back(child);
    } else {
      unexpected(child, "view '" + v.name.str() + "'");
    }
  }
  XmlNode wrapper;
  wrapper.name = "view";
  wrapper.children = std::move(assigns);
  v.assignments = parse_assignments(wrapper, self);
  return v;
}

Style parse_style(const XmlNode& node, const Uri& doc_base) {
  Style s;
  s.name = parse_single_name(node.require_attr("name"), node.at);
  Uri self(doc_base.doc, s.name);
  size_t notation_index = 0;
  for (const auto& child : node.children) {
    if (child.name == "import") {
      s.imports.push_back(resolve_ref(child.require_attr("from"), doc_base, child.at));
    } else if (child.name == "notation") {
      s.notations.push_back(parse_notation(child, self, notation_index++));
    } else {
      unexpected(child, "style '" + s.name.str() + "'");
    }
  }
  return s;
}

}  // namespace

Document parse_document_auto(std::string_view bytes, const std::string& filename) {
  XmlNode root = parse_xml(bytes, filename);
  if (root.name != "omdoc") {
    throw Error(ErrorCode::GrammarError, "document element must be 'omdoc', got '" + root.name + "'", root.at);
  }
  Uri base = parse_uri(root.require_attr("base"));
  if (!base.is_doc_only()) {
    throw Error(ErrorCode::GrammarError, "document base must not carry module or symbol parts", root.at);
  }
  if (!base.is_absolute()) {
    throw Error(ErrorCode::GrammarError, "document base must be absolute", root.at);
  }

  Document doc;
  doc.base = base;
  for (const auto& child : root.children) {
    if (child.name == "theory") {
      doc.modules.push_back(parse_theory(child, base));
    } else if (child.name == "view") {
      doc.modules.push_back(parse_view(child, base));
    } else if (child.name == "style") {
      doc.modules.push_back(parse_style(child, base));
    } else {
      unexpected(child, "document");
    }
  }
  return doc;
}

Document parse_document(std::string_view bytes, const Uri& expected_base, const std::string& filename) {
  Document doc = parse_document_auto(bytes, filename);
  if (doc.base != expected_base) {
    throw Error(ErrorCode::GrammarError,
                "document base '" + doc.base.str() + "' does not match expected '" + expected_base.str() + "'");
  }
  return doc;
}

Morphism parse_morphism(std::string_view text, const Uri& base) {
  std::vector<std::string> pieces;
  size_t start = 0;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ';') {
      pieces.emplace_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  std::optional<Morphism> out;
  for (auto& piece : pieces) {
    // trim
    size_t b = piece.find_first_not_of(" \t");
    size_t e = piece.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(ErrorCode::MalformedUri, "empty morphism component in '" + std::string(text) + "'");
    piece = piece.substr(b, e - b + 1);

    Morphism m = [&]() {
      if (piece.rfind("id(", 0) == 0 && piece.back() == ')') {
        return Morphism::identity(resolve_relative(base, piece.substr(3, piece.size() - 4)));
      }
      Uri u = resolve_relative(base, piece);
      if (u.sym) return Morphism::import_link(u.module(), *u.sym);
      if (!u.mod) throw Error(ErrorCode::MalformedUri, "morphism component without module part: '" + piece + "'");
      return Morphism::view_link(u);
    }();
    out = out ? Morphism::compose(std::move(*out), std::move(m)) : m;
  }
  return *out;
}

std::string format_morphism(const Morphism& m) { return m.str(); }

namespace {

// Relativizes a URI for serialization: same-document refs use ?mod?sym.
std::string relativize(const Uri& uri, const Uri& base) {
  if (uri.doc == base.doc && uri.mod) {
    Uri rel = uri;
    rel.doc.clear();
    return rel.str();
  }
  return uri.str();
}

std::string morphism_text(const Morphism& m, const Uri& base) {
  if (auto* id = m.as_identity()) return "id(" + relativize(id->theory, base) + ")";
  if (auto* imp = m.as_import()) return relativize(imp->theory.with_sym(imp->path), base);
  if (auto* v = m.as_view()) return relativize(v->view, base);
  const auto* c = m.as_compose();
  return morphism_text(c->first, base) + ";" + morphism_text(c->second, base);
}

XmlNode notation_to_xml(const Notation& n, const Uri& base) {
  XmlNode node;
  node.name = "notation";
  const std::string& own = n.uri.sym ? n.uri.sym->back() : n.uri.mod->back();
  if (own.rfind("_n", 0) != 0) node.attrs.emplace_back("name", own);
  node.attrs.emplace_back("for", relativize(n.target, base));
  node.attrs.emplace_back("role", notation_role_name(n.role));
  if (n.fixity != Fixity::NameOnly) node.attrs.emplace_back("fixity", fixity_name(n.fixity));
  if (!n.op.empty()) node.attrs.emplace_back("operator", n.op);
  if (n.prec_in != 0) node.attrs.emplace_back("prec-in", std::to_string(n.prec_in));
  if (n.prec_out != n.prec_in) node.attrs.emplace_back("prec-out", std::to_string(n.prec_out));
  if (!n.left_assoc) node.attrs.emplace_back("assoc", "right");
  if (n.bracket_open != "(" || n.bracket_close != ")") {
    node.attrs.emplace_back("brackets", n.bracket_open + " " + n.bracket_close);
  }
  if (n.separator != ", ") node.attrs.emplace_back("separator", n.separator);
  if (!n.components.empty() && !(n.components.size() == 1 && n.components[0] == 2)) {
    node.attrs.emplace_back("component", std::to_string(n.components[0]));
  }
  return node;
}

XmlNode assignment_to_xml(const Assignment& a, const Uri& decl_base) {
  XmlNode node;
  node.name = "assign";
  if (auto* ca = std::get_if<ConstAssign>(&a)) {
    node.attrs.emplace_back("symbol", ca->target.str());
    node.children.push_back(term_to_xml(ca->value, decl_base));
  } else {
    const auto& ia = std::get<ImportAssign>(a);
    node.attrs.emplace_back("import", ia.target.str());
    node.attrs.emplace_back("morphism", morphism_text(ia.value, decl_base));
  }
  return node;
}

}  // namespace

Term term_from_xml(const XmlNode& node, const Uri& base) { return parse_term(node, base); }

XmlNode term_to_xml(const Term& t, const Uri& base) {
  XmlNode node;
  if (auto* s = t.as_symbol()) {
    node.name = "OMS";
    node.attrs.emplace_back("path", relativize(s->uri, base));
    return node;
  }
  if (auto* v = t.as_var()) {
    node.name = "OMV";
    node.attrs.emplace_back("name", v->name);
    return node;
  }
  if (auto* a = t.as_apply()) {
    node.name = "OMA";
    node.children.push_back(term_to_xml(a->head, base));
    for (const auto& arg : a->args) node.children.push_back(term_to_xml(arg, base));
    return node;
  }
  const auto* b = t.as_bind();
  node.name = "OMBIND";
  node.children.push_back(term_to_xml(b->binder, base));
  XmlNode vars;
  vars.name = "OMBVAR";
  for (const auto& v : b->vars) {
    XmlNode var;
    var.name = "OMV";
    var.attrs.emplace_back("name", v.name);
    if (v.type) {
      XmlNode type;
      type.name = "type";
      type.children.push_back(term_to_xml(*v.type, base));
      var.children.push_back(std::move(type));
    }
    vars.children.push_back(std::move(var));
  }
  node.children.push_back(std::move(vars));
  node.children.push_back(term_to_xml(b->body, base));
  return node;
}

std::string serialize_document(const Document& doc) {
  XmlNode root;
  root.name = "omdoc";
  root.attrs.emplace_back("base", doc.base.str());

  for (const auto& m : doc.modules) {
    Uri self = doc.module_uri(m);
    XmlNode node;
    if (auto* t = std::get_if<Theory>(&m)) {
      node.name = "theory";
      node.attrs.emplace_back("name", t->name.str());
      if (t->meta) node.attrs.emplace_back("meta", relativize(*t->meta, doc.base));
      for (const auto& d : t->declarations) {
        if (auto* c = std::get_if<Constant>(&d)) {
          XmlNode cn;
          cn.name = "constant";
          cn.attrs.emplace_back("name", c->name.str());
          if (c->type) {
            XmlNode type;
            type.name = "type";
            type.children.push_back(term_to_xml(*c->type, self));
            cn.children.push_back(std::move(type));
          }
          if (c->definiens) {
            XmlNode def;
            def.name = "definition";
            def.children.push_back(term_to_xml(*c->definiens, self));
            cn.children.push_back(std::move(def));
          }
          node.children.push_back(std::move(cn));
        } else if (auto* i = std::get_if<Import>(&d)) {
          XmlNode in;
          in.name = "import";
          in.attrs.emplace_back("name", i->name.str());
          in.attrs.emplace_back("from", relativize(i->from, doc.base));
          for (const auto& a : i->assignments) in.children.push_back(assignment_to_xml(a, self));
          node.children.push_back(std::move(in));
        } else {
          node.children.push_back(notation_to_xml(std::get<Notation>(d), doc.base));
        }
      }
    } else if (auto* v = std::get_if<View>(&m)) {
      node.name = "view";
      node.attrs.emplace_back("name", v->name.str());
      node.attrs.emplace_back("from", relativize(v->from, doc.base));
      node.attrs.emplace_back("to", relativize(v->to, doc.base));
      for (const auto& a : v->assignments) node.children.push_back(assignment_to_xml(a, self));
      for (const auto& n : v->notations) node.children.push_back(notation_to_xml(n, doc.base));
    } else {
      const auto& s = std::get<Style>(m);
      node.name = "style";
      node.attrs.emplace_back("name", s.name.str());
      for (const auto& imp : s.imports) {
        XmlNode in;
        in.name = "import";
        in.attrs.emplace_back("from", relativize(imp, doc.base));
        node.children.push_back(std::move(in));
      }
      for (const auto& n : s.notations) node.children.push_back(notation_to_xml(n, doc.base));
    }
    root.children.push_back(std::move(node));
  }
  return XmlWriter().finish(root);
}

}  // namespace tgk
