#include "tgk/present.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "tgk/xml.hpp"

namespace tgk {

namespace {

// URI-prefix applicability: an empty doc matches everything, a doc-only
// target matches by string prefix, otherwise components must nest.
bool uri_prefix_of(const Uri& prefix, const Uri& uri) {
  if (prefix.doc.empty() && !prefix.mod) return true;
  if (!prefix.mod) return uri.doc.rfind(prefix.doc, 0) == 0;
  if (prefix.doc != uri.doc) return false;
  if (!uri.mod || !uri.mod->starts_with(*prefix.mod)) return false;
  if (!prefix.sym) return true;
  return uri.sym && uri.sym->starts_with(*prefix.sym);
}

size_t specificity(const Uri& prefix) { return prefix.str().size(); }

std::string component_text(const Uri& uri, int component) {
  switch (component) {
    case 0: return uri.doc;
    case 1: return uri.mod ? uri.mod->str() : "";
    default: return uri.sym ? uri.sym->str() : (uri.mod ? uri.mod->back() : uri.doc);
  }
}

struct Rendered {
  std::string text;
  int prec;  // output precedence of the notation that produced it
};

constexpr int kAtomPrec = 1000000;

class Renderer {
 public:
  Renderer(const NotationSet& notations, RenderTarget target) : notations_(notations), target_(target) {}

  std::string run(const Term& t) { return render(t).text; }

  Rendered render(const Term& t) {
    if (auto* v = t.as_var()) return {escape(v->name), kAtomPrec};
    if (auto* s = t.as_symbol()) return {symbol_text(s->uri), kAtomPrec};
    if (auto* a = t.as_apply()) return render_apply(*a);
    return render_bind(*t.as_bind());
  }

 private:
  const NotationSet& notations_;
  RenderTarget target_;

  std::string escape(const std::string& raw) {
    return target_ == RenderTarget::Html ? xml_escape_attr(raw) : raw;
  }

  const Notation& select(const Uri& head, NotationRole role) {
    const Notation* n = notations_.select(head, role);
    if (!n) {
      throw Error(ErrorCode::NoApplicableNotation,
                  std::string("no applicable ") + notation_role_name(role) + " notation", head.str());
    }
    return *n;
  }

  std::string operator_text(const Notation& n, const Uri& head) {
    std::string text = n.op.empty() ? component_text(head, n.components.empty() ? 2 : n.components[0]) : n.op;
    if (target_ == RenderTarget::Html) {
      return "<mo xref=\"" + xml_escape_attr(head.str()) + "\">" + xml_escape_attr(text) + "</mo>";
    }
    return text;
  }

  std::string symbol_text(const Uri& uri) {
    const Notation& n = select(uri, NotationRole::Constant);
    return operator_text(n, uri);
  }

  std::string wrap_if(bool needed, const Notation& n, std::string inner) {
    if (!needed) return inner;
    return escape(n.bracket_open) + inner + escape(n.bracket_close);
  }

  Rendered render_apply(const Term::Apply& a) {
    const Term::SymbolRef* head = a.head.as_symbol();
    const Notation* n = head ? notations_.select(head->uri, NotationRole::Application) : nullptr;
    if (!n || !head) {
      // generic fallback: head(arg, ..., arg)
      Rendered h = render(a.head);
      std::string out = h.text + (target_ == RenderTarget::Html ? "<mrow>(" : "(");
      for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ", ";
        out += render(a.args[i]).text;
      }
      out += target_ == RenderTarget::Html ? ")</mrow>" : ")";
      return {out, kAtomPrec};
    }

    if (n->fixity == Fixity::Infix) {
      // associative rendering: the favored side keeps the bare precedence
      std::string out;
      std::string op = operator_text(*n, head->uri);
      for (size_t i = 0; i < a.args.size(); ++i) {
        bool favored = n->left_assoc ? (i == 0) : (i + 1 == a.args.size());
        int required = favored ? n->prec_in : n->prec_in + 1;
        Rendered arg = render(a.args[i]);
        if (i) out += " " + op + " ";
        out += wrap_if(arg.prec < required, *n, arg.text);
      }
      return {out, n->prec_out};
    }
    if (n->fixity == Fixity::Postfix) {
      Rendered arg = render(a.args[0]);
      std::string out = wrap_if(arg.prec < n->prec_in, *n, arg.text) + " " + operator_text(*n, head->uri);
      for (size_t i = 1; i < a.args.size(); ++i) out += " " + render(a.args[i]).text;
      return {out, n->prec_out};
    }
    // prefix
    std::string out = operator_text(*n, head->uri);
    out += escape(n->bracket_open);
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += escape(n->separator);
      out += render(a.args[i]).text;
    }
    out += escape(n->bracket_close);
    return {out, kAtomPrec};
  }

  Rendered render_bind(const Term::Bind& b) {
    const Term::SymbolRef* head = b.binder.as_symbol();
    const Notation* n = head ? notations_.select(head->uri, NotationRole::Binder) : nullptr;
    std::string binder = head && n ? operator_text(*n, head->uri) : render(b.binder).text;
    std::string out = binder + " ";
    for (size_t i = 0; i < b.vars.size(); ++i) {
      if (i) out += ", ";
      out += escape(b.vars[i].name);
      if (b.vars[i].type) out += " : " + render(*b.vars[i].type).text;
    }
    out += " . ";
    Rendered body = render(b.body);
    int required = n ? n->prec_in : 0;
    out += body.prec < required ? "(" + body.text + ")" : body.text;
    return {out, n ? n->prec_out : 0};
  }
};

}  // namespace

const Notation* NotationSet::select(const Uri& head, NotationRole role) const {
  const Notation* best = nullptr;
  size_t best_len = 0;
  for (const auto& n : notations_) {
    if (n.role != role) continue;
    if (!uri_prefix_of(n.target, head)) continue;
    size_t len = specificity(n.target);
    if (!best || len >= best_len) {
      best = &n;
      best_len = len;
    }
  }
  return best;
}

NotationSet default_notations() {
  NotationSet out;
  Notation constant;
  constant.uri = Uri("tgk:builtin", LocalName{"default"}, LocalName{"constant"});
  constant.role = NotationRole::Constant;
  out.add(constant);

  Notation application = constant;
  application.uri = Uri("tgk:builtin", LocalName{"default"}, LocalName{"application"});
  application.role = NotationRole::Application;
  application.fixity = Fixity::Prefix;
  out.add(application);

  Notation binder = constant;
  binder.uri = Uri("tgk:builtin", LocalName{"default"}, LocalName{"binder"});
  binder.role = NotationRole::Binder;
  out.add(binder);
  return out;
}

NotationSet resolve_style(const TheoryGraph& graph, const Uri& style_uri) {
  NotationSet out = default_notations();
  std::set<Uri> seen;
  std::function<void(const Uri&)> visit = [&](const Uri& uri) {
    if (!seen.insert(uri.module()).second) return;
    const Module* m = graph.module(uri);
    const Style* s = m ? std::get_if<Style>(m) : nullptr;
    if (!s) throw Error(ErrorCode::UnknownModule, "not a style", uri.str());
    for (const auto& imp : s->imports) visit(imp);
    out.add_all(s->notations);
  };
  visit(style_uri);
  return out;
}

std::string render_term(const Term& term, const NotationSet& notations, RenderTarget target) {
  return Renderer(notations, target).run(term);
}

namespace {

std::string render_constant_decl(const std::string& name, const std::optional<Term>& type,
                                 const std::optional<Term>& definiens, const NotationSet& notations,
                                 RenderTarget target) {
  std::string out = name;
  if (type) out += " : " + render_term(*type, notations, target);
  if (definiens) out += " = " + render_term(*definiens, notations, target);
  return out;
}

}  // namespace

std::string render_item(const Flattener& flat, const Uri& uri, const NotationSet& notations, RenderTarget target) {
  auto item = flat.deref(uri);
  if (!item.found()) throw Error(ErrorCode::NotFound, "nothing to render", uri.str());

  bool html = target == RenderTarget::Html;
  if (item.constant) {
    std::string body = render_constant_decl(item.constant->name.str(), item.constant->type,
                                            item.constant->definiens, notations, target);
    return html ? "<div class=\"constant\">" + body + "</div>" : body;
  }
  if (item.induced) {
    std::string body = render_constant_decl(uri.sym->str(), item.induced->type, item.induced->definiens,
                                            notations, target);
    return html ? "<div class=\"constant induced\">" + body + "</div>" : body;
  }
  if (item.theory) {
    std::string out = html ? "<div class=\"theory\"><h2>" : "theory ";
    out += item.theory->name.str();
    out += html ? "</h2>" : " = {\n";
    for (const auto& d : item.theory->declarations) {
      if (auto* c = std::get_if<Constant>(&d)) {
        std::string line = render_constant_decl(c->name.str(), c->type, c->definiens, notations, target);
        out += html ? "<div class=\"constant\">" + line + "</div>" : "  " + line + "\n";
      } else if (auto* i = std::get_if<Import>(&d)) {
        std::string line = "import " + i->name.str() + " from " + i->from.str();
        out += html ? "<div class=\"import\">" + xml_escape_attr(line) + "</div>" : "  " + line + "\n";
      }
    }
    out += html ? "</div>" : "}";
    return out;
  }
  // view
  std::string out = html ? "<div class=\"view\"><h2>" : "view ";
  out += item.view->name.str();
  out += html ? "</h2>" : " : " + item.view->from.str() + " -> " + item.view->to.str() + " = {\n";
  if (html) out += "<div class=\"signature\">" + xml_escape_attr(item.view->from.str() + " -> " + item.view->to.str()) + "</div>";
  for (const auto& a : item.view->assignments) {
    std::string line = assignment_target(a).str() + " |-> ";
    if (auto* ca = std::get_if<ConstAssign>(&a)) {
      line += render_term(ca->value, notations, target);
    } else {
      line += std::get<ImportAssign>(a).value.str();
    }
    out += html ? "<div class=\"assignment\">" + line + "</div>" : "  " + line + "\n";
  }
  out += html ? "</div>" : "}";
  return out;
}

}  // namespace tgk
