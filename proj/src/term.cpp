#include "tgk/term.hpp"

#include <map>
#include <set>

namespace tgk {

Term Term::symbol(Uri uri) {
  return Term(std::make_shared<const Node>(SymbolRef{std::move(uri)}));
}

Term Term::var(std::string name) {
  return Term(std::make_shared<const Node>(Var{std::move(name)}));
}

Term Term::apply(Term head, std::vector<Term> args) {
  if (args.empty()) throw Error(ErrorCode::GrammarError, "application without arguments");
  return Term(std::make_shared<const Node>(Apply{std::move(head), std::move(args)}));
}

Term Term::bind(Term binder, std::vector<BoundVar> vars, Term body) {
  if (vars.empty()) throw Error(ErrorCode::GrammarError, "binder without bound variables");
  std::set<std::string> seen;
  for (const auto& v : vars) {
    if (!seen.insert(v.name).second) {
      throw Error(ErrorCode::GrammarError, "duplicate bound variable '" + v.name + "'");
    }
  }
  return Term(std::make_shared<const Node>(Bind{std::move(binder), std::move(vars), std::move(body)}));
}

namespace {

// Bound names are mapped to nesting-depth indices on each side.
struct AlphaCtx {
  std::map<std::string, int> left, right;
  int depth = 0;
};

bool alpha_eq(const Term& a, const Term& b, AlphaCtx& ctx);

bool alpha_eq_opt(const std::optional<Term>& a, const std::optional<Term>& b, AlphaCtx& ctx) {
  if (a.has_value() != b.has_value()) return false;
  return !a || alpha_eq(*a, *b, ctx);
}

bool alpha_eq(const Term& a, const Term& b, AlphaCtx& ctx) {
  if (a.node().index() != b.node().index()) return false;
  if (auto* sa = a.as_symbol()) return sa->uri == b.as_symbol()->uri;
  if (auto* va = a.as_var()) {
    const auto* vb = b.as_var();
    auto la = ctx.left.find(va->name);
    auto lb = ctx.right.find(vb->name);
    if ((la == ctx.left.end()) != (lb == ctx.right.end())) return false;
    if (la == ctx.left.end()) return va->name == vb->name;  // both free
    return la->second == lb->second;
  }
  if (auto* aa = a.as_apply()) {
    const auto* ab = b.as_apply();
    if (aa->args.size() != ab->args.size()) return false;
    if (!alpha_eq(aa->head, ab->head, ctx)) return false;
    for (size_t i = 0; i < aa->args.size(); ++i) {
      if (!alpha_eq(aa->args[i], ab->args[i], ctx)) return false;
    }
    return true;
  }
  const auto* ba = a.as_bind();
  const auto* bb = b.as_bind();
  if (ba->vars.size() != bb->vars.size()) return false;
  if (!alpha_eq(ba->binder, bb->binder, ctx)) return false;
  for (size_t i = 0; i < ba->vars.size(); ++i) {
    if (!alpha_eq_opt(ba->vars[i].type, bb->vars[i].type, ctx)) return false;
  }
  AlphaCtx inner = ctx;
  for (size_t i = 0; i < ba->vars.size(); ++i) {
    inner.left[ba->vars[i].name] = inner.depth;
    inner.right[bb->vars[i].name] = inner.depth;
    ++inner.depth;
  }
  return alpha_eq(ba->body, bb->body, inner);
}

}  // namespace

bool alpha_equal(const Term& a, const Term& b) {
  AlphaCtx ctx;
  return alpha_eq(a, b, ctx);
}

bool alpha_equal(const std::optional<Term>& a, const std::optional<Term>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || alpha_equal(*a, *b);
}

void for_each_symbol(const Term& t, const std::function<void(const Uri&)>& fn) {
  if (auto* s = t.as_symbol()) {
    fn(s->uri);
  } else if (auto* a = t.as_apply()) {
    for_each_symbol(a->head, fn);
    for (const auto& arg : a->args) for_each_symbol(arg, fn);
  } else if (auto* b = t.as_bind()) {
    for_each_symbol(b->binder, fn);
    for (const auto& v : b->vars) {
      if (v.type) for_each_symbol(*v.type, fn);
    }
    for_each_symbol(b->body, fn);
  }
}

Term map_symbols(const Term& t, const std::function<std::optional<Term>(const Uri&)>& fn) {
  if (auto* s = t.as_symbol()) {
    if (auto repl = fn(s->uri)) return *repl;
    return t;
  }
  if (t.as_var()) return t;
  if (auto* a = t.as_apply()) {
    std::vector<Term> args;
    args.reserve(a->args.size());
    for (const auto& arg : a->args) args.push_back(map_symbols(arg, fn));
    return Term::apply(map_symbols(a->head, fn), std::move(args));
  }
  const auto* b = t.as_bind();
  std::vector<Term::BoundVar> vars;
  vars.reserve(b->vars.size());
  for (const auto& v : b->vars) {
    std::optional<Term> type;
    if (v.type) type = map_symbols(*v.type, fn);
    vars.push_back({v.name, std::move(type)});
  }
  return Term::bind(map_symbols(b->binder, fn), std::move(vars), map_symbols(b->body, fn));
}

}  // namespace tgk
