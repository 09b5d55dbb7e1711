#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "tgk/uri.hpp"

namespace tgk {

// Immutable expression tree in the OpenMath shape: symbol references,
// variables, application, and binding. Copies are cheap (shared nodes).
class Term {
 public:
  struct SymbolRef;
  struct Var;
  struct Apply;
  struct BoundVar;
  struct Bind;
  using Node = std::variant<SymbolRef, Var, Apply, Bind>;

  static Term symbol(Uri uri);
  static Term var(std::string name);
  static Term apply(Term head, std::vector<Term> args);
  static Term bind(Term binder, std::vector<BoundVar> vars, Term body);

  const Node& node() const;
  const SymbolRef* as_symbol() const;
  const Var* as_var() const;
  const Apply* as_apply() const;
  const Bind* as_bind() const;

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Term::SymbolRef {
  Uri uri;
};
struct Term::Var {
  std::string name;
};
struct Term::Apply {
  Term head;
  std::vector<Term> args;  // non-empty
};
struct Term::BoundVar {
  std::string name;
  std::optional<Term> type;
};
struct Term::Bind {
  Term binder;
  std::vector<BoundVar> vars;  // non-empty, distinct names
  Term body;
};

inline const Term::Node& Term::node() const { return *node_; }
inline const Term::SymbolRef* Term::as_symbol() const { return std::get_if<SymbolRef>(node_.get()); }
inline const Term::Var* Term::as_var() const { return std::get_if<Var>(node_.get()); }
inline const Term::Apply* Term::as_apply() const { return std::get_if<Apply>(node_.get()); }
inline const Term::Bind* Term::as_bind() const { return std::get_if<Bind>(node_.get()); }

// Equality up to renaming of bound variables; free variables by name.
bool alpha_equal(const Term& a, const Term& b);
bool alpha_equal(const std::optional<Term>& a, const std::optional<Term>& b);

// Visits every symbol reference, including those in bound-variable types.
void for_each_symbol(const Term& t, const std::function<void(const Uri&)>& fn);

// Rewrites symbol references; fn returning nullopt keeps the reference.
Term map_symbols(const Term& t, const std::function<std::optional<Term>(const Uri&)>& fn);

}  // namespace tgk
