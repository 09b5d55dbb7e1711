#pragma once

#include <string>
#include <vector>

#include "tgk/uri.hpp"

namespace tgk {

enum class NotationRole { Constant, Application, Binder, Theory, View, Document };
enum class Fixity { Prefix, Infix, Postfix, NameOnly };

const char* notation_role_name(NotationRole role);
const char* fixity_name(Fixity fixity);
NotationRole parse_notation_role(const std::string& text);  // throws GrammarError
Fixity parse_fixity(const std::string& text);

// A rendering rule. Applies to an expression when `target` is a URI prefix
// of the expression's head; precedences drive bracket insertion.
struct Notation {
  Uri uri;            // own identity
  Uri target;         // applicability prefix ("for")
  NotationRole role = NotationRole::Constant;
  Fixity fixity = Fixity::NameOnly;
  std::string op;     // operator text; empty means "use the component"
  std::string separator = ", ";
  std::string bracket_open = "(";
  std::string bracket_close = ")";
  int prec_in = 0;
  int prec_out = 0;
  bool left_assoc = true;
  std::vector<int> components;  // hole template: 0 = doc, 1 = module, 2 = symbol

  bool operator==(const Notation&) const = default;
};

}  // namespace tgk
