#include "tgk/notation.hpp"

#include "tgk/error.hpp"

namespace tgk {

const char* notation_role_name(NotationRole role) {
  switch (role) {
    case NotationRole::Constant: return "constant";
    case NotationRole::Application: return "application";
    case NotationRole::Binder: return "binder";
    case NotationRole::Theory: return "theory";
    case NotationRole::View: return "view";
    case NotationRole::Document: return "document";
  }
  return "constant";
}

const char* fixity_name(Fixity fixity) {
  switch (fixity) {
    case Fixity::Prefix: return "prefix";
    case Fixity::Infix: return "infix";
    case Fixity::Postfix: return "postfix";
    case Fixity::NameOnly: return "name-only";
  }
  return "name-only";
}

NotationRole parse_notation_role(const std::string& text) {
  if (text == "constant") return NotationRole::Constant;
  if (text == "application") return NotationRole::Application;
  if (text == "binder") return NotationRole::Binder;
  if (text == "theory") return NotationRole::Theory;
  if (text == "view") return NotationRole::View;
  if (text == "document") return NotationRole::Document;
  throw Error(ErrorCode::GrammarError, "unknown notation role '" + text + "'");
}

Fixity parse_fixity(const std::string& text) {
  if (text == "prefix") return Fixity::Prefix;
  if (text == "infix") return Fixity::Infix;
  if (text == "postfix") return Fixity::Postfix;
  if (text == "name-only") return Fixity::NameOnly;
  throw Error(ErrorCode::GrammarError, "unknown fixity '" + text + "'");
}

}  // namespace tgk
