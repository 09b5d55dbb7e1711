#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "tgk/model.hpp"

namespace tgk {

// The fixed ontology: 10 unary types and 11 binary relations over URIs.
enum class TypeName {
  Document,
  Theory,
  View,
  Import,
  Constant,
  ConstantAssignment,
  ImportAssignment,
  Style,
  Notation,
  UntypedConstant,
};

enum class RelName {
  DeclaredIn,
  HasMetaTheory,
  HasDomain,
  HasCodomain,
  Imports,
  HasOccurrenceOfInType,
  HasOccurrenceOfInDefiniens,
  HasAssignmentFor,
  DependsOn,
  HasNotationFor,
  StyleImports,
};

constexpr int kTypeCount = 10;
constexpr int kRelCount = 11;

const char* type_name_str(TypeName t);
const char* rel_name_str(RelName r);
TypeName parse_type_name(const std::string& s);  // throws UnknownRelation
RelName parse_rel_name(const std::string& s);

struct AboxFact {
  bool unary = true;
  int pred = 0;  // TypeName or RelName ordinal
  Uri subject;
  Uri object;  // binary only

  static AboxFact type(TypeName t, Uri individual) {
    return AboxFact{true, static_cast<int>(t), std::move(individual), Uri()};
  }
  static AboxFact rel(RelName r, Uri subject, Uri object) {
    return AboxFact{false, static_cast<int>(r), std::move(subject), std::move(object)};
  }

  TypeName type_name() const { return static_cast<TypeName>(pred); }
  RelName rel_name() const { return static_cast<RelName>(pred); }

  // One fact per line: "U <type> <uri>" or "B <rel> <uri> <uri>".
  std::string line() const;

  auto operator<=>(const AboxFact&) const = default;
};

using FactSet = std::set<AboxFact>;

// Compiles the document into its fact set.
FactSet extract_abox(const Document& doc);

std::string serialize_abox(const FactSet& facts);  // sorted, one per line
FactSet parse_abox(std::string_view text);         // throws UnknownRelation / MalformedUri

// Subject and object indexes over a fact set, with a lookup counter per
// relation for instrumentation.
class FactIndex {
 public:
  explicit FactIndex(const FactSet& facts);
  FactIndex() = default;

  void add(const AboxFact& fact);

  const std::set<Uri>& objects(RelName r, const Uri& subject) const;
  const std::set<Uri>& subjects(RelName r, const Uri& object) const;
  bool has_type(const Uri& individual, TypeName t) const;
  std::set<TypeName> types_of(const Uri& individual) const;
  std::set<Uri> individuals_of_type(TypeName t) const;

  // number of forward/backward lookups per relation since construction
  long lookup_count(RelName r) const { return lookups_[static_cast<size_t>(r)]; }
  long total_lookups() const;

 private:
  std::map<std::pair<int, Uri>, std::set<Uri>> forward_;
  std::map<std::pair<int, Uri>, std::set<Uri>> backward_;
  std::map<Uri, std::set<TypeName>> unary_;
  std::map<int, std::set<Uri>> by_type_;
  mutable long lookups_[kRelCount] = {};
  std::set<Uri> empty_;
};

// Relation expressions: base relations closed under inverse, composition,
// union and transitive closure.
class RelExpr {
 public:
  struct Base;
  struct Inverse;
  struct Compose;
  struct Union;
  struct TransClosure;
  using Node = std::variant<Base, Inverse, Compose, Union, TransClosure>;

  static RelExpr base(RelName r);
  static RelExpr inverse(RelExpr e);
  static RelExpr compose(RelExpr a, RelExpr b);
  static RelExpr unite(RelExpr a, RelExpr b);
  static RelExpr closure(RelExpr e);

  const Node& node() const;
  std::string str() const;

 private:
  explicit RelExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct RelExpr::Base {
  RelName rel;
};
struct RelExpr::Inverse {
  RelExpr inner;
};
struct RelExpr::Compose {
  RelExpr first;
  RelExpr second;
};
struct RelExpr::Union {
  RelExpr left;
  RelExpr right;
};
struct RelExpr::TransClosure {
  RelExpr inner;
};

inline const RelExpr::Node& RelExpr::node() const { return *node_; }

// Surface grammar: R, R^-1, a ; b, a | b, e+, parentheses.
// Precedence: closure > inverse > compose > union.
RelExpr parse_rel_expr(std::string_view text);

// All individuals related to start by e; transitive closure is the
// non-reflexive one.
std::set<Uri> query(const FactIndex& index, const Uri& start, const RelExpr& e);
std::set<Uri> query(const FactSet& facts, const Uri& start, const RelExpr& e);

// --------------------------------------------------------------------------
// Structure recovery: the declaration skeleton of a graph, reconstructible
// from its ABox.

struct Skeleton {
  struct ModuleInfo {
    TypeName kind = TypeName::Theory;  // Theory, View or Style
    std::optional<Uri> meta;
    std::optional<Uri> from, to;       // views
    std::set<Uri> style_imports;

    bool operator==(const ModuleInfo&) const = default;
  };
  struct DeclInfo {
    TypeName kind = TypeName::Constant;
    bool untyped = false;
    std::optional<Uri> from;           // imports
    std::optional<Uri> notation_for;   // notations

    bool operator==(const DeclInfo&) const = default;
  };

  std::set<Uri> documents;
  std::map<Uri, ModuleInfo> modules;           // module uri -> info
  std::map<Uri, Uri> containment;              // declared item -> container
  std::map<Uri, DeclInfo> decls;               // non-module items
  std::set<std::pair<Uri, Uri>> imports_edges; // theory -> theory
  std::set<std::pair<Uri, Uri>> type_occurrences;
  std::set<std::pair<Uri, Uri>> def_occurrences;
  std::set<std::pair<Uri, Uri>> assignment_edges;  // container -> assigned target

  bool operator==(const Skeleton&) const = default;
};

Skeleton skeleton_of(const Document& doc);
Skeleton recover_structure(const FactSet& facts);  // throws InconsistentFacts

}  // namespace tgk
