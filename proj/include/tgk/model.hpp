#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tgk/notation.hpp"
#include "tgk/term.hpp"
#include "tgk/uri.hpp"

namespace tgk {

// A composable mapping between theories: identity, a named import path
// rooted at a theory, a view, or a diagram-order composition.
class Morphism {
 public:
  struct Identity;
  struct ImportLink;
  struct ViewLink;
  struct Compose;
  using Node = std::variant<Identity, ImportLink, ViewLink, Compose>;

  static Morphism identity(Uri theory);
  static Morphism import_link(Uri theory, LocalName path);
  static Morphism view_link(Uri view);
  static Morphism compose(Morphism first, Morphism second);

  const Node& node() const;
  const Identity* as_identity() const;
  const ImportLink* as_import() const;
  const ViewLink* as_view() const;
  const Compose* as_compose() const;

  // Textual form: composition with ';', id(T), import paths as T-uri?path.
  std::string str() const;

  bool operator==(const Morphism& other) const;

 private:
  explicit Morphism(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Morphism::Identity {
  Uri theory;
};
struct Morphism::ImportLink {
  Uri theory;      // codomain; the theory containing the first import
  LocalName path;  // outermost import first, e.g. dist/mag1
};
struct Morphism::ViewLink {
  Uri view;
};
struct Morphism::Compose {
  Morphism first;  // applied first (diagram order)
  Morphism second;
};

inline const Morphism::Node& Morphism::node() const { return *node_; }
inline const Morphism::Identity* Morphism::as_identity() const { return std::get_if<Identity>(node_.get()); }
inline const Morphism::ImportLink* Morphism::as_import() const { return std::get_if<ImportLink>(node_.get()); }
inline const Morphism::ViewLink* Morphism::as_view() const { return std::get_if<ViewLink>(node_.get()); }
inline const Morphism::Compose* Morphism::as_compose() const { return std::get_if<Compose>(node_.get()); }

struct ConstAssign {
  LocalName target;  // constant path in the domain's flat view
  Term value;        // term over the codomain

  bool operator==(const ConstAssign& o) const { return target == o.target && alpha_equal(value, o.value); }
};

struct ImportAssign {
  LocalName target;  // import path in the domain
  Morphism value;    // morphism into the codomain

  bool operator==(const ImportAssign& o) const { return target == o.target && value == o.value; }
};

using Assignment = std::variant<ConstAssign, ImportAssign>;

const LocalName& assignment_target(const Assignment& a);

struct Constant {
  LocalName name;  // single segment
  std::optional<Term> type;
  std::optional<Term> definiens;

  bool operator==(const Constant& o) const {
    return name == o.name && alpha_equal(type, o.type) && alpha_equal(definiens, o.definiens);
  }
};

struct Import {
  LocalName name;  // single segment
  Uri from;        // domain theory
  std::vector<Assignment> assignments;

  bool operator==(const Import&) const = default;
};

using Declaration = std::variant<Constant, Import, Notation>;

struct Theory {
  LocalName name;
  std::optional<Uri> meta;
  std::vector<Declaration> declarations;

  const Constant* find_constant(const std::string& name) const;
  const Import* find_import(const std::string& name) const;
  std::vector<const Import*> imports() const;
  std::vector<const Constant*> constants() const;
  std::vector<const Notation*> notations() const;

  bool operator==(const Theory&) const = default;
};

struct View {
  LocalName name;
  Uri from;
  Uri to;
  std::vector<Assignment> assignments;
  std::vector<Notation> notations;

  bool operator==(const View&) const = default;
};

struct Style {
  LocalName name;
  std::vector<Uri> imports;  // other styles
  std::vector<Notation> notations;

  bool operator==(const Style&) const = default;
};

using Module = std::variant<Theory, View, Style>;

const LocalName& module_name(const Module& m);

struct Document {
  Uri base;  // doc part only
  std::vector<Module> modules;

  Uri module_uri(const Module& m) const { return Uri(base.doc, module_name(m)); }
  const Module* find_module(const LocalName& name) const;
};

// --------------------------------------------------------------------------
// Atomic declarations: one atom per container header and per child, so a
// graph can be processed as an order-tolerant stream.

struct TheoryHeader {
  std::optional<Uri> meta;
  bool operator==(const TheoryHeader&) const = default;
};
struct ViewHeader {
  Uri from;
  Uri to;
  bool operator==(const ViewHeader&) const = default;
};
struct StyleHeader {
  std::vector<Uri> imports;
  bool operator==(const StyleHeader&) const = default;
};
struct ImportHeader {
  Uri from;
  bool operator==(const ImportHeader&) const = default;
};
struct AssignmentAtom {
  Uri container;  // the import or view carrying the assignment
  Assignment assignment;
  bool operator==(const AssignmentAtom&) const = default;
};
struct NotationAtom {
  Uri container;
  Notation notation;
  bool operator==(const NotationAtom&) const = default;
};

struct AtomicDecl {
  Uri uri;  // canonical URI of the declared item
  std::variant<TheoryHeader, ViewHeader, StyleHeader, Constant, ImportHeader, AssignmentAtom, NotationAtom>
      payload;

  bool operator==(const AtomicDecl&) const = default;
};

// --------------------------------------------------------------------------
// A set of loaded documents with a module index. Immutable once built.

class TheoryGraph {
 public:
  void add_document(Document doc);  // throws DuplicateUri

  const std::vector<std::unique_ptr<Document>>& documents() const { return docs_; }
  const Document* document(const Uri& doc_uri) const;
  const Module* module(const Uri& mod_uri) const;
  const Theory* theory(const Uri& mod_uri) const;
  const View* view(const Uri& mod_uri) const;

  // The syntactic item at a URI: a module, a direct child declaration, or an
  // assignment addressed by container-name/target-path. Induced items are
  // not found here.
  struct Lookup {
    const Theory* theory = nullptr;
    const View* view = nullptr;
    const Style* style = nullptr;
    const Constant* constant = nullptr;
    const Import* import = nullptr;
    const Assignment* assignment = nullptr;
    const Notation* notation = nullptr;

    bool found() const {
      return theory || view || style || constant || import || assignment || notation;
    }
  };
  Lookup lookup(const Uri& uri) const;

 private:
  std::vector<std::unique_ptr<Document>> docs_;  // insertion order
  std::map<std::string, size_t> doc_index_;      // doc uri text -> index
  std::map<Uri, std::pair<size_t, size_t>> module_index_;  // uri -> (doc, module)
};

// Decomposes a document into header atoms followed by child atoms, in
// source order.
std::vector<AtomicDecl> atomize(const Document& doc);

// Rebuilds documents from an atom stream. Requires container headers to
// arrive before their children; throws OrphanAtom or DuplicateUri.
class Assembler {
 public:
  void feed(const AtomicDecl& atom);
  TheoryGraph finish();
  std::vector<Document> documents();

 private:
  struct DocBuild {
    Document doc;
    std::map<LocalName, size_t> modules;
  };
  std::map<std::string, DocBuild> docs_;
  std::vector<std::string> doc_order_;
  std::map<Uri, bool> seen_;
};

TheoryGraph assemble(const std::vector<AtomicDecl>& atoms);

// Order-insensitive structural equality: same modules, same declaration
// sets per module.
bool graph_equal(const TheoryGraph& a, const TheoryGraph& b);

}  // namespace tgk
