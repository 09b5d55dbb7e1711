#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "tgk/model.hpp"

namespace tgk {

// A constant available in a theory only through imports, at its qualified
// URI, with type and definiens translated along the import path.
struct InducedConstant {
  Uri uri;
  Uri origin;  // the syntactic constant
  Morphism via;
  std::optional<Term> type;
  std::optional<Term> definiens;
};

// Normal form of a morphism: its pointwise action on the domain's flat
// undefined constants. Two morphisms are equal iff their tables agree.
struct MorphismTable {
  Uri domain;
  Uri codomain;
  std::map<LocalName, Term> map;
};

bool tables_equal(const MorphismTable& a, const MorphismTable& b);

// One entry of a theory's flat form.
struct FlatEntry {
  LocalName path;  // qualified name within the theory
  Uri origin;      // syntactic constant it stems from
  bool defined = false;
  bool under_meta = false;
};

// Lazy flat-form access over an immutable graph. Dereference results and
// per-theory flat views are memoized; safe for concurrent readers.
class Flattener {
 public:
  explicit Flattener(const TheoryGraph& graph) : graph_(graph) {}

  const TheoryGraph& graph() const { return graph_; }

  struct Deref {
    const Theory* theory = nullptr;
    const View* view = nullptr;
    const Constant* constant = nullptr;  // syntactic
    Uri constant_uri;
    std::optional<InducedConstant> induced;

    bool found() const { return theory || view || constant || induced; }
  };

  // The item a URI denotes: a module, a syntactic constant, or an induced
  // constant computed by walking imports (the reserved first segment
  // `meta` walks into the meta-theory). Absent is a value, not an error.
  Deref deref(const Uri& uri) const;

  // Translates a term along a morphism. Symbols outside the domain theory
  // (in particular meta-theory symbols) pass through untouched unless the
  // morphism assigns them explicitly.
  Term apply_morphism(const Morphism& m, const Term& t) const;

  // Maps a flat path of the morphism's domain to a term over its codomain.
  Term apply_to_path(const Morphism& m, const LocalName& path) const;

  MorphismTable normalize(const Morphism& m) const;

  Uri morphism_domain(const Morphism& m) const;
  Uri morphism_codomain(const Morphism& m) const;

  // Every constant of the theory's flat form, syntactic and induced, each
  // exactly once per qualified URI, in depth-first declaration order.
  // Paths through the meta-theory are listed only on request.
  std::vector<FlatEntry> flat_entries(const Uri& theory, bool include_meta = false) const;
  std::vector<Deref> flatten_theory(const Uri& theory, bool include_meta = false) const;

  void clear_cache() const;

 private:
  struct FlatTheory {
    std::vector<FlatEntry> entries;  // meta entries included, flagged
  };

  const FlatTheory& flat_theory(const Uri& theory) const;
  void build_flat(const Theory& theory, const Uri& self, std::vector<FlatEntry>& out,
                  std::vector<Uri>& stack) const;

  const TheoryGraph& graph_;
  mutable std::mutex mu_;
  mutable std::map<Uri, std::shared_ptr<const FlatTheory>> flat_cache_;
  mutable std::map<Uri, std::shared_ptr<const Deref>> deref_cache_;
};

}  // namespace tgk
