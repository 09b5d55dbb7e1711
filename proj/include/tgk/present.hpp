#pragma once

#include <string>
#include <vector>

#include "tgk/flatten.hpp"
#include "tgk/model.hpp"
#include "tgk/notation.hpp"

namespace tgk {

enum class RenderTarget { Text, Html };

// Notations gathered for one rendering run, in priority order: later
// entries override earlier ones on specificity ties.
class NotationSet {
 public:
  void add(const Notation& n) { notations_.push_back(n); }
  void add_all(const std::vector<Notation>& ns) { notations_.insert(notations_.end(), ns.begin(), ns.end()); }

  // Longest applicable `for` prefix wins; ties go to the latest entry.
  // Null when nothing applies.
  const Notation* select(const Uri& head, NotationRole role) const;

  const std::vector<Notation>& all() const { return notations_; }

 private:
  std::vector<Notation> notations_;
};

// Built-in generic notations, one per role, applicable everywhere.
NotationSet default_notations();

// Flattens a style's import closure; imported notations come first so the
// importing style overrides them.
NotationSet resolve_style(const TheoryGraph& graph, const Uri& style_uri);

std::string render_term(const Term& term, const NotationSet& notations, RenderTarget target);

// Renders a module or symbol URI: constants as declarations, theories and
// views as structural listings. Induced constants render like constants.
std::string render_item(const Flattener& flat, const Uri& uri, const NotationSet& notations, RenderTarget target);

}  // namespace tgk
