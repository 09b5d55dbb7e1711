#include "tgk/cones.hpp"

#include <deque>

namespace tgk {

bool is_module(const FactIndex& index, const Uri& uri) {
  return index.has_type(uri, TypeName::Theory) || index.has_type(uri, TypeName::View) ||
         index.has_type(uri, TypeName::Style);
}

namespace {

std::set<Uri> cone(const FactIndex& index, const Uri& module, bool transitive, bool forward) {
  if (!is_module(index, module)) {
    throw Error(ErrorCode::UnknownModule, "not a module in this fact set", module.str());
  }
  std::set<Uri> out{module};
  std::deque<Uri> frontier{module};
  while (!frontier.empty()) {
    Uri current = frontier.front();
    frontier.pop_front();
    const auto& next =
        forward ? index.subjects(RelName::DependsOn, current) : index.objects(RelName::DependsOn, current);
    for (const auto& n : next) {
      if (out.insert(n).second && transitive) frontier.push_back(n);
    }
    if (!transitive) break;
  }
  return out;
}

}  // namespace

std::set<Uri> backward_cone(const FactIndex& index, const Uri& module, bool transitive) {
  return cone(index, module, transitive, false);
}

std::set<Uri> forward_cone(const FactIndex& index, const Uri& module, bool transitive) {
  return cone(index, module, transitive, true);
}

}  // namespace tgk
