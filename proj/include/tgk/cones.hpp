#pragma once

#include <set>

#include "tgk/abox.hpp"

namespace tgk {

// Dependency cones over modules, computed from DependsOn edges only.
// Backward: everything a module needs; forward: everything that needs it.
// Both include the module itself.
std::set<Uri> backward_cone(const FactIndex& index, const Uri& module, bool transitive);
std::set<Uri> forward_cone(const FactIndex& index, const Uri& module, bool transitive);

bool is_module(const FactIndex& index, const Uri& uri);

}  // namespace tgk
