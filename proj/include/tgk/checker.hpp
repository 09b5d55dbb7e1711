#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tgk/abox.hpp"
#include "tgk/model.hpp"

namespace tgk {

enum class ValidationLevel { Grammar, Structural, Typed };

const char* validation_level_name(ValidationLevel level);

struct Issue {
  ErrorCode code;
  std::string where;  // offending URI or source position
  std::string message;

  bool operator==(const Issue&) const = default;
  auto operator<=>(const Issue&) const = default;
};

struct ValidationReport {
  ValidationLevel requested = ValidationLevel::Structural;
  ValidationLevel achieved = ValidationLevel::Grammar;
  std::vector<Issue> errors;
  std::vector<Issue> warnings;
  long declarations_checked = 0;

  bool ok() const { return errors.empty(); }
  bool has_code(ErrorCode code) const;
  // Line-oriented text: "LEVEL code uri message" per issue, plus a summary.
  std::string to_text() const;
  std::string to_xml() const;
};

// Read-only view of previously compiled ABoxes. Cross-document references
// are resolved against this, never by re-parsing sources.
class FactSource {
 public:
  virtual ~FactSource() = default;
  virtual std::set<TypeName> kinds_of(const Uri& individual) const = 0;
  virtual std::optional<Uri> domain_of(const Uri& import_or_view) const = 0;   // HasDomain
  virtual std::optional<Uri> codomain_of(const Uri& import_or_view) const = 0; // HasCodomain
  virtual std::optional<Uri> meta_of(const Uri& theory) const = 0;             // HasMetaTheory
  virtual std::set<Uri> dependencies_of(const Uri& module) const = 0;          // Imports + HasMetaTheory
  bool knows(const Uri& individual) const { return !kinds_of(individual).empty(); }
};

class EmptyFactSource final : public FactSource {
 public:
  std::set<TypeName> kinds_of(const Uri&) const override { return {}; }
  std::optional<Uri> domain_of(const Uri&) const override { return std::nullopt; }
  std::optional<Uri> codomain_of(const Uri&) const override { return std::nullopt; }
  std::optional<Uri> meta_of(const Uri&) const override { return std::nullopt; }
  std::set<Uri> dependencies_of(const Uri&) const override { return {}; }
};

class FactSetSource final : public FactSource {
 public:
  explicit FactSetSource(const FactSet& facts) : index_(facts) {}
  explicit FactSetSource(FactIndex index) : index_(std::move(index)) {}

  std::set<TypeName> kinds_of(const Uri& individual) const override;
  std::optional<Uri> domain_of(const Uri& import_or_view) const override;
  std::optional<Uri> codomain_of(const Uri& import_or_view) const override;
  std::optional<Uri> meta_of(const Uri& theory) const override;
  std::set<Uri> dependencies_of(const Uri& module) const override;

 private:
  FactIndex index_;
};

// Stage 2: URI uniqueness, resolvability of every reference, acyclicity of
// import and meta edges, and domain-correctness of morphisms.
ValidationReport validate_structural(const std::vector<AtomicDecl>& atoms, const FactSource& context);

// --------------------------------------------------------------------------
// Stage 3: foundation plugins supply the typing and equality judgments.

enum class Judgment { Yes, No, Unknown };

class Flattener;

class FoundationPlugin {
 public:
  virtual ~FoundationPlugin() = default;
  virtual Uri meta_theory() const = 0;
  virtual Judgment equal(const Flattener& graph, const Uri& theory, const Term& a, const Term& b) const = 0;
  virtual Judgment has_type(const Flattener& graph, const Uri& theory, const Term& a, const Term& b) const = 0;
};

class PluginRegistry {
 public:
  void add(std::shared_ptr<const FoundationPlugin> plugin);
  const FoundationPlugin* for_meta(const Uri& meta) const;
  void set_default(std::shared_ptr<const FoundationPlugin> plugin);
  const FoundationPlugin* fallback() const { return default_.get(); }

 private:
  std::map<Uri, std::shared_ptr<const FoundationPlugin>> by_meta_;
  std::shared_ptr<const FoundationPlugin> default_;
};

// The shipped reference plugin: alpha-equivalence after bounded definiens
// expansion; typing answered from declared types of symbol references.
std::shared_ptr<const FoundationPlugin> syntactic_foundation(int max_expansion_depth = 64);

// Stage 3 over a structurally valid graph. Constants carrying both a type
// and a definiens are checked, as are constant assignments in views;
// Unknown verdicts become warnings.
ValidationReport validate_typed(const TheoryGraph& graph, const PluginRegistry& plugins);

}  // namespace tgk
