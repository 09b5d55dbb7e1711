#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tgk/checker.hpp"
#include "tgk/flatten.hpp"
#include "tgk/notation.hpp"

namespace tgk {

struct Revision {
  uint64_t number = 0;
  std::string timestamp;
  std::string author;
  std::string message;
  std::vector<std::string> changed;  // mirror paths
};

// Longest-prefix mapping from document URIs to locations. Locations under
// docs/ are store-internal; anything else is a local file or a remote URL.
struct CatalogEntry {
  std::string prefix;
  std::string location;
};

class CommitRejected : public Error {
 public:
  explicit CommitRejected(ValidationReport report)
      : Error(ErrorCode::ValidationRejected, report.to_text()), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct StoreStats {
  long documents_parsed = 0;  // XML documents read and parsed
  long index_reads = 0;       // index files consulted
  void reset() { *this = StoreStats{}; }
};

// File-backed versioned document store with commit-time validation, cached
// ABoxes, per-relation indexes, and content-addressed history.
class Store {
 public:
  static Store init(const std::filesystem::path& root);
  static Store open(const std::filesystem::path& root);
  static bool exists(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }
  uint64_t head() const { return head_; }
  StoreStats& stats() { return stats_; }

  // Grammar-checks and structurally validates exactly the given files
  // against cached ABoxes, then persists documents, ABoxes, indexes and a
  // new revision. Rejection leaves the store untouched.
  Revision commit(const std::vector<std::filesystem::path>& files, const std::string& message,
                  const std::string& author = "");

  struct Retrieved {
    std::string content_type;
    std::string body;
  };

  // Document bytes for doc URIs; dereferenced items (possibly induced) for
  // module and symbol URIs. `at` selects a past revision.
  Retrieved retrieve(const Uri& uri, std::optional<uint64_t> at = std::nullopt);

  std::string document_bytes(const Uri& doc, std::optional<uint64_t> at = std::nullopt);
  FactSet document_abox(const Uri& doc);

  // Renames a committed module and patches every reference to it across
  // its one-step forward dependency cone, as one atomic revision.
  Revision rename_module(const Uri& old_module, const LocalName& new_name);

  // Notations declared in any module of the backward cone of the item's
  // module, found with one index pass and one parse per affected document.
  std::vector<Notation> collect_notations(const Uri& item);

  std::set<Uri> cone(const Uri& module, bool forward, bool transitive);

  // Loads the named documents plus everything they reach, from cached
  // store content.
  std::shared_ptr<TheoryGraph> load_graph(const std::vector<Uri>& docs,
                                          std::optional<uint64_t> at = std::nullopt);

  std::vector<CatalogEntry> catalog() const { return catalog_; }
  void catalog_add(const std::string& prefix, const std::string& location);

  Revision revision_info(uint64_t number);

  // SHA-256 over every observable file: documents, ABoxes, indexes,
  // catalog, history and the revision counter.
  std::string state_fingerprint();

  // Context view of the committed ABoxes for separate compilation;
  // documents listed in `masked` count as absent.
  std::unique_ptr<FactSource> context(std::set<std::string> masked_docs = {});

 private:
  explicit Store(std::filesystem::path root) : root_(std::move(root)) {}

  void load_catalog();
  void save_catalog();
  std::string mirror_path(const Uri& doc) const;
  std::optional<std::string> locate(const std::string& doc_uri) const;  // catalog lookup
  std::string read_rel(const std::string& rel_path) const;
  void write_rel(const std::string& rel_path, const std::string& content);
  std::string blob_store(const std::string& content);
  void update_indexes(const std::map<std::string, FactSet>& new_by_doc);
  std::map<Uri, std::set<Uri>> depends_on_edges(bool reverse);

  friend class StoreFactSource;

  std::filesystem::path root_;
  std::vector<CatalogEntry> catalog_;
  uint64_t head_ = 0;
  StoreStats stats_;
  std::unique_ptr<std::mutex> writer_ = std::make_unique<std::mutex>();
};

}  // namespace tgk
