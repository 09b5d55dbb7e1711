#pragma once

#include <memory>
#include <set>
#include <string>

#include "tgk/present.hpp"
#include "tgk/store.hpp"

namespace tgk {

// Response bodies shared between the CLI and the HTTP facade, so both
// surfaces answer a logical request with identical bytes.
std::string uris_xml(const std::set<Uri>& uris);
std::string uris_lines(const std::set<Uri>& uris);

// Store-backed operations behind both surfaces.
class Service {
 public:
  explicit Service(Store& store) : store_(store) {}

  Store& store() { return store_; }

  Store::Retrieved deref(const std::string& uri_text, bool self_contained = false);
  std::string abox(const std::string& doc_text);
  std::set<Uri> query_rel(const std::string& start_text, const std::string& rel_text);
  std::set<Uri> cone(const std::string& uri_text, bool forward, bool one_step);
  std::string cone_document(const std::string& uri_text, bool forward, bool one_step);
  Store::Retrieved present(const std::string& uri_text, const std::string& style_text,
                           const std::string& format);

  // Blocking HTTP loop; binds localhost by default.
  int serve(const std::string& host, int port);

 private:
  Store& store_;
};

}  // namespace tgk
