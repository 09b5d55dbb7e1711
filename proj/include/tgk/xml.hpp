#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tgk/error.hpp"

namespace tgk {

// Element tree of the concrete syntax. The grammar has no text content, so
// only elements, attributes and positions are kept.
struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;  // source order
  std::vector<XmlNode> children;
  SourceRef at;

  const std::string* attr(std::string_view key) const;
  // Missing attribute raises GrammarError at this node.
  const std::string& require_attr(std::string_view key) const;
};

// Strict UTF-8 element parser; tracks line/column for every node and
// rejects text content, since the document grammar is element-only.
XmlNode parse_xml(std::string_view bytes, const std::string& filename);

// Serializer producing the canonical form: two-space indent, LF line
// endings, self-closing empty elements, no XML declaration.
class XmlWriter {
 public:
  std::string finish(const XmlNode& root) const;

 private:
  void write(const XmlNode& node, int depth, std::string& out) const;
};

std::string xml_escape_attr(std::string_view raw);

}  // namespace tgk
