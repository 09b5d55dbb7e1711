#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tgk/error.hpp"

namespace tgk {

// A non-empty slash-separated path of pchar+ segments. Segments are stored
// in decoded form; formatting re-applies %-encoding where needed.
class LocalName {
 public:
  LocalName() = default;
  explicit LocalName(std::vector<std::string> segments);
  LocalName(std::initializer_list<std::string> segments);

  // Parses an encoded "a/b/c" path. Rejects empty segments and bad pchars.
  static LocalName parse(std::string_view text);

  const std::vector<std::string>& segments() const { return segments_; }
  size_t size() const { return segments_.size(); }
  const std::string& front() const { return segments_.front(); }
  const std::string& back() const { return segments_.back(); }
  bool empty() const { return segments_.empty(); }

  // Encoded textual form, segments joined by '/'.
  std::string str() const;

  LocalName plus(const LocalName& tail) const;
  LocalName plus(const std::string& segment) const;
  // Drops the first n segments.
  LocalName tail(size_t n) const;
  bool starts_with(const LocalName& prefix) const;

  auto operator<=>(const LocalName&) const = default;

 private:
  std::vector<std::string> segments_;
};

// Three-part identifier doc?mod?sym. The doc part is a URI without query or
// fragment; mod and sym are optional local names.
struct Uri {
  std::string doc;
  std::optional<LocalName> mod;
  std::optional<LocalName> sym;

  Uri() = default;
  explicit Uri(std::string doc_, std::optional<LocalName> mod_ = std::nullopt,
               std::optional<LocalName> sym_ = std::nullopt)
      : doc(std::move(doc_)), mod(std::move(mod_)), sym(std::move(sym_)) {}

  bool is_absolute() const;   // doc carries a scheme
  bool is_doc_only() const { return !mod && !sym; }

  // doc?mod with sym dropped; the module a symbol URI lives in.
  Uri module() const { return Uri(doc, mod); }
  Uri with_sym(LocalName s) const { return Uri(doc, mod, std::move(s)); }

  std::string str() const;

  auto operator<=>(const Uri&) const = default;
};

// Splits on the first two unescaped '?' and validates the parts.
Uri parse_uri(std::string_view text);

// Canonical textual form; inverse of parse_uri.
std::string format_uri(const Uri& u);

// Resolves a reference against an absolute base. Handles the ?mod?sym,
// ??sym and ?/mod?sym forms; anything else resolves per RFC 3986.
Uri resolve_relative(const Uri& base, std::string_view ref);

// Byte-level helpers shared with the XML reader.
bool is_pchar(char c);
std::string percent_decode(std::string_view text);  // throws MalformedUri
std::string percent_encode(std::string_view text);

}  // namespace tgk
