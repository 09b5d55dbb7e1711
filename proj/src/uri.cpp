#include "tgk/uri.hpp"

#include <algorithm>
#include <cctype>

namespace tgk {

namespace {

bool is_unreserved(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_' || c == '~';
}

bool is_sub_delim(char c) {
  switch (c) {
    case '!': case '$': case '&': case '\'': case '(': case ')':
    case '*': case '+': case ',': case ';': case '=':
      return true;
    default:
      return false;
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

char hex_digit(int v) {
  return static_cast<char>(v < 10 ? '0' + v : 'A' + (v - 10));
}

// Splits on unescaped '?' into at most four pieces (>3 is an error later).
std::vector<std::string_view> split_queries(std::string_view text) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '?') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(text.substr(start));
  return parts;
}

void check_doc_part(std::string_view doc) {
  for (char c : doc) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '#' || c == '<' || c == '>' || c == '"' || u == 0x7f) {
      throw Error(ErrorCode::MalformedUri, "illegal character in document part: '" + std::string(doc) + "'");
    }
  }
}

// Scheme, authority and path of a doc URI; enough structure for RFC 3986
// reference resolution (doc parts never carry query or fragment).
struct DocParts {
  std::string scheme;     // without ':'
  std::string authority;  // without leading "//", may be empty
  bool has_authority = false;
  std::string path;
};

bool has_scheme(std::string_view doc) {
  if (doc.empty() || !std::isalpha(static_cast<unsigned char>(doc[0]))) return false;
  for (size_t i = 1; i < doc.size(); ++i) {
    char c = doc[i];
    if (c == ':') return true;
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.')) return false;
  }
  return false;
}

DocParts split_doc(std::string_view doc) {
  DocParts p;
  if (has_scheme(doc)) {
    size_t colon = doc.find(':');
    p.scheme = std::string(doc.substr(0, colon));
    doc = doc.substr(colon + 1);
  }
  if (doc.substr(0, 2) == "//") {
    p.has_authority = true;
    doc = doc.substr(2);
    size_t slash = doc.find('/');
    if (slash == std::string_view::npos) {
      p.authority = std::string(doc);
      doc = {};
    } else {
      p.authority = std::string(doc.substr(0, slash));
      doc = doc.substr(slash);
    }
  }
  p.path = std::string(doc);
  return p;
}

std::string join_doc(const DocParts& p) {
  std::string s;
  if (!p.scheme.empty()) s += p.scheme + ":";
  if (p.has_authority) s += "//" + p.authority;
  s += p.path;
  return s;
}

// RFC 3986 section 5.2.4.
std::string remove_dot_segments(std::string_view path) {
  std::string input(path);
  std::string output;
  while (!input.empty()) {
    if (input.rfind("../", 0) == 0) {
      input.erase(0, 3);
    } else if (input.rfind("./", 0) == 0) {
      input.erase(0, 2);
    } else if (input.rfind("/./", 0) == 0) {
      input.replace(0, 3, "/");
    } else if (input == "/.") {
      input = "/";
    } else if (input.rfind("/../", 0) == 0) {
      input.replace(0, 4, "/");
      size_t last = output.find_last_of('/');
      output.erase(last == std::string::npos ? 0 : last);
    } else if (input == "/..") {
      input = "/";
      size_t last = output.find_last_of('/');
      output.erase(last == std::string::npos ? 0 : last);
    } else if (input == "." || input == "..") {
      input.clear();
    } else {
      size_t next = input.find('/', input[0] == '/' ? 1 : 0);
      if (next == std::string::npos) {
        output += input;
        input.clear();
      } else {
        output += input.substr(0, next);
        input.erase(0, next);
      }
    }
  }
  return output;
}

std::string merge_paths(const DocParts& base, std::string_view ref_path) {
  if (base.has_authority && base.path.empty()) return "/" + std::string(ref_path);
  size_t last = base.path.find_last_of('/');
  if (last == std::string::npos) return std::string(ref_path);
  return base.path.substr(0, last + 1) + std::string(ref_path);
}

std::string resolve_doc(const std::string& base_doc, std::string_view ref) {
  check_doc_part(ref);
  if (has_scheme(ref)) {
    DocParts r = split_doc(ref);
    r.path = remove_dot_segments(r.path);
    return join_doc(r);
  }
  DocParts base = split_doc(base_doc);
  DocParts out;
  out.scheme = base.scheme;
  if (ref.substr(0, 2) == "//") {
    DocParts r = split_doc(ref);
    out.has_authority = true;
    out.authority = r.authority;
    out.path = remove_dot_segments(r.path);
  } else {
    out.has_authority = base.has_authority;
    out.authority = base.authority;
    if (ref.empty()) {
      out.path = base.path;
    } else if (ref[0] == '/') {
      out.path = remove_dot_segments(ref);
    } else {
      out.path = remove_dot_segments(merge_paths(base, ref));
    }
  }
  return join_doc(out);
}

std::optional<LocalName> parse_name_part(std::string_view text, const char* what) {
  if (text.empty()) return std::nullopt;
  try {
    return LocalName::parse(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedUri, std::string(what) + " part: " + e.message());
  }
}

}  // namespace

bool is_pchar(char c) {
  return is_unreserved(c) || is_sub_delim(c) || c == ':' || c == '@';
}

std::string percent_decode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '%') {
      if (i + 2 >= text.size()) {
        throw Error(ErrorCode::MalformedUri, "truncated %-escape in '" + std::string(text) + "'");
      }
      int hi = hex_value(text[i + 1]);
      int lo = hex_value(text[i + 2]);
      if (hi < 0 || lo < 0) {
        throw Error(ErrorCode::MalformedUri, "bad %-escape in '" + std::string(text) + "'");
      }
      out += static_cast<char>((hi << 4) | lo);
      i += 2;
    } else {
      out += c;
    }
  }
  return out;
}

std::string percent_encode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (is_pchar(c)) {
      out += c;
    } else {
      unsigned char u = static_cast<unsigned char>(c);
      out += '%';
      out += hex_digit(u >> 4);
      out += hex_digit(u & 0xf);
    }
  }
  return out;
}

LocalName::LocalName(std::vector<std::string> segments) : segments_(std::move(segments)) {
  for (const auto& s : segments_) {
    if (s.empty()) throw Error(ErrorCode::MalformedUri, "empty local name segment");
  }
}

LocalName::LocalName(std::initializer_list<std::string> segments)
    : LocalName(std::vector<std::string>(segments)) {}

LocalName LocalName::parse(std::string_view text) {
  std::vector<std::string> segs;
  size_t start = 0;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '/') {
      std::string_view seg = text.substr(start, i - start);
      if (seg.empty()) {
        throw Error(ErrorCode::MalformedUri, "empty segment in local name '" + std::string(text) + "'");
      }
      for (size_t j = 0; j < seg.size(); ++j) {
        if (seg[j] == '%') continue;  // validated by percent_decode
        // Bytes >= 0x80 are accepted raw on input and %-encoded on output.
        if (!is_pchar(seg[j]) && static_cast<unsigned char>(seg[j]) < 0x80) {
          throw Error(ErrorCode::MalformedUri,
                      "illegal character '" + std::string(1, seg[j]) + "' in local name '" + std::string(text) + "'");
        }
      }
      segs.push_back(percent_decode(seg));
      start = i + 1;
    }
  }
  return LocalName(std::move(segs));
}

std::string LocalName::str() const {
  std::string out;
  for (size_t i = 0; i < segments_.size(); ++i) {
    if (i) out += '/';
    out += percent_encode(segments_[i]);
  }
  return out;
}

LocalName LocalName::plus(const LocalName& tail) const {
  std::vector<std::string> segs = segments_;
  segs.insert(segs.end(), tail.segments_.begin(), tail.segments_.end());
  return LocalName(std::move(segs));
}

LocalName LocalName::plus(const std::string& segment) const {
  std::vector<std::string> segs = segments_;
  segs.push_back(segment);
  return LocalName(std::move(segs));
}

LocalName LocalName::tail(size_t n) const {
  return LocalName(std::vector<std::string>(segments_.begin() + static_cast<long>(n), segments_.end()));
}

bool LocalName::starts_with(const LocalName& prefix) const {
  if (prefix.size() > size()) return false;
  return std::equal(prefix.segments_.begin(), prefix.segments_.end(), segments_.begin());
}

bool Uri::is_absolute() const { return has_scheme(doc); }

std::string Uri::str() const { return format_uri(*this); }

Uri parse_uri(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::MalformedUri, "empty URI");
  auto parts = split_queries(text);
  if (parts.size() > 3) {
    throw Error(ErrorCode::MalformedUri, "more than two '?' separators in '" + std::string(text) + "'");
  }
  Uri u;
  check_doc_part(parts[0]);
  u.doc = std::string(parts[0]);
  if (parts.size() >= 2) u.mod = parse_name_part(parts[1], "module");
  if (parts.size() == 3) u.sym = parse_name_part(parts[2], "symbol");
  if (u.sym && !u.mod) {
    throw Error(ErrorCode::MalformedUri, "symbol part without module part in '" + std::string(text) + "'");
  }
  return u;
}

std::string format_uri(const Uri& u) {
  std::string out = u.doc;
  if (u.mod) {
    out += '?';
    out += u.mod->str();
  }
  if (u.sym) {
    if (!u.mod) out += '?';
    out += '?';
    out += u.sym->str();
  }
  return out;
}

Uri resolve_relative(const Uri& base, std::string_view ref) {
  if (!base.is_absolute()) {
    throw Error(ErrorCode::MissingContext, "relative resolution against non-absolute base '" + base.str() + "'");
  }
  if (ref.empty()) return Uri(base.doc);
  auto parts = split_queries(ref);
  if (parts.size() > 3) {
    throw Error(ErrorCode::MalformedUri, "more than two '?' separators in '" + std::string(ref) + "'");
  }

  if (!parts[0].empty()) {
    // Plain URI reference: resolve the document part per RFC 3986.
    Uri out;
    out.doc = resolve_doc(base.doc, parts[0]);
    if (parts.size() >= 2) out.mod = parse_name_part(parts[1], "module");
    if (parts.size() == 3) out.sym = parse_name_part(parts[2], "symbol");
    if (out.sym && !out.mod) {
      throw Error(ErrorCode::MalformedUri, "symbol part without module part in '" + std::string(ref) + "'");
    }
    return out;
  }

  if (parts.size() == 2) {
    // ?mod' — a module in the same document.
    Uri out(base.doc);
    out.mod = parse_name_part(parts[1], "module");
    if (!out.mod) throw Error(ErrorCode::MalformedUri, "empty reference '" + std::string(ref) + "'");
    return out;
  }

  // parts.size() == 3, ref of the form ?X?Y
  std::string_view mid = parts[1];
  std::string_view last = parts[2];
  if (mid.empty()) {
    // ??sym' — same module, new symbol.
    if (!base.mod) {
      throw Error(ErrorCode::MissingContext, "'??sym' reference against base without module: '" + base.str() + "'");
    }
    Uri out(base.doc, base.mod);
    out.sym = parse_name_part(last, "symbol");
    return out;
  }
  if (mid[0] == '/') {
    // ?/mod'?sym' — extend the module path of the base.
    if (!base.mod) {
      throw Error(ErrorCode::MissingContext, "'?/mod' reference against base without module: '" + base.str() + "'");
    }
    auto ext = parse_name_part(mid.substr(1), "module");
    if (!ext) throw Error(ErrorCode::MalformedUri, "empty module extension in '" + std::string(ref) + "'");
    Uri out(base.doc, base.mod->plus(*ext));
    out.sym = parse_name_part(last, "symbol");
    return out;
  }
  // ?mod'?sym' — sibling module in the same document.
  Uri out(base.doc);
  out.mod = parse_name_part(mid, "module");
  out.sym = parse_name_part(last, "symbol");
  return out;
}

}  // namespace tgk
