#include "tgk/xml.hpp"

#include <cctype>

namespace tgk {

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Validates UTF-8 byte sequences; positions reported in bytes.
void check_utf8(std::string_view bytes, const std::string& filename) {
  size_t i = 0;
  int line = 1, col = 1;
  while (i < bytes.size()) {
    unsigned char c = static_cast<unsigned char>(bytes[i]);
    size_t extra;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xe0) == 0xc0) {
      extra = 1;
    } else if ((c & 0xf0) == 0xe0) {
      extra = 2;
    } else if ((c & 0xf8) == 0xf0) {
      extra = 3;
    } else {
      throw Error(ErrorCode::GrammarError, "invalid UTF-8 byte", SourceRef{filename, line, col});
    }
    for (size_t j = 1; j <= extra; ++j) {
      if (i + j >= bytes.size() || (static_cast<unsigned char>(bytes[i + j]) & 0xc0) != 0x80) {
        throw Error(ErrorCode::GrammarError, "truncated UTF-8 sequence", SourceRef{filename, line, col});
      }
    }
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    i += extra + 1;
  }
}

class Parser {
 public:
  Parser(std::string_view text, std::string filename) : text_(text), filename_(std::move(filename)) {}

  XmlNode parse() {
    skip_misc();
    XmlNode root = parse_element();
    skip_misc();
    if (!eof()) fail("content after document element");
    return root;
  }

 private:
  std::string_view text_;
  std::string filename_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  SourceRef here() const { return SourceRef{filename_, line_, col_, line_, col_}; }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::GrammarError, message, here());
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void advance_n(size_t n) {
    for (size_t i = 0; i < n; ++i) advance();
  }

  void skip_space() {
    while (!eof() && is_space(peek())) advance();
  }

  // Whitespace, comments and a leading XML declaration.
  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts_with("<!--")) {
        size_t end = text_.find("-->", pos_);
        if (end == std::string_view::npos) fail("unterminated comment");
        advance_n(end + 3 - pos_);
      } else if (starts_with("<?")) {
        size_t end = text_.find("?>", pos_);
        if (end == std::string_view::npos) fail("unterminated processing instruction");
        advance_n(end + 2 - pos_);
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    size_t start = pos_;
    while (!eof() && is_name_char(peek())) advance();
    if (pos_ == start) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string parse_attr_value() {
    if (eof() || peek() != '"') fail("expected '\"' around attribute value");
    advance();
    std::string out;
    while (!eof() && peek() != '"') {
      char c = peek();
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        out += parse_entity();
      } else {
        out += c;
        advance();
      }
    }
    if (eof()) fail("unterminated attribute value");
    advance();
    return out;
  }

  std::string parse_entity() {
    size_t semi = text_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 8) fail("bad entity reference");
    std::string ent(text_.substr(pos_ + 1, semi - pos_ - 1));
    advance_n(semi + 1 - pos_);
    if (ent == "amp") return "&";
    if (ent == "lt") return "<";
    if (ent == "gt") return ">";
    if (ent == "quot") return "\"";
    if (ent == "apos") return "'";
    fail("unknown entity '&" + ent + ";'");
  }

  XmlNode parse_element() {
    if (eof() || peek() != '<') fail("expected an element");
    XmlNode node;
    node.at = here();
    advance();  // '<'
    node.name = parse_name();
    for (;;) {
      skip_space();
      if (eof()) fail("unterminated element '" + node.name + "'");
      if (peek() == '/') {
        advance();
        if (eof() || peek() != '>') fail("malformed empty-element tag");
        advance();
        finish_span(node);
        return node;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      std::string key = parse_name();
      skip_space();
      if (eof() || peek() != '=') fail("expected '=' after attribute '" + key + "'");
      advance();
      skip_space();
      std::string value = parse_attr_value();
      for (const auto& [k, v] : node.attrs) {
        if (k == key) fail("duplicate attribute '" + key + "'");
      }
      node.attrs.emplace_back(std::move(key), std::move(value));
    }
    // children until the matching end tag
    for (;;) {
      skip_misc();
      if (eof()) fail("missing end tag for '" + node.name + "'");
      if (starts_with("</")) {
        advance_n(2);
        std::string end = parse_name();
        if (end != node.name) fail("mismatched end tag '" + end + "' for '" + node.name + "'");
        skip_space();
        if (eof() || peek() != '>') fail("malformed end tag");
        advance();
        finish_span(node);
        return node;
      }
      if (peek() != '<') fail("text content is not allowed");
      node.children.push_back(parse_element());
    }
  }

  void finish_span(XmlNode& node) {
    node.at.end_line = line_;
    node.at.end_column = col_;
  }
};

}  // namespace

const std::string* XmlNode::attr(std::string_view key) const {
  for (const auto& [k, v] : attrs) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& XmlNode::require_attr(std::string_view key) const {
  const std::string* v = attr(key);
  if (!v) {
    throw Error(ErrorCode::GrammarError, "element '" + name + "' is missing attribute '" + std::string(key) + "'", at);
  }
  return *v;
}

XmlNode parse_xml(std::string_view bytes, const std::string& filename) {
  // Reject a UTF-8 BOM quietly by skipping it; anything else must be UTF-8.
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  check_utf8(bytes, filename);
  return Parser(bytes, filename).parse();
}

std::string xml_escape_attr(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void XmlWriter::write(const XmlNode& node, int depth, std::string& out) const {
  out.append(static_cast<size_t>(depth) * 2, ' ');
  out += '<';
  out += node.name;
  for (const auto& [k, v] : node.attrs) {
    out += ' ';
    out += k;
    out += "=\"";
    out += xml_escape_attr(v);
    out += '"';
  }
  if (node.children.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const auto& child : node.children) write(child, depth + 1, out);
  out.append(static_cast<size_t>(depth) * 2, ' ');
  out += "</";
  out += node.name;
  out += ">\n";
}

std::string XmlWriter::finish(const XmlNode& root) const {
  std::string out;
  write(root, 0, out);
  return out;
}

}  // namespace tgk
