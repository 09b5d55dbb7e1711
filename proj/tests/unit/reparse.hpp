#pragma once

// Reference expression grammar for the bracketing-correctness oracle: a
// small Pratt parser over the operator fragment of a notation set. Test
// code only; independent of the renderer.

#include <map>
#include <string>
#include <vector>

#include "tgk/notation.hpp"
#include "tgk/term.hpp"

namespace reparse {

struct OpInfo {
  tgk::Uri symbol;
  int prec;
  bool left_assoc;
};

class Grammar {
 public:
  void add_infix(const std::string& op, tgk::Uri symbol, int prec, bool left_assoc) {
    ops_[op] = OpInfo{std::move(symbol), prec, left_assoc};
  }

  tgk::Term parse(const std::string& text) const {
    std::vector<std::string> tokens = tokenize(text);
    size_t pos = 0;
    tgk::Term out = parse_expr(tokens, pos, 0);
    if (pos != tokens.size()) throw std::runtime_error("trailing tokens in '" + text + "'");
    return out;
  }

 private:
  std::map<std::string, OpInfo> ops_;

  std::vector<std::string> tokenize(const std::string& text) const {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
      if (!current.empty()) tokens.push_back(current);
      current.clear();
    };
    for (size_t i = 0; i < text.size(); ++i) {
      char c = text[i];
      if (c == ' ') {
        flush();
      } else if (c == '(' || c == ')') {
        flush();
        tokens.push_back(std::string(1, c));
      } else {
        current += c;
      }
    }
    flush();
    return tokens;
  }

  tgk::Term parse_expr(const std::vector<std::string>& tokens, size_t& pos, int min_prec) const {
    tgk::Term left = parse_atom(tokens, pos);
    while (pos < tokens.size()) {
      auto it = ops_.find(tokens[pos]);
      if (it == ops_.end()) break;
      const OpInfo& op = it->second;
      if (op.prec < min_prec) break;
      ++pos;
      int next_min = op.left_assoc ? op.prec + 1 : op.prec;
      tgk::Term right = parse_expr(tokens, pos, next_min);
      left = tgk::Term::apply(tgk::Term::symbol(op.symbol), {left, right});
    }
    return left;
  }

  tgk::Term parse_atom(const std::vector<std::string>& tokens, size_t& pos) const {
    if (pos >= tokens.size()) throw std::runtime_error("unexpected end of input");
    if (tokens[pos] == "(") {
      ++pos;
      tgk::Term inner = parse_expr(tokens, pos, 0);
      if (pos >= tokens.size() || tokens[pos] != ")") throw std::runtime_error("missing ')'");
      ++pos;
      return inner;
    }
    return tgk::Term::var(tokens[pos++]);
  }
};

}  // namespace reparse
