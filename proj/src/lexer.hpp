#pragma once

// Line tokenizer shared by the scene, program and config readers.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "forcectl/errors.hpp"
#include "forcectl/numfmt.hpp"

namespace forcectl::detail {

struct Token {
  std::string_view text;
  std::size_t column = 1;  // 1-based
};

struct Line {
  std::size_t number = 1;  // 1-based
  std::vector<Token> tokens;
};

/// Splits on whitespace after stripping '#' comments. Blank lines are dropped.
inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    ++number;
    std::string_view raw = text.substr(start, end - start);
    if (!raw.empty() && raw.back() == '\r') {
      raw.remove_suffix(1);
    }
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) {
        ++i;
      }
      const std::size_t begin = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t') {
        ++i;
      }
      if (i > begin) {
        line.tokens.push_back({raw.substr(begin, i - begin), begin + 1});
      }
    }
    if (!line.tokens.empty()) {
      lines.push_back(std::move(line));
    }
    if (end == text.size()) {
      break;
    }
    start = end + 1;
  }
  return lines;
}

/// Column just past the last token, for "expected more" diagnostics.
inline std::size_t endColumn(const Line &line) {
  const Token &last = line.tokens.back();
  return last.column + last.text.size();
}

inline double number(const Line &line, std::size_t index, std::string_view what) {
  if (index >= line.tokens.size()) {
    throw ParseError(line.number, endColumn(line), "expected " + std::string(what));
  }
  const Token &token = line.tokens[index];
  const auto value = numfmt::parseDouble(token.text);
  if (!value) {
    throw ParseError(line.number, token.column,
                     "expected a number for " + std::string(what) + ", got '" + std::string(token.text) + "'");
  }
  if (!std::isfinite(*value)) {
    throw ParseError(line.number, token.column, "non-finite value for " + std::string(what));
  }
  return *value;
}

}  // namespace forcectl::detail
