#pragma once

// Reading and writing treebanks in a six-column tab-separated CoNLL layout:
//
//   index  form  lemma  upos  head  deprel
//
// Blank lines end a sentence, '#' lines are comments. The deprel column is
// carried through but never interpreted; everything here is unlabelled.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "delextra/errors.hpp"

namespace delextra {

inline constexpr std::array<std::string_view, 12> kUposTags = {
    "NOUN", "VERB", ".", "ADJ", "ADP", "PRON",
    "CONJ", "ADV",  "PRT", "NUM", "DET", "X"};

inline constexpr std::string_view kRootTag = "ROOT";
inline constexpr std::string_view kPunctTag = ".";

inline bool is_upos_tag(std::string_view tag) {
  return std::find(kUposTags.begin(), kUposTags.end(), tag) != kUposTags.end();
}

struct Token {
  int index = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  int head = 0;
  std::string deprel;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;

  int size() const { return static_cast<int>(tokens.size()); }

  // 1-based access; index 0 is the technical root and has no Token.
  const Token& at(int index) const { return tokens.at(static_cast<std::size_t>(index - 1)); }
  Token& at(int index) { return tokens.at(static_cast<std::size_t>(index - 1)); }

  // Tag of position 0..n, with the root sentinel at 0.
  std::string_view tag(int index) const {
    return index == 0 ? kRootTag : std::string_view(at(index).upos);
  }

  std::vector<int> heads() const {
    std::vector<int> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.head);
    return out;
  }

  void set_heads(std::span<const int> heads) {
    if (heads.size() != tokens.size())
      throw std::invalid_argument("head array length does not match sentence");
    for (std::size_t i = 0; i < heads.size(); ++i) tokens[i].head = heads[i];
  }

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Treebank {
  std::string language;
  std::vector<Sentence> sentences;
  // Tags outside the 12-value set that were read as X.
  std::size_t unknown_tags = 0;

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.tokens.size();
    return n;
  }
};

// heads[i] is the head of token i+1. True iff every token reaches 0 without
// revisiting a node and all heads lie in [0, n].
inline bool validate_heads(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  for (int h : heads)
    if (h < 0 || h > n) return false;
  // 0 = unvisited, 1 = on current path, 2 = known to reach root
  std::vector<char> state(static_cast<std::size_t>(n) + 1, 0);
  state[0] = 2;
  std::vector<int> path;
  for (int start = 1; start <= n; ++start) {
    int v = start;
    path.clear();
    while (state[static_cast<std::size_t>(v)] == 0) {
      state[static_cast<std::size_t>(v)] = 1;
      path.push_back(v);
      v = heads[static_cast<std::size_t>(v - 1)];
    }
    if (state[static_cast<std::size_t>(v)] == 1) return false;
    for (int p : path) state[static_cast<std::size_t>(p)] = 2;
  }
  return true;
}

inline bool validate_tree(const Sentence& s) {
  for (int i = 1; i <= s.size(); ++i)
    if (s.at(i).index != i) return false;
  return validate_heads(s.heads());
}

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cols;
}

inline bool parse_int(std::string_view text, int& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

inline std::string field_value(std::string_view col) {
  return col == "_" ? std::string() : std::string(col);
}

inline std::string_view field_text(const std::string& value) {
  return value.empty() ? std::string_view("_") : std::string_view(value);
}

inline void check_sentence(const Sentence& s, std::size_t number) {
  const int n = s.size();
  for (const auto& t : s.tokens) {
    if (t.head < 0 || t.head > n)
      throw StructureError(number, "head " + std::to_string(t.head) +
                                       " of token " + std::to_string(t.index) +
                                       " out of range [0, " +
                                       std::to_string(n) + "]");
  }
  if (!validate_heads(s.heads()))
    throw StructureError(number, "heads contain a cycle");
}

}  // namespace detail

// Reads zero or more sentence blocks. A missing or "_" head column reads as
// 0. Throws ParseError for malformed lines and StructureError for sentences
// whose heads do not form a tree.
inline Treebank read_treebank(std::istream& in, std::string language) {
  Treebank tb;
  tb.language = std::move(language);
  Sentence current;
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (current.tokens.empty()) return;
    detail::check_sentence(current, tb.sentences.size() + 1);
    tb.sentences.push_back(std::move(current));
    current = Sentence{};
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;

    auto cols = detail::split_tabs(line);
    if (cols.size() < 4)
      throw ParseError(line_no, "expected at least 4 tab-separated columns, got " +
                                    std::to_string(cols.size()));
    Token tok;
    if (!detail::parse_int(cols[0], tok.index))
      throw ParseError(line_no, "bad token index '" + std::string(cols[0]) + "'");
    if (tok.index != current.size() + 1)
      throw ParseError(line_no, "token index " + std::to_string(tok.index) +
                                    " where " +
                                    std::to_string(current.size() + 1) +
                                    " was expected");
    tok.form = detail::field_value(cols[1]);
    tok.lemma = detail::field_value(cols[2]);
    tok.upos = std::string(cols[3]);
    if (!is_upos_tag(tok.upos)) {
      tok.upos = "X";
      ++tb.unknown_tags;
    }
    if (cols.size() >= 5 && cols[4] != "_" &&
        !detail::parse_int(cols[4], tok.head))
      throw ParseError(line_no, "bad head '" + std::string(cols[4]) + "'");
    if (cols.size() >= 6) tok.deprel = detail::field_value(cols[5]);
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return tb;
}

inline void write_sentence(const Sentence& s, std::ostream& out) {
  for (const auto& t : s.tokens) {
    out << t.index << '\t' << detail::field_text(t.form) << '\t'
        << detail::field_text(t.lemma) << '\t' << t.upos << '\t' << t.head
        << '\t' << detail::field_text(t.deprel) << '\n';
  }
  out << '\n';
}

inline void write_treebank(const Treebank& tb, std::ostream& out) {
  for (const auto& s : tb.sentences) write_sentence(s, out);
  if (!out) throw std::runtime_error("failed writing treebank");
}

}  // namespace delextra
