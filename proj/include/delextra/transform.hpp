#pragma once

// Adposition attachment conversion between Prague style (P: the adposition
// heads its noun phrase) and Stanford style (S: the adposition is a leaf
// under the lexical head). Only heads change; adpositions are processed in
// increasing token order, each step seeing the result of the previous ones.

#include <string_view>
#include <vector>

#include "delextra/conll.hpp"
#include "delextra/errors.hpp"

namespace delextra {

enum class Style { Prague, Stanford };

inline char style_letter(Style s) { return s == Style::Prague ? 'P' : 'S'; }

inline Style parse_style(std::string_view text) {
  if (text == "P") return Style::Prague;
  if (text == "S") return Style::Stanford;
  throw UsageError("annotation style must be P or S, got '" +
                   std::string(text) + "'");
}

namespace detail {

inline bool is_adp(const Sentence& s, int i) { return s.at(i).upos == "ADP"; }

inline std::vector<int> children_of(const std::vector<int>& heads, int node) {
  std::vector<int> out;
  for (std::size_t i = 0; i < heads.size(); ++i)
    if (heads[i] == node) out.push_back(static_cast<int>(i) + 1);
  return out;
}

// Replaces a coordinating conjunction by its leftmost conjunct, recursively.
// Adpositions and punctuation are not conjuncts.
inline int dive_through_coordination(const Sentence& s,
                                     const std::vector<int>& heads, int node) {
  while (s.at(node).upos == "CONJ") {
    int next = 0;
    for (int c : children_of(heads, node)) {
      const auto& tag = s.at(c).upos;
      if (tag != "ADP" && tag != kPunctTag) {
        next = c;
        break;
      }
    }
    if (next == 0) break;
    node = next;
  }
  return node;
}

// Lexical node an adposition is demoted under. First choice is its leftmost
// non-adpositional child; with none, the search continues through the
// adpositional children of a compound adposition. 0 if there is nothing.
inline int lexical_anchor(const Sentence& s, const std::vector<int>& heads,
                          int adp) {
  const auto kids = children_of(heads, adp);
  for (int c : kids)
    if (!is_adp(s, c)) return dive_through_coordination(s, heads, c);
  for (int c : kids)
    if (int found = lexical_anchor(s, heads, c)) return found;
  return 0;
}

inline void require_tree(const Sentence& s) {
  if (!validate_tree(s))
    throw StructureError(0, "conversion input is not a valid tree");
}

}  // namespace detail

inline Sentence prague_to_stanford(Sentence s) {
  detail::require_tree(s);
  auto heads = s.heads();
  for (int adp = 1; adp <= s.size(); ++adp) {
    if (!detail::is_adp(s, adp)) continue;
    const int anchor = detail::lexical_anchor(s, heads, adp);
    if (anchor == 0) continue;
    const auto kids = detail::children_of(heads, adp);
    heads[anchor - 1] = heads[adp - 1];
    heads[adp - 1] = anchor;
    for (int c : kids)
      if (c != anchor && !detail::is_adp(s, c)) heads[c - 1] = anchor;
  }
  s.set_heads(heads);
  return s;
}

inline Sentence stanford_to_prague(Sentence s) {
  detail::require_tree(s);
  auto heads = s.heads();
  for (int adp = 1; adp <= s.size(); ++adp) {
    if (!detail::is_adp(s, adp)) continue;
    const int head = heads[adp - 1];
    if (head == 0 || detail::is_adp(s, head)) continue;
    heads[adp - 1] = heads[head - 1];
    heads[head - 1] = adp;
  }
  s.set_heads(heads);
  return s;
}

inline Sentence convert(const Sentence& s, Style from, Style to) {
  if (from == to) return s;
  return from == Style::Prague ? prague_to_stanford(s) : stanford_to_prague(s);
}

inline Treebank convert(const Treebank& tb, Style from, Style to) {
  Treebank out;
  out.language = tb.language;
  out.unknown_tags = tb.unknown_tags;
  out.sentences.reserve(tb.sentences.size());
  for (std::size_t i = 0; i < tb.sentences.size(); ++i) {
    try {
      out.sentences.push_back(convert(tb.sentences[i], from, to));
    } catch (const StructureError& e) {
      throw StructureError(i + 1, e.what());
    }
  }
  return out;
}

}  // namespace delextra
