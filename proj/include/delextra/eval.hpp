#pragma once

// Unlabelled attachment scores.

#include <cstddef>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "delextra/conll.hpp"
#include "delextra/model.hpp"

namespace delextra {

struct AttachmentCount {
  std::size_t correct = 0;
  std::size_t total = 0;

  double ratio() const {
    if (total == 0) throw std::domain_error("attachment score over zero tokens");
    return static_cast<double>(correct) / static_cast<double>(total);
  }
};

namespace detail {

inline void check_shapes(const Treebank& gold, const Treebank& pred) {
  if (gold.sentences.size() != pred.sentences.size())
    throw std::invalid_argument("gold has " + std::to_string(gold.sentences.size()) +
                                " sentences, prediction has " +
                                std::to_string(pred.sentences.size()));
  for (std::size_t i = 0; i < gold.sentences.size(); ++i)
    if (gold.sentences[i].size() != pred.sentences[i].size())
      throw std::invalid_argument("sentence " + std::to_string(i + 1) +
                                  ": token counts differ");
}

template <typename Fn>
void for_each_attachment(const Treebank& gold, const Treebank& pred, Fn&& fn) {
  check_shapes(gold, pred);
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    const auto& g = gold.sentences[i].tokens;
    const auto& p = pred.sentences[i].tokens;
    for (std::size_t k = 0; k < g.size(); ++k) fn(g[k], g[k].head == p[k].head);
  }
}

}  // namespace detail

inline AttachmentCount attachment_count(const Treebank& gold, const Treebank& pred,
                                        bool skip_punct = false) {
  AttachmentCount c;
  detail::for_each_attachment(gold, pred, [&](const Token& t, bool ok) {
    if (skip_punct && t.upos == kPunctTag) return;
    ++c.total;
    c.correct += ok;
  });
  return c;
}

inline double uas(const Treebank& gold, const Treebank& pred) {
  return attachment_count(gold, pred).ratio();
}

// Punctuation is the "." tag, nothing else.
inline double uas_nonpunct(const Treebank& gold, const Treebank& pred) {
  return attachment_count(gold, pred, true).ratio();
}

inline std::map<std::string, AttachmentCount> per_pos_counts(const Treebank& gold,
                                                             const Treebank& pred) {
  std::map<std::string, AttachmentCount> out;
  detail::for_each_attachment(gold, pred, [&](const Token& t, bool ok) {
    auto& c = out[t.upos];
    ++c.total;
    c.correct += ok;
  });
  return out;
}

inline std::map<std::string, double> per_pos_accuracy(const Treebank& gold,
                                                      const Treebank& pred) {
  std::map<std::string, double> out;
  for (const auto& [tag, c] : per_pos_counts(gold, pred)) out[tag] = c.ratio();
  return out;
}

// TSV: overall and non-punctuation UAS, then one row per gold tag.
inline void write_eval_tsv(const Treebank& gold, const Treebank& pred, std::ostream& out) {
  const auto all = attachment_count(gold, pred);
  const auto nonpunct = attachment_count(gold, pred, true);
  out << "metric\tvalue\tcorrect\ttotal\n";
  out << "uas\t" << format_weight(all.ratio()) << '\t' << all.correct << '\t' << all.total
      << '\n';
  out << "uas_nonpunct\t";
  if (nonpunct.total == 0)
    out << "NA";
  else
    out << format_weight(nonpunct.ratio());
  out << '\t' << nonpunct.correct << '\t' << nonpunct.total << '\n';
  for (const auto& [tag, c] : per_pos_counts(gold, pred))
    out << "pos:" << tag << '\t' << format_weight(c.ratio()) << '\t' << c.correct << '\t'
        << c.total << '\n';
}

}  // namespace delextra
