#pragma once

// Multi-source transfer by treebank concatenation and by weighted voting
// over source parses, decoded as a maximum spanning tree.

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "delextra/conll.hpp"
#include "delextra/decode.hpp"
#include "delextra/model.hpp"
#include "delextra/parser.hpp"
#include "delextra/transform.hpp"

namespace delextra {

inline Treebank concat_treebanks(std::span<const Treebank> tbs) {
  if (tbs.empty()) throw std::invalid_argument("concat_treebanks: no treebanks");
  Treebank out;
  out.language = "multi";
  for (const auto& tb : tbs) {
    out.sentences.insert(out.sentences.end(), tb.sentences.begin(), tb.sentences.end());
    out.unknown_tags += tb.unknown_tags;
  }
  return out;
}

// score(h, d) = sum_i weights[i] * [trees[i] attaches d to h]
inline EdgeScores vote_scores(std::span<const ParseTree> trees,
                              std::span<const double> weights) {
  if (trees.empty()) throw std::invalid_argument("combine_parses: no trees");
  if (trees.size() != weights.size())
    throw std::invalid_argument("combine_parses: " + std::to_string(trees.size()) +
                                " trees but " + std::to_string(weights.size()) +
                                " weights");
  const int n = trees.front().size();
  double sum = 0.0;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (trees[i].size() != n)
      throw std::invalid_argument("combine_parses: trees differ in length");
    if (!(weights[i] >= 0.0))
      throw std::invalid_argument("combine_parses: negative weight");
    sum += weights[i];
  }
  if (!(sum > 0.0)) throw std::invalid_argument("combine_parses: all weights are zero");

  EdgeScores es(n);
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (int d = 1; d <= n; ++d) es(trees[i].head(d), d) += weights[i];
  return es;
}

inline ParseTree combine_parses(std::span<const ParseTree> trees,
                                std::span<const double> weights) {
  return decode(vote_scores(trees, weights));
}

// One voter of a tree combination: a model trained on a source treebank
// converted to `style`.
struct SourceParser {
  std::string language;
  Style style = Style::Prague;
  ParserModel model;
};

inline void check_template_versions(std::span<const ParserModel* const> models) {
  if (models.empty()) throw std::invalid_argument("no source models");
  for (const auto* m : models) {
    if (m->meta.template_version != models.front()->meta.template_version)
      throw std::invalid_argument("template version mismatch: '" +
                                  m->meta.template_version + "' vs '" +
                                  models.front()->meta.template_version + "'");
    if (m->meta.delex != models.front()->meta.delex)
      throw std::invalid_argument("cannot mix delexicalized and lexicalized models");
  }
}

// Sentence-by-sentence vote over parses of one corpus. Every treebank must
// hold the same sentences; the first supplies the tokens of the output.
inline Treebank combine_treebanks(std::span<const Treebank> parses,
                                  std::span<const double> weights) {
  if (parses.empty()) throw std::invalid_argument("combine_treebanks: no parses");
  for (const auto& p : parses)
    if (p.sentences.size() != parses.front().sentences.size())
      throw std::invalid_argument("combine_treebanks: sentence counts differ");
  Treebank out = parses.front();
  parallel_for(out.sentences.size(), [&](std::size_t i) {
    auto& s = out.sentences[i];
    if (s.size() == 0) return;
    std::vector<ParseTree> trees;
    trees.reserve(parses.size());
    for (const auto& p : parses) trees.push_back(gold_tree(p.sentences[i]));
    try {
      s.set_heads(combine_parses(trees, weights).heads);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("sentence " + std::to_string(i + 1) + ": " + e.what());
    }
  });
  return out;
}

// Parses the target with every source parser, converts each parse from the
// parser's style to combine_style, and votes. The output is in
// combine_style. Empty weights mean uniform.
inline Treebank transfer_tree_combination(std::span<const SourceParser> parsers,
                                          const Treebank& tgt,
                                          std::span<const double> weights,
                                          Style combine_style) {
  std::vector<const ParserModel*> models;
  for (const auto& p : parsers) models.push_back(&p.model);
  check_template_versions(models);
  std::vector<double> w(weights.begin(), weights.end());
  if (w.empty()) w.assign(parsers.size(), 1.0);
  if (w.size() != parsers.size())
    throw std::invalid_argument("transfer_tree_combination: weight count mismatch");

  std::vector<Treebank> parses;
  parses.reserve(parsers.size());
  for (const auto& p : parsers)
    parses.push_back(convert(parse_treebank(p.model, tgt), p.style, combine_style));
  return combine_treebanks(parses, w);
}

// Same-style convenience form over language-keyed maps; a missing weight
// map (or missing entry) counts as 1.
inline Treebank transfer_tree_combination(const std::map<std::string, ParserModel>& models,
                                          const Treebank& tgt,
                                          const std::map<std::string, double>& weights = {}) {
  std::vector<SourceParser> parsers;
  std::vector<double> w;
  for (const auto& [lang, m] : models) {
    parsers.push_back({lang, Style::Prague, m});
    auto it = weights.find(lang);
    w.push_back(it == weights.end() ? 1.0 : it->second);
  }
  return transfer_tree_combination(parsers, tgt, w, Style::Prague);
}

}  // namespace delextra
