#pragma once

// Edge scoring, parsing and MIRA training for the first-order parser.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "delextra/conll.hpp"
#include "delextra/decode.hpp"
#include "delextra/features.hpp"
#include "delextra/model.hpp"
#include "delextra/parallel.hpp"

namespace delextra {

// score(h, d) = sum of the weights of the features active on edge h -> d.
inline EdgeScores score_edges(const ParserModel& m, const Sentence& s) {
  const int n = s.size();
  EdgeScores es(n);
  for (int h = 0; h <= n; ++h) {
    for (int d = 1; d <= n; ++d) {
      if (h == d) continue;
      double total = 0.0;
      for (const auto& f : extract_edge_features(s, h, d, !m.meta.delex))
        total += m.weight(f);
      es(h, d) = total;
    }
  }
  return es;
}

// Relative grid that edge scores are rounded to before decoding. Rescaled or
// summed models reproduce scores only up to rounding, and without the grid
// co-optimal trees would be broken differently.
inline constexpr double kScoreResolution = 1e-9;

inline void snap_scores(EdgeScores& es) {
  const int n = es.size();
  double scale = 0.0;
  for (int h = 0; h <= n; ++h)
    for (int d = 1; d <= n; ++d)
      if (h != d) scale = std::max(scale, std::abs(es(h, d)));
  if (scale == 0.0) return;
  const double q = scale * kScoreResolution;
  for (int h = 0; h <= n; ++h)
    for (int d = 1; d <= n; ++d)
      if (h != d) es(h, d) = std::round(es(h, d) / q) * q;
}

inline ParseTree parse_sentence(const ParserModel& m, const Sentence& s) {
  auto es = score_edges(m, s);
  snap_scores(es);
  return decode(es);
}

inline ParseTree gold_tree(const Sentence& s) { return ParseTree{s.heads()}; }

inline Sentence with_tree(Sentence s, const ParseTree& t) {
  s.set_heads(t.heads);
  return s;
}

// Parses every sentence; input heads are replaced.
inline Treebank parse_treebank(const ParserModel& m, const Treebank& tb) {
  Treebank out = tb;
  parallel_for(out.sentences.size(), [&](std::size_t i) {
    auto& s = out.sentences[i];
    if (s.size() > 0) s.set_heads(parse_sentence(m, s).heads);
  });
  return out;
}

struct MiraOptions {
  int iterations = 3;
  bool lexical = false;
  // Upper bound on the step size.
  double aggressiveness = 1.0;
  bool average = true;
};

namespace detail {

// Interned features of every candidate edge of one sentence.
struct SentenceFeatures {
  int n = 0;
  std::vector<std::vector<std::size_t>> edges;  // (n+1) x (n+1), diagonal empty

  const std::vector<std::size_t>& at(int h, int d) const {
    return edges[static_cast<std::size_t>(h) * (n + 1) + d];
  }
};

class FeatureIndex {
 public:
  std::size_t intern(const std::string& f) {
    auto [it, inserted] = ids_.try_emplace(f, names_.size());
    if (inserted) names_.push_back(f);
    return it->second;
  }
  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t id) const { return names_[id]; }

 private:
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<std::string> names_;
};

inline SentenceFeatures index_sentence(const Sentence& s, bool lexical,
                                       FeatureIndex& index) {
  SentenceFeatures sf;
  sf.n = s.size();
  sf.edges.resize(static_cast<std::size_t>(sf.n + 1) * (sf.n + 1));
  for (int h = 0; h <= sf.n; ++h) {
    for (int d = 1; d <= sf.n; ++d) {
      if (h == d) continue;
      auto& ids = sf.edges[static_cast<std::size_t>(h) * (sf.n + 1) + d];
      for (const auto& f : extract_edge_features(s, h, d, lexical))
        ids.push_back(index.intern(f));
    }
  }
  return sf;
}

// Sparse feature-count difference phi(gold) - phi(pred), sorted by id.
inline std::vector<std::pair<std::size_t, double>> feature_difference(
    const SentenceFeatures& sf, const std::vector<int>& gold,
    const std::vector<int>& pred) {
  std::unordered_map<std::size_t, double> diff;
  for (int d = 1; d <= sf.n; ++d) {
    const int g = gold[static_cast<std::size_t>(d - 1)];
    const int p = pred[static_cast<std::size_t>(d - 1)];
    if (g == p) continue;
    for (auto id : sf.at(g, d)) diff[id] += 1.0;
    for (auto id : sf.at(p, d)) diff[id] -= 1.0;
  }
  std::vector<std::pair<std::size_t, double>> out;
  for (const auto& [id, v] : diff)
    if (v != 0.0) out.emplace_back(id, v);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Single-best MIRA with a Hamming loss over heads. Sentences are visited in
// file order; no shuffling, so identical input gives a bit-identical model.
// With averaging, the returned weights are the mean over every sentence
// visit of all passes.
inline ParserModel train_mira(const Treebank& tb, const MiraOptions& opts = {}) {
  if (tb.sentences.empty()) throw std::invalid_argument("train_mira: empty treebank");
  if (opts.iterations < 1) throw std::invalid_argument("train_mira: iterations < 1");

  detail::FeatureIndex index;
  std::vector<detail::SentenceFeatures> feats;
  feats.reserve(tb.sentences.size());
  for (std::size_t i = 0; i < tb.sentences.size(); ++i) {
    if (!validate_tree(tb.sentences[i]))
      throw StructureError(i + 1, "training sentence is not a valid tree");
    feats.push_back(detail::index_sentence(tb.sentences[i], opts.lexical, index));
  }

  std::vector<double> w(index.size(), 0.0);
  // Sum over visits t of t * update_t, for averaging.
  std::vector<double> acc(index.size(), 0.0);
  double step = 1.0;

  for (int it = 0; it < opts.iterations; ++it) {
    for (std::size_t i = 0; i < feats.size(); ++i, step += 1.0) {
      const auto& sf = feats[i];
      if (sf.n == 0) continue;
      EdgeScores es(sf.n);
      for (int h = 0; h <= sf.n; ++h)
        for (int d = 1; d <= sf.n; ++d) {
          if (h == d) continue;
          double total = 0.0;
          for (auto id : sf.at(h, d)) total += w[id];
          es(h, d) = total;
        }
      const auto gold = tb.sentences[i].heads();
      const auto pred = decode(es).heads;
      if (pred == gold) continue;

      double loss = 0.0;
      for (std::size_t k = 0; k < gold.size(); ++k) loss += gold[k] != pred[k];
      const double margin = tree_score(es, ParseTree{gold}) - tree_score(es, ParseTree{pred});
      const auto diff = detail::feature_difference(sf, gold, pred);
      double norm = 0.0;
      for (const auto& [id, v] : diff) norm += v * v;
      if (norm == 0.0) continue;
      const double tau =
          std::min(opts.aggressiveness, std::max(0.0, (loss - margin) / norm));
      if (tau == 0.0) continue;
      for (const auto& [id, v] : diff) {
        w[id] += tau * v;
        acc[id] += step * tau * v;
      }
    }
  }

  ParserModel m;
  m.meta.language = tb.language;
  m.meta.delex = !opts.lexical;
  m.meta.set("trainer", "mira-single-best");
  m.meta.set("iterations", std::to_string(opts.iterations));
  m.meta.set("aggressiveness", format_weight(opts.aggressiveness));
  m.meta.set("averaged", opts.average ? "1" : "0");
  m.meta.set("shuffle", "none");
  m.meta.set("loss", "hamming");
  // sum_t w_t = (T + 1) * w_T - sum_t t * u_t over T visits.
  const double visits = step - 1.0;
  for (std::size_t id = 0; id < w.size(); ++id) {
    const double value =
        opts.average ? ((visits + 1.0) * w[id] - acc[id]) / visits : w[id];
    m.set_weight(index.name(id), value);
  }
  return m;
}

}  // namespace delextra
