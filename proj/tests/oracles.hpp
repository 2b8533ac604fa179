#pragma once

// Test-only reference computations, kept independent of the library's
// algorithms.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "delextra/conll.hpp"
#include "delextra/decode.hpp"
#include "delextra/similarity.hpp"

namespace oracle {

// Every head array over n tokens that forms a tree rooted at 0.
inline std::vector<std::vector<int>> all_trees(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> heads(static_cast<std::size_t>(n), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      if (delextra::validate_heads(heads)) out.push_back(heads);
      return;
    }
    for (int h = 0; h <= n; ++h) {
      if (h == i + 1) continue;
      heads[static_cast<std::size_t>(i)] = h;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

inline double score_of(const delextra::EdgeScores& es, const std::vector<int>& heads) {
  double total = 0.0;
  for (std::size_t d = 0; d < heads.size(); ++d) total += es(heads[d], static_cast<int>(d) + 1);
  return total;
}

inline double best_tree_score(const delextra::EdgeScores& es) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& t : all_trees(es.size())) best = std::max(best, score_of(es, t));
  return best;
}

// Trees whose score equals the maximum.
inline std::vector<std::vector<int>> best_trees(const delextra::EdgeScores& es) {
  const double best = best_tree_score(es);
  std::vector<std::vector<int>> out;
  for (const auto& t : all_trees(es.size()))
    if (score_of(es, t) == best) out.push_back(t);
  return out;
}

inline delextra::EdgeScores random_scores(int n, std::mt19937& rng, bool integral) {
  delextra::EdgeScores es(n);
  std::uniform_real_distribution<double> real(-10.0, 10.0);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int h = 0; h <= n; ++h)
    for (int d = 1; d <= n; ++d)
      if (h != d) es(h, d) = integral ? small(rng) : real(rng);
  return es;
}

// KL with the smoothed source written out as an explicit distribution.
inline double smoothed_kl(const std::map<delextra::Trigram, long long>& tgt,
                          std::map<delextra::Trigram, long long> src) {
  for (const auto& [t, c] : tgt)
    if (!src.count(t)) src[t] = 1;
  double src_total = 0, tgt_total = 0;
  for (const auto& [t, c] : src) src_total += static_cast<double>(c);
  for (const auto& [t, c] : tgt) tgt_total += static_cast<double>(c);
  double kl = 0.0;
  for (const auto& [t, c] : tgt) {
    const double p = static_cast<double>(c) / tgt_total;
    const double q = static_cast<double>(src.at(t)) / src_total;
    kl += p * std::log(p / q);
  }
  return kl;
}

}  // namespace oracle
