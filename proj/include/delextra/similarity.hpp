#pragma once

// Language similarity from coarse-POS trigram distributions.
//
// KL(tgt, src) = sum over trigrams t seen in tgt of
//                f_tgt(t) * ln(f_tgt(t) / f_src(t))
//
// Trigrams of tgt unseen in src get a source count of 1, and the source
// total grows by the number of such trigrams so that the smoothed source
// frequencies still sum to one.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "delextra/conll.hpp"
#include "delextra/features.hpp"

namespace delextra {

inline constexpr double kIklEpsilon = 1e-3;
inline constexpr int kIklExponent = 4;

using Trigram = std::array<std::string, 3>;

struct TrigramDistribution {
  std::map<Trigram, long long> counts;
  long long total = 0;

  long long count(const Trigram& t) const {
    auto it = counts.find(t);
    return it == counts.end() ? 0 : it->second;
  }
  double freq(const Trigram& t) const {
    return total == 0 ? 0.0 : static_cast<double>(count(t)) / static_cast<double>(total);
  }

  void add_sentence(const std::vector<std::string_view>& tags) {
    const auto len = tags.size();
    for (std::size_t i = 0; i < len; ++i) {
      Trigram t{std::string(i == 0 ? kBeginTag : tags[i - 1]), std::string(tags[i]),
                std::string(i + 1 == len ? kEndTag : tags[i + 1])};
      ++counts[t];
      ++total;
    }
  }
};

inline TrigramDistribution trigram_distribution(
    const std::vector<std::vector<std::string>>& tagged) {
  TrigramDistribution dist;
  for (const auto& sent : tagged) {
    std::vector<std::string_view> tags(sent.begin(), sent.end());
    dist.add_sentence(tags);
  }
  if (dist.total == 0) throw std::invalid_argument("trigram_distribution: empty corpus");
  return dist;
}

inline TrigramDistribution trigram_distribution(const Treebank& tb) {
  TrigramDistribution dist;
  for (const auto& s : tb.sentences) {
    std::vector<std::string_view> tags;
    tags.reserve(s.tokens.size());
    for (const auto& t : s.tokens) tags.push_back(t.upos);
    dist.add_sentence(tags);
  }
  if (dist.total == 0) throw std::invalid_argument("trigram_distribution: empty corpus");
  return dist;
}

inline double kl_cpos3(const TrigramDistribution& tgt, const TrigramDistribution& src) {
  if (tgt.total == 0 || src.total == 0)
    throw std::invalid_argument("kl_cpos3: empty distribution");
  long long unseen = 0;
  for (const auto& [t, c] : tgt.counts)
    if (src.count(t) == 0) ++unseen;
  const double src_total = static_cast<double>(src.total + unseen);
  double kl = 0.0;
  for (const auto& [t, c] : tgt.counts) {
    const double p = static_cast<double>(c) / static_cast<double>(tgt.total);
    const long long sc = src.count(t);
    const double q = static_cast<double>(sc == 0 ? 1 : sc) / src_total;
    kl += p * std::log(p / q);
  }
  return kl;
}

// Argmin of kl_cpos3 over the sources; ties go to the smaller language code
// (std::map order, strict comparison).
inline std::string select_source(const TrigramDistribution& tgt,
                                 const std::map<std::string, TrigramDistribution>& sources) {
  if (sources.empty()) throw std::invalid_argument("select_source: no sources");
  const std::string* best = nullptr;
  double best_kl = 0.0;
  for (const auto& [lang, dist] : sources) {
    const double kl = kl_cpos3(tgt, dist);
    if (best == nullptr || kl < best_kl) {
      best = &lang;
      best_kl = kl;
    }
  }
  return *best;
}

// (1 / max(kl, epsilon))^4. Smoothed divergences can dip below zero; they
// clamp to epsilon like an exact zero does.
inline double weight_ikl(double kl) {
  if (std::isnan(kl)) throw std::invalid_argument("weight_ikl: NaN divergence");
  const double inv = 1.0 / std::max(kl, kIklEpsilon);
  const double sq = inv * inv;
  return sq * sq;
}

}  // namespace delextra
