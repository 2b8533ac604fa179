#pragma once

// Model normalization and linear interpolation of parser models.

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "delextra/combination.hpp"
#include "delextra/model.hpp"
#include "delextra/parser.hpp"

namespace delextra {

inline constexpr double kDegenerateSd = 1e-12;

struct NormalizedModel {
  ParserModel model;
  double sd = 0.0;
  // The weights had (almost) zero spread; model is returned unscaled.
  bool degenerate = false;
};

// Divides every stored weight by the uncorrected standard deviation of the
// stored weights. The mean is not subtracted.
inline NormalizedModel normalize_model(const ParserModel& m) {
  if (m.weights.empty()) throw std::invalid_argument("normalize_model: model has no weights");
  const double count = static_cast<double>(m.weights.size());
  double mean = 0.0;
  for (const auto& [f, w] : m.weights) mean += w;
  mean /= count;
  double var = 0.0;
  for (const auto& [f, w] : m.weights) var += (w - mean) * (w - mean);
  const double sd = std::sqrt(var / count);

  NormalizedModel out{m, sd, sd < kDegenerateSd};
  if (out.degenerate) {
    out.model.meta.set("normalization", "degenerate-sd");
    return out;
  }
  for (auto& [f, w] : out.model.weights) w /= sd;
  out.model.meta.set("normalization", "sd:" + format_weight(sd));
  return out;
}

// w_f = sum_i weights[i] * w_{f,i} over the union of features. Absent weights
// mean 1 for every model.
inline ParserModel interpolate(std::span<const ParserModel> models,
                               std::optional<std::span<const double>> weights = std::nullopt) {
  if (models.empty()) throw std::invalid_argument("interpolate: no models");
  std::vector<const ParserModel*> ptrs;
  for (const auto& m : models) ptrs.push_back(&m);
  check_template_versions(ptrs);

  std::vector<double> w(models.size(), 1.0);
  if (weights) {
    if (weights->size() != models.size())
      throw std::invalid_argument("interpolate: " + std::to_string(models.size()) +
                                  " models but " + std::to_string(weights->size()) +
                                  " weights");
    double sum = 0.0;
    for (double x : *weights) {
      if (!(x >= 0.0)) throw std::invalid_argument("interpolate: negative weight");
      sum += x;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("interpolate: all weights are zero");
    w.assign(weights->begin(), weights->end());
  }

  std::map<std::string, double, std::less<>> sum;
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (w[i] == 0.0) continue;
    for (const auto& [f, x] : models[i].weights) sum[f] += w[i] * x;
  }

  ParserModel out;
  out.meta.template_version = models.front().meta.template_version;
  out.meta.delex = models.front().meta.delex;
  out.meta.language = "interpolated";
  std::string sources;
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (i) sources += ',';
    sources += models[i].meta.language + ":" + format_weight(w[i]);
  }
  out.meta.set("interpolation_sources", sources);
  for (const auto& [f, x] : sum) out.set_weight(f, x);
  return out;
}

// Normalizes every source model, interpolates them, and parses the target
// with the single resulting model.
inline Treebank transfer_model_interpolation(
    std::span<const ParserModel> models, const Treebank& tgt,
    std::optional<std::span<const double>> weights = std::nullopt) {
  std::vector<ParserModel> normalized;
  normalized.reserve(models.size());
  for (const auto& m : models) normalized.push_back(normalize_model(m).model);
  return parse_treebank(interpolate(normalized, weights), tgt);
}

}  // namespace delextra
