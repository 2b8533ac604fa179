#pragma once

// Sparse linear parser model and its text file format:
//
//   #delextra-model<TAB>1
//   #template_version<TAB>delextra-first-order-1
//   #delex<TAB>1
//   #language<TAB>cs
//   #<key><TAB><value>          (any further metadata)
//   <feature><TAB><weight>      (one per line, sorted by feature)
//
// Weights are written with 12 significant digits.

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "delextra/errors.hpp"
#include "delextra/features.hpp"

namespace delextra {

inline constexpr std::string_view kModelMagic = "#delextra-model";

struct ModelMeta {
  std::string template_version = std::string(kTemplateVersion);
  std::string language;
  bool delex = true;
  // Free-form provenance (training settings, interpolation sources, ...).
  std::vector<std::pair<std::string, std::string>> extra;

  const std::string* find(std::string_view key) const {
    for (const auto& [k, v] : extra)
      if (k == key) return &v;
    return nullptr;
  }
  void set(std::string key, std::string value) {
    for (auto& [k, v] : extra) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    extra.emplace_back(std::move(key), std::move(value));
  }

  friend bool operator==(const ModelMeta&, const ModelMeta&) = default;
};

struct ParserModel {
  ModelMeta meta;
  // Never holds zero or non-finite weights.
  std::map<std::string, double, std::less<>> weights;

  double weight(std::string_view feature) const {
    auto it = weights.find(feature);
    return it == weights.end() ? 0.0 : it->second;
  }

  // Sets a weight, dropping the entry when it is zero.
  void set_weight(std::string_view feature, double w) {
    if (!std::isfinite(w))
      throw std::invalid_argument("non-finite weight for feature " +
                                  std::string(feature));
    if (w == 0.0) {
      auto it = weights.find(feature);
      if (it != weights.end()) weights.erase(it);
      return;
    }
    weights.insert_or_assign(std::string(feature), w);
  }

  friend bool operator==(const ParserModel&, const ParserModel&) = default;
};

inline std::string format_weight(double w) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", w);
  return buf;
}

inline void write_model(const ParserModel& m, std::ostream& out) {
  out << kModelMagic << "\t1\n";
  out << "#template_version\t" << m.meta.template_version << '\n';
  out << "#delex\t" << (m.meta.delex ? 1 : 0) << '\n';
  out << "#language\t" << m.meta.language << '\n';
  for (const auto& [k, v] : m.meta.extra) out << '#' << k << '\t' << v << '\n';
  for (const auto& [f, w] : m.weights) out << f << '\t' << format_weight(w) << '\n';
  if (!out) throw std::runtime_error("failed writing model");
}

inline ParserModel read_model(std::istream& in) {
  ParserModel m;
  m.meta.template_version.clear();
  std::string line;
  std::size_t line_no = 0;
  bool seen_magic = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos)
      throw ParseError(line_no, "expected <key><TAB><value>");
    std::string key = line.substr(0, tab);
    std::string value = line.substr(tab + 1);
    if (!seen_magic) {
      if (key != kModelMagic) throw ParseError(line_no, "not a delextra model file");
      if (value != "1")
        throw ParseError(line_no, "unsupported model format version " + value);
      seen_magic = true;
      continue;
    }
    if (key.front() == '#') {
      key.erase(0, 1);
      if (key == "template_version")
        m.meta.template_version = value;
      else if (key == "delex")
        m.meta.delex = value != "0";
      else if (key == "language")
        m.meta.language = value;
      else
        m.meta.extra.emplace_back(std::move(key), std::move(value));
      continue;
    }
    std::size_t used = 0;
    double w = 0.0;
    try {
      w = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || !std::isfinite(w))
      throw ParseError(line_no, "bad weight '" + value + "'");
    m.set_weight(key, w);
  }
  if (!seen_magic) throw ParseError(line_no, "empty model file");
  return m;
}

}  // namespace delextra
