#pragma once

// End-to-end transfer experiments: style setups, flat key=value configs and
// the pipeline that trains source parsers, parses the target, combines and
// evaluates.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "delextra/combination.hpp"
#include "delextra/conll.hpp"
#include "delextra/errors.hpp"
#include "delextra/eval.hpp"
#include "delextra/interpolation.hpp"
#include "delextra/model.hpp"
#include "delextra/parallel.hpp"
#include "delextra/parser.hpp"
#include "delextra/similarity.hpp"
#include "delextra/transform.hpp"

namespace delextra {

// "parsing/combination/output", e.g. "P,S/S/P": parse with Prague- and
// Stanford-trained parsers, combine in Stanford style, output Prague style.
struct StyleSetup {
  std::vector<Style> parse_styles{Style::Prague};
  Style combine_style = Style::Prague;
  Style output_style = Style::Prague;

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < parse_styles.size(); ++i) {
      if (i) out += ',';
      out += style_letter(parse_styles[i]);
    }
    out += '/';
    out += style_letter(combine_style);
    out += '/';
    out += style_letter(output_style);
    return out;
  }

  friend bool operator==(const StyleSetup&, const StyleSetup&) = default;
};

inline StyleSetup parse_style_setup(std::string_view text) {
  const auto fail = [&] {
    return UsageError("bad style setup '" + std::string(text) +
                      "'; expected STYLES/STYLE/STYLE where STYLE is P or S and "
                      "STYLES is P, S, P,S or S,P (e.g. P,S/S/P)");
  };
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto slash = text.find('/', start);
    parts.push_back(text.substr(start, slash == std::string_view::npos ? slash : slash - start));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  if (parts.size() != 3) throw fail();
  auto letter = [&](std::string_view s) {
    if (s == "P") return Style::Prague;
    if (s == "S") return Style::Stanford;
    throw fail();
  };
  StyleSetup setup;
  setup.parse_styles.clear();
  std::string_view list = parts[0];
  while (true) {
    auto comma = list.find(',');
    const Style st = letter(list.substr(0, comma));
    if (std::find(setup.parse_styles.begin(), setup.parse_styles.end(), st) !=
        setup.parse_styles.end())
      throw fail();
    setup.parse_styles.push_back(st);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  setup.combine_style = letter(parts[1]);
  setup.output_style = letter(parts[2]);
  return setup;
}

enum class Method { Concat, TreeCombination, ModelInterpolation, SingleSource };
enum class Weighting { None, Ikl };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::Concat: return "concat";
    case Method::TreeCombination: return "tree-comb";
    case Method::ModelInterpolation: return "model-interp";
    case Method::SingleSource: return "single-source";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  for (auto m : {Method::Concat, Method::TreeCombination, Method::ModelInterpolation,
                 Method::SingleSource})
    if (method_name(m) == s) return m;
  throw UsageError("unknown method '" + std::string(s) +
                   "'; expected concat, tree-comb, model-interp or single-source");
}

inline std::string_view weighting_name(Weighting w) {
  return w == Weighting::Ikl ? "ikl" : "none";
}

inline Weighting parse_weighting(std::string_view s) {
  if (s == "none") return Weighting::None;
  if (s == "ikl") return Weighting::Ikl;
  throw UsageError("unknown weighting '" + std::string(s) + "'; expected none or ikl");
}

struct CorpusSpec {
  std::string language;
  std::filesystem::path path;
};

// "lang:path"; without a colon the language is the file stem.
inline CorpusSpec parse_corpus_spec(std::string_view text,
                                    const std::filesystem::path& base = {}) {
  CorpusSpec c;
  const auto colon = text.find(':');
  std::string path;
  if (colon == std::string_view::npos) {
    path = std::string(text);
    c.language = std::filesystem::path(path).stem().string();
  } else {
    c.language = std::string(text.substr(0, colon));
    path = std::string(text.substr(colon + 1));
  }
  if (c.language.empty() || path.empty())
    throw UsageError("bad corpus '" + std::string(text) + "'; expected LANG:PATH");
  c.path = std::filesystem::path(path);
  if (c.path.is_relative() && !base.empty()) c.path = base / c.path;
  return c;
}

struct ExperimentConfig {
  std::vector<CorpusSpec> sources;
  CorpusSpec target;
  Method method = Method::TreeCombination;
  Weighting weighting = Weighting::None;
  StyleSetup setup;
  // Annotation style the input files are in.
  Style source_style = Style::Prague;
  Style target_style = Style::Prague;
  int iterations = 3;
  // Where artifacts and the report go; empty writes nothing.
  std::filesystem::path out_dir;
};

// Applies one setting. "source" appends; everything else replaces.
inline void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value,
                          const std::filesystem::path& base = {}) {
  if (key == "method")
    cfg.method = parse_method(value);
  else if (key == "weighting")
    cfg.weighting = parse_weighting(value);
  else if (key == "setup")
    cfg.setup = parse_style_setup(value);
  else if (key == "source")
    cfg.sources.push_back(parse_corpus_spec(value, base));
  else if (key == "target")
    cfg.target = parse_corpus_spec(value, base);
  else if (key == "source_style")
    cfg.source_style = parse_style(value);
  else if (key == "target_style")
    cfg.target_style = parse_style(value);
  else if (key == "iterations") {
    int it = 0;
    if (!detail::parse_int(value, it) || it < 1)
      throw UsageError("iterations must be a positive integer");
    cfg.iterations = it;
  } else if (key == "out") {
    cfg.out_dir = std::filesystem::path(std::string(value));
    if (cfg.out_dir.is_relative() && !base.empty()) cfg.out_dir = base / cfg.out_dir;
  } else
    throw UsageError("unknown setting '" + std::string(key) + "'");
}

// Flat key=value lines; '#' starts a comment line. Relative paths resolve
// against base.
inline ExperimentConfig read_config(std::istream& in, const std::filesystem::path& base = {}) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string_view body(line.data() + first, last - first + 1);
    auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
    try {
      apply_setting(cfg, body.substr(0, eq), body.substr(eq + 1), base);
    } catch (const UsageError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return cfg;
}

struct ExperimentResult {
  Treebank output;  // in the output style
  Treebank gold;    // in the output style
  std::map<std::string, double> kl;
  std::map<std::string, double> source_weights;
  std::string selected;  // single-source only
  std::string report;
};

namespace detail {

inline Treebank load_treebank(const CorpusSpec& c) {
  std::ifstream in(c.path);
  if (!in) throw std::runtime_error("cannot open " + c.path.string());
  return read_treebank(in, c.language);
}

template <typename Fn>
auto run_stage(std::string_view name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error("stage " + std::string(name) + ": " + e.what());
  }
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

inline std::string treebank_text(const Treebank& tb) {
  std::ostringstream ss;
  write_treebank(tb, ss);
  return ss.str();
}

inline std::string model_text(const ParserModel& m) {
  std::ostringstream ss;
  write_model(m, ss);
  return ss.str();
}

// A parser to be trained: which sources feed it and in which style.
struct TrainJob {
  std::string name;
  std::vector<std::size_t> sources;
  Style style = Style::Prague;
  double weight = 1.0;
};

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  using detail::run_stage;
  if (cfg.sources.empty()) throw UsageError("experiment needs at least one source");
  if (cfg.target.path.empty()) throw UsageError("experiment needs a target");

  const auto sources = run_stage("load", [&] {
    std::vector<Treebank> out(cfg.sources.size());
    parallel_for(out.size(), [&](std::size_t i) { out[i] = detail::load_treebank(cfg.sources[i]); });
    return out;
  });
  const Treebank target = run_stage("load", [&] { return detail::load_treebank(cfg.target); });

  ExperimentResult res;
  const bool use_ikl = cfg.weighting == Weighting::Ikl &&
                       (cfg.method == Method::TreeCombination ||
                        cfg.method == Method::ModelInterpolation ||
                        cfg.method == Method::SingleSource);
  if (use_ikl) {
    run_stage("similarity", [&] {
      const auto tgt_dist = trigram_distribution(target);
      std::map<std::string, TrigramDistribution> dists;
      for (const auto& tb : sources) dists.emplace(tb.language, trigram_distribution(tb));
      if (dists.size() != sources.size())
        throw UsageError("duplicate source language");
      for (const auto& [lang, d] : dists) {
        res.kl[lang] = kl_cpos3(tgt_dist, d);
        res.source_weights[lang] = weight_ikl(res.kl[lang]);
      }
      if (cfg.method == Method::SingleSource) res.selected = select_source(tgt_dist, dists);
    });
  }
  auto weight_of = [&](const std::string& lang) {
    auto it = res.source_weights.find(lang);
    return it == res.source_weights.end() ? 1.0 : it->second;
  };

  // Which parsers to train.
  std::vector<detail::TrainJob> jobs;
  const auto& setup = cfg.setup;
  switch (cfg.method) {
    case Method::TreeCombination:
      for (std::size_t i = 0; i < sources.size(); ++i)
        for (Style st : setup.parse_styles)
          jobs.push_back({sources[i].language + "." + style_letter(st), {i}, st,
                          weight_of(sources[i].language)});
      break;
    case Method::Concat: {
      std::vector<std::size_t> all(sources.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      for (Style st : setup.parse_styles)
        jobs.push_back({std::string("concat.") + style_letter(st), all, st, 1.0});
      break;
    }
    case Method::SingleSource: {
      std::size_t pick = 0;
      if (!res.selected.empty())
        for (std::size_t i = 0; i < sources.size(); ++i)
          if (sources[i].language == res.selected) pick = i;
      res.selected = sources[pick].language;
      for (Style st : setup.parse_styles)
        jobs.push_back({sources[pick].language + "." + style_letter(st), {pick}, st, 1.0});
      break;
    }
    case Method::ModelInterpolation:
      for (std::size_t i = 0; i < sources.size(); ++i)
        jobs.push_back({sources[i].language + "." + style_letter(setup.combine_style), {i},
                        setup.combine_style, weight_of(sources[i].language)});
      break;
  }

  std::vector<ParserModel> models(jobs.size());
  run_stage("train", [&] {
    parallel_for(jobs.size(), [&](std::size_t j) {
      std::vector<Treebank> parts;
      for (auto i : jobs[j].sources)
        parts.push_back(convert(sources[i], cfg.source_style, jobs[j].style));
      Treebank train = parts.size() == 1 ? std::move(parts.front()) : concat_treebanks(parts);
      MiraOptions opts;
      opts.iterations = cfg.iterations;
      models[j] = train_mira(train, opts);
    });
  });

  std::vector<double> weights;
  for (const auto& j : jobs) weights.push_back(j.weight);

  std::vector<Treebank> parses;
  std::optional<ParserModel> interpolated;
  Treebank combined;
  if (cfg.method == Method::ModelInterpolation) {
    interpolated = run_stage("interpolate", [&] {
      std::vector<ParserModel> normalized;
      for (const auto& m : models) normalized.push_back(normalize_model(m).model);
      return interpolate(normalized, std::span<const double>(weights));
    });
    combined = run_stage("parse", [&] { return parse_treebank(*interpolated, target); });
  } else {
    parses = run_stage("parse", [&] {
      std::vector<Treebank> out;
      for (const auto& m : models) out.push_back(parse_treebank(m, target));
      return out;
    });
    combined = run_stage("combine", [&] {
      std::vector<Treebank> converted;
      for (std::size_t j = 0; j < jobs.size(); ++j)
        converted.push_back(convert(parses[j], jobs[j].style, setup.combine_style));
      return combine_treebanks(converted, weights);
    });
  }

  res.output = run_stage("output", [&] {
    return convert(combined, setup.combine_style, setup.output_style);
  });
  res.gold = run_stage("gold", [&] {
    return convert(target, cfg.target_style, setup.output_style);
  });

  run_stage("report", [&] {
    std::ostringstream r;
    r << "# delextra experiment report\n";
    r << "method\t" << method_name(cfg.method) << '\n';
    r << "weighting\t" << (use_ikl ? "ikl" : "none") << '\n';
    r << "setup\t" << setup.str() << '\n';
    r << "source_style\t" << style_letter(cfg.source_style) << '\n';
    r << "target_style\t" << style_letter(cfg.target_style) << '\n';
    r << "iterations\t" << cfg.iterations << '\n';
    r << "target\t" << target.language << '\t' << target.sentences.size() << " sentences\n";
    if (use_ikl) {
      r << "kl_log_base\te\n";
      r << "kl_smoothing\tunseen-source-count-1-renormalized\n";
      r << "ikl\t(1/max(kl," << format_weight(kIklEpsilon) << "))^" << kIklExponent << '\n';
      if (cfg.method == Method::TreeCombination && setup.parse_styles.size() > 1)
        r << "style_vote_weight\teach (source, style) parser gets the full source weight\n";
    }
    for (const auto& tb : sources) {
      r << "source\t" << tb.language << '\t' << tb.sentences.size() << " sentences";
      if (use_ikl)
        r << "\tkl=" << format_weight(res.kl.at(tb.language))
          << "\tweight=" << format_weight(res.source_weights.at(tb.language));
      r << '\n';
    }
    if (cfg.method == Method::SingleSource) r << "selected\t" << res.selected << '\n';
    for (std::size_t j = 0; j < jobs.size(); ++j)
      r << "parser\t" << jobs[j].name << '\t' << models[j].weights.size() << " features\n";
    write_eval_tsv(res.gold, res.output, r);
    res.report = r.str();
  });

  if (!cfg.out_dir.empty()) {
    run_stage("write", [&] {
      const auto& dir = cfg.out_dir;
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        detail::write_file(dir / "models" / (jobs[j].name + ".model"),
                           detail::model_text(models[j]));
        if (!parses.empty())
          detail::write_file(dir / "parses" / (jobs[j].name + ".conll"),
                             detail::treebank_text(parses[j]));
      }
      if (interpolated)
        detail::write_file(dir / "models" / "interpolated.model",
                           detail::model_text(*interpolated));
      detail::write_file(dir / "output.conll", detail::treebank_text(res.output));
      detail::write_file(dir / "report.tsv", res.report);
    });
  }
  return res;
}

}  // namespace delextra
