// delextra: command-line front end for delexicalized multi-source parser
// transfer. See README.md for the subcommands.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "delextra/delextra.hpp"

namespace fs = std::filesystem;
using namespace delextra;

namespace {

// "-" is stdin/stdout.
struct Input {
  explicit Input(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open " + path);
    }
    in_ = path == "-" ? &std::cin : &file_;
  }
  std::istream& get() { return *in_; }

 private:
  std::ifstream file_;
  std::istream* in_;
};

struct Output {
  explicit Output(const std::string& path) {
    if (path != "-") {
      if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
    out_ = path == "-" ? &std::cout : &file_;
  }
  std::ostream& get() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

Treebank load_treebank(const std::string& path, const std::string& language) {
  Input in(path);
  auto tb = read_treebank(in.get(), language);
  if (tb.unknown_tags > 0)
    std::cerr << "warning: " << path << ": " << tb.unknown_tags
              << " tags outside the 12-tag set read as X\n";
  return tb;
}

ParserModel load_model(const std::string& path) {
  Input in(path);
  return read_model(in.get());
}

// Two columns per line: language, weight. '#' lines are comments.
std::map<std::string, double> read_weights(const std::string& path) {
  Input in(path);
  std::map<std::string, double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in.get(), line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ss(line);
    std::string lang, value;
    if (!std::getline(ss, lang, '\t') || !std::getline(ss, value, '\t'))
      throw ParseError(line_no, "expected <language><TAB><weight>");
    try {
      out[lang] = std::stod(value);
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad weight '" + value + "'");
    }
  }
  return out;
}

std::vector<double> weights_for(const std::vector<CorpusSpec>& inputs,
                                const std::string& weights_path) {
  std::vector<double> w(inputs.size(), 1.0);
  if (weights_path.empty()) return w;
  const auto table = read_weights(weights_path);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    auto it = table.find(inputs[i].language);
    if (it == table.end())
      throw UsageError("no weight for '" + inputs[i].language + "' in " + weights_path);
    w[i] = it->second;
  }
  return w;
}

std::vector<CorpusSpec> corpus_specs(const std::vector<std::string>& args) {
  std::vector<CorpusSpec> out;
  for (const auto& a : args) out.push_back(parse_corpus_spec(a));
  return out;
}

void write_similarity(const std::vector<CorpusSpec>& targets,
                      const std::vector<CorpusSpec>& sources, const std::string& out_dir) {
  std::vector<TrigramDistribution> src;
  for (const auto& s : sources) src.push_back(trigram_distribution(load_treebank(s.path, s.language)));

  std::ostringstream kl_tsv, ikl_tsv;
  const std::string meta =
      "# kl_cpos3, natural log; unseen source trigrams count 1, source total renormalized\n";
  kl_tsv << meta;
  ikl_tsv << meta << "# weight = (1/max(kl," << format_weight(kIklEpsilon) << "))^"
          << kIklExponent << '\n';
  for (auto* ss : {&kl_tsv, &ikl_tsv}) {
    *ss << "target";
    for (const auto& s : sources) *ss << '\t' << s.language;
    *ss << '\n';
  }
  std::map<std::string, std::string> per_target;
  for (const auto& t : targets) {
    const auto tgt = trigram_distribution(load_treebank(t.path, t.language));
    std::ostringstream row_w;
    row_w << "# weights for target " << t.language << '\n';
    kl_tsv << t.language;
    ikl_tsv << t.language;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const double kl = kl_cpos3(tgt, src[i]);
      kl_tsv << '\t' << format_weight(kl);
      ikl_tsv << '\t' << format_weight(weight_ikl(kl));
      row_w << sources[i].language << '\t' << format_weight(weight_ikl(kl)) << '\n';
    }
    kl_tsv << '\n';
    ikl_tsv << '\n';
    per_target[t.language] = row_w.str();
  }

  if (out_dir.empty()) {
    std::cout << kl_tsv.str();
    return;
  }
  Output(out_dir + "/kl.tsv").get() << kl_tsv.str();
  Output(out_dir + "/ikl.tsv").get() << ikl_tsv.str();
  for (const auto& [lang, text] : per_target)
    Output(out_dir + "/weights." + lang + ".tsv").get() << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delexicalized multi-source dependency parser transfer"};
  app.require_subcommand(1);

  // convert
  auto* convert_cmd = app.add_subcommand("convert", "Convert adposition annotation style");
  std::string conv_from = "P", conv_to = "S", conv_in = "-", conv_out = "-";
  convert_cmd->add_option("--from", conv_from, "Input style (P or S)")->required();
  convert_cmd->add_option("--to", conv_to, "Output style (P or S)")->required();
  convert_cmd->add_option("-i,--input", conv_in, "CoNLL input");
  convert_cmd->add_option("-o,--output", conv_out, "CoNLL output");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a parser with MIRA");
  std::string train_in, train_out = "-", train_lang;
  int train_iters = 3;
  bool train_lexical = false;
  train_cmd->add_option("-i,--input", train_in, "Training treebank")->required();
  train_cmd->add_option("-o,--output", train_out, "Model file");
  train_cmd->add_option("-l,--language", train_lang, "Language code stored in the model");
  train_cmd->add_option("--iterations", train_iters, "MIRA passes")->check(CLI::PositiveNumber);
  train_cmd->add_flag("--lexical", train_lexical, "Add form and lemma features");

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "Parse a CoNLL file with a model");
  std::string parse_model, parse_in = "-", parse_out = "-";
  parse_cmd->add_option("-m,--model", parse_model, "Model file")->required();
  parse_cmd->add_option("-i,--input", parse_in, "CoNLL input");
  parse_cmd->add_option("-o,--output", parse_out, "CoNLL output");

  // similarity
  auto* sim_cmd = app.add_subcommand("similarity", "KL_cpos3 matrix and iKL weights");
  std::vector<std::string> sim_targets, sim_sources;
  std::string sim_out;
  sim_cmd->add_option("--target", sim_targets, "LANG:PATH (repeatable)")->required();
  sim_cmd->add_option("--source", sim_sources, "LANG:PATH (repeatable)")->required();
  sim_cmd->add_option("--out", sim_out, "Directory for kl.tsv, ikl.tsv, weights.<target>.tsv");

  // combine
  auto* comb_cmd = app.add_subcommand("combine", "Weighted vote over parses of one corpus");
  std::vector<std::string> comb_parses;
  std::string comb_weights, comb_out = "-";
  comb_cmd->add_option("--parse", comb_parses, "LANG:PATH parsed CoNLL (repeatable)")->required();
  comb_cmd->add_option("--weights", comb_weights, "TSV of <language> <weight>");
  comb_cmd->add_option("-o,--output", comb_out, "CoNLL output");

  // interpolate
  auto* interp_cmd = app.add_subcommand("interpolate", "Normalize and sum parser models");
  std::vector<std::string> interp_models;
  std::string interp_weights, interp_out = "-";
  bool interp_raw = false;
  interp_cmd->add_option("--model", interp_models, "LANG:PATH model file (repeatable)")->required();
  interp_cmd->add_option("--weights", interp_weights, "TSV of <language> <weight>");
  interp_cmd->add_flag("--raw", interp_raw, "Skip standard-deviation normalization");
  interp_cmd->add_option("-o,--output", interp_out, "Model output");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Unlabelled attachment scores");
  std::string eval_gold, eval_pred, eval_out = "-";
  eval_cmd->add_option("--gold", eval_gold, "Gold CoNLL")->required();
  eval_cmd->add_option("--pred", eval_pred, "Predicted CoNLL")->required();
  eval_cmd->add_option("-o,--output", eval_out, "TSV output");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "Run a full transfer experiment");
  std::string exp_config, exp_method, exp_weighting, exp_setup, exp_target, exp_out;
  std::string exp_source_style, exp_target_style;
  std::vector<std::string> exp_sources;
  int exp_iters = 0;
  exp_cmd->add_option("-c,--config", exp_config, "key=value config file");
  exp_cmd->add_option("--method", exp_method, "concat | tree-comb | model-interp | single-source");
  exp_cmd->add_option("--weighting", exp_weighting, "none | ikl");
  exp_cmd->add_option("--setup", exp_setup, "Style setup, e.g. P,S/S/P");
  exp_cmd->add_option("--source", exp_sources, "LANG:PATH (repeatable; replaces config sources)");
  exp_cmd->add_option("--target", exp_target, "LANG:PATH");
  exp_cmd->add_option("--source-style", exp_source_style, "Style of source files");
  exp_cmd->add_option("--target-style", exp_target_style, "Style of the target file");
  exp_cmd->add_option("--iterations", exp_iters, "MIRA passes");
  exp_cmd->add_option("--out", exp_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*convert_cmd) {
      const Style from = parse_style(conv_from), to = parse_style(conv_to);
      auto tb = load_treebank(conv_in, "");
      Output out(conv_out);
      write_treebank(convert(tb, from, to), out.get());
    } else if (*train_cmd) {
      auto tb = load_treebank(train_in, train_lang);
      MiraOptions opts;
      opts.iterations = train_iters;
      opts.lexical = train_lexical;
      Output out(train_out);
      write_model(train_mira(tb, opts), out.get());
    } else if (*parse_cmd) {
      const auto model = load_model(parse_model);
      auto tb = load_treebank(parse_in, model.meta.language);
      Output out(parse_out);
      write_treebank(parse_treebank(model, tb), out.get());
    } else if (*sim_cmd) {
      write_similarity(corpus_specs(sim_targets), corpus_specs(sim_sources), sim_out);
    } else if (*comb_cmd) {
      const auto inputs = corpus_specs(comb_parses);
      std::vector<Treebank> parses;
      for (const auto& c : inputs) parses.push_back(load_treebank(c.path, c.language));
      const auto w = weights_for(inputs, comb_weights);
      Output out(comb_out);
      write_treebank(combine_treebanks(parses, w), out.get());
    } else if (*interp_cmd) {
      const auto inputs = corpus_specs(interp_models);
      std::vector<ParserModel> models;
      for (const auto& c : inputs) {
        auto m = load_model(c.path);
        if (m.meta.language.empty()) m.meta.language = c.language;
        if (!interp_raw) {
          auto norm = normalize_model(m);
          if (norm.degenerate)
            std::cerr << "warning: " << c.path << ": weights have zero spread, not normalized\n";
          m = std::move(norm.model);
        }
        models.push_back(std::move(m));
      }
      const auto w = weights_for(inputs, interp_weights);
      Output out(interp_out);
      write_model(interpolate(models, std::span<const double>(w)), out.get());
    } else if (*eval_cmd) {
      const auto gold = load_treebank(eval_gold, "");
      const auto pred = load_treebank(eval_pred, "");
      Output out(eval_out);
      write_eval_tsv(gold, pred, out.get());
    } else if (*exp_cmd) {
      ExperimentConfig cfg;
      if (!exp_config.empty()) {
        Input in(exp_config);
        cfg = read_config(in.get(), fs::path(exp_config).parent_path());
      }
      if (!exp_method.empty()) apply_setting(cfg, "method", exp_method);
      if (!exp_weighting.empty()) apply_setting(cfg, "weighting", exp_weighting);
      if (!exp_setup.empty()) apply_setting(cfg, "setup", exp_setup);
      if (!exp_sources.empty()) {
        cfg.sources.clear();
        for (const auto& s : exp_sources) apply_setting(cfg, "source", s);
      }
      if (!exp_target.empty()) apply_setting(cfg, "target", exp_target);
      if (!exp_source_style.empty()) apply_setting(cfg, "source_style", exp_source_style);
      if (!exp_target_style.empty()) apply_setting(cfg, "target_style", exp_target_style);
      if (exp_iters > 0) cfg.iterations = exp_iters;
      if (!exp_out.empty()) apply_setting(cfg, "out", exp_out);
      std::cout << run_experiment(cfg).report;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
