// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "delextra/delextra.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace delextra;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kAc1Seconds = 5.0;
constexpr double kAc2Seconds = 1.0;
constexpr double kAc2Adversarial = 0.95;
constexpr double kAc3Log2Tol = 1e-9;
constexpr double kAc5SdTol = 1e-9;
constexpr double kAc6Tol = 1e-9;
constexpr double kAc8Uas = 0.90;
constexpr double kAc8Seconds = 10.0;
constexpr double kAc9Uas = 0.90;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(6);
  ss << x;
  return ss.str();
}

std::vector<Treebank> all_fixtures() {
  return {testutil::load("two_sentences.conll"), testutil::load("adp_clean.conll"),
          testutil::load("adp_adversarial.conll"), testutil::load("grammar20.conll"),
          testutil::load("transfer/aa.conll"), testutil::load("transfer/bb.conll"),
          testutil::load("transfer/cc.conll"), testutil::load("transfer/tt.conll")};
}

Outcome ac1_mst_oracle() {
  Outcome o;
  std::mt19937 rng(1);
  const auto t0 = Clock::now();
  int checked = 0;
  for (int n = 1; n <= 4; ++n)
    for (int trial = 0; trial < 200; ++trial) {
      const auto es = oracle::random_scores(n, rng, trial % 4 == 3);
      const auto t = decode(es);
      if (!validate_heads(t.heads)) o.fail("invalid tree at n=" + std::to_string(n));
      if (tree_score(es, t) != oracle::best_tree_score(es))
        o.fail("score mismatch at n=" + std::to_string(n));
      ++checked;
    }
  const double secs = seconds_since(t0);
  if (secs >= kAc1Seconds) o.fail("took " + fmt(secs) + " s");
  if (o.pass) o.detail = std::to_string(checked) + " matrices, " + fmt(secs) + " s";
  return o;
}

Outcome ac2_roundtrip() {
  Outcome o;
  const auto t0 = Clock::now();
  auto roundtrip = [](const Treebank& tb) {
    const auto back =
        convert(convert(tb, Style::Prague, Style::Stanford), Style::Stanford, Style::Prague);
    return uas(tb, back);
  };
  const double clean = roundtrip(testutil::load("adp_clean.conll"));
  const double adv = roundtrip(testutil::load("adp_adversarial.conll"));
  const double secs = seconds_since(t0);
  if (clean != 1.0) o.fail("clean " + fmt(clean));
  if (adv < kAc2Adversarial) o.fail("adversarial " + fmt(adv));
  if (secs >= kAc2Seconds) o.fail("took " + fmt(secs) + " s");
  if (o.pass) o.detail = "clean " + fmt(clean) + ", adversarial " + fmt(adv);
  return o;
}

Outcome ac3_kl_identities() {
  Outcome o;
  std::mt19937 rng(3);
  static const char* tags[] = {"NOUN", "VERB", "ADP", "DET", "ADJ", ".", "PRON", "ADV"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<std::string>> corpus(1 + rng() % 10);
    for (auto& s : corpus)
      for (std::size_t i = 0, n = 1 + rng() % 12; i < n; ++i) s.emplace_back(tags[rng() % 8]);
    const auto d = trigram_distribution(corpus);
    const double kl = kl_cpos3(d, d);
    if (kl != 0.0) o.fail("kl(D,D) = " + fmt(kl));
  }
  TrigramDistribution tgt, src;
  tgt.counts[{"A", "A", "A"}] = 3;
  tgt.total = 3;
  src.counts[{"Z", "Z", "Z"}] = 1;
  src.total = 1;
  const double kl = kl_cpos3(tgt, src);
  if (std::abs(kl - std::log(2.0)) > kAc3Log2Tol) o.fail("smoothing example " + fmt(kl));
  if (o.pass) o.detail = "50 self-divergences 0, smoothing example " + fmt(kl);
  return o;
}

Outcome ac4_ikl() {
  Outcome o;
  if (weight_ikl(0.5) != 16.0) o.fail("weight_ikl(0.5) = " + fmt(weight_ikl(0.5)));
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const double kl = 1e-3 + (10.0 - 1e-3) * i / 99.0;
    const double w = weight_ikl(kl);
    if (!(w < prev)) o.fail("not decreasing at " + fmt(kl));
    prev = w;
  }
  if (o.pass) o.detail = "weight_ikl(0.5) = 16, 100-point grid decreasing";
  return o;
}

Outcome ac5_normalization() {
  Outcome o;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ParserModel m;
    for (int i = 0, n = 2 + static_cast<int>(rng() % 200); i < n; ++i)
      m.set_weight("f" + std::to_string(i), u(rng) * (1 + trial));
    const auto nm = normalize_model(m).model;
    double mean = 0.0, var = 0.0;
    for (const auto& [f, w] : nm.weights) mean += w;
    mean /= static_cast<double>(nm.weights.size());
    for (const auto& [f, w] : nm.weights) var += (w - mean) * (w - mean);
    const double sd = std::sqrt(var / static_cast<double>(nm.weights.size()));
    worst = std::max(worst, std::abs(sd - 1.0));
  }
  if (worst > kAc5SdTol) o.fail("sd off by " + fmt(worst));

  const auto fixtures = all_fixtures();
  std::size_t sentences = 0;
  for (const char* train : {"grammar20.conll", "transfer/aa.conll", "transfer/bb.conll"}) {
    const auto m = train_mira(testutil::load(train));
    const auto nm = normalize_model(m).model;
    for (const auto& tb : fixtures) {
      if (parse_treebank(m, tb).sentences != parse_treebank(nm, tb).sentences)
        o.fail(std::string("parses differ, model from ") + train);
      sentences += tb.sentences.size();
    }
  }
  if (o.pass)
    o.detail = "max |sd-1| " + fmt(worst) + ", " + std::to_string(sentences) +
               " sentence parses identical";
  return o;
}

Outcome ac6_interpolation() {
  Outcome o;
  const auto fixtures = all_fixtures();
  const std::vector<ParserModel> trained{train_mira(testutil::load("grammar20.conll")),
                                         train_mira(testutil::load("transfer/aa.conll")),
                                         train_mira(testutil::load("transfer/bb.conll")),
                                         train_mira(testutil::load("adp_adversarial.conll"))};
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const auto& m1 = trained[rng() % trained.size()];
    const auto& m2 = trained[rng() % trained.size()];
    const std::vector<double> w{u(rng), u(rng)};
    const std::vector<ParserModel> pair{m1, m2};
    const auto mix = interpolate(pair, std::span<const double>(w));
    for (const auto& tb : fixtures)
      for (const auto& s : tb.sentences) {
        const auto e1 = score_edges(m1, s), e2 = score_edges(m2, s), em = score_edges(mix, s);
        for (int h = 0; h <= s.size(); ++h)
          for (int d = 1; d <= s.size(); ++d)
            if (h != d)
              worst = std::max(worst, std::abs(em(h, d) - (w[0] * e1(h, d) + w[1] * e2(h, d))));
      }
  }
  if (worst > kAc6Tol) o.fail("edge score off by " + fmt(worst));

  for (const auto& m : trained)
    for (std::size_t copies : {2u, 3u, 5u}) {
      const std::vector<ParserModel> same(copies, m);
      const auto mix = interpolate(same);
      for (const auto& tb : fixtures)
        if (parse_treebank(mix, tb).sentences != parse_treebank(m, tb).sentences)
          o.fail(std::to_string(copies) + " copies parse differently");
    }
  if (o.pass) o.detail = "max edge error " + fmt(worst) + ", copies tree-identical";
  return o;
}

Outcome ac7_combination() {
  Outcome o;
  const auto tgt = testutil::load("transfer/tt.conll", "tt");
  std::vector<SourceParser> parsers;
  for (const char* lang : {"aa", "bb", "cc"})
    parsers.push_back({lang, Style::Prague,
                       train_mira(testutil::load(std::string("transfer/") + lang + ".conll", lang))});
  for (std::size_t first = 0; first < parsers.size(); ++first) {
    std::vector<SourceParser> order{parsers[first]};
    for (std::size_t i = 0; i < parsers.size(); ++i)
      if (i != first) order.push_back(parsers[i]);
    const std::vector<double> onehot{1.0, 0.0, 0.0};
    const auto out = transfer_tree_combination(order, tgt, onehot, Style::Prague);
    if (out.sentences != parse_treebank(order[0].model, tgt).sentences)
      o.fail("one-hot weights did not reproduce " + order[0].language);
  }
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto trees = oracle::all_trees(1 + static_cast<int>(rng() % 4));
    const ParseTree t{trees[rng() % trees.size()]};
    const std::vector<ParseTree> voters(1 + rng() % 5, t);
    std::vector<double> w;
    for (std::size_t i = 0; i < voters.size(); ++i) w.push_back(0.5 + static_cast<double>(rng() % 4));
    if (combine_parses(voters, w) != t) o.fail("unanimous vote changed the tree");
  }
  if (o.pass) o.detail = "one-hot and unanimous votes reproduce their trees";
  return o;
}

Outcome ac8_learnability() {
  Outcome o;
  const auto tb = testutil::load("grammar20.conll", "syn");
  const auto t0 = Clock::now();
  MiraOptions opts;
  opts.iterations = 3;
  const auto m1 = train_mira(tb, opts);
  const auto m2 = train_mira(tb, opts);
  const double score = uas(tb, parse_treebank(m1, tb));
  const double secs = seconds_since(t0);
  std::ostringstream a, b;
  write_model(m1, a);
  write_model(m2, b);
  bool bitwise = m1.weights.size() == m2.weights.size();
  for (auto i = m1.weights.begin(), j = m2.weights.begin(); bitwise && i != m1.weights.end(); ++i, ++j)
    bitwise = i->first == j->first &&
              std::memcmp(&i->second, &j->second, sizeof(double)) == 0;
  if (score < kAc8Uas) o.fail("UAS " + fmt(score));
  if (!bitwise || a.str() != b.str()) o.fail("models differ between runs");
  if (secs >= kAc8Seconds) o.fail("took " + fmt(secs) + " s");
  if (o.pass) o.detail = "UAS " + fmt(score) + ", bit-identical, " + fmt(secs) + " s";
  return o;
}

// Tokens where the sources disagree: adpositions and the tokens they head in
// the gold tree.
AttachmentCount divergent_count(const Treebank& gold, const Treebank& pred) {
  AttachmentCount c;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    const auto& g = gold.sentences[i];
    const auto& p = pred.sentences[i];
    for (int k = 1; k <= g.size(); ++k) {
      const auto& t = g.at(k);
      const bool divergent = t.upos == "ADP" || (t.head != 0 && g.at(t.head).upos == "ADP");
      if (!divergent) continue;
      ++c.total;
      c.correct += t.head == p.at(k).head;
    }
  }
  return c;
}

Outcome ac9_transfer() {
  Outcome o;
  ExperimentConfig cfg;
  for (const char* lang : {"aa", "bb", "cc"})
    cfg.sources.push_back(
        {lang, testutil::data_path(std::string("transfer/") + lang + ".conll")});
  cfg.target = {"tt", testutil::data_path("transfer/tt.conll")};
  std::ostringstream detail;
  for (auto method : {Method::TreeCombination, Method::ModelInterpolation}) {
    cfg.method = method;
    cfg.weighting = Weighting::Ikl;
    const auto weighted = run_experiment(cfg);
    cfg.weighting = Weighting::None;
    const auto uniform = run_experiment(cfg);
    const double w_uas = uas(weighted.gold, weighted.output);
    const double u_uas = uas(uniform.gold, uniform.output);
    const double w_div = divergent_count(weighted.gold, weighted.output).ratio();
    const double u_div = divergent_count(uniform.gold, uniform.output).ratio();
    const std::string name(method_name(method));
    if (w_uas < kAc9Uas) o.fail(name + " ikl UAS " + fmt(w_uas));
    if (!(u_div < w_div)) o.fail(name + " uniform not lower on adpositions");
    detail << name << ": ikl UAS " << fmt(w_uas) << " adp " << fmt(w_div) << ", uniform UAS "
           << fmt(u_uas) << " adp " << fmt(u_div) << "; ";
  }
  if (o.pass) o.detail = detail.str();
  else o.detail += " (" + detail.str() + ")";
  return o;
}

Outcome ac10_cli_determinism() {
  Outcome o;
  const auto dir = fs::temp_directory_path() / "delextra_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cfg = testutil::data_path("transfer/experiment.cfg");
  std::vector<std::string> reports;
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / ("report" + std::to_string(run) + ".tsv");
    const std::string cmd = std::string(DELEXTRA_CLI) + " experiment -c " + cfg + " > " +
                            out.string() + " 2> " + (dir / "stderr.txt").string();
    if (std::system(cmd.c_str()) != 0) {
      o.fail("cli exited non-zero");
      return o;
    }
    std::ifstream in(out, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    reports.push_back(ss.str());
  }
  if (reports[0].empty()) o.fail("empty report");
  if (reports[0] != reports[1]) o.fail("reports differ");
  if (o.pass) o.detail = std::to_string(reports[0].size()) + " byte reports identical";
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks{
      {"AC1 MST oracle equivalence", ac1_mst_oracle},
      {"AC2 adposition roundtrip", ac2_roundtrip},
      {"AC3 KL identities", ac3_kl_identities},
      {"AC4 iKL arithmetic", ac4_ikl},
      {"AC5 normalization", ac5_normalization},
      {"AC6 interpolation linearity", ac6_interpolation},
      {"AC7 combination degeneracy", ac7_combination},
      {"AC8 learnability", ac8_learnability},
      {"AC9 end-to-end transfer", ac9_transfer},
      {"AC10 CLI determinism", ac10_cli_determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : checks) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
    failed += !o.pass;
  }
  std::cout << (10 - failed) << "/10 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
