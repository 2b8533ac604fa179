#pragma once

// First-order edge features. Every feature is a string
//
//   TEMPLATE:value1|value2|...
//
// where TEMPLATE names the conjunction, so features of different templates
// never collide. Feature strings are the public keys of model files; any
// change to the inventory below must bump kTemplateVersion.

#include <algorithm>
#include <cstdlib>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "delextra/conll.hpp"

namespace delextra {

inline constexpr std::string_view kTemplateVersion = "delextra-first-order-1";
inline constexpr std::string_view kBeginTag = "BOS";
inline constexpr std::string_view kEndTag = "EOS";

// Signed distance head - dependent, bucketed. The >=5 and >=11 buckets are
// cumulative, so |d| >= 11 fires both.
inline std::vector<std::string> bucket_distance(int d) {
  if (d == 0) throw std::invalid_argument("bucket_distance: zero distance");
  const char sign = d > 0 ? '+' : '-';
  const int mag = std::abs(d);
  if (mag <= 4) return {std::string(1, sign) + std::to_string(mag)};
  const std::string cmp = d > 0 ? ">=" : "<=";
  std::vector<std::string> out{cmp + sign + "5"};
  if (mag >= 11) out.push_back(cmp + sign + "11");
  return out;
}

class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::vector<std::string> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  bool contains(std::string_view f) const {
    return std::binary_search(items_.begin(), items_.end(), f);
  }
  std::size_t size() const { return items_.size(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<std::string>& items() const { return items_; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<std::string> items_;
};

namespace detail {

inline std::string join_feature(std::string_view templ,
                                std::initializer_list<std::string_view> values) {
  std::string out(templ);
  out += ':';
  bool first = true;
  for (auto v : values) {
    if (!first) out += '|';
    out += v;
    first = false;
  }
  return out;
}

// Tag at position -1..n+1 of the root-extended sequence.
inline std::string_view context_tag(const Sentence& s, int pos) {
  if (pos < 0) return kBeginTag;
  if (pos > s.size()) return kEndTag;
  return s.tag(pos);
}

inline std::string_view form_of(const Sentence& s, int pos) {
  return pos == 0 ? kRootTag : std::string_view(s.at(pos).form);
}

inline std::string_view lemma_of(const Sentence& s, int pos) {
  return pos == 0 ? kRootTag : std::string_view(s.at(pos).lemma);
}

}  // namespace detail

inline FeatureVector extract_edge_features(const Sentence& s, int head, int dep,
                                           bool lexical) {
  const int n = s.size();
  if (head < 0 || head > n || dep < 1 || dep > n || head == dep)
    throw std::out_of_range("extract_edge_features: bad edge " +
                            std::to_string(head) + " -> " + std::to_string(dep));
  using detail::context_tag;
  using detail::join_feature;

  const auto hp = context_tag(s, head);
  const auto dp = context_tag(s, dep);
  const auto hp_next = context_tag(s, head + 1);
  const auto hp_prev = context_tag(s, head - 1);
  const auto dp_next = context_tag(s, dep + 1);
  const auto dp_prev = context_tag(s, dep - 1);
  const auto buckets = bucket_distance(head - dep);

  std::vector<std::string> out;
  out.push_back(join_feature("hP", {hp}));
  out.push_back(join_feature("dP", {dp}));

  auto with_buckets = [&](std::string_view templ,
                          std::initializer_list<std::string_view> values) {
    out.push_back(join_feature(templ, values));
    const std::string dist_templ = std::string(templ) + "|dist";
    for (const auto& b : buckets) {
      auto f = join_feature(dist_templ, values);
      f += '|';
      f += b;
      out.push_back(std::move(f));
    }
  };

  with_buckets("hP|dP", {hp, dp});
  with_buckets("hP|hP+1|dP-1|dP", {hp, hp_next, dp_prev, dp});
  with_buckets("hP-1|hP|dP|dP+1", {hp_prev, hp, dp, dp_next});

  const int lo = std::min(head, dep);
  const int hi = std::max(head, dep);
  std::vector<std::string_view> between;
  for (int i = lo + 1; i < hi; ++i) between.push_back(s.tag(i));
  std::sort(between.begin(), between.end());
  between.erase(std::unique(between.begin(), between.end()), between.end());
  for (auto bp : between) with_buckets("hP|bP|dP", {hp, bp, dp});

  if (lexical) {
    const auto hf = detail::form_of(s, head);
    const auto hl = detail::lemma_of(s, head);
    const auto df = detail::form_of(s, dep);
    const auto dl = detail::lemma_of(s, dep);
    with_buckets("hForm", {hf});
    with_buckets("hLemma", {hl});
    with_buckets("dForm", {df});
    with_buckets("dLemma", {dl});
    with_buckets("hForm|dForm", {hf, df});
    with_buckets("hLemma|dLemma", {hl, dl});
  }
  return FeatureVector(std::move(out));
}

}  // namespace delextra
