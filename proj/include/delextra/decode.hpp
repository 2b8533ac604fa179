#pragma once

// Maximum spanning arborescence (Chu-Liu-Edmonds) over a dense edge-score
// matrix rooted at node 0.

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace delextra {

// score(h, d) for h in [0, n], d in [1, n], h != d.
class EdgeScores {
 public:
  EdgeScores() = default;
  explicit EdgeScores(int n)
      : n_(n), data_(static_cast<std::size_t>(n + 1) * (n + 1), 0.0) {
    if (n < 0) throw std::invalid_argument("EdgeScores: negative size");
  }

  int size() const { return n_; }
  double& operator()(int head, int dep) { return data_[offset(head, dep)]; }
  double operator()(int head, int dep) const { return data_[offset(head, dep)]; }

 private:
  std::size_t offset(int head, int dep) const {
    return static_cast<std::size_t>(head) * (n_ + 1) + static_cast<std::size_t>(dep);
  }

  int n_ = 0;
  std::vector<double> data_;
};

struct ParseTree {
  // heads[i] is the head of token i+1.
  std::vector<int> heads;

  int size() const { return static_cast<int>(heads.size()); }
  int head(int dep) const { return heads.at(static_cast<std::size_t>(dep - 1)); }

  friend bool operator==(const ParseTree&, const ParseTree&) = default;
};

inline double tree_score(const EdgeScores& es, const ParseTree& t) {
  double total = 0.0;
  for (int d = 1; d <= t.size(); ++d) total += es(t.head(d), d);
  return total;
}

namespace detail {

using Matrix = std::vector<std::vector<double>>;
inline constexpr double kNoEdge = -std::numeric_limits<double>::infinity();

// Returns head[v] for every node of a graph whose root is node 0; head[0] is
// unused. Among equal scores the lower head index wins.
inline std::vector<int> chu_liu_edmonds(const Matrix& w) {
  const int m = static_cast<int>(w.size());
  std::vector<int> best(static_cast<std::size_t>(m), -1);
  for (int v = 1; v < m; ++v) {
    double top = kNoEdge;
    for (int u = 0; u < m; ++u) {
      if (u == v) continue;
      if (best[v] < 0 || w[u][v] > top) {
        top = w[u][v];
        best[v] = u;
      }
    }
  }

  // Look for a cycle among the greedy choices.
  std::vector<int> mark(static_cast<std::size_t>(m), -1);
  std::vector<int> cycle;
  for (int start = 1; start < m && cycle.empty(); ++start) {
    int v = start;
    while (v != 0 && mark[v] < 0) {
      mark[v] = start;
      v = best[v];
    }
    if (v != 0 && mark[v] == start) {
      int u = v;
      do {
        cycle.push_back(u);
        u = best[u];
      } while (u != v);
    }
  }
  if (cycle.empty()) return best;

  std::vector<char> in_cycle(static_cast<std::size_t>(m), 0);
  for (int c : cycle) in_cycle[c] = 1;

  // Non-cycle nodes keep their relative order (so the root stays 0); the
  // contracted node goes last.
  std::vector<int> to_new(static_cast<std::size_t>(m), -1);
  std::vector<int> to_old;
  for (int v = 0; v < m; ++v) {
    if (!in_cycle[v]) {
      to_new[v] = static_cast<int>(to_old.size());
      to_old.push_back(v);
    }
  }
  const int k = static_cast<int>(to_old.size());
  const int super = k;
  Matrix cw(static_cast<std::size_t>(k + 1),
            std::vector<double>(static_cast<std::size_t>(k + 1), kNoEdge));
  std::vector<int> enter_at(static_cast<std::size_t>(k), -1);  // u -> cycle node
  std::vector<int> leave_from(static_cast<std::size_t>(k), -1);  // cycle node -> v

  for (int i = 0; i < k; ++i) {
    const int u = to_old[i];
    for (int j = 0; j < k; ++j)
      if (i != j) cw[i][j] = w[u][to_old[j]];
    for (int c : cycle) {
      const double into = w[u][c] - w[best[c]][c];
      if (enter_at[i] < 0 || into > cw[i][super] ||
          (into == cw[i][super] && c < enter_at[i])) {
        cw[i][super] = into;
        enter_at[i] = c;
      }
      const double out = w[c][u];
      if (leave_from[i] < 0 || out > cw[super][i] ||
          (out == cw[super][i] && c < leave_from[i])) {
        cw[super][i] = out;
        leave_from[i] = c;
      }
    }
  }

  const auto sub = chu_liu_edmonds(cw);

  std::vector<int> head(static_cast<std::size_t>(m), -1);
  for (int c : cycle) head[c] = best[c];
  for (int j = 1; j < k; ++j) {
    const int v = to_old[j];
    head[v] = sub[j] == super ? leave_from[j] : to_old[sub[j]];
  }
  const int from = sub[super];
  head[enter_at[from]] = to_old[from];
  return head;
}

}  // namespace detail

// Maximum-score tree rooted at 0. Ties prefer the lower head index.
inline ParseTree decode(const EdgeScores& es) {
  const int n = es.size();
  if (n < 1) throw std::invalid_argument("decode: empty sentence");
  detail::Matrix w(static_cast<std::size_t>(n + 1),
                   std::vector<double>(static_cast<std::size_t>(n + 1), detail::kNoEdge));
  for (int h = 0; h <= n; ++h)
    for (int d = 1; d <= n; ++d)
      if (h != d) w[h][d] = es(h, d);
  const auto head = detail::chu_liu_edmonds(w);
  return ParseTree{std::vector<int>(head.begin() + 1, head.end())};
}

}  // namespace delextra
