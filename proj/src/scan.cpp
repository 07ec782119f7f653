// Exact maximization of the scan statistic max_{S in C} x_S per family.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "combtest/assignment.hpp"
#include "combtest/classes.hpp"

namespace combtest {

namespace {

std::vector<int> top_k(std::span<const double> x, int k) {
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 1);
  auto better = [&](int a, int b) {
    const double xa = x[static_cast<std::size_t>(a - 1)];
    const double xb = x[static_cast<std::size_t>(b - 1)];
    return xa > xb || (xa == xb && a < b);
  };
  std::nth_element(order.begin(), order.begin() + (k - 1), order.end(), better);
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<int> best_star(std::span<const double> x, int m) {
  std::vector<double> incident(static_cast<std::size_t>(m + 1), 0.0);
  for (int u = 1; u <= m; ++u) {
    for (int v = u + 1; v <= m; ++v) {
      const double w = x[static_cast<std::size_t>(complete_graph_edge(m, u, v) - 1)];
      incident[static_cast<std::size_t>(u)] += w;
      incident[static_cast<std::size_t>(v)] += w;
    }
  }
  int center = 1;
  for (int v = 2; v <= m; ++v) {
    if (incident[static_cast<std::size_t>(v)] > incident[static_cast<std::size_t>(center)]) center = v;
  }
  std::vector<int> edges;
  for (int v = 1; v <= m; ++v) {
    if (v != center) edges.push_back(complete_graph_edge(m, std::min(v, center), std::max(v, center)));
  }
  return edges;
}

std::vector<int> best_block(std::span<const double> x, int blocks, int size) {
  int best = 0;
  double best_sum = 0.0;
  for (int b = 0; b < blocks; ++b) {
    double sum = 0.0;
    for (int i = 0; i < size; ++i) sum += x[static_cast<std::size_t>(b * size + i)];
    if (b == 0 || sum > best_sum) {
      best = b;
      best_sum = sum;
    }
  }
  std::vector<int> out(static_cast<std::size_t>(size));
  std::iota(out.begin(), out.end(), best * size + 1);
  return out;
}

std::vector<int> best_square(std::span<const double> x, int side, int square) {
  const auto stride = static_cast<std::size_t>(side + 1);
  std::vector<double> prefix(stride * stride, 0.0);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      prefix[(r + 1) * stride + (c + 1)] = x[static_cast<std::size_t>(r * side + c)] +
                                           prefix[r * stride + (c + 1)] +
                                           prefix[(r + 1) * stride + c] - prefix[r * stride + c];
    }
  }
  const int positions = side - square + 1;
  int best_r = 0, best_c = 0;
  double best_sum = 0.0;
  for (int r = 0; r < positions; ++r) {
    for (int c = 0; c < positions; ++c) {
      const double sum = prefix[(r + square) * stride + (c + square)] -
                         prefix[r * stride + (c + square)] - prefix[(r + square) * stride + c] +
                         prefix[r * stride + c];
      if ((r == 0 && c == 0) || sum > best_sum) {
        best_sum = sum;
        best_r = r;
        best_c = c;
      }
    }
  }
  std::vector<int> out;
  for (int dr = 0; dr < square; ++dr) {
    for (int dc = 0; dc < square; ++dc) out.push_back((best_r + dr) * side + (best_c + dc) + 1);
  }
  return out;
}

struct TreeEdge {
  int u, v, index;
};

// Kruskal on edges sorted by (weight desc, index asc), after first taking
// the `forced` edges. Empty when the forced edges contain a cycle.
std::optional<std::vector<int>> kruskal(const std::vector<TreeEdge>& sorted_edges, int m,
                                        std::span<const TreeEdge> forced) {
  std::vector<int> parent(static_cast<std::size_t>(m + 1));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  std::vector<int> tree;
  auto take = [&](const TreeEdge& e) {
    const int ru = find(e.u);
    const int rv = find(e.v);
    if (ru == rv) return false;
    parent[static_cast<std::size_t>(ru)] = rv;
    tree.push_back(e.index);
    return true;
  };
  for (const TreeEdge& e : forced) {
    if (!take(e)) return std::nullopt;
  }
  for (const TreeEdge& e : sorted_edges) {
    if (static_cast<int>(tree.size()) == m - 1) break;
    take(e);
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

double tie_tolerance(std::span<const double> x) {
  double scale = 1.0;
  for (double v : x) scale += std::abs(v);
  return 1e-12 * scale;
}

std::vector<int> best_tree(std::span<const double> x, int m) {
  std::vector<TreeEdge> edges;
  for (int u = 1; u <= m; ++u) {
    for (int v = u + 1; v <= m; ++v) edges.push_back({u, v, complete_graph_edge(m, u, v)});
  }
  const std::vector<TreeEdge> by_index = edges;
  auto weight = [&](int index) { return x[static_cast<std::size_t>(index - 1)]; };
  std::sort(edges.begin(), edges.end(), [&](const TreeEdge& a, const TreeEdge& b) {
    const double wa = weight(a.index);
    const double wb = weight(b.index);
    return wa > wb || (wa == wb && a.index < b.index);
  });
  auto tree = *kruskal(edges, m, {});
  bool tied = false;
  for (std::size_t i = 1; i < edges.size() && !tied; ++i) {
    tied = weight(edges[i - 1].index) == weight(edges[i].index);
  }
  if (!tied) return tree;  // distinct weights: the optimum is unique

  // Optimal trees are the bases of a matroid, so growing a prefix in index
  // order while it still extends to an optimum yields the lexicographically
  // smallest optimal tree.
  const double best = set_sum(x, tree);
  const double tol = tie_tolerance(x);
  std::vector<TreeEdge> prefix;
  for (const TreeEdge& e : by_index) {
    if (static_cast<int>(prefix.size()) == m - 1) break;
    prefix.push_back(e);
    const auto candidate = kruskal(edges, m, prefix);
    if (!candidate || set_sum(x, *candidate) < best - tol) prefix.pop_back();
  }
  tree.clear();
  for (const TreeEdge& e : prefix) tree.push_back(e.index);
  return tree;
}

// Largest row limit for the exact lexicographic tie rule on matchings.
constexpr int kLexMatchingLimit = 12;

double assignment_value(std::span<const double> w, int size) {
  if (size == 0) return 0.0;
  const auto cols = max_weight_assignment(w, size);
  double total = 0.0;
  for (int r = 0; r < size; ++r) total += w[static_cast<std::size_t>(r * size + cols[static_cast<std::size_t>(r)])];
  return total;
}

std::vector<int> best_matching(std::span<const double> x, int m) {
  const auto columns = max_weight_assignment(x, m);
  std::vector<int> out(static_cast<std::size_t>(m));
  for (int row = 1; row <= m; ++row) {
    out[static_cast<std::size_t>(row - 1)] = bipartite_edge(m, row, columns[static_cast<std::size_t>(row - 1)] + 1);
  }
  if (m > kLexMatchingLimit) return out;
  const std::vector<int> hungarian = out;

  // Fix rows in order, each to the smallest column that still admits an
  // optimal completion.
  const double best = set_sum(x, out);
  const double tol = tie_tolerance(x);
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  double fixed = 0.0;
  std::vector<double> sub;
  for (int r = 0; r < m; ++r) {
    const int rest = m - r - 1;
    int chosen = -1;
    for (int c = 0; c < m && chosen < 0; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      sub.clear();
      for (int rr = r + 1; rr < m; ++rr) {
        for (int cc = 0; cc < m; ++cc) {
          if (!used[static_cast<std::size_t>(cc)] && cc != c) sub.push_back(x[static_cast<std::size_t>(rr * m + cc)]);
        }
      }
      const double w = x[static_cast<std::size_t>(r * m + c)];
      if (fixed + w + assignment_value(sub, rest) >= best - tol) chosen = c;
    }
    if (chosen < 0) return hungarian;  // rounding left no column within tolerance
    used[static_cast<std::size_t>(chosen)] = 1;
    fixed += x[static_cast<std::size_t>(r * m + chosen)];
    out[static_cast<std::size_t>(r)] = bipartite_edge(m, r + 1, chosen + 1);
  }
  return out;
}

// Exhaustive search over vertex k-subsets in lexicographic order with
// incremental edge sums.
class CliqueSearch {
 public:
  CliqueSearch(std::span<const double> x, int m, int k)
      : m_(m), k_(k), weight_(static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(m + 1), 0.0) {
    for (int u = 1; u <= m; ++u) {
      for (int v = u + 1; v <= m; ++v) {
        const double w = x[static_cast<std::size_t>(complete_graph_edge(m, u, v) - 1)];
        weight_[index(u, v)] = w;
        weight_[index(v, u)] = w;
      }
    }
    chosen_.reserve(static_cast<std::size_t>(k));
  }

  std::vector<int> run() {
    descend(1, 0.0);
    std::vector<int> edges;
    for (std::size_t a = 0; a < best_.size(); ++a) {
      for (std::size_t b = a + 1; b < best_.size(); ++b) {
        edges.push_back(complete_graph_edge(m_, best_[a], best_[b]));
      }
    }
    return edges;
  }

 private:
  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(m_ + 1) + static_cast<std::size_t>(v);
  }

  void descend(int from, double partial) {
    const int depth = static_cast<int>(chosen_.size());
    if (depth == k_) {
      if (!found_ || partial > best_sum_) {
        found_ = true;
        best_sum_ = partial;
        best_ = chosen_;
      }
      return;
    }
    for (int v = from; v <= m_ - (k_ - depth) + 1; ++v) {
      double added = partial;
      for (int u : chosen_) added += weight_[index(u, v)];
      chosen_.push_back(v);
      descend(v + 1, added);
      chosen_.pop_back();
    }
  }

  int m_;
  int k_;
  std::vector<double> weight_;
  std::vector<int> chosen_;
  std::vector<int> best_;
  double best_sum_ = 0.0;
  bool found_ = false;
};

}  // namespace

ScanResult max_weight_member(const ClassSpec& spec, std::span<const double> x, std::uint64_t cap) {
  if (static_cast<int>(x.size()) != spec.n()) {
    throw DimensionError("max_weight_member: observation has dimension " +
                         std::to_string(x.size()) + ", class has n = " + std::to_string(spec.n()));
  }
  const int a = spec.first();
  const int b = spec.second();
  std::vector<int> best;
  switch (spec.family()) {
    case Family::disjoint_sets: best = best_block(x, a, b); break;
    case Family::k_sets: best = top_k(x, b); break;
    case Family::stars: best = best_star(x, a); break;
    case Family::perfect_matchings: best = best_matching(x, a); break;
    case Family::spanning_trees: best = best_tree(x, a); break;
    case Family::cliques:
      if (!spec.cardinality_if_at_most(cap)) throw CapExceeded(spec.cardinality().str(), cap);
      best = CliqueSearch(x, a, b).run();
      break;
    case Family::grid_squares: best = best_square(x, a, b); break;
  }
  const double value = set_sum(x, best);
  return {IndexSet(spec.n(), std::move(best)), value};
}

ScanResult max_weight_member(const ClassSpec& spec, const Observation& x, std::uint64_t cap) {
  return max_weight_member(spec, x.values(), cap);
}

}  // namespace combtest
