#include "combtest/classes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace combtest {

namespace {

constexpr std::int64_t kMaxDimension = 100'000'000;

void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    result *= (n - i);
    result /= (i + 1);
  }
  return result;
}

double log_binomial(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

std::int64_t pairs_of(std::int64_t m) { return m * (m - 1) / 2; }

// Calls visit(combo) for every k-subset of {1..n} in lexicographic order.
template <typename Visit>
void for_each_combination(int n, int k, Visit&& visit) {
  std::vector<int> combo(static_cast<std::size_t>(k));
  std::iota(combo.begin(), combo.end(), 1);
  if (k == 0) {
    visit(std::span<const int>(combo));
    return;
  }
  while (true) {
    visit(std::span<const int>(combo));
    int i = k - 1;
    while (i >= 0 && combo[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
    if (i < 0) return;
    ++combo[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

void clique_edges(int m, std::span<const int> vertices, std::vector<int>& out) {
  out.clear();
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      out.push_back(complete_graph_edge(m, vertices[a], vertices[b]));
    }
  }
}

void star_edges(int m, int center, std::vector<int>& out) {
  out.clear();
  for (int v = 1; v <= m; ++v) {
    if (v != center) out.push_back(complete_graph_edge(m, std::min(v, center), std::max(v, center)));
  }
}

// Decodes a Prüfer sequence (values 1..m, length m-2) into sorted edge indices.
void prufer_tree(int m, std::span<const int> code, std::vector<int>& out) {
  std::vector<int> degree(static_cast<std::size_t>(m + 1), 1);
  for (int v : code) ++degree[static_cast<std::size_t>(v)];
  out.clear();
  for (int v : code) {
    int leaf = 1;
    while (degree[static_cast<std::size_t>(leaf)] != 1) ++leaf;
    out.push_back(complete_graph_edge(m, std::min(leaf, v), std::max(leaf, v)));
    --degree[static_cast<std::size_t>(leaf)];
    --degree[static_cast<std::size_t>(v)];
  }
  int u = 0;
  for (int v = 1; v <= m; ++v) {
    if (degree[static_cast<std::size_t>(v)] == 1) {
      if (u == 0) {
        u = v;
      } else {
        out.push_back(complete_graph_edge(m, u, v));
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
}

// First `count` entries of a uniform random permutation of {1..n}, via a
// partial Fisher-Yates shuffle over a virtual identity array.
void partial_shuffle(int n, int count, SeededRng& rng, std::vector<int>& out) {
  out.resize(static_cast<std::size_t>(count));
  std::unordered_map<int, int> moved;
  auto value_at = [&](int i) {
    const auto it = moved.find(i);
    return it == moved.end() ? i + 1 : it->second;
  };
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    const int vi = value_at(i);
    const int vj = value_at(j);
    out[static_cast<std::size_t>(i)] = vj;
    moved[j] = vi;
  }
}

}  // namespace

std::string family_name(Family family) {
  switch (family) {
    case Family::disjoint_sets: return "disjoint";
    case Family::k_sets: return "ksets";
    case Family::stars: return "stars";
    case Family::perfect_matchings: return "matchings";
    case Family::spanning_trees: return "trees";
    case Family::cliques: return "cliques";
    case Family::grid_squares: return "grid";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::disjoint_sets, Family::k_sets, Family::stars, Family::perfect_matchings,
                   Family::spanning_trees, Family::cliques, Family::grid_squares}) {
    if (family_name(f) == name) return f;
  }
  throw InvalidArgument("unknown class family '" + name + "'");
}

int complete_graph_edge(int m, int u, int v) {
  return (u - 1) * m - (u - 1) * u / 2 + (v - u);
}

ClassSpec::ClassSpec(Family family, int a, int b) : family_(family), a_(a), b_(b) {
  std::int64_t n = 0;
  std::int64_t k = 0;
  switch (family) {
    case Family::disjoint_sets:
      require(a >= 1 && b >= 1, "disjoint sets: need N >= 1 and K >= 1");
      n = static_cast<std::int64_t>(a) * b;
      k = b;
      break;
    case Family::k_sets:
      require(a >= 1 && b >= 1 && b <= a, "k-sets: need 1 <= K <= n");
      n = a;
      k = b;
      break;
    case Family::stars:
      require(a >= 3, "stars: need m >= 3");
      n = pairs_of(a);
      k = a - 1;
      break;
    case Family::perfect_matchings:
      require(a >= 1, "perfect matchings: need m >= 1");
      n = static_cast<std::int64_t>(a) * a;
      k = a;
      break;
    case Family::spanning_trees:
      require(a >= 2, "spanning trees: need m >= 2");
      n = pairs_of(a);
      k = a - 1;
      break;
    case Family::cliques:
      require(b >= 2 && b <= a, "cliques: need 2 <= k <= m");
      n = pairs_of(a);
      k = pairs_of(b);
      break;
    case Family::grid_squares:
      require(b >= 1 && b <= a, "grid squares: need 1 <= square side <= grid side");
      n = static_cast<std::int64_t>(a) * a;
      k = static_cast<std::int64_t>(b) * b;
      break;
  }
  require(n <= kMaxDimension, "class dimension n = " + std::to_string(n) + " is too large");
  n_ = static_cast<int>(n);
  k_ = static_cast<int>(k);
}

ClassSpec ClassSpec::disjoint_sets(int blocks, int block_size) {
  return {Family::disjoint_sets, blocks, block_size};
}
ClassSpec ClassSpec::k_sets(int n, int k) { return {Family::k_sets, n, k}; }
ClassSpec ClassSpec::stars(int m) { return {Family::stars, m, 0}; }
ClassSpec ClassSpec::perfect_matchings(int m) { return {Family::perfect_matchings, m, 0}; }
ClassSpec ClassSpec::spanning_trees(int m) { return {Family::spanning_trees, m, 0}; }
ClassSpec ClassSpec::cliques(int m, int k) { return {Family::cliques, m, k}; }
ClassSpec ClassSpec::grid_squares(int side, int square_side) {
  return {Family::grid_squares, side, square_side};
}

namespace {

std::vector<std::string> parameter_names(Family family) {
  switch (family) {
    case Family::disjoint_sets: return {"N", "K"};
    case Family::k_sets: return {"n", "K"};
    case Family::stars:
    case Family::perfect_matchings:
    case Family::spanning_trees: return {"m"};
    case Family::cliques: return {"m", "k"};
    case Family::grid_squares: return {"side", "square"};
  }
  return {};
}

}  // namespace

ClassSpec ClassSpec::from_parameters(Family family,
                                     const std::map<std::string, std::int64_t>& params) {
  const auto names = parameter_names(family);
  int values[2] = {0, 0};
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto it = params.find(names[i]);
    require(it != params.end(),
            family_name(family) + ": missing parameter '" + names[i] + "'");
    require(it->second >= 0 && it->second <= kMaxDimension,
            family_name(family) + ": parameter '" + names[i] + "' out of range");
    values[i] = static_cast<int>(it->second);
  }
  return {family, values[0], values[1]};
}

std::map<std::string, std::int64_t> ClassSpec::parameters() const {
  const auto names = parameter_names(family_);
  std::map<std::string, std::int64_t> out;
  out[names[0]] = a_;
  if (names.size() > 1) out[names[1]] = b_;
  return out;
}

BigInt ClassSpec::cardinality() const {
  switch (family_) {
    case Family::disjoint_sets: return a_;
    case Family::k_sets: return binomial(a_, b_);
    case Family::stars: return a_;
    case Family::perfect_matchings: {
      BigInt f = 1;
      for (int i = 2; i <= a_; ++i) f *= i;
      return f;
    }
    case Family::spanning_trees: return boost::multiprecision::pow(BigInt(a_), a_ - 2);
    case Family::cliques: return binomial(a_, b_);
    case Family::grid_squares: {
      const BigInt side = a_ - b_ + 1;
      return side * side;
    }
  }
  return 0;
}

BigInt cardinality(const ClassSpec& spec) { return spec.cardinality(); }

double ClassSpec::log_cardinality() const {
  switch (family_) {
    case Family::disjoint_sets:
    case Family::stars: return std::log(static_cast<double>(a_));
    case Family::k_sets:
    case Family::cliques: return log_binomial(a_, b_);
    case Family::perfect_matchings: return std::lgamma(a_ + 1.0);
    case Family::spanning_trees: return (a_ - 2) * std::log(static_cast<double>(a_));
    case Family::grid_squares: return 2.0 * std::log(static_cast<double>(a_ - b_ + 1));
  }
  return 0.0;
}

std::optional<std::uint64_t> ClassSpec::cardinality_if_at_most(std::uint64_t limit) const {
  const BigInt count = cardinality();
  if (count > limit) return std::nullopt;
  return count.convert_to<std::uint64_t>();
}

std::string ClassSpec::describe() const {
  std::ostringstream out;
  out << family_name(family_) << "(";
  bool first = true;
  for (const auto& [key, value] : parameters()) {
    out << (first ? "" : ", ") << key << "=" << value;
    first = false;
  }
  out << ")";
  return out.str();
}

MemberTable::MemberTable(int n, int k) : n_(n), k_(k) {
  require(n >= 1 && k >= 1 && k <= n, "MemberTable: need 1 <= K <= n");
}

MemberTable MemberTable::from_sets(int n, int k, const std::vector<IndexSet>& sets) {
  MemberTable table(n, k);
  table.reserve(sets.size());
  for (const auto& s : sets) {
    if (s.n() != n) throw DimensionError("MemberTable: set over a different ambient dimension");
    table.push_back(s.indices());
  }
  return table;
}

IndexSet MemberTable::at(std::size_t i) const {
  const auto m = member(i);
  return IndexSet(n_, std::vector<int>(m.begin(), m.end()));
}

void MemberTable::push_back(std::span<const int> indices) {
  if (static_cast<int>(indices.size()) != k_) {
    throw InvalidArgument("MemberTable: member of size " + std::to_string(indices.size()) +
                          ", expected " + std::to_string(k_));
  }
  flat_.insert(flat_.end(), indices.begin(), indices.end());
}

void enumerate(const ClassSpec& spec, const MemberVisitor& visit, std::uint64_t cap) {
  if (!spec.cardinality_if_at_most(cap)) {
    throw CapExceeded(spec.cardinality().str(), cap);
  }
  const int a = spec.first();
  const int b = spec.second();
  std::vector<int> buffer;
  switch (spec.family()) {
    case Family::disjoint_sets:
      buffer.resize(static_cast<std::size_t>(b));
      for (int block = 0; block < a; ++block) {
        std::iota(buffer.begin(), buffer.end(), block * b + 1);
        visit(buffer);
      }
      return;
    case Family::k_sets:
      for_each_combination(a, b, [&](std::span<const int> combo) { visit(combo); });
      return;
    case Family::stars:
      for (int center = 1; center <= a; ++center) {
        star_edges(a, center, buffer);
        visit(buffer);
      }
      return;
    case Family::perfect_matchings: {
      std::vector<int> perm(static_cast<std::size_t>(a));
      std::iota(perm.begin(), perm.end(), 1);
      buffer.resize(static_cast<std::size_t>(a));
      do {
        for (int row = 1; row <= a; ++row) {
          buffer[static_cast<std::size_t>(row - 1)] =
              bipartite_edge(a, row, perm[static_cast<std::size_t>(row - 1)]);
        }
        visit(buffer);
      } while (std::next_permutation(perm.begin(), perm.end()));
      return;
    }
    case Family::spanning_trees: {
      // Prüfer codes enumerate trees bijectively; sort to get canonical order.
      MemberTable trees(spec.n(), spec.set_size());
      const int length = a - 2;
      std::vector<int> code(static_cast<std::size_t>(std::max(length, 0)), 1);
      while (true) {
        prufer_tree(a, code, buffer);
        trees.push_back(buffer);
        int i = length - 1;
        while (i >= 0 && code[static_cast<std::size_t>(i)] == a) {
          code[static_cast<std::size_t>(i)] = 1;
          --i;
        }
        if (i < 0) break;
        ++code[static_cast<std::size_t>(i)];
      }
      std::vector<std::size_t> order(trees.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const auto mx = trees.member(x);
        const auto my = trees.member(y);
        return std::lexicographical_compare(mx.begin(), mx.end(), my.begin(), my.end());
      });
      for (std::size_t i : order) visit(trees.member(i));
      return;
    }
    case Family::cliques:
      for_each_combination(a, b, [&](std::span<const int> vertices) {
        clique_edges(a, vertices, buffer);
        visit(buffer);
      });
      return;
    case Family::grid_squares: {
      const int positions = a - b + 1;
      buffer.resize(static_cast<std::size_t>(b) * static_cast<std::size_t>(b));
      for (int r = 0; r < positions; ++r) {
        for (int c = 0; c < positions; ++c) {
          std::size_t i = 0;
          for (int dr = 0; dr < b; ++dr) {
            for (int dc = 0; dc < b; ++dc) buffer[i++] = (r + dr) * a + (c + dc) + 1;
          }
          visit(buffer);
        }
      }
      return;
    }
  }
}

MemberTable enumerate_members(const ClassSpec& spec, std::uint64_t cap) {
  MemberTable table(spec.n(), spec.set_size());
  if (auto count = spec.cardinality_if_at_most(cap)) table.reserve(*count);
  enumerate(spec, [&](std::span<const int> member) { table.push_back(member); }, cap);
  return table;
}

std::vector<IndexSet> enumerate_sets(const ClassSpec& spec, std::uint64_t cap) {
  std::vector<IndexSet> sets;
  enumerate(
      spec,
      [&](std::span<const int> member) {
        sets.emplace_back(spec.n(), std::vector<int>(member.begin(), member.end()));
      },
      cap);
  return sets;
}

void sample_uniform_into(const ClassSpec& spec, SeededRng& rng, std::vector<int>& out) {
  const int a = spec.first();
  const int b = spec.second();
  switch (spec.family()) {
    case Family::disjoint_sets: {
      const int block = static_cast<int>(rng.below(static_cast<std::uint64_t>(a)));
      out.resize(static_cast<std::size_t>(b));
      std::iota(out.begin(), out.end(), block * b + 1);
      return;
    }
    case Family::k_sets:
      partial_shuffle(a, b, rng, out);
      std::sort(out.begin(), out.end());
      return;
    case Family::stars: {
      const int center = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(a)));
      star_edges(a, center, out);
      return;
    }
    case Family::perfect_matchings: {
      std::vector<int> perm;
      partial_shuffle(a, a, rng, perm);
      out.resize(static_cast<std::size_t>(a));
      for (int row = 1; row <= a; ++row) {
        out[static_cast<std::size_t>(row - 1)] =
            bipartite_edge(a, row, perm[static_cast<std::size_t>(row - 1)]);
      }
      return;
    }
    case Family::spanning_trees: {
      // Aldous-Broder: walk on K_m from a uniform start, keep first-entrance edges.
      std::vector<char> visited(static_cast<std::size_t>(a + 1), 0);
      int current = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(a)));
      visited[static_cast<std::size_t>(current)] = 1;
      int seen = 1;
      out.clear();
      while (seen < a) {
        int next = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(a - 1)));
        if (next >= current) ++next;
        if (!visited[static_cast<std::size_t>(next)]) {
          visited[static_cast<std::size_t>(next)] = 1;
          ++seen;
          out.push_back(complete_graph_edge(a, std::min(current, next), std::max(current, next)));
        }
        current = next;
      }
      std::sort(out.begin(), out.end());
      return;
    }
    case Family::cliques: {
      std::vector<int> vertices;
      partial_shuffle(a, b, rng, vertices);
      std::sort(vertices.begin(), vertices.end());
      clique_edges(a, vertices, out);
      return;
    }
    case Family::grid_squares: {
      const auto positions = static_cast<std::uint64_t>(a - b + 1);
      const int r = static_cast<int>(rng.below(positions));
      const int c = static_cast<int>(rng.below(positions));
      out.clear();
      for (int dr = 0; dr < b; ++dr) {
        for (int dc = 0; dc < b; ++dc) out.push_back((r + dr) * a + (c + dc) + 1);
      }
      return;
    }
  }
}

IndexSet sample_uniform(const ClassSpec& spec, SeededRng& rng) {
  std::vector<int> indices;
  sample_uniform_into(spec, rng, indices);
  return IndexSet(spec.n(), std::move(indices));
}

}  // namespace combtest
