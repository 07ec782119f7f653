#include "combtest/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace combtest {

namespace {

std::pair<int, int> edge_endpoints(int m, int index) {
  int u = 1;
  while (u < m - 1 && complete_graph_edge(m, u + 1, u + 2) <= index) ++u;
  return {u, u + 1 + (index - complete_graph_edge(m, u, u + 1))};
}

}  // namespace

ProblemInstance::ProblemInstance(ClassSpec spec, double mu) : spec_(std::move(spec)), mu_(mu) {
  if (!std::isfinite(mu) || mu < 0.0) throw InvalidArgument("ProblemInstance: need finite mu >= 0");
}

bool is_member(const ClassSpec& spec, const IndexSet& s) {
  if (s.n() != spec.n() || s.size() != spec.set_size()) return false;
  const auto idx = s.indices();
  const int a = spec.first();
  const int b = spec.second();
  switch (spec.family()) {
    case Family::disjoint_sets:
      return (idx.front() - 1) % b == 0 && idx.back() - idx.front() == b - 1;
    case Family::k_sets: return true;
    case Family::stars: {
      std::vector<int> degree(static_cast<std::size_t>(a + 1), 0);
      for (int e : idx) {
        const auto [u, v] = edge_endpoints(a, e);
        ++degree[static_cast<std::size_t>(u)];
        ++degree[static_cast<std::size_t>(v)];
      }
      return std::find(degree.begin(), degree.end(), a - 1) != degree.end();
    }
    case Family::perfect_matchings: {
      std::vector<char> row(static_cast<std::size_t>(a), 0), col(static_cast<std::size_t>(a), 0);
      for (int e : idx) {
        const int r = (e - 1) / a;
        const int c = (e - 1) % a;
        if (row[static_cast<std::size_t>(r)]++ || col[static_cast<std::size_t>(c)]++) return false;
      }
      return true;
    }
    case Family::spanning_trees: {
      std::vector<int> parent(static_cast<std::size_t>(a + 1));
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
        return v;
      };
      for (int e : idx) {
        const auto [u, v] = edge_endpoints(a, e);
        const int ru = find(u), rv = find(v);
        if (ru == rv) return false;
        parent[static_cast<std::size_t>(ru)] = rv;
      }
      return true;
    }
    case Family::cliques: {
      std::set<int> vertices;
      for (int e : idx) {
        const auto [u, v] = edge_endpoints(a, e);
        vertices.insert(u);
        vertices.insert(v);
      }
      // k vertices spanning C(k,2) distinct edges form the clique on them.
      return static_cast<int>(vertices.size()) == b;
    }
    case Family::grid_squares: {
      const int r0 = (idx.front() - 1) / a;
      const int c0 = (idx.front() - 1) % a;
      if (r0 + b > a || c0 + b > a) return false;
      std::size_t i = 0;
      for (int dr = 0; dr < b; ++dr) {
        for (int dc = 0; dc < b; ++dc) {
          if (idx[i++] != (r0 + dr) * a + (c0 + dc) + 1) return false;
        }
      }
      return true;
    }
  }
  return false;
}

Observation gaussian_sample(const ProblemInstance& instance, const Hypothesis& hypothesis,
                            SeededRng& rng) {
  std::vector<double> values(static_cast<std::size_t>(instance.n()));
  std::span<const int> support;
  if (const auto* alt = std::get_if<Contaminated>(&hypothesis)) {
    if (alt->support.n() != instance.n()) {
      throw DimensionError("gaussian_sample: support lives in a different ambient dimension");
    }
    if (!is_member(instance.spec(), alt->support)) {
      throw InvalidArgument("gaussian_sample: support " + alt->support.encode() +
                            " is not a member of " + instance.spec().describe());
    }
    support = alt->support.indices();
  }
  gaussian_fill(values, instance.mu(), support, rng);
  return Observation(std::move(values));
}

}  // namespace combtest
