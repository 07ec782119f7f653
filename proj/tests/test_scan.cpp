#include <doctest.h>

#include <cmath>
#include <vector>

#include "combtest/assignment.hpp"
#include "combtest/classes.hpp"
#include "combtest/model.hpp"
#include "oracles.hpp"

using namespace combtest;

namespace {

struct Brute {
  oracle::Set argmax;
  double value;
};

// Maximum over the members; ties go to the first member in lexicographic order.
Brute brute_max(const std::vector<oracle::Set>& members, std::span<const double> x) {
  Brute best{members.front(), oracle::sum_over(x, members.front())};
  for (const auto& s : members) {
    const double v = oracle::sum_over(x, s);
    if (v > best.value || (v == best.value && s < best.argmax)) best = {s, v};
  }
  return best;
}

std::vector<std::pair<ClassSpec, std::vector<oracle::Set>>> families() {
  return {
      {ClassSpec::disjoint_sets(5, 3), oracle::disjoint_sets(5, 3)},
      {ClassSpec::k_sets(7, 3), oracle::subsets(7, 3)},
      {ClassSpec::stars(6), oracle::stars(6)},
      {ClassSpec::perfect_matchings(4), oracle::perfect_matchings(4)},
      {ClassSpec::spanning_trees(5), oracle::spanning_trees(5)},
      {ClassSpec::cliques(6, 3), oracle::cliques(6, 3)},
      {ClassSpec::grid_squares(5, 3), oracle::grid_squares(5, 3)},
  };
}

}  // namespace

TEST_SUITE("scan") {

TEST_CASE("k-sets maximum picks the K largest coordinates") {
  const std::vector<double> x = {5, 1, 4, 2, 3};
  const auto r = max_weight_member(ClassSpec::k_sets(5, 2), x);
  CHECK(r.argmax == IndexSet(5, {1, 3}));
  CHECK(r.value == 9.0);
}

TEST_CASE("star at vertex 3 wins on (1,2,3)") {
  const std::vector<double> x = {1, 2, 3};
  const auto r = max_weight_member(ClassSpec::stars(3), x);
  CHECK(r.argmax == IndexSet(3, {2, 3}));
  CHECK(r.value == 5.0);
}

TEST_CASE("spanning tree maximum equals brute force on 50 random vectors") {
  const auto trees = oracle::spanning_trees(5);
  REQUIRE(trees.size() == 125);
  SeededRng rng(50);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(10);
    for (auto& v : x) v = rng.normal();
    const auto r = max_weight_member(ClassSpec::spanning_trees(5), x);
    const auto b = brute_max(trees, x);
    CHECK(r.value == doctest::Approx(b.value).epsilon(1e-12));
    CHECK(oracle::Set(r.argmax.indices().begin(), r.argmax.indices().end()) == b.argmax);
  }
}

TEST_CASE("every family matches brute force on Gaussian weights") {
  SeededRng rng(123);
  for (const auto& [spec, members] : families()) {
    const auto name = spec.describe();
    CAPTURE(name);
    for (int rep = 0; rep < 40; ++rep) {
      std::vector<double> x(static_cast<std::size_t>(spec.n()));
      for (auto& v : x) v = rng.normal();
      const auto r = max_weight_member(spec, x);
      const auto b = brute_max(members, x);
      CHECK(r.value == doctest::Approx(b.value).epsilon(1e-12));
      CHECK(oracle::Set(r.argmax.indices().begin(), r.argmax.indices().end()) == b.argmax);
      CHECK(r.value == doctest::Approx(set_sum(x, r.argmax.indices())).epsilon(1e-12));
    }
  }
}

TEST_CASE("ties go to the lexicographically smallest member") {
  SeededRng rng(321);
  for (const auto& [spec, members] : families()) {
    const auto name = spec.describe();
    CAPTURE(name);
    for (int rep = 0; rep < 60; ++rep) {
      std::vector<double> x(static_cast<std::size_t>(spec.n()));
      for (auto& v : x) v = static_cast<double>(rng.below(3));
      const auto r = max_weight_member(spec, x);
      const auto b = brute_max(members, x);
      CHECK(r.value == b.value);
      CHECK(oracle::Set(r.argmax.indices().begin(), r.argmax.indices().end()) == b.argmax);
    }
  }
  const std::vector<double> zeros(6, 0.0);
  CHECK(max_weight_member(ClassSpec::k_sets(6, 3), zeros).argmax == IndexSet(6, {1, 2, 3}));
  CHECK(max_weight_member(ClassSpec::spanning_trees(4), zeros).argmax == IndexSet(6, {1, 2, 3}));
}

TEST_CASE("assignment solver matches brute force over permutations") {
  SeededRng rng(8);
  for (int m = 1; m <= 6; ++m) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> w(static_cast<std::size_t>(m * m));
      for (auto& v : w) v = rng.normal();
      const auto col = max_weight_assignment(w, m);
      double got = 0.0;
      std::vector<int> perm(static_cast<std::size_t>(m));
      for (int r = 0; r < m; ++r) {
        got += w[static_cast<std::size_t>(r * m + col[static_cast<std::size_t>(r)])];
        perm[static_cast<std::size_t>(r)] = r;
      }
      double best = -INFINITY;
      do {
        double v = 0.0;
        for (int r = 0; r < m; ++r) v += w[static_cast<std::size_t>(r * m + perm[static_cast<std::size_t>(r)])];
        best = std::max(best, v);
      } while (std::next_permutation(perm.begin(), perm.end()));
      CHECK(got == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("large matchings and trees return members with the reported value") {
  SeededRng rng(17);
  for (const auto& spec : {ClassSpec::perfect_matchings(30), ClassSpec::spanning_trees(40)}) {
    std::vector<double> x(static_cast<std::size_t>(spec.n()));
    for (auto& v : x) v = rng.normal();
    const auto r = max_weight_member(spec, x);
    CHECK(is_member(spec, r.argmax));
    CHECK(r.value == doctest::Approx(set_sum(x, r.argmax.indices())));
    // No random member beats the maximizer.
    for (int i = 0; i < 200; ++i) CHECK(set_sum(x, sample_uniform(spec, rng).indices()) <= r.value + 1e-9);
  }
}

TEST_CASE("clique maximization honors the cap and dimension") {
  const std::vector<double> x(static_cast<std::size_t>(ClassSpec::cliques(200, 10).n()), 0.0);
  CHECK_THROWS_AS(max_weight_member(ClassSpec::cliques(200, 10), x), CapExceeded);
  const std::vector<double> wrong(5, 0.0);
  CHECK_THROWS_AS(max_weight_member(ClassSpec::k_sets(6, 2), wrong), DimensionError);
}

}  // TEST_SUITE
