#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "combtest/detectors.hpp"
#include "oracles.hpp"

using namespace combtest;

namespace {

std::vector<double> normals(SeededRng& rng, int n, double scale = 1.0) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = scale * rng.normal();
  return x;
}

double relative_error(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_SUITE("detectors") {

TEST_CASE("averaging test examples") {
  const ProblemInstance inst(ClassSpec::k_sets(10, 3), 1.0);
  const std::vector<double> zeros(10, 0.0);
  const auto d = averaging_test(zeros, inst);
  CHECK_FALSE(d.reject);
  CHECK(d.statistic == 0.0);
  CHECK(d.threshold == 1.5);

  const ProblemInstance one(ClassSpec::k_sets(1, 1), 2.0);
  const auto r = averaging_test(Observation({3.0}), one);
  CHECK(r.reject);
  CHECK(r.statistic == 3.0);
  CHECK(r.threshold == 1.0);
  // Strict inequality at the threshold.
  CHECK_FALSE(averaging_test(Observation({1.0}), one).reject);

  CHECK_THROWS_AS(averaging_test(zeros, ProblemInstance(ClassSpec::k_sets(10, 3), 0.0)), InvalidArgument);
  CHECK_THROWS_AS(averaging_test(std::vector<double>(9, 0.0), inst), DimensionError);
}

TEST_CASE("maximum test examples") {
  const ProblemInstance stars(ClassSpec::stars(3), 1.0);
  const std::vector<double> x = {1, 2, 3};
  const auto d = maximum_test(x, stars, 0.5);
  CHECK(d.statistic == 5.0);
  CHECK(d.threshold == doctest::Approx(1.25));
  CHECK(d.reject);

  const ProblemInstance big(ClassSpec::k_sets(6, 2), 5.0);
  CHECK_FALSE(maximum_test(std::vector<double>(6, 0.0), big, 1.0).reject);
  // Rejects on equality with the threshold.
  const ProblemInstance eq(ClassSpec::k_sets(3, 1), 2.0);
  CHECK(maximum_test(std::vector<double>{1.5, 0.0, 0.0}, eq, 1.0).reject);

  CHECK_THROWS_AS(maximum_test(x, stars, -1.0), InvalidArgument);
  CHECK_THROWS_AS(maximum_test(x, stars, NAN), InvalidArgument);
  const ProblemInstance cliques(ClassSpec::cliques(200, 10), 1.0);
  CHECK_THROWS_AS(maximum_test(std::vector<double>(static_cast<std::size_t>(cliques.n()), 0.0), cliques, 1.0),
                  CapExceeded);
}

TEST_CASE("log likelihood ratio is zero at mu = 0 and the optimal test accepts") {
  SeededRng rng(1);
  const ProblemInstance inst(ClassSpec::k_sets(6, 2), 0.0);
  for (int i = 0; i < 20; ++i) {
    const Observation x(normals(rng, 6, 5.0));
    CHECK(log_likelihood_ratio(x, inst) == 0.0);
    CHECK_FALSE(optimal_test(x, inst).reject);
  }
}

TEST_CASE("single member log likelihood ratio is exact") {
  SeededRng rng(2);
  const ProblemInstance inst(ClassSpec::disjoint_sets(1, 4), 1.3);
  for (int i = 0; i < 20; ++i) {
    const Observation x(normals(rng, 4));
    double xs = 0.0;
    for (double v : x.values()) xs += v;
    CHECK(log_likelihood_ratio(x, inst) == doctest::Approx(1.3 * xs - 4 * 1.3 * 1.3 / 2).epsilon(1e-13));
  }
}

TEST_CASE("zero observation has log L = -K mu^2 / 2 and is accepted") {
  const ProblemInstance inst(ClassSpec::cliques(6, 3), 0.9);
  const Observation x(std::vector<double>(15, 0.0));
  CHECK(log_likelihood_ratio(x, inst) == doctest::Approx(-3 * 0.81 / 2));
  CHECK_FALSE(optimal_test(x, inst).reject);
}

TEST_CASE("log likelihood ratio agrees with a 50-digit oracle") {
  SeededRng rng(3);
  const auto members = oracle::subsets(6, 2);
  const ProblemInstance inst(ClassSpec::k_sets(6, 2), 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto x = normals(rng, 6);
    const double want = oracle::log_likelihood_ratio_50(x, members, 1.0);
    CHECK(relative_error(log_likelihood_ratio(Observation(x), inst), want) < 1e-12);
  }
}

TEST_CASE("log likelihood ratio stays finite for huge exponents") {
  SeededRng rng(4);
  const auto members = oracle::subsets(6, 2);
  for (int i = 0; i < 100; ++i) {
    const double mu = 50.0 * rng.uniform();
    const auto x = normals(rng, 6, 60.0);
    const LikelihoodRatio ratio(ClassSpec::k_sets(6, 2), mu);
    const double got = ratio.log_ratio(x);
    REQUIRE(std::isfinite(got));
    CHECK(relative_error(got, oracle::log_likelihood_ratio_50(x, members, mu)) < 1e-9);
  }
}

TEST_CASE("optimal test on two blocks matches the two-term formula") {
  SeededRng rng(5);
  const ProblemInstance inst(ClassSpec::disjoint_sets(2, 2), 1.0);
  const LikelihoodRatio ratio(inst.spec(), 1.0);
  int mismatches = 0;
  for (int i = 0; i < 100000; ++i) {
    const auto x = normals(rng, 4);
    const double l = 0.5 * (std::exp(x[0] + x[1] - 1.0) + std::exp(x[2] + x[3] - 1.0));
    mismatches += optimal_test(x, ratio).reject != (l > 1.0);
  }
  CHECK(mismatches == 0);
}

TEST_CASE("all tests are monotone in every coordinate") {
  SeededRng rng(6);
  const auto spec = ClassSpec::stars(5);
  const ProblemInstance inst(spec, 0.8);
  const LikelihoodRatio ratio(spec, 0.8);
  for (int rep = 0; rep < 300; ++rep) {
    auto x = normals(rng, spec.n());
    const auto before_avg = averaging_test(x, inst).statistic;
    const auto before_max = maximum_test(x, inst, 2.0).statistic;
    const auto before_opt = ratio.log_ratio(x);
    const auto i = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(spec.n())));
    x[i] += 2.0 * rng.uniform();
    CHECK(averaging_test(x, inst).statistic >= before_avg);
    CHECK(maximum_test(x, inst, 2.0).statistic >= before_max);
    CHECK(ratio.log_ratio(x) >= before_opt);
  }
}

TEST_CASE("decisions are deterministic") {
  SeededRng rng(7);
  const ProblemInstance inst(ClassSpec::k_sets(8, 3), 1.1);
  const Observation x(normals(rng, 8));
  const auto a = optimal_test(x, inst);
  const auto b = optimal_test(x, inst);
  CHECK(a.reject == b.reject);
  CHECK(a.statistic == b.statistic);
}

TEST_CASE("likelihood ratio has null mean 1") {
  const auto spec = ClassSpec::k_sets(6, 2);
  const LikelihoodRatio ratio(spec, 0.8);
  SeededRng rng(8);
  const int trials = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double l = std::exp(ratio.log_ratio(normals(rng, 6)));
    sum += l;
    sq += l * l;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sq / trials - mean * mean) / trials);
  CHECK(std::abs(mean - 1.0) < 3.0 * se);
}

TEST_CASE("direct layouts agree with the enumerated table") {
  SeededRng rng(9);
  for (const auto& spec : {ClassSpec::stars(7), ClassSpec::disjoint_sets(5, 3), ClassSpec::spanning_trees(5),
                           ClassSpec::grid_squares(4, 2), ClassSpec::k_sets(9, 4), ClassSpec::k_sets(12, 1),
                           ClassSpec::k_sets(10, 10)}) {
    const auto table = std::make_shared<const MemberTable>(enumerate_members(spec));
    const LikelihoodRatio direct(spec, 0.9);
    const LikelihoodRatio tabled(table, 0.9);
    CHECK(direct.class_size() == table->size());
    for (int i = 0; i < 50; ++i) {
      const auto x = normals(rng, spec.n());
      CHECK(direct.log_ratio(x) == doctest::Approx(tabled.log_ratio(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("k-sets likelihood ratio needs no enumeration") {
  const auto spec = ClassSpec::k_sets(1000, 50);
  const LikelihoodRatio ratio(spec, 0.4);
  CHECK(ratio.class_size() == std::numeric_limits<std::size_t>::max());
  SeededRng rng(11);
  const auto x = normals(rng, spec.n());
  CHECK(std::isfinite(ratio.log_ratio(x)));
  // All-equal coordinates: every member has the same sum.
  const std::vector<double> flat(1000, 0.25);
  CHECK(ratio.log_ratio(flat) == doctest::Approx(0.4 * 50 * 0.25 - 50 * 0.16 / 2).epsilon(1e-11));
}

TEST_CASE("with_mu shares the class and rebuilds the ratio") {
  SeededRng rng(10);
  const auto spec = ClassSpec::k_sets(7, 3);
  const LikelihoodRatio base(spec, 1.0);
  for (double mu : {0.0, 0.3, 2.5}) {
    const auto moved = base.with_mu(mu);
    const LikelihoodRatio fresh(spec, mu);
    CHECK(moved.mu() == mu);
    const auto x = normals(rng, 7);
    CHECK(moved.log_ratio(x) == fresh.log_ratio(x));
  }
  const LikelihoodRatio zero(spec, 0.0);
  CHECK_THROWS_AS(zero.with_mu(1.0), InvalidArgument);
  CHECK_THROWS_AS(LikelihoodRatio(ClassSpec::cliques(200, 10), 1.0), CapExceeded);
}

TEST_CASE("streaming log-sum-exp handles rescaling") {
  StreamingLogSumExp acc;
  acc.add(-1000.0);
  acc.add(1000.0);
  acc.add(1000.0);
  CHECK(acc.value() == doctest::Approx(1000.0 + std::log(2.0)));
  StreamingLogSumExp empty;
  CHECK(std::isinf(empty.value()));
}

}  // TEST_SUITE
