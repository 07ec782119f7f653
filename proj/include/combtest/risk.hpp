#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "combtest/classes.hpp"
#include "combtest/detectors.hpp"
#include "combtest/model.hpp"

namespace combtest {

enum class TestKind { averaging, maximum, optimal };

std::string test_name(TestKind test);
TestKind parse_test(const std::string& name);

// Per-draw summand of the H0-only Bayes risk estimator. Both have mean R*;
// truncated_ratio (min(L, 1)) is bounded and has much smaller variance.
enum class BayesForm { absolute_deviation, truncated_ratio };

struct RiskOptions {
  int workers = 1;
  std::uint64_t cap = kDefaultEnumerationCap;
  // Upper estimate of E_0 max_S X_S; required by the maximum test.
  std::optional<double> emax0;
  BayesForm bayes_form = BayesForm::absolute_deviation;
};

// Monte Carlo estimate of R(f) = P_0{f = 1} + (1/N) sum_S P_S{f = 0}.
// The two arms are estimated from independent draws, so
// se_total^2 = se_type1^2 + se_type2^2.
struct RiskEstimate {
  double type1 = 0.0;
  double type2 = 0.0;
  double total = 0.0;
  double se_type1 = 0.0;
  double se_type2 = 0.0;
  double se_total = 0.0;
  std::int64_t trials = 0;

  static RiskEstimate from_counts(std::int64_t false_alarms, std::int64_t misses, std::int64_t trials);
};

// Sample mean with its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Type I from `trials` null draws; type II from `trials` draws that each
// pick S uniformly from C and then sample X ~ P_S.
RiskEstimate estimate_risk(TestKind test, const ProblemInstance& instance, std::int64_t trials,
                           const SeededRng& rng, const RiskOptions& options = {});

// Bayes risk R* = 1 - E_0|L - 1| / 2 from null draws only.
Estimate estimate_bayes_risk(const ProblemInstance& instance, std::int64_t trials,
                             const SeededRng& rng, const RiskOptions& options = {});
Estimate estimate_bayes_risk(const LikelihoodRatio& ratio, std::int64_t trials,
                             const SeededRng& rng, int workers = 1,
                             BayesForm form = BayesForm::absolute_deviation);

// Bhattacharyya affinity rho = E_0 sqrt(L) / 2.
Estimate estimate_bhattacharyya(const ProblemInstance& instance, std::int64_t trials,
                                const SeededRng& rng, const RiskOptions& options = {});

struct EmaxEstimate {
  double emax = 0.0;
  double std_error = 0.0;
  // sqrt(2 K log N), valid for every class.
  double analytic_cap = 0.0;
};

// Monte Carlo mean of the exact max_S X_S under H0.
EmaxEstimate estimate_emax0(const ClassSpec& spec, std::int64_t trials, const SeededRng& rng,
                            const RiskOptions& options = {});
// Same over an explicit finite class.
EmaxEstimate estimate_emax0(const MemberTable& table, std::int64_t trials, const SeededRng& rng,
                            int workers = 1);

struct RiskCurve {
  std::vector<double> mu_grid;
  std::vector<RiskEstimate> estimates;
  // Linear interpolation at the first grid interval where the total risk
  // falls from >= 1/2 to < 1/2.
  std::optional<double> critical_mu;
};

std::optional<double> interpolate_half_crossing(std::span<const double> mu,
                                                std::span<const double> totals);

// estimate_risk at each grid point, each on its own stream derived from the
// point index. Totals are reported raw (no smoothing).
RiskCurve scan_critical_mu(const ClassSpec& spec, TestKind test, std::span<const double> mu_grid,
                           std::int64_t trials, const SeededRng& rng, const RiskOptions& options = {});

struct MonotonicityRow {
  double mu = 0.0;
  Estimate subclass;  // R*_A with A's own likelihood ratio
  Estimate full;      // R*_C
  bool violated = false;
};

struct MonotonicityReport {
  ClassSpec spec;
  std::vector<IndexSet> subclass;
  std::size_t class_size = 0;
  std::vector<MonotonicityRow> rows;
};

// Families accepted by monotonicity_check.
bool is_symmetric_family(Family family);

// Compares R*_A and R*_C for a uniform random subclass A of
// floor(fraction * N) members. violated = R*_A > R*_C + 3 combined SE.
MonotonicityReport monotonicity_check(const ClassSpec& spec, double subclass_fraction,
                                      std::span<const double> mu_grid, std::int64_t trials,
                                      const SeededRng& rng, const RiskOptions& options = {});

struct NonmonotonicityReport {
  int set_size_k = 0;  // K; members of A, B and C have K + 1 elements
  double epsilon = 0.0;
  int n = 0;
  double mu = 0.0;
  bool mu_from_epsilon = true;
  // sqrt(log(4(K+1) eps^2) / (K+1)) >= sqrt((8/K) log(2/eps))
  bool side_condition = false;
  double side_lhs = 0.0;
  double side_rhs = 0.0;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  std::size_t size_c = 0;
  Estimate risk_a;         // R*_A
  RiskEstimate witness_b;  // averaging test on coordinates 1..K against B
  Estimate risk_c;         // R*_C
  double gap = 0.0;        // R*_A - R*_C
  double gap_se = 0.0;
};

// The subclass construction where A = K+1 disjoint sets of size K+1 (the
// columns of a (K+1) x (K+1) grid), B = {{1..K, i} : K < i <= n} and
// C = A ∪ B. mu defaults to sqrt(log(4(K+1) eps^2) / (K+1)).
NonmonotonicityReport nonmonotonicity_demo(int k, double epsilon, std::int64_t trials,
                                           const SeededRng& rng, const RiskOptions& options = {},
                                           std::optional<double> mu = std::nullopt);

}  // namespace combtest
