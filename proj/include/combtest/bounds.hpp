#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "combtest/classes.hpp"
#include "combtest/risk.hpp"
#include "combtest/rng.hpp"

namespace combtest {

enum class BoundDirection {
  lower_bound_on_risk,
  upper_bound_on_risk,
  mu_threshold_for_risk_le_delta,
  mu_threshold_for_risk_ge_delta,
  upper_bound_on_covering_number,
};

std::string direction_name(BoundDirection direction);

// A named threshold or risk bound with its inputs. `value` is the primary
// output; `outputs` holds secondary numbers (e.g. individual terms).
struct BoundReport {
  std::string name;
  std::string formula;
  std::vector<std::pair<std::string, double>> inputs;
  double value = 0.0;
  BoundDirection direction = BoundDirection::mu_threshold_for_risk_le_delta;
  bool degenerate = false;
  std::string note;
  std::vector<std::pair<std::string, double>> outputs;
  std::map<std::string, bool> flags;
};

// sqrt((8 n / K^2) log(2 / delta)); risk of the averaging test <= delta above it.
double averaging_threshold(double n, double k, double delta);
// emax0 / K + 2 sqrt((2 / K) log(2 / delta)); maximum-test risk <= delta above it.
double max_test_threshold(double emax0, double k, double delta);
// sqrt((4 / K) log(4 / 3)); R* >= 1/2 below it, for every class.
double universal_threshold(double k);
// max(0, 1 - sqrt(mgf - 1) / 2) where mgf = E exp(mu^2 Z).
double pairs_risk_lower_bound(double mgf);
// sqrt((1 / K) log(1 + 4 n (1 - delta)^2 / K)); R* >= delta below it.
double symmetric_threshold(double n, double k, double delta);
// sqrt(log(1 + n log(1 + 4 (1 - delta)^2) / K^2)); R* >= delta below it.
double negass_threshold(double n, double k, double delta);

struct CliqueBounds {
  double upper_mu;  // R* <= delta at or above
  double lower_mu;  // R* >= 1/2 at or below
};

// Requires 2 <= k <= sqrt(m log 2 / e).
CliqueBounds clique_bounds(int m, int k, double delta);

// min(sqrt(log(M/16) / K), 8 log(sqrt(3)/8) / sqrt(K - t^2/2)): R* >= 1/4
// below it. The second term is reported as-is and flagged when non-positive.
BoundReport random_subclass_bound(double k, double m_subclass, double t);

// e (V + 1) (2 e n / t^2)^V.
double vc_cover_bound(double n, double vc_dimension, double t);

// Greedy t-cover in table order: a member joins the cover when no earlier
// center lies within distance `radius`. Returns member positions.
std::vector<std::size_t> greedy_cover(const MemberTable& table, double radius);
std::vector<IndexSet> greedy_cover(const ClassSpec& spec, double radius,
                                   std::uint64_t cap = kDefaultEnumerationCap);

// Size of a greedy maximal t-separated subset (pairwise distance >= t).
std::size_t packing_estimate(const MemberTable& table, double t);
std::size_t packing_estimate(const ClassSpec& spec, double t,
                             std::uint64_t cap = kDefaultEnumerationCap);

// Largest canonical distance between two members.
double diameter(const MemberTable& table);

struct DudleyResult {
  double value = 0.0;
  double diameter = 0.0;
  std::vector<double> radii;
  std::vector<std::size_t> cover_sizes;
};

// c * integral_0^diam sqrt(log N(t)) dt with greedy cover sizes on a 64-point
// left Riemann grid. Greedy sizes overestimate N(t), so this sits above the
// value with exact covering numbers.
DudleyResult dudley_bound(const MemberTable& table, double c = 1.0);
DudleyResult dudley_bound(const ClassSpec& spec, double c = 1.0,
                          std::uint64_t cap = kDefaultEnumerationCap);

struct TypeOneBound {
  BoundReport report;
  std::vector<IndexSet> cover;
  EmaxEstimate cover_emax;
};

// mu >= (2/K) E_0 max_{S in A} X_S + sqrt(32 log(2/delta) / K) with A the
// greedy sqrt(K)/2-cover; above it the optimal test has type I error <= delta.
TypeOneBound type1_bound_threshold(const ClassSpec& spec, double delta, std::int64_t trials,
                                   const SeededRng& rng, const RiskOptions& options = {});

// Closed-form bound by name for the CLI: averaging, maximum, universal,
// pairs, symmetric, negass, cliques, random_subclass, vc.
BoundReport evaluate_bound(const std::string& name, const std::map<std::string, double>& params);
std::vector<std::string> bound_names();

}  // namespace combtest
