#include "combtest/risk.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "combtest/errors.hpp"
#include "combtest/parallel.hpp"

namespace combtest {

namespace {

constexpr std::uint64_t kNullArm = 0;
constexpr std::uint64_t kAltArm = 1;
constexpr std::uint64_t kSubclassKey = 0x5ab5;

struct Scratch {
  std::vector<double> x;
  std::vector<int> support;
};

auto scratch_for(int n) {
  return [n] { return Scratch{std::vector<double>(static_cast<std::size_t>(n)), {}}; };
}

Estimate summarize(const std::vector<double>& values) {
  const double count = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / count;
  if (values.size() < 2) return {mean, std::numeric_limits<double>::quiet_NaN()};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

std::int64_t count_nonzero(const std::vector<double>& flags) {
  return std::count_if(flags.begin(), flags.end(), [](double v) { return v != 0.0; });
}

void require_trials(std::int64_t trials, std::int64_t minimum, const char* who) {
  if (trials < minimum) {
    throw InvalidArgument(std::string(who) + ": need at least " + std::to_string(minimum) +
                          " trials, got " + std::to_string(trials));
  }
}

double bayes_summand(double log_l, BayesForm form) {
  if (form == BayesForm::truncated_ratio) return log_l >= 0.0 ? 1.0 : std::exp(log_l);
  return 1.0 - 0.5 * std::abs(std::expm1(log_l));
}

// Null draws of f(x) in trial order.
template <typename F>
std::vector<double> null_trials(int n, std::int64_t trials, const SeededRng& rng, int workers, F f) {
  const SeededRng arm = rng.derive(kNullArm);
  return parallel_trials(trials, workers, scratch_for(n), [&](std::int64_t t, Scratch& s) {
    SeededRng stream = arm.derive(static_cast<std::uint64_t>(t));
    gaussian_fill(s.x, 0.0, {}, stream);
    return f(std::span<const double>(s.x));
  });
}

}  // namespace

std::string test_name(TestKind test) {
  switch (test) {
    case TestKind::averaging: return "averaging";
    case TestKind::maximum: return "maximum";
    case TestKind::optimal: return "optimal";
  }
  return "?";
}

TestKind parse_test(const std::string& name) {
  if (name == "averaging") return TestKind::averaging;
  if (name == "maximum") return TestKind::maximum;
  if (name == "optimal") return TestKind::optimal;
  throw InvalidArgument("unknown test '" + name + "' (expected averaging, maximum or optimal)");
}

RiskEstimate RiskEstimate::from_counts(std::int64_t false_alarms, std::int64_t misses,
                                       std::int64_t trials) {
  if (trials <= 0) throw InvalidArgument("RiskEstimate: trials must be positive");
  const double t = static_cast<double>(trials);
  RiskEstimate r;
  r.trials = trials;
  r.type1 = static_cast<double>(false_alarms) / t;
  r.type2 = static_cast<double>(misses) / t;
  r.total = r.type1 + r.type2;
  r.se_type1 = std::sqrt(r.type1 * (1.0 - r.type1) / t);
  r.se_type2 = std::sqrt(r.type2 * (1.0 - r.type2) / t);
  r.se_total = std::sqrt(r.se_type1 * r.se_type1 + r.se_type2 * r.se_type2);
  return r;
}

namespace {

RiskEstimate risk_with_rule(const ProblemInstance& instance, std::int64_t trials,
                            const SeededRng& rng, int workers,
                            const std::function<bool(std::span<const double>)>& reject) {
  const auto& spec = instance.spec();
  const double mu = instance.mu();
  const auto type1 = null_trials(instance.n(), trials, rng, workers,
                                 [&](std::span<const double> x) { return reject(x) ? 1.0 : 0.0; });
  const SeededRng alt = rng.derive(kAltArm);
  const auto type2 = parallel_trials(trials, workers, scratch_for(instance.n()),
                                     [&](std::int64_t t, Scratch& s) {
    SeededRng stream = alt.derive(static_cast<std::uint64_t>(t));
    sample_uniform_into(spec, stream, s.support);
    gaussian_fill(s.x, mu, s.support, stream);
    return reject(s.x) ? 0.0 : 1.0;
  });
  return RiskEstimate::from_counts(count_nonzero(type1), count_nonzero(type2), trials);
}

RiskEstimate risk_with_ratio(const ProblemInstance& instance, const LikelihoodRatio& ratio,
                             std::int64_t trials, const SeededRng& rng, int workers) {
  return risk_with_rule(instance, trials, rng, workers, [&](std::span<const double> x) {
    return ratio.log_ratio(x) > 0.0;
  });
}

}  // namespace

RiskEstimate estimate_risk(TestKind test, const ProblemInstance& instance, std::int64_t trials,
                           const SeededRng& rng, const RiskOptions& options) {
  require_trials(trials, 100, "estimate_risk");
  switch (test) {
    case TestKind::averaging: {
      if (instance.mu() == 0.0) throw InvalidArgument("averaging test refuses mu = 0");
      return risk_with_rule(instance, trials, rng, options.workers, [&](std::span<const double> x) {
        return averaging_test(x, instance).reject;
      });
    }
    case TestKind::maximum: {
      if (!options.emax0) throw InvalidArgument("maximum test needs an emax0 estimate");
      const double emax0 = *options.emax0;
      // Fail on the cap before spawning work.
      if (instance.spec().family() == Family::cliques &&
          !instance.spec().cardinality_if_at_most(options.cap)) {
        throw CapExceeded(instance.spec().cardinality().str(), options.cap);
      }
      return risk_with_rule(instance, trials, rng, options.workers, [&](std::span<const double> x) {
        return maximum_test(x, instance, emax0, options.cap).reject;
      });
    }
    case TestKind::optimal: {
      const LikelihoodRatio ratio(instance.spec(), instance.mu(), options.cap);
      return risk_with_ratio(instance, ratio, trials, rng, options.workers);
    }
  }
  throw InvalidArgument("estimate_risk: unknown test");
}

Estimate estimate_bayes_risk(const LikelihoodRatio& ratio, std::int64_t trials,
                             const SeededRng& rng, int workers, BayesForm form) {
  require_trials(trials, 1, "estimate_bayes_risk");
  if (ratio.mu() == 0.0) return {1.0, 0.0};
  return summarize(null_trials(ratio.n(), trials, rng, workers, [&](std::span<const double> x) {
    return bayes_summand(ratio.log_ratio(x), form);
  }));
}

Estimate estimate_bayes_risk(const ProblemInstance& instance, std::int64_t trials,
                             const SeededRng& rng, const RiskOptions& options) {
  const LikelihoodRatio ratio(instance.spec(), instance.mu(), options.cap);
  return estimate_bayes_risk(ratio, trials, rng, options.workers, options.bayes_form);
}

Estimate estimate_bhattacharyya(const ProblemInstance& instance, std::int64_t trials,
                                const SeededRng& rng, const RiskOptions& options) {
  require_trials(trials, 1, "estimate_bhattacharyya");
  if (instance.mu() == 0.0) return {0.5, 0.0};
  const LikelihoodRatio ratio(instance.spec(), instance.mu(), options.cap);
  return summarize(null_trials(instance.n(), trials, rng, options.workers,
                               [&](std::span<const double> x) {
    return 0.5 * std::exp(0.5 * ratio.log_ratio(x));
  }));
}

EmaxEstimate estimate_emax0(const ClassSpec& spec, std::int64_t trials, const SeededRng& rng,
                            const RiskOptions& options) {
  require_trials(trials, 1, "estimate_emax0");
  if (spec.family() == Family::cliques && !spec.cardinality_if_at_most(options.cap)) {
    throw CapExceeded(spec.cardinality().str(), options.cap);
  }
  const auto e = summarize(null_trials(spec.n(), trials, rng, options.workers,
                                       [&](std::span<const double> x) {
    return max_weight_member(spec, x, options.cap).value;
  }));
  return {e.value, e.std_error, std::sqrt(2.0 * spec.set_size() * spec.log_cardinality())};
}

EmaxEstimate estimate_emax0(const MemberTable& table, std::int64_t trials, const SeededRng& rng,
                            int workers) {
  require_trials(trials, 1, "estimate_emax0");
  if (table.size() == 0) throw InvalidArgument("estimate_emax0: empty class");
  const auto e = summarize(null_trials(table.n(), trials, rng, workers,
                                       [&](std::span<const double> x) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < table.size(); ++i) best = std::max(best, set_sum(x, table.member(i)));
    return best;
  }));
  return {e.value, e.std_error,
          std::sqrt(2.0 * table.set_size() * std::log(static_cast<double>(table.size())))};
}

std::optional<double> interpolate_half_crossing(std::span<const double> mu,
                                                std::span<const double> totals) {
  for (std::size_t i = 0; i + 1 < mu.size() && i + 1 < totals.size(); ++i) {
    if (totals[i] >= 0.5 && totals[i + 1] < 0.5) {
      const double w = (totals[i] - 0.5) / (totals[i] - totals[i + 1]);
      return mu[i] + w * (mu[i + 1] - mu[i]);
    }
  }
  return std::nullopt;
}

RiskCurve scan_critical_mu(const ClassSpec& spec, TestKind test, std::span<const double> mu_grid,
                           std::int64_t trials, const SeededRng& rng, const RiskOptions& options) {
  if (mu_grid.empty()) throw InvalidArgument("scan_critical_mu: empty grid");
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    if (!std::isfinite(mu_grid[i]) || mu_grid[i] < 0.0) {
      throw InvalidArgument("scan_critical_mu: grid values must be finite and >= 0");
    }
    if (i > 0 && !(mu_grid[i] > mu_grid[i - 1])) {
      throw InvalidArgument("scan_critical_mu: grid must be strictly increasing");
    }
  }
  RiskCurve curve;
  curve.mu_grid.assign(mu_grid.begin(), mu_grid.end());

  std::optional<LikelihoodRatio> base;
  if (test == TestKind::optimal) base.emplace(spec, 1.0, options.cap);

  std::vector<double> totals;
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    const ProblemInstance instance(spec, mu_grid[i]);
    const SeededRng point = rng.derive(i);
    RiskEstimate estimate;
    if (base) {
      require_trials(trials, 100, "estimate_risk");
      estimate = risk_with_ratio(instance, base->with_mu(mu_grid[i]), trials, point, options.workers);
    } else {
      estimate = estimate_risk(test, instance, trials, point, options);
    }
    totals.push_back(estimate.total);
    curve.estimates.push_back(estimate);
  }
  curve.critical_mu = interpolate_half_crossing(curve.mu_grid, totals);
  return curve;
}

bool is_symmetric_family(Family family) {
  switch (family) {
    case Family::disjoint_sets:
    case Family::k_sets:
    case Family::stars:
    case Family::perfect_matchings:
    case Family::cliques:
      return true;
    case Family::spanning_trees:
    case Family::grid_squares:
      return false;
  }
  return false;
}

MonotonicityReport monotonicity_check(const ClassSpec& spec, double subclass_fraction,
                                      std::span<const double> mu_grid, std::int64_t trials,
                                      const SeededRng& rng, const RiskOptions& options) {
  if (!is_symmetric_family(spec.family())) {
    throw InvalidArgument("monotonicity_check: " + family_name(spec.family()) +
                          " is not a symmetric class");
  }
  if (!(subclass_fraction > 0.0 && subclass_fraction <= 1.0)) {
    throw InvalidArgument("monotonicity_check: subclass fraction must lie in (0, 1]");
  }
  auto full = std::make_shared<const MemberTable>(enumerate_members(spec, options.cap));
  const std::size_t total = full->size();
  const auto size = static_cast<std::size_t>(std::floor(subclass_fraction * static_cast<double>(total) + 1e-9));
  if (size == 0) throw InvalidArgument("monotonicity_check: subclass would be empty");

  // Partial Fisher-Yates over member positions.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SeededRng pick = rng.derive(kSubclassKey);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(pick.below(total - i));
    std::swap(order[i], order[j]);
  }
  std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
  std::sort(chosen.begin(), chosen.end());

  MonotonicityReport report{spec, {}, total, {}};
  auto sub = std::make_shared<MemberTable>(spec.n(), spec.set_size());
  sub->reserve(size);
  for (std::size_t i : chosen) {
    sub->push_back(full->member(i));
    report.subclass.push_back(full->at(i));
  }
  const std::shared_ptr<const MemberTable> sub_table = sub;

  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    const double mu = mu_grid[i];
    const SeededRng point = rng.derive(i);
    MonotonicityRow row;
    row.mu = mu;
    row.subclass = estimate_bayes_risk(LikelihoodRatio(sub_table, mu), trials, point.derive(0),
                                       options.workers, options.bayes_form);
    row.full = estimate_bayes_risk(LikelihoodRatio(full, mu), trials, point.derive(1),
                                   options.workers, options.bayes_form);
    const double se = std::hypot(row.subclass.std_error, row.full.std_error);
    row.violated = row.subclass.value > row.full.value + 3.0 * se;
    report.rows.push_back(row);
  }
  return report;
}

NonmonotonicityReport nonmonotonicity_demo(int k, double epsilon, std::int64_t trials,
                                           const SeededRng& rng, const RiskOptions& options,
                                           std::optional<double> mu) {
  if (k < 2 || k > 3000) throw InvalidArgument("nonmonotonicity_demo: need 2 <= K <= 3000");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("nonmonotonicity_demo: epsilon must lie in (0, 1)");
  }
  const double side = 4.0 * (k + 1) * epsilon * epsilon;
  if (side <= 1.0) {
    throw InvalidArgument("nonmonotonicity_demo: 4(K+1) eps^2 <= 1 leaves mu undefined");
  }
  require_trials(trials, 100, "nonmonotonicity_demo");

  NonmonotonicityReport r;
  r.set_size_k = k;
  r.epsilon = epsilon;
  const int w = k + 1;
  r.n = w * w;
  r.side_lhs = std::sqrt(std::log(side) / w);
  r.side_rhs = std::sqrt((8.0 / k) * std::log(2.0 / epsilon));
  r.side_condition = r.side_lhs >= r.side_rhs;
  r.mu_from_epsilon = !mu.has_value();
  r.mu = mu.value_or(r.side_lhs);
  if (!std::isfinite(r.mu) || r.mu < 0.0) throw InvalidArgument("nonmonotonicity_demo: need mu >= 0");
  r.size_a = static_cast<std::size_t>(w);
  r.size_b = static_cast<std::size_t>(r.n - k);
  r.size_c = r.size_a + r.size_b;

  const double m = r.mu;
  const double shift = w * m * m / 2.0;
  const double log_na = std::log(static_cast<double>(r.size_a));
  const double log_nc = std::log(static_cast<double>(r.size_c));

  // A_j = {j, j + w, ..., j + k w} (1-based), so x_{A_j} is a column sum.
  auto column_lse = [&](std::span<const double> x, StreamingLogSumExp& lse) {
    std::vector<double> cols(static_cast<std::size_t>(w), 0.0);
    for (int r0 = 0; r0 < w; ++r0) {
      for (int c = 0; c < w; ++c) cols[static_cast<std::size_t>(c)] += x[static_cast<std::size_t>(r0 * w + c)];
    }
    for (double s : cols) lse.add(m * s);
  };
  auto log_la = [&](std::span<const double> x) {
    StreamingLogSumExp lse;
    column_lse(x, lse);
    return lse.value() - log_na - shift;
  };
  // B_i = {1..K, i}: x_{B_i} = x_1 + ... + x_K + x_i.
  auto log_lc = [&](std::span<const double> x) {
    StreamingLogSumExp lse;
    column_lse(x, lse);
    double head = 0.0;
    for (int i = 0; i < k; ++i) head += x[static_cast<std::size_t>(i)];
    for (int i = k; i < r.n; ++i) lse.add(m * (head + x[static_cast<std::size_t>(i)]));
    return lse.value() - log_nc - shift;
  };

  if (m == 0.0) {
    r.risk_a = {1.0, 0.0};
    r.risk_c = {1.0, 0.0};
  } else {
    r.risk_a = summarize(null_trials(r.n, trials, rng.derive(0), options.workers,
                                     [&](std::span<const double> x) {
      return bayes_summand(log_la(x), options.bayes_form);
    }));
    r.risk_c = summarize(null_trials(r.n, trials, rng.derive(2), options.workers,
                                     [&](std::span<const double> x) {
      return bayes_summand(log_lc(x), options.bayes_form);
    }));
  }

  // Witness: reject iff x_1 + ... + x_K > mu K / 2. Only those K
  // coordinates matter, and every member of B shifts all of them.
  const double threshold = m * k / 2.0;
  const SeededRng witness = rng.derive(1);
  auto head_trials = [&](std::uint64_t arm, double shift_each) {
    const SeededRng base = witness.derive(arm);
    return parallel_trials(trials, options.workers, [] { return 0; }, [&](std::int64_t t, int&) {
      SeededRng stream = base.derive(static_cast<std::uint64_t>(t));
      double sum = 0.0;
      for (int i = 0; i < k; ++i) sum += stream.normal() + shift_each;
      return sum > threshold ? 1.0 : 0.0;
    });
  };
  const auto alarms = head_trials(kNullArm, 0.0);
  const auto hits = head_trials(kAltArm, m);
  r.witness_b = RiskEstimate::from_counts(count_nonzero(alarms),
                                          trials - count_nonzero(hits), trials);

  r.gap = r.risk_a.value - r.risk_c.value;
  r.gap_se = std::hypot(r.risk_a.std_error, r.risk_c.std_error);
  return r;
}

}  // namespace combtest
