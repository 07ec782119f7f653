#include "combtest/detectors.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <vector>

namespace combtest {

namespace {

void check_dimension(std::size_t size, int n, const char* who) {
  if (static_cast<int>(size) != n) {
    throw DimensionError(std::string(who) + ": observation has dimension " + std::to_string(size) +
                         ", class has n = " + std::to_string(n));
  }
}

// log e_k(exp(mu x_1), ..., exp(mu x_n)), the log of the sum of exp(mu x_S)
// over all k-subsets S, by the usual recurrence carried in log space.
double log_elementary_symmetric(std::span<const double> x, double mu, int k) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> le(static_cast<std::size_t>(k + 1), kNegInf);
  le[0] = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = mu * x[i];
    const int top = std::min<int>(k, static_cast<int>(i) + 1);
    for (int j = top; j >= 1; --j) {
      const double a = le[static_cast<std::size_t>(j)];
      const double b = w + le[static_cast<std::size_t>(j - 1)];
      if (b == kNegInf) continue;
      le[static_cast<std::size_t>(j)] = a >= b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
    }
  }
  return le[static_cast<std::size_t>(k)];
}

}  // namespace

void StreamingLogSumExp::add(double v) {
  if (v <= max_) {
    scaled_sum_ += std::exp(v - max_);
  } else {
    scaled_sum_ = scaled_sum_ * std::exp(max_ - v) + 1.0;
    max_ = v;
  }
}

double StreamingLogSumExp::value() const { return max_ + std::log(scaled_sum_); }

Decision averaging_test(std::span<const double> x, const ProblemInstance& instance) {
  check_dimension(x.size(), instance.n(), "averaging_test");
  if (instance.mu() == 0.0) {
    throw InvalidArgument("averaging_test: mu = 0 makes the threshold 0; refused");
  }
  double sum = 0.0;
  for (double v : x) sum += v;
  const double threshold = instance.mu() * instance.set_size() / 2.0;
  return {sum > threshold, sum, threshold};
}

Decision averaging_test(const Observation& x, const ProblemInstance& instance) {
  return averaging_test(x.values(), instance);
}

Decision maximum_test(std::span<const double> x, const ProblemInstance& instance, double emax0,
                      std::uint64_t cap) {
  if (!std::isfinite(emax0) || emax0 < 0.0) {
    throw InvalidArgument("maximum_test: emax0 must be a finite nonnegative upper estimate");
  }
  const double statistic = max_weight_member(instance.spec(), x, cap).value;
  const double threshold = (instance.mu() * instance.set_size() + emax0) / 2.0;
  return {statistic >= threshold, statistic, threshold};
}

Decision maximum_test(const Observation& x, const ProblemInstance& instance, double emax0,
                      std::uint64_t cap) {
  return maximum_test(x.values(), instance, emax0, cap);
}

LikelihoodRatio::LikelihoodRatio(const ClassSpec& spec, double mu, std::uint64_t cap)
    : n_(spec.n()), k_(spec.set_size()), mu_(mu) {
  if (!std::isfinite(mu) || mu < 0.0) throw InvalidArgument("LikelihoodRatio: need mu >= 0");
  // L is identically 1 at mu = 0; nothing to enumerate.
  if (mu == 0.0) {
    layout_ = Layout::blocks;
    class_size_ = 0;
    prepared_ = false;
    return;
  }
  switch (spec.family()) {
    case Family::disjoint_sets:
      layout_ = Layout::blocks;
      class_size_ = static_cast<std::size_t>(spec.first());
      break;
    case Family::stars:
      layout_ = Layout::stars;
      stars_m_ = spec.first();
      class_size_ = static_cast<std::size_t>(spec.first());
      break;
    case Family::k_sets:
      layout_ = Layout::k_subsets;
      class_size_ = static_cast<std::size_t>(
          spec.cardinality_if_at_most(std::numeric_limits<std::size_t>::max())
              .value_or(std::numeric_limits<std::size_t>::max()));
      log_class_size_ = spec.log_cardinality();
      return;
    default:
      layout_ = Layout::table;
      table_ = std::make_shared<const MemberTable>(enumerate_members(spec, cap));
      class_size_ = table_->size();
      break;
  }
  log_class_size_ = std::log(static_cast<double>(class_size_));
}

LikelihoodRatio::LikelihoodRatio(std::shared_ptr<const MemberTable> table, double mu)
    : layout_(Layout::table), n_(table->n()), k_(table->set_size()), mu_(mu),
      class_size_(table->size()), table_(std::move(table)) {
  if (!std::isfinite(mu) || mu < 0.0) throw InvalidArgument("LikelihoodRatio: need mu >= 0");
  if (class_size_ == 0) throw InvalidArgument("LikelihoodRatio: empty class");
  log_class_size_ = std::log(static_cast<double>(class_size_));
}

LikelihoodRatio LikelihoodRatio::with_mu(double mu) const {
  if (!std::isfinite(mu) || mu < 0.0) throw InvalidArgument("LikelihoodRatio: need mu >= 0");
  if (!prepared_ && mu > 0.0) {
    throw InvalidArgument("LikelihoodRatio::with_mu: built at mu = 0 without the class");
  }
  LikelihoodRatio copy = *this;
  copy.mu_ = mu;
  return copy;
}

double LikelihoodRatio::log_ratio(std::span<const double> x) const {
  check_dimension(x.size(), n_, "log_likelihood_ratio");
  if (mu_ == 0.0) return 0.0;
  StreamingLogSumExp lse;
  switch (layout_) {
    case Layout::table:
      for (std::size_t i = 0; i < class_size_; ++i) lse.add(mu_ * set_sum(x, table_->member(i)));
      break;
    case Layout::blocks:
      for (std::size_t b = 0; b < class_size_; ++b) {
        double sum = 0.0;
        for (int i = 0; i < k_; ++i) sum += x[b * static_cast<std::size_t>(k_) + static_cast<std::size_t>(i)];
        lse.add(mu_ * sum);
      }
      break;
    case Layout::stars: {
      std::vector<double> incident(static_cast<std::size_t>(stars_m_ + 1), 0.0);
      std::size_t e = 0;
      for (int u = 1; u <= stars_m_; ++u) {
        for (int v = u + 1; v <= stars_m_; ++v, ++e) {
          incident[static_cast<std::size_t>(u)] += x[e];
          incident[static_cast<std::size_t>(v)] += x[e];
        }
      }
      for (int c = 1; c <= stars_m_; ++c) lse.add(mu_ * incident[static_cast<std::size_t>(c)]);
      break;
    }
    case Layout::k_subsets:
      return log_elementary_symmetric(x, mu_, k_) - log_class_size_ - k_ * mu_ * mu_ / 2.0;
  }
  return lse.value() - log_class_size_ - k_ * mu_ * mu_ / 2.0;
}

double log_likelihood_ratio(const Observation& x, const ProblemInstance& instance,
                            std::uint64_t cap) {
  check_dimension(x.values().size(), instance.n(), "log_likelihood_ratio");
  if (instance.mu() == 0.0) return 0.0;
  return LikelihoodRatio(instance.spec(), instance.mu(), cap).log_ratio(x.values());
}

Decision optimal_test(std::span<const double> x, const LikelihoodRatio& ratio) {
  const double log_l = ratio.log_ratio(x);
  return {log_l > 0.0, log_l, 0.0};
}

Decision optimal_test(const Observation& x, const ProblemInstance& instance, std::uint64_t cap) {
  const double log_l = log_likelihood_ratio(x, instance, cap);
  return {log_l > 0.0, log_l, 0.0};
}

}  // namespace combtest
