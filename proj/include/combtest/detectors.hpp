#pragma once

#include <limits>
#include <memory>
#include <span>

#include "combtest/classes.hpp"
#include "combtest/model.hpp"

namespace combtest {

// Outcome of one of the three decision rules. reject = true rejects H0.
struct Decision {
  bool reject;
  double statistic;
  double threshold;
};

// Rejects iff sum_i x_i > mu K / 2. Refuses mu = 0.
Decision averaging_test(std::span<const double> x, const ProblemInstance& instance);
Decision averaging_test(const Observation& x, const ProblemInstance& instance);

// Rejects iff max_S x_S >= (mu K + emax0) / 2, where emax0 is any upper
// estimate of E_0 max_S X_S.
Decision maximum_test(std::span<const double> x, const ProblemInstance& instance, double emax0,
                      std::uint64_t cap = kDefaultEnumerationCap);
Decision maximum_test(const Observation& x, const ProblemInstance& instance, double emax0,
                      std::uint64_t cap = kDefaultEnumerationCap);

// log L(x) = logsumexp_S(mu x_S) - log N - K mu^2 / 2 for a fixed class and
// mu. Built once (the class is enumerated into a member table unless the
// family has a direct form) and then evaluated on many observations;
// log_ratio() is const and safe to call concurrently.
class LikelihoodRatio {
 public:
  LikelihoodRatio(const ClassSpec& spec, double mu, std::uint64_t cap = kDefaultEnumerationCap);
  LikelihoodRatio(std::shared_ptr<const MemberTable> table, double mu);

  double log_ratio(std::span<const double> x) const;

  // class_size() saturates at SIZE_MAX for k-sets beyond it.
  // Same class at a different mu, sharing the member table. Requires this
  // object to have been built at mu > 0 (or from a table).
  LikelihoodRatio with_mu(double mu) const;

  int n() const { return n_; }
  int set_size() const { return k_; }
  double mu() const { return mu_; }
  std::size_t class_size() const { return class_size_; }

 private:
  enum class Layout { table, blocks, stars, k_subsets };

  Layout layout_;
  int n_;
  int k_;
  double mu_;
  std::size_t class_size_;
  double log_class_size_ = 0.0;
  int stars_m_ = 0;
  bool prepared_ = true;
  std::shared_ptr<const MemberTable> table_;
};

double log_likelihood_ratio(const Observation& x, const ProblemInstance& instance,
                            std::uint64_t cap = kDefaultEnumerationCap);

// Rejects iff log L(x) > 0; L = 1 accepts.
Decision optimal_test(const Observation& x, const ProblemInstance& instance,
                      std::uint64_t cap = kDefaultEnumerationCap);
Decision optimal_test(std::span<const double> x, const LikelihoodRatio& ratio);

// Running log(sum exp(v)) that rescales when a new maximum arrives.
class StreamingLogSumExp {
 public:
  void add(double v);
  double value() const;

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_sum_ = 0.0;
};

}  // namespace combtest
