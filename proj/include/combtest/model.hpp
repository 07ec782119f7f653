#pragma once

#include "combtest/classes.hpp"
#include "combtest/core.hpp"

namespace combtest {

// A class together with the contamination level mu >= 0.
class ProblemInstance {
 public:
  ProblemInstance(ClassSpec spec, double mu);

  const ClassSpec& spec() const { return spec_; }
  double mu() const { return mu_; }
  int n() const { return spec_.n(); }
  int set_size() const { return spec_.set_size(); }

 private:
  ClassSpec spec_;
  double mu_;
};

// One draw of X under the given hypothesis. Under Contaminated the support
// must have size K (and, for families where membership is cheap to check,
// belong to the class).
Observation gaussian_sample(const ProblemInstance& instance, const Hypothesis& hypothesis,
                            SeededRng& rng);

// Whether `s` is a member of the class. Exact for every family.
bool is_member(const ClassSpec& spec, const IndexSet& s);

}  // namespace combtest
