#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "combtest/errors.hpp"
#include "combtest/rng.hpp"

namespace combtest {

// A subset of {1, ..., n}, stored as strictly increasing 1-based indices.
class IndexSet {
 public:
  IndexSet() = default;
  // Throws InvalidArgument unless indices are strictly increasing in [1, n].
  IndexSet(int n, std::vector<int> indices);

  // Sorts first; duplicates are still rejected.
  static IndexSet from_unsorted(int n, std::vector<int> indices);

  // Inverse of encode(): "3,1,2" style lists are accepted and sorted.
  static IndexSet decode(int n, std::string_view text);

  int n() const { return n_; }
  int size() const { return static_cast<int>(indices_.size()); }
  std::span<const int> indices() const { return indices_; }
  bool contains(int index) const;

  // Canonical text form: comma-separated sorted 1-based indices.
  std::string encode() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  // Lexicographic on the index sequence.
  friend std::strong_ordering operator<=>(const IndexSet& a, const IndexSet& b) {
    return a.indices_ <=> b.indices_;
  }

 private:
  int n_ = 0;
  std::vector<int> indices_;
};

// One draw of the n-dimensional Gaussian data.
class Observation {
 public:
  Observation() = default;
  // Throws InvalidArgument on any non-finite entry.
  explicit Observation(std::vector<double> values);

  int n() const { return static_cast<int>(values_.size()); }
  std::span<const double> values() const { return values_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<double> values_;
};

// |s ∩ t| for sorted index sequences.
int overlap(std::span<const int> s, std::span<const int> t);
int overlap(const IndexSet& s, const IndexSet& t);

// sqrt of the Hamming distance between indicator vectors.
double canonical_distance(const IndexSet& s, const IndexSet& t);

// Sum of x over the (1-based) indices.
double set_sum(std::span<const double> x, std::span<const int> indices);

struct Null {};
struct Contaminated {
  IndexSet support;
};
using Hypothesis = std::variant<Null, Contaminated>;

// n i.i.d. standard normals, shifted by mu on `support` under Contaminated.
void gaussian_fill(std::span<double> out, double mu, std::span<const int> support, SeededRng& rng);

}  // namespace combtest
