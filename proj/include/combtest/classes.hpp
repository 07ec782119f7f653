#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "combtest/core.hpp"
#include "combtest/rng.hpp"

namespace combtest {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

enum class Family {
  disjoint_sets,      // N blocks of K consecutive indices, n = N K
  k_sets,             // all K-subsets of {1..n}
  stars,              // edges of K_m at a common vertex
  perfect_matchings,  // perfect matchings of K_{m,m}
  spanning_trees,     // spanning trees of K_m
  cliques,            // edge sets of k-cliques of K_m
  grid_squares,       // sqrt_K x sqrt_K sub-squares of a sqrt_n x sqrt_n grid
};

// Short name used on the command line and in result files ("ksets", ...).
std::string family_name(Family family);
Family parse_family(const std::string& name);

// Edges of K_m are numbered lexicographically by endpoint pair:
// (1,2)=1, (1,3)=2, ..., (1,m)=m-1, (2,3)=m, ...
int complete_graph_edge(int m, int u, int v);
// Edge (row u, column v) of K_{m,m} is (u-1) m + v.
inline int bipartite_edge(int m, int u, int v) { return (u - 1) * m + v; }

// A class C of equal-size subsets of {1..n}, described by its family and
// integer parameters. n, K and N are derived from the parameters.
class ClassSpec {
 public:
  static ClassSpec disjoint_sets(int blocks, int block_size);
  static ClassSpec k_sets(int n, int k);
  static ClassSpec stars(int m);
  static ClassSpec perfect_matchings(int m);
  static ClassSpec spanning_trees(int m);
  static ClassSpec cliques(int m, int k);
  static ClassSpec grid_squares(int side, int square_side);

  // Flat key-value form, e.g. {"m": 5} for stars. Inverse of parameters().
  static ClassSpec from_parameters(Family family, const std::map<std::string, std::int64_t>& params);
  std::map<std::string, std::int64_t> parameters() const;

  Family family() const { return family_; }
  int n() const { return n_; }
  int set_size() const { return k_; }
  // Family parameters in declaration order of the factory function.
  int first() const { return a_; }
  int second() const { return b_; }

  BigInt cardinality() const;
  double log_cardinality() const;
  // N as an integer when it does not exceed `limit`.
  std::optional<std::uint64_t> cardinality_if_at_most(std::uint64_t limit) const;

  std::string describe() const;

  friend bool operator==(const ClassSpec&, const ClassSpec&) = default;

 private:
  ClassSpec(Family family, int a, int b);

  Family family_ = Family::k_sets;
  int a_ = 0;
  int b_ = 0;
  int n_ = 0;
  int k_ = 0;
};

BigInt cardinality(const ClassSpec& spec);

// A finite class held explicitly: `size()` sets of common size K over {1..n},
// stored flat. Used for enumerated classes and for arbitrary subclasses.
class MemberTable {
 public:
  MemberTable(int n, int k);
  static MemberTable from_sets(int n, int k, const std::vector<IndexSet>& sets);

  int n() const { return n_; }
  int set_size() const { return k_; }
  std::size_t size() const { return k_ == 0 ? 0 : flat_.size() / static_cast<std::size_t>(k_); }

  std::span<const int> member(std::size_t i) const {
    return {flat_.data() + i * static_cast<std::size_t>(k_), static_cast<std::size_t>(k_)};
  }
  IndexSet at(std::size_t i) const;
  void push_back(std::span<const int> indices);
  void reserve(std::size_t count) { flat_.reserve(count * static_cast<std::size_t>(k_)); }

 private:
  int n_;
  int k_;
  std::vector<int> flat_;
};

using MemberVisitor = std::function<void(std::span<const int>)>;

// Visits every member once, in lexicographic order of the index sequence.
// Throws CapExceeded if N > cap.
void enumerate(const ClassSpec& spec, const MemberVisitor& visit,
               std::uint64_t cap = kDefaultEnumerationCap);
MemberTable enumerate_members(const ClassSpec& spec, std::uint64_t cap = kDefaultEnumerationCap);
std::vector<IndexSet> enumerate_sets(const ClassSpec& spec,
                                     std::uint64_t cap = kDefaultEnumerationCap);

// Exactly uniform draw from C, written as sorted indices into `out`
// (resized to K).
void sample_uniform_into(const ClassSpec& spec, SeededRng& rng, std::vector<int>& out);
IndexSet sample_uniform(const ClassSpec& spec, SeededRng& rng);

struct ScanResult {
  IndexSet argmax;
  double value;
};

// argmax and max of x_S = sum_{i in S} x_i over C, computed exactly.
// Ties go to the lexicographically smallest member, except for perfect
// matchings with m > 12, where the tie rule is deterministic but not
// lexicographic.
ScanResult max_weight_member(const ClassSpec& spec, std::span<const double> x,
                             std::uint64_t cap = kDefaultEnumerationCap);
ScanResult max_weight_member(const ClassSpec& spec, const Observation& x,
                             std::uint64_t cap = kDefaultEnumerationCap);

struct OverlapSample {
  int z;
  std::int64_t pair_count;
};

// Z = |S ∩ S'| for two independent uniform members.
OverlapSample sample_overlap_pair(const ClassSpec& spec, SeededRng& rng);

// Exact law of Z when the family has a closed form (disjoint sets, k-sets,
// stars, cliques, perfect matchings with m <= 20). Index z holds P(Z = z).
std::optional<std::vector<double>> exact_overlap_pmf(const ClassSpec& spec);

struct MgfEstimate {
  double estimate;
  double std_error;
  bool exact;
};

// E e^{mu^2 Z}. Exact whenever exact_overlap_pmf is; otherwise the sample
// mean over `pairs` overlap draws.
MgfEstimate estimate_overlap_mgf(const ClassSpec& spec, double mu, std::int64_t pairs,
                                 const SeededRng& rng);

// Median, over `repetitions` random M-subclasses drawn without replacement,
// of the smallest canonical distance inside the subclass. M = N uses the
// whole class. Throws MTooLargeForClass when M < N < 4M.
double estimate_tC(const ClassSpec& spec, std::int64_t subclass_size, std::int64_t repetitions,
                   const SeededRng& rng, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace combtest
