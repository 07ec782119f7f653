#include <algorithm>
#include <cmath>
#include <limits>

#include "combtest/classes.hpp"

namespace combtest {

namespace {

double log_choose(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// P(Y = y) for Y = |A ∩ B|, A fixed of size k, B uniform k-subset of {1..n}.
std::vector<double> hypergeometric_pmf(int n, int k) {
  std::vector<double> pmf(static_cast<std::size_t>(k + 1), 0.0);
  const double total = log_choose(n, k);
  for (int y = std::max(0, 2 * k - n); y <= k; ++y) {
    pmf[static_cast<std::size_t>(y)] = std::exp(log_choose(k, y) + log_choose(n - k, k - y) - total);
  }
  return pmf;
}

constexpr int kMaxExactMatchingSize = 20;

}  // namespace

OverlapSample sample_overlap_pair(const ClassSpec& spec, SeededRng& rng) {
  std::vector<int> s, t;
  sample_uniform_into(spec, rng, s);
  sample_uniform_into(spec, rng, t);
  return {overlap(s, t), 1};
}

std::optional<std::vector<double>> exact_overlap_pmf(const ClassSpec& spec) {
  const int k = spec.set_size();
  std::vector<double> pmf(static_cast<std::size_t>(k + 1), 0.0);
  switch (spec.family()) {
    case Family::disjoint_sets: {
      const double blocks = spec.first();
      pmf[static_cast<std::size_t>(k)] += 1.0 / blocks;
      pmf[0] += 1.0 - 1.0 / blocks;
      return pmf;
    }
    case Family::k_sets: return hypergeometric_pmf(spec.n(), k);
    case Family::stars: {
      const double m = spec.first();
      pmf[static_cast<std::size_t>(k)] = 1.0 / m;
      pmf[1] = 1.0 - 1.0 / m;
      return pmf;
    }
    case Family::cliques: {
      const auto vertices = hypergeometric_pmf(spec.first(), spec.second());
      for (std::size_t y = 0; y < vertices.size(); ++y) {
        pmf[y * (y - (y > 0 ? 1 : 0)) / 2] += vertices[y];
      }
      return pmf;
    }
    case Family::perfect_matchings: {
      // Z is the number of fixed points of a uniform permutation of m.
      const int m = spec.first();
      if (m > kMaxExactMatchingSize) return std::nullopt;
      for (int j = 0; j <= m; ++j) {
        double alternating = 0.0;
        double term = 1.0;
        for (int i = 0; i <= m - j; ++i) {
          if (i > 0) term /= -static_cast<double>(i);
          alternating += term;
        }
        pmf[static_cast<std::size_t>(j)] = alternating / std::tgamma(j + 1.0);
      }
      return pmf;
    }
    case Family::spanning_trees:
    case Family::grid_squares: return std::nullopt;
  }
  return std::nullopt;
}

MgfEstimate estimate_overlap_mgf(const ClassSpec& spec, double mu, std::int64_t pairs,
                                 const SeededRng& rng) {
  if (pairs < 1) throw InvalidArgument("estimate_overlap_mgf: need pairs >= 1");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("estimate_overlap_mgf: need mu >= 0");
  if (mu == 0.0) return {1.0, 0.0, true};
  const double mu2 = mu * mu;
  const int k = spec.set_size();

  switch (spec.family()) {
    case Family::disjoint_sets:
      return {1.0 + std::expm1(mu2 * k) / spec.first(), 0.0, true};
    case Family::stars: {
      const double m = spec.first();
      return {std::exp(mu2 * k) / m + (1.0 - 1.0 / m) * std::exp(mu2), 0.0, true};
    }
    default:
      if (auto pmf = exact_overlap_pmf(spec)) {
        double mgf = 0.0;
        for (std::size_t z = 0; z < pmf->size(); ++z) mgf += (*pmf)[z] * std::exp(mu2 * static_cast<double>(z));
        return {mgf, 0.0, true};
      }
      break;
  }

  double mean = 0.0;
  double m2 = 0.0;
  std::vector<int> s, t;
  for (std::int64_t i = 0; i < pairs; ++i) {
    SeededRng pair_rng = rng.derive(static_cast<std::uint64_t>(i));
    sample_uniform_into(spec, pair_rng, s);
    sample_uniform_into(spec, pair_rng, t);
    const double value = std::exp(mu2 * overlap(s, t));
    const double delta = value - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (value - mean);
  }
  const double se = pairs > 1 ? std::sqrt(m2 / static_cast<double>(pairs - 1) / static_cast<double>(pairs))
                              : std::numeric_limits<double>::quiet_NaN();
  return {mean, se, false};
}

double estimate_tC(const ClassSpec& spec, std::int64_t subclass_size, std::int64_t repetitions,
                   const SeededRng& rng, std::uint64_t cap) {
  const BigInt count = spec.cardinality();
  if (subclass_size < 2 || count < subclass_size) {
    throw InvalidArgument("estimate_tC: need 2 <= M <= N");
  }
  const int k = spec.set_size();
  auto distance_for = [k](int largest_overlap) { return std::sqrt(2.0 * (k - largest_overlap)); };

  if (count == subclass_size) {
    const MemberTable table = enumerate_members(spec, cap);
    int largest = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      for (std::size_t j = i + 1; j < table.size(); ++j) {
        largest = std::max(largest, overlap(table.member(i), table.member(j)));
      }
    }
    return distance_for(largest);
  }
  if (count < 4 * subclass_size) {
    throw MTooLargeForClass("estimate_tC: N = " + count.str() + " is below 4M = " +
                            std::to_string(4 * subclass_size) +
                            "; rejection sampling without replacement would stall");
  }
  if (repetitions < 1) throw InvalidArgument("estimate_tC: need repetitions >= 1");

  const auto m = static_cast<std::size_t>(subclass_size);
  std::vector<double> taus;
  taus.reserve(static_cast<std::size_t>(repetitions));
  std::vector<std::vector<int>> chosen(m);
  for (std::int64_t rep = 0; rep < repetitions; ++rep) {
    SeededRng rep_rng = rng.derive(static_cast<std::uint64_t>(rep));
    int largest = 0;
    for (std::size_t i = 0; i < m;) {
      sample_uniform_into(spec, rep_rng, chosen[i]);
      int local = 0;
      bool duplicate = false;
      for (std::size_t j = 0; j < i && !duplicate; ++j) {
        const int z = overlap(chosen[i], chosen[j]);
        duplicate = (z == k);
        local = std::max(local, z);
      }
      if (duplicate) continue;
      largest = std::max(largest, local);
      ++i;
    }
    taus.push_back(distance_for(largest));
  }
  // Lower median.
  const auto mid = taus.begin() + (repetitions - 1) / 2;
  std::nth_element(taus.begin(), mid, taus.end());
  return *mid;
}

}  // namespace combtest
