#include "combtest/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace combtest {

IndexSet::IndexSet(int n, std::vector<int> indices) : n_(n), indices_(std::move(indices)) {
  if (n_ < 1) throw InvalidArgument("IndexSet: ambient dimension must be positive");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const int v = indices_[i];
    if (v < 1 || v > n_) {
      throw InvalidArgument("IndexSet: index " + std::to_string(v) + " outside [1, " +
                            std::to_string(n_) + "]");
    }
    if (i > 0 && indices_[i - 1] >= v) {
      throw InvalidArgument("IndexSet: indices must be strictly increasing");
    }
  }
}

IndexSet IndexSet::from_unsorted(int n, std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  return IndexSet(n, std::move(indices));
}

IndexSet IndexSet::decode(int n, std::string_view text) {
  std::vector<int> indices;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view token = text.substr(0, comma);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw InvalidArgument("IndexSet: cannot parse '" + std::string(token) + "'");
    }
    indices.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return from_unsorted(n, std::move(indices));
}

bool IndexSet::contains(int index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

std::string IndexSet::encode() const {
  std::string out;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(indices_[i]);
  }
  return out;
}

Observation::Observation(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("Observation: entries must be finite");
  }
}

int overlap(std::span<const int> s, std::span<const int> t) {
  int count = 0;
  auto a = s.begin();
  auto b = t.begin();
  while (a != s.end() && b != t.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++count;
      ++a;
      ++b;
    }
  }
  return count;
}

int overlap(const IndexSet& s, const IndexSet& t) {
  if (s.n() != t.n()) {
    throw DimensionError("overlap: ambient dimensions " + std::to_string(s.n()) + " and " +
                         std::to_string(t.n()) + " differ");
  }
  return overlap(s.indices(), t.indices());
}

double canonical_distance(const IndexSet& s, const IndexSet& t) {
  const int common = overlap(s, t);
  return std::sqrt(static_cast<double>(s.size() + t.size() - 2 * common));
}

double set_sum(std::span<const double> x, std::span<const int> indices) {
  double sum = 0.0;
  for (int i : indices) sum += x[static_cast<std::size_t>(i - 1)];
  return sum;
}

void gaussian_fill(std::span<double> out, double mu, std::span<const int> support, SeededRng& rng) {
  for (double& v : out) v = rng.normal();
  if (mu != 0.0) {
    for (int i : support) out[static_cast<std::size_t>(i - 1)] += mu;
  }
}

}  // namespace combtest
