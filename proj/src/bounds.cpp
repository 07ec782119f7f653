#include "combtest/bounds.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "combtest/errors.hpp"

namespace combtest {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

void require_delta(double delta, const char* who, bool allow_one = false) {
  const bool ok = delta > 0.0 && (allow_one ? delta <= 1.0 : delta < 1.0);
  require(ok, std::string(who) + ": delta must lie in (0, 1" + (allow_one ? "]" : ")"));
}

void require_positive(double v, const char* name, const char* who) {
  require(std::isfinite(v) && v > 0.0, std::string(who) + ": " + name + " must be positive");
}

// Squared distance 2 (K - overlap) compared with a real threshold squared.
constexpr double kSlack = 1e-9;

bool within(int hamming, double radius) {
  return hamming <= radius * radius * (1.0 + kSlack) + kSlack;
}

bool separated(int hamming, double t) { return hamming >= t * t * (1.0 - kSlack) - kSlack; }

int hamming(const MemberTable& table, std::size_t a, std::size_t b) {
  return 2 * (table.set_size() - overlap(table.member(a), table.member(b)));
}

}  // namespace

std::string direction_name(BoundDirection direction) {
  switch (direction) {
    case BoundDirection::lower_bound_on_risk: return "lower_bound_on_risk";
    case BoundDirection::upper_bound_on_risk: return "upper_bound_on_risk";
    case BoundDirection::mu_threshold_for_risk_le_delta: return "mu_threshold_for_risk_le_delta";
    case BoundDirection::mu_threshold_for_risk_ge_delta: return "mu_threshold_for_risk_ge_delta";
    case BoundDirection::upper_bound_on_covering_number: return "upper_bound_on_covering_number";
  }
  return "?";
}

double averaging_threshold(double n, double k, double delta) {
  require_positive(n, "n", "averaging_threshold");
  require_positive(k, "K", "averaging_threshold");
  require_delta(delta, "averaging_threshold");
  return std::sqrt(8.0 * n / (k * k) * std::log(2.0 / delta));
}

double max_test_threshold(double emax0, double k, double delta) {
  require(std::isfinite(emax0) && emax0 >= 0.0, "max_test_threshold: emax0 must be >= 0");
  require_positive(k, "K", "max_test_threshold");
  require_delta(delta, "max_test_threshold");
  return emax0 / k + 2.0 * std::sqrt(2.0 / k * std::log(2.0 / delta));
}

double universal_threshold(double k) {
  require(std::isfinite(k) && k >= 1.0, "universal_threshold: K must be >= 1");
  return std::sqrt(4.0 / k * std::log(4.0 / 3.0));
}

double pairs_risk_lower_bound(double mgf) {
  require(!std::isnan(mgf) && mgf >= 1.0,
          "pairs_risk_lower_bound: E exp(mu^2 Z) is at least 1 for Z >= 0");
  return std::max(0.0, 1.0 - 0.5 * std::sqrt(mgf - 1.0));
}

double symmetric_threshold(double n, double k, double delta) {
  require_positive(n, "n", "symmetric_threshold");
  require_positive(k, "K", "symmetric_threshold");
  require_delta(delta, "symmetric_threshold", true);
  const double d = 1.0 - delta;
  return std::sqrt(std::log1p(4.0 * n * d * d / k) / k);
}

double negass_threshold(double n, double k, double delta) {
  require_positive(n, "n", "negass_threshold");
  require_positive(k, "K", "negass_threshold");
  require_delta(delta, "negass_threshold", true);
  const double d = 1.0 - delta;
  return std::sqrt(std::log1p(n * std::log1p(4.0 * d * d) / (k * k)));
}

CliqueBounds clique_bounds(int m, int k, double delta) {
  require(k >= 2 && m >= k, "clique_bounds: need 2 <= k <= m");
  require_delta(delta, "clique_bounds");
  const double limit = std::sqrt(m * std::log(2.0) / std::exp(1.0));
  if (k > limit) {
    std::ostringstream msg;
    msg << "clique_bounds: needs k <= sqrt(m log 2 / e); for m = " << m << " that is " << limit
        << " < k = " << k;
    throw InvalidArgument(msg.str());
  }
  const double kd = k;
  const double upper = 2.0 * std::sqrt(std::log(m * std::exp(1.0) / kd) / (kd - 1.0)) +
                       4.0 * std::sqrt(std::log(2.0 / delta) / (kd * (kd - 1.0)));
  const double lower = std::sqrt(std::log(m / (2.0 * kd)) / kd);
  return {upper, lower};
}

BoundReport random_subclass_bound(double k, double m_subclass, double t) {
  require_positive(k, "K", "random_subclass_bound");
  require(std::isfinite(m_subclass) && m_subclass >= 2.0, "random_subclass_bound: need M >= 2");
  require(std::isfinite(t) && t >= 0.0, "random_subclass_bound: need t >= 0");
  const double gap = k - t * t / 2.0;
  require(gap >= -1e-9, "random_subclass_bound: t^2 / 2 cannot exceed K");

  BoundReport r;
  r.name = "random_subclass";
  r.formula = "min(sqrt(log(M/16)/K), 8 log(sqrt(3)/8) / sqrt(K - t^2/2))";
  r.inputs = {{"K", k}, {"M", m_subclass}, {"t", t}};
  r.direction = BoundDirection::mu_threshold_for_risk_ge_delta;

  if (m_subclass <= 16.0) {
    r.degenerate = true;
    r.value = 0.0;
    r.note = "log(M/16) <= 0 for M <= 16: no mu > 0 is covered";
    r.outputs = {{"first_term", std::nan("")}};
    return r;
  }
  const double first = std::sqrt(std::log(m_subclass / 16.0) / k);
  r.outputs.emplace_back("first_term", first);
  if (std::abs(gap) <= 1e-9) {
    r.value = first;
    r.formula = "sqrt(log(M/16)/K)";
    r.note = "t^2 = 2K: median overlap zero form";
    return r;
  }
  const double second = 8.0 * std::log(std::sqrt(3.0) / 8.0) / std::sqrt(gap);
  r.outputs.emplace_back("second_term", second);
  if (second <= 0.0) {
    r.flags["second_term_degenerate"] = true;
    r.value = first;
    r.note = "second term is non-positive (log(sqrt(3)/8) < 0); reporting the first term";
  } else {
    r.value = std::min(first, second);
  }
  return r;
}

double vc_cover_bound(double n, double vc_dimension, double t) {
  require_positive(n, "n", "vc_cover_bound");
  require(std::isfinite(vc_dimension) && vc_dimension >= 1.0, "vc_cover_bound: need V >= 1");
  require_positive(t, "t", "vc_cover_bound");
  const double e = std::exp(1.0);
  return e * (vc_dimension + 1.0) * std::pow(2.0 * e * n / (t * t), vc_dimension);
}

std::vector<std::size_t> greedy_cover(const MemberTable& table, double radius) {
  require(std::isfinite(radius) && radius >= 0.0, "greedy_cover: radius must be >= 0");
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < table.size(); ++i) {
    bool covered = false;
    for (std::size_t c : centers) {
      if (within(hamming(table, i, c), radius)) {
        covered = true;
        break;
      }
    }
    if (!covered) centers.push_back(i);
  }
  return centers;
}

std::vector<IndexSet> greedy_cover(const ClassSpec& spec, double radius, std::uint64_t cap) {
  const auto table = enumerate_members(spec, cap);
  std::vector<IndexSet> out;
  for (std::size_t i : greedy_cover(table, radius)) out.push_back(table.at(i));
  return out;
}

std::size_t packing_estimate(const MemberTable& table, double t) {
  require(std::isfinite(t) && t >= 0.0, "packing_estimate: t must be >= 0");
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < table.size(); ++i) {
    bool ok = true;
    for (std::size_t c : chosen) {
      if (!separated(hamming(table, i, c), t)) {
        ok = false;
        break;
      }
    }
    if (ok) chosen.push_back(i);
  }
  return chosen.size();
}

std::size_t packing_estimate(const ClassSpec& spec, double t, std::uint64_t cap) {
  return packing_estimate(enumerate_members(spec, cap), t);
}

double diameter(const MemberTable& table) {
  const int widest = 2 * table.set_size();
  int best = 0;
  for (std::size_t a = 0; a < table.size(); ++a) {
    for (std::size_t b = a + 1; b < table.size(); ++b) {
      best = std::max(best, hamming(table, a, b));
      if (best == widest) return std::sqrt(static_cast<double>(best));
    }
  }
  return std::sqrt(static_cast<double>(best));
}

DudleyResult dudley_bound(const MemberTable& table, double c) {
  require_positive(c, "C", "dudley_bound");
  require(table.size() > 0, "dudley_bound: empty class");
  constexpr int kPoints = 64;
  DudleyResult r;
  r.diameter = diameter(table);
  const double width = r.diameter / kPoints;
  double sum = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double t = i * width;
    const std::size_t size = greedy_cover(table, t).size();
    r.radii.push_back(t);
    r.cover_sizes.push_back(size);
    sum += std::sqrt(std::log(static_cast<double>(size)));
  }
  r.value = c * width * sum;
  return r;
}

DudleyResult dudley_bound(const ClassSpec& spec, double c, std::uint64_t cap) {
  return dudley_bound(enumerate_members(spec, cap), c);
}

TypeOneBound type1_bound_threshold(const ClassSpec& spec, double delta, std::int64_t trials,
                                   const SeededRng& rng, const RiskOptions& options) {
  require_delta(delta, "type1_bound_threshold");
  const auto table = enumerate_members(spec, options.cap);
  const double k = spec.set_size();
  const double radius = std::sqrt(k) / 2.0;

  TypeOneBound out;
  MemberTable cover(spec.n(), spec.set_size());
  for (std::size_t i : greedy_cover(table, radius)) {
    cover.push_back(table.member(i));
    out.cover.push_back(table.at(i));
  }
  out.cover_emax = estimate_emax0(cover, trials, rng, options.workers);

  const double tail = std::sqrt(32.0 * std::log(2.0 / delta) / k);
  const double size = static_cast<double>(cover.size());
  auto& r = out.report;
  r.name = "type1";
  r.formula = "(2/K) E_0 max_{S in A} X_S + sqrt(32 log(2/delta) / K), A a sqrt(K)/2-cover";
  r.inputs = {{"n", static_cast<double>(spec.n())}, {"K", k}, {"delta", delta},
              {"trials", static_cast<double>(trials)}};
  r.direction = BoundDirection::mu_threshold_for_risk_le_delta;
  r.value = 2.0 / k * out.cover_emax.emax + tail;
  r.note = "bounds the type I error of the optimal test only";
  r.outputs = {{"cover_size", size},
               {"cover_radius", radius},
               {"emax_cover", out.cover_emax.emax},
               {"emax_cover_se", out.cover_emax.std_error},
               {"sudakov_cap", 2.0 * std::sqrt(2.0 * k * std::log(size)) / k}};
  return out;
}

std::vector<std::string> bound_names() {
  return {"averaging", "maximum", "universal", "pairs", "symmetric",
          "negass",    "cliques", "random_subclass", "vc"};
}

BoundReport evaluate_bound(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const char* key) {
    const auto it = params.find(key);
    if (it == params.end()) throw InvalidArgument("bound '" + name + "' needs parameter " + key);
    return it->second;
  };
  BoundReport r;
  r.name = name;
  auto finish = [&](double value) {
    r.value = value;
    if (!(value > 0.0)) {
      r.degenerate = true;
      if (r.note.empty()) r.note = "no positive mu is covered at these inputs";
    }
    return r;
  };
  if (name == "averaging") {
    const double n = get("n"), k = get("K"), d = get("delta");
    r.formula = "sqrt((8 n / K^2) log(2/delta))";
    r.inputs = {{"n", n}, {"K", k}, {"delta", d}};
    r.direction = BoundDirection::mu_threshold_for_risk_le_delta;
    return finish(averaging_threshold(n, k, d));
  }
  if (name == "maximum") {
    const double e = get("emax0"), k = get("K"), d = get("delta");
    r.formula = "emax0 / K + 2 sqrt((2/K) log(2/delta))";
    r.inputs = {{"emax0", e}, {"K", k}, {"delta", d}};
    r.direction = BoundDirection::mu_threshold_for_risk_le_delta;
    return finish(max_test_threshold(e, k, d));
  }
  if (name == "universal") {
    const double k = get("K");
    r.formula = "sqrt((4/K) log(4/3))";
    r.inputs = {{"K", k}};
    r.direction = BoundDirection::mu_threshold_for_risk_ge_delta;
    r.note = "R* >= 1/2 for mu at or below the value";
    return finish(universal_threshold(k));
  }
  if (name == "pairs") {
    const double mgf = get("mgf");
    r.formula = "max(0, 1 - sqrt(mgf - 1) / 2)";
    r.inputs = {{"mgf", mgf}};
    r.direction = BoundDirection::lower_bound_on_risk;
    r.value = pairs_risk_lower_bound(mgf);
    return r;
  }
  if (name == "symmetric") {
    const double n = get("n"), k = get("K"), d = get("delta");
    r.formula = "sqrt((1/K) log(1 + 4 n (1-delta)^2 / K))";
    r.inputs = {{"n", n}, {"K", k}, {"delta", d}};
    r.direction = BoundDirection::mu_threshold_for_risk_ge_delta;
    return finish(symmetric_threshold(n, k, d));
  }
  if (name == "negass") {
    const double n = get("n"), k = get("K"), d = get("delta");
    r.formula = "sqrt(log(1 + n log(1 + 4 (1-delta)^2) / K^2))";
    r.inputs = {{"n", n}, {"K", k}, {"delta", d}};
    r.direction = BoundDirection::mu_threshold_for_risk_ge_delta;
    return finish(negass_threshold(n, k, d));
  }
  if (name == "cliques") {
    const double m = get("m"), k = get("k"), d = get("delta");
    const auto b = clique_bounds(static_cast<int>(m), static_cast<int>(k), d);
    r.formula =
        "upper: 2 sqrt(log(m e / k) / (k-1)) + 4 sqrt(log(2/delta) / (k (k-1))); "
        "lower: sqrt(log(m / (2k)) / k)";
    r.inputs = {{"m", m}, {"k", k}, {"delta", d}};
    r.direction = BoundDirection::mu_threshold_for_risk_le_delta;
    r.note = "value is the upper threshold (risk <= delta); lower_mu gives R* >= 1/2";
    r.outputs = {{"upper_mu", b.upper_mu}, {"lower_mu", b.lower_mu}};
    return finish(b.upper_mu);
  }
  if (name == "random_subclass") return random_subclass_bound(get("K"), get("M"), get("t"));
  if (name == "vc") {
    const double n = get("n"), v = get("V"), t = get("t");
    r.formula = "e (V+1) (2 e n / t^2)^V";
    r.inputs = {{"n", n}, {"V", v}, {"t", t}};
    r.direction = BoundDirection::upper_bound_on_covering_number;
    r.value = vc_cover_bound(n, v, t);
    return r;
  }
  throw InvalidArgument("unknown bound '" + name + "'");
}

}  // namespace combtest
