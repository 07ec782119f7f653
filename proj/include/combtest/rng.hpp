#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace combtest {

// Seeded random stream identified by (master_seed, stream_id).
//
// The generator is xoshiro256** with its state expanded from the pair by
// splitmix64. Equal pairs give equal streams; child streams obtained with
// derive() are independent of each other and of the parent, so every
// Monte Carlo trial can own a stream keyed by its index and results do not
// depend on how trials are scheduled across threads.
class SeededRng {
 public:
  using result_type = std::uint64_t;

  explicit SeededRng(std::uint64_t master_seed, std::uint64_t stream_id = 0);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Stream keyed by `key` below this one. Does not advance this stream.
  SeededRng derive(std::uint64_t key) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal by the Marsaglia polar method (exact rejection scheme).
  double normal();

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> state_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// splitmix64 finalizer; exposed for hashing stream keys.
std::uint64_t mix64(std::uint64_t x);

}  // namespace combtest
