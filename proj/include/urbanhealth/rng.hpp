#pragma once

#include <cstdint>
#include <vector>

namespace urbanhealth {

// Deterministic random source. splitmix64 over a counter advanced from the
// seed; the stream is identical on every platform, unlike the standard
// library distributions. Training, splits, and the synthetic generator all
// draw from this so runs are reproducible bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // uniform in [0, 1)
  double next_double();
  // uniform in [lo, hi)
  double next_uniform(double lo, double hi);
  // standard normal via Box-Muller
  double next_normal();
  // uniform integer in [0, n), n > 0
  std::uint64_t next_index(std::uint64_t n);

  // Fisher-Yates
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent stream for a sub-task, derived from the current state
  // without consuming structure from the parent stream ordering.
  Rng fork(std::uint64_t salt);

 private:
  std::uint64_t state_;
};

}  // namespace urbanhealth
