#include "urbanhealth/rng.hpp"

#include <cmath>

#include "urbanhealth/errors.hpp"

namespace urbanhealth {

std::uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

double Rng::next_normal() {
  // 1 - u keeps the argument of log strictly positive
  double u1 = 1.0 - next_double();
  double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

std::uint64_t Rng::next_index(std::uint64_t n) {
  if (n == 0) throw InternalError("next_index: empty range");
  // rejection sampling removes modulo bias
  const std::uint64_t limit = ~0ull - (~0ull % n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

Rng Rng::fork(std::uint64_t salt) {
  Rng child(state_ ^ (salt * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull));
  child.next_u64();
  return child;
}

}  // namespace urbanhealth
