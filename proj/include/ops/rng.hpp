#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace ops {

// Counter-based pseudo-random generator. A stream is identified by a 64-bit
// key; the k-th output is mix(key + k*phi) with the splitmix64 finalizer, so
// draws are pure functions of (key, counter). Child streams are derived by
// re-keying (`fork`), which lets per-node / per-sample / per-cell streams be
// consumed in any order (or in parallel) without changing results.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  // Stable key derivation: combine(combine(seed, a), b) defines the stream
  // for path (a, b). Used for cell seeds throughout the experiment runner.
  static std::uint64_t combine(std::uint64_t key, std::uint64_t tag) {
    return mix(key + kPhi * (tag + 0x632BE59BD9B4E019ull));
  }

  Rng fork(std::uint64_t tag) const { return Rng(combine(key_, tag)); }
  Rng fork(std::uint64_t a, std::uint64_t b) const { return fork(a).fork(b); }

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() { return mix(key_ + kPhi * ++counter_); }

  // Uniform on [0,1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n). Multiply-shift; bias is O(n / 2^64).
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  // Box-Muller; draws two uniforms per call.
  double normal() {
    double u1 = 1.0 - uniform01();  // (0,1], keeps log finite
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Index into a cumulative-weight table: smallest i with u * total < cum[i].
  int pick_cumulative(const std::vector<double>& cum) {
    double u = uniform01() * cum.back();
    int lo = 0, hi = static_cast<int>(cum.size()) - 1;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (u < cum[mid]) hi = mid; else lo = mid + 1;
    }
    return lo;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_int(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static constexpr std::uint64_t kPhi = 0x9E3779B97F4A7C15ull;
  static constexpr double kPi = 3.14159265358979323846;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ops
