#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace kncond {

// splitmix64 finalizer; used to derive independent per-trial / per-restart seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_seed(seed ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

// Thin wrapper over mt19937_64. Uniform draws are built from raw engine bits so
// sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
  }

  double exponential() { return -std::log1p(-uniform()); }

  // Flat Dirichlet(1, ..., 1) sample of length n.
  std::vector<double> dirichlet(std::size_t n) {
    std::vector<double> v(n);
    double total = 0.0;
    for (auto& e : v) {
      e = exponential();
      total += e;
    }
    if (total <= 0.0) {
      v.assign(n, 1.0 / static_cast<double>(n));
      return v;
    }
    for (auto& e : v) e /= total;
    return v;
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kncond
