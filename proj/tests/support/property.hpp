#pragma once

// Minimal property runner: a seeded generator plus for_all.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace proptest {

using Complex = std::complex<double>;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  // log-uniform magnitude in [lo, hi]
  double magnitude(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

  double angle(double lo, double hi) { return uniform(lo, hi); }

  Complex polar(double rlo, double rhi, double alo, double ahi) {
    return std::polar(magnitude(rlo, rhi), angle(alo, ahi));
  }

  // point of C_+ with |z| in [rlo, rhi], arg kept away from the real axis by margin
  Complex upper(double rlo, double rhi, double margin = 1e-3) {
    return polar(rlo, rhi, margin, 3.141592653589793 - margin);
  }

  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Calls prop(gen) n times; every case shares one deterministic stream.
template <class Prop>
void for_all(int n, std::uint64_t seed, Prop&& prop) {
  Gen gen(seed);
  for (int i = 0; i < n; ++i) prop(gen);
}

}  // namespace proptest
