#pragma once

// Deterministic random source. mt19937_64 is fully specified by the
// standard; the distributions here are hand-rolled so that streams are
// reproducible bit-for-bit regardless of the standard library.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "nowcast/tensor.hpp"

namespace nowcast {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(eng_() >> 11) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  // normal truncated to +-2 sigma (transformer init convention)
  double trunc_normal(double sigma) {
    double v = normal();
    while (v < -2.0 || v > 2.0) v = normal();
    return v * sigma;
  }

  // integer in [lo, hi] inclusive
  std::int64_t randint(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(eng_() % span);
  }

  template <typename S>
  Tensor<S> normal_tensor(Shape shape, double sigma) {
    Tensor<S> t(std::move(shape));
    for (Index i = 0; i < t.size(); ++i) t[i] = static_cast<S>(normal(0.0, sigma));
    return t;
  }

  template <typename S>
  Tensor<S> trunc_normal_tensor(Shape shape, double sigma) {
    Tensor<S> t(std::move(shape));
    for (Index i = 0; i < t.size(); ++i) t[i] = static_cast<S>(trunc_normal(sigma));
    return t;
  }

  template <typename S>
  Tensor<S> uniform_tensor(Shape shape, double lo, double hi) {
    Tensor<S> t(std::move(shape));
    for (Index i = 0; i < t.size(); ++i) t[i] = static_cast<S>(uniform(lo, hi));
    return t;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stable stream derivation, e.g. per (region, year, split, sample).
inline std::uint64_t derive_seed(std::uint64_t base, const std::string& tag) {
  std::uint64_t h = base ^ 0x9e3779b97f4a7c15ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  return h;
}

}  // namespace nowcast
