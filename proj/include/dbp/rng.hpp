#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dbp {

// splitmix64 step; used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic RNG with portable uniform and normal draws (Box-Muller on
// explicit 53-bit uniforms, so two builds with the same seed produce
// bit-identical streams).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Derive an independent stream for (seed, index); used to give each Monte
  // Carlo draw its own generator so parallel and serial evaluation agree
  // bit for bit.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x632be59bd9b4e019ULL * (index + 1));
    std::uint64_t mixed = splitmix64(s);
    mixed ^= splitmix64(s);
    return Rng(mixed);
  }

  // Uniform on (0,1), never returning 0 or 1.
  double uniform() {
    const std::uint64_t bits = gen_() >> 11;  // 53 random bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double exponential() { return -std::log(uniform()); }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dbp
