#pragma once

#include <cstdint>
#include <random>

namespace ulp {

/// Seedable, splittable random source.
///
/// The generator is std::mt19937_64 (fully specified by the standard, so the
/// raw 64-bit stream is identical on every conforming implementation). Seeds
/// and child streams are derived with SplitMix64. Variates are produced by
/// the member functions below rather than <random> distributions, whose
/// algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent child stream keyed by `stream`. Does not advance *this.
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// True with probability p (exactly false for p <= 0, true for p >= 1).
  bool bernoulli(double p);

  /// Standard normal via the Marsaglia polar method.
  double normal();

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace ulp
