#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace robagg {

// Deterministic splittable random stream. State is xoshiro256++ seeded by
// splitmix64 from (seed, stream, algorithm tag), so any (seed, stream) pair
// names the same sequence on every platform and draws on one stream never
// perturb another. Distribution code below is hand-rolled for the same
// reason: std::* distributions are not bit-stable across standard libraries.
class RngStream {
 public:
  static constexpr std::string_view kAlgorithm = "xoshiro256++/v1";

  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform in [0,1), 53-bit mantissa.
  double uniform01();
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller; second value of each pair is cached.
  double normal();
  // Uniform integer in [0,n), n >= 1. Rejection-free multiply-shift.
  std::uint64_t bounded(std::uint64_t n);
  // Gamma(alpha, 1), alpha > 0. Marsaglia-Tsang, with the boost
  // Gamma(a) = Gamma(a+1) * U^{1/a} for alpha < 1.
  double gamma(double alpha);
  // Fisher-Yates permutation of 0..n-1.
  std::vector<int> permutation(int n);

  std::uint64_t seed_used() const { return seed_; }
  std::uint64_t stream_used() const { return stream_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace robagg
