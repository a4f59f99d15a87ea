#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace nptk {

using cplx = std::complex<double>;

/// Mixes (seed, stream, index) into an independent 64-bit seed. Used so that
/// batch computations can give every sample its own generator and stay
/// deterministic regardless of how samples are split across threads.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

/// Thin wrapper over mt19937_64 with the draws the toolkit needs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  int uniform_int(int lo, int hi);  // inclusive
  double normal();
  cplx complex_normal();  // E|w|^2 = 1
  cplx unimodular();
  /// Uniform in the open unit disc scaled by `radius`.
  cplx in_disc(double radius = 1.0);
  /// Radius 1 - 10^{-u} with u uniform on [0, max_exponent]; piles samples
  /// up near the boundary where holomorphic sup norms live.
  double boundary_biased_radius(double max_exponent = 6.0);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace nptk
