#include "nptk/random.hpp"

#include <cmath>
#include <numbers>

namespace nptk {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

double Rng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

int Rng::uniform_int(int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  return dist(engine_);
}

double Rng::normal() { return normal_(engine_); }

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

cplx Rng::unimodular() { return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi)); }

cplx Rng::in_disc(double radius) {
  const double r = radius * std::sqrt(uniform());
  return std::polar(r, uniform(0.0, 2.0 * std::numbers::pi));
}

double Rng::boundary_biased_radius(double max_exponent) {
  return 1.0 - std::pow(10.0, -uniform(0.0, max_exponent));
}

}  // namespace nptk
