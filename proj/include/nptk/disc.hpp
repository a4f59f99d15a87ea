#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <type_traits>
#include <variant>
#include <vector>

#include "nptk/random.hpp"

namespace nptk {

using cplx = std::complex<double>;

/// m_a(z) = (a - z) / (1 - conj(a) z), the disc automorphism swapping a and 0.
/// Requires |a| < 1 and |z| <= 1.
cplx moebius(cplx a, cplx z);

/// (1 + z) / (1 - z): disc onto the right half-plane.
cplx cayley(cplx z);

/// Finite polynomial sum c_k z^k, coefficients in ascending order.
struct DiscPolynomial {
  std::vector<cplx> coeffs;
};

/// scale * phase * prod_k (z - zero_k) / (1 - conj(zero_k) z).
/// Its sup over the disc is exactly `scale`.
struct Blaschke {
  std::vector<cplx> zeros;
  cplx phase{1.0, 0.0};
  double scale = 1.0;
};

/// One-variable function on the closed unit disc. Schur-class inputs are
/// normally scaled finite Blaschke products, for which the sup norm is known.
class DiscFunction {
 public:
  DiscFunction(DiscPolynomial p);
  DiscFunction(Blaschke b);

  static DiscFunction polynomial(std::vector<cplx> coeffs) { return DiscFunction(DiscPolynomial{std::move(coeffs)}); }
  static DiscFunction constant(cplx c) { return polynomial({c}); }
  static DiscFunction identity() { return polynomial({0.0, 1.0}); }
  /// m_a as a one-zero Blaschke product (phase -1).
  static DiscFunction moebius(cplx a);

  cplx operator()(cplx z) const;
  cplx at_zero() const { return (*this)(0.0); }
  bool is_constant() const;
  /// Exact sup over the disc when the representation determines it.
  std::optional<double> exact_sup() const;

  bool is_blaschke() const { return std::holds_alternative<Blaschke>(repr_); }
  const Blaschke* blaschke() const { return std::get_if<Blaschke>(&repr_); }
  const DiscPolynomial* poly() const { return std::get_if<DiscPolynomial>(&repr_); }

 private:
  std::variant<DiscPolynomial, Blaschke> repr_;
};

cplx disc_eval(const DiscFunction& f, cplx z);

/// Polynomial-only linear combination alpha*f + beta*g.
DiscFunction linear_combination(cplx alpha, const DiscFunction& f, cplx beta, const DiscFunction& g);

/// Random scaled Blaschke product with 1..max_zeros zeros of modulus at most
/// max_zero_modulus.
Blaschke random_blaschke(Rng& rng, int max_zeros = 3, double max_zero_modulus = 0.9, double scale = 1.0);

struct SchwarzPickResult {
  double bound1;    // (|g(0)| + |z|) / (1 + |z||g(0)|)
  double bound2;    // |z| / (1 - |z|) * (1 - |g(0)|^2)
  double value1;    // |g(z)|
  double value2;    // |g(z) - g(0)|
  bool ok;
};

/// Both Schwarz-Pick consequences for a Schur-class g at |z| < 1, with
/// `slack` added to each bound.
SchwarzPickResult schwarz_pick_bounds(const DiscFunction& g, cplx z, double slack = 1e-10);

using Point2 = std::array<cplx, 2>;

/// A balanced domain described by a sampler of gauge-one (boundary) points.
/// Interior points are radius * boundary point, radius in [0, 1).
template <class Point>
struct BalancedDomain {
  std::function<Point(Rng&)> boundary_point;
};

BalancedDomain<cplx> unit_disc_domain();
/// {|l1| + |l2| < 1}; a fifth of the samples each are put on the two axes.
BalancedDomain<Point2> delta_domain();
BalancedDomain<Point2> bidisc_domain();

template <class Point>
Point scale_point(const Point& p, double r) {
  if constexpr (std::is_same_v<Point, cplx>) {
    return p * r;
  } else {
    Point q = p;
    for (auto& x : q) x *= r;
    return q;
  }
}

/// Lower bound for sup |f| over a balanced domain: n boundary-biased samples
/// (radius 1 - 10^{-u}) followed by pushing the best 8 directions out to
/// radius 1 - 10^{-k}, k = 1..12. Deterministic per seed.
template <class Point, class F>
double sampled_sup(const F& f, const BalancedDomain<Point>& domain, int n, std::uint64_t seed) {
  Rng rng(seed);
  struct Hit {
    double value;
    Point direction;
  };
  std::vector<Hit> best;
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    const Point dir = domain.boundary_point(rng);
    const double r = rng.boundary_biased_radius();
    const double v = std::abs(f(scale_point(dir, r)));
    sup = std::max(sup, v);
    if (best.size() < 8 || v > best.back().value) {
      if (best.size() == 8) best.pop_back();
      best.push_back({v, dir});
      std::sort(best.begin(), best.end(), [](const Hit& a, const Hit& b) { return a.value > b.value; });
    }
  }
  for (const auto& h : best)
    for (int k = 1; k <= 12; ++k) sup = std::max(sup, std::abs(f(scale_point(h.direction, 1.0 - std::pow(10.0, -k)))));
  return sup;
}

}  // namespace nptk
