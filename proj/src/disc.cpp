#include "nptk/disc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nptk/errors.hpp"

namespace nptk {

cplx moebius(cplx a, cplx z) {
  if (!(std::abs(a) < 1.0)) throw DomainError("moebius: |a| must be < 1");
  if (std::abs(z) > 1.0 + 1e-12) throw DomainError("moebius: |z| must be <= 1");
  return (a - z) / (1.0 - std::conj(a) * z);
}

cplx cayley(cplx z) {
  if (z == cplx{1.0, 0.0}) throw DomainError("cayley: pole at z = 1");
  return (1.0 + z) / (1.0 - z);
}

DiscFunction::DiscFunction(DiscPolynomial p) : repr_(std::move(p)) {
  auto& c = std::get<DiscPolynomial>(repr_).coeffs;
  if (c.empty()) c.push_back(0.0);
  for (const auto& x : c)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw InputError("DiscFunction: non-finite coefficient");
}

DiscFunction::DiscFunction(Blaschke b) : repr_(std::move(b)) {
  const auto& bl = std::get<Blaschke>(repr_);
  for (const auto& a : bl.zeros)
    if (!(std::abs(a) < 1.0)) throw InputError("DiscFunction: Blaschke zeros must lie in the open disc");
  if (std::abs(std::abs(bl.phase) - 1.0) > 1e-12) throw InputError("DiscFunction: Blaschke phase must be unimodular");
  if (!(bl.scale > 0.0 && bl.scale <= 1.0)) throw InputError("DiscFunction: Blaschke scale must lie in (0, 1]");
}

DiscFunction DiscFunction::moebius(cplx a) {
  if (!(std::abs(a) < 1.0)) throw DomainError("DiscFunction::moebius: |a| must be < 1");
  return DiscFunction(Blaschke{{a}, {-1.0, 0.0}, 1.0});
}

cplx DiscFunction::operator()(cplx z) const {
  if (const auto* p = poly()) {
    cplx acc = 0.0;
    for (auto it = p->coeffs.rbegin(); it != p->coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
  }
  const auto& b = std::get<Blaschke>(repr_);
  if (std::abs(z) > 1.0 + 1e-12) throw DomainError("DiscFunction: Blaschke product evaluated outside the closed disc");
  cplx acc = b.scale * b.phase;
  for (const auto& a : b.zeros) {
    const cplx den = 1.0 - std::conj(a) * z;
    if (std::abs(den) < 1e-300) throw DomainError("DiscFunction: pole");
    acc *= (z - a) / den;
  }
  return acc;
}

bool DiscFunction::is_constant() const {
  if (const auto* p = poly()) {
    return std::all_of(p->coeffs.begin() + 1, p->coeffs.end(), [](const cplx& c) { return c == cplx{}; });
  }
  return std::get<Blaschke>(repr_).zeros.empty();
}

std::optional<double> DiscFunction::exact_sup() const {
  if (const auto* b = blaschke()) return b->scale;
  if (is_constant()) return std::abs(poly()->coeffs.front());
  // A single monomial attains |c| on the whole circle.
  const auto& c = poly()->coeffs;
  if (std::count_if(c.begin(), c.end(), [](cplx v) { return v != cplx(0.0); }) == 1)
    return std::abs(*std::find_if(c.begin(), c.end(), [](cplx v) { return v != cplx(0.0); }));
  return std::nullopt;
}

cplx disc_eval(const DiscFunction& f, cplx z) { return f(z); }

DiscFunction linear_combination(cplx alpha, const DiscFunction& f, cplx beta, const DiscFunction& g) {
  const auto* pf = f.poly();
  const auto* pg = g.poly();
  if (!pf || !pg) throw UnsupportedInputError("linear_combination: only polynomial representations combine");
  std::vector<cplx> c(std::max(pf->coeffs.size(), pg->coeffs.size()), 0.0);
  for (std::size_t k = 0; k < pf->coeffs.size(); ++k) c[k] += alpha * pf->coeffs[k];
  for (std::size_t k = 0; k < pg->coeffs.size(); ++k) c[k] += beta * pg->coeffs[k];
  return DiscFunction::polynomial(std::move(c));
}

Blaschke random_blaschke(Rng& rng, int max_zeros, double max_zero_modulus, double scale) {
  Blaschke b;
  const int nz = rng.uniform_int(1, std::max(1, max_zeros));
  for (int k = 0; k < nz; ++k) b.zeros.push_back(rng.in_disc(max_zero_modulus));
  b.phase = rng.unimodular();
  b.scale = scale;
  return b;
}

SchwarzPickResult schwarz_pick_bounds(const DiscFunction& g, cplx z, double slack) {
  const double r = std::abs(z);
  const cplx g0 = g.at_zero();
  const double c = std::abs(g0);
  const cplx gz = g(z);
  SchwarzPickResult out;
  out.bound1 = (c + r) / (1.0 + r * c);
  out.bound2 = r / (1.0 - r) * (1.0 - c * c);
  out.value1 = std::abs(gz);
  out.value2 = std::abs(gz - g0);
  out.ok = out.value1 <= out.bound1 + slack && out.value2 <= out.bound2 + slack;
  return out;
}

BalancedDomain<cplx> unit_disc_domain() {
  return {[](Rng& rng) { return rng.unimodular(); }};
}

BalancedDomain<Point2> delta_domain() {
  return {[](Rng& rng) {
    const double pick = rng.uniform();
    double t;
    if (pick < 0.2) {
      t = 0.0;
    } else if (pick < 0.4) {
      t = 1.0;
    } else {
      t = rng.uniform();
    }
    return Point2{t * rng.unimodular(), (1.0 - t) * rng.unimodular()};
  }};
}

BalancedDomain<Point2> bidisc_domain() {
  return {[](Rng& rng) {
    // Gauge max(|l1|, |l2|) = 1: one coordinate on the circle.
    const cplx on = rng.unimodular();
    const cplx in = rng.in_disc();
    return rng.uniform() < 0.5 ? Point2{on, in} : Point2{in, on};
  }};
}

}  // namespace nptk
