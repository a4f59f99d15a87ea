#include "nptk/crossed_discs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nptk/errors.hpp"

namespace nptk {

namespace {

constexpr double kCompatTol = 1e-12;

cplx swap_map(cplx a, cplx z) { return (a - z) / (1.0 - std::conj(a) * z); }

void require_unimodular(cplx t, const char* what) {
  if (std::abs(std::abs(t) - 1.0) > 1e-12) throw DomainError(std::string(what) + ": tau must be unimodular");
}

}  // namespace

TFunction::TFunction(DiscFunction f1, DiscFunction f2) : f1_(std::move(f1)), f2_(std::move(f2)) {
  if (std::abs(f1_.at_zero() - f2_.at_zero()) > kCompatTol)
    throw InputError("TFunction: branches must agree at the origin (f1(0) = f2(0))");
}

std::optional<double> TFunction::exact_norm() const {
  const auto s1 = f1_.exact_sup();
  const auto s2 = f2_.exact_sup();
  if (!s1 || !s2) return std::nullopt;
  return std::max(*s1, *s2);
}

cplx eval_T(const TFunction& f, const TPoint& p) {
  return p.branch == Branch::first ? f.f1()(p.z) : f.f2()(p.z);
}

TFunction b_tau(cplx tau1, cplx tau2) {
  require_unimodular(tau1, "b_tau");
  require_unimodular(tau2, "b_tau");
  return {DiscFunction::polynomial({0.0, tau1}), DiscFunction::polynomial({0.0, tau2})};
}

TFunction random_tfunction(Rng& rng, double norm_t) {
  if (!(norm_t > 0.0 && norm_t <= 1.0)) throw DomainError("random_tfunction: norm must lie in (0, 1]");
  Blaschke main = random_blaschke(rng, 3, 0.9, norm_t);
  const cplx c = DiscFunction(main).at_zero();
  const double mc = std::abs(c);

  // Second branch: scale in (|c|, norm_t], zeros whose moduli multiply to
  // |c| / scale, phase fixed so the values at 0 agree.
  Blaschke other;
  other.scale = mc + (norm_t - mc) * rng.uniform(0.05, 1.0);
  const int nz = rng.uniform_int(1, 3);
  const double target = mc / other.scale;
  std::vector<double> w(nz);
  double wsum = 0.0;
  for (auto& x : w) wsum += (x = rng.uniform(0.2, 1.0));
  cplx prod = 1.0;
  for (int k = 0; k < nz; ++k) {
    const double mod = target > 0.0 ? std::pow(target, w[k] / wsum) : (k == 0 ? 0.0 : rng.uniform(0.0, 0.9));
    const cplx zero = std::polar(mod, rng.uniform(0.0, 2.0 * std::numbers::pi));
    other.zeros.push_back(zero);
    prod *= -zero;
  }
  if (mc > 0.0 && std::abs(prod) > 0.0) {
    other.phase = (c / mc) / (prod / std::abs(prod));
  } else {
    other.phase = rng.unimodular();
  }
  DiscFunction a(main), b(other);
  if (rng.uniform() < 0.5) return {a, b};
  return {b, a};
}

TwoVarFunction np_extension(const TFunction& f, double norm_t) {
  if (!(norm_t > 0.0)) throw DomainError("np_extension: norm must be positive");
  if (f.is_constant())
    throw DegenerateInputError("np_extension: f is constant; use constant_extension (F = f(0) everywhere)");
  const cplx a = f.at_origin() / norm_t;
  if (!(std::abs(a) < 1.0))
    throw DomainError("np_extension: |f(0)| must be below the sup norm for non-constant f");
  return [f, a, norm_t](const Point2& l) {
    const cplx w = swap_map(a, f.f1()(l[0]) / norm_t) + swap_map(a, f.f2()(l[1]) / norm_t);
    return norm_t * swap_map(a, w);
  };
}

TwoVarFunction np_extension(const TFunction& f) {
  const auto n = f.exact_norm();
  if (!n) throw InputError("np_extension: sup norm of f is not known exactly; pass it explicitly");
  return np_extension(f, *n);
}

TwoVarFunction constant_extension(const TFunction& f) {
  const cplx c = f.at_origin();
  return [c](const Point2&) { return c; };
}

TwoVarFunction linear_E(const TFunction& f) {
  const cplx f0 = f.at_origin();
  return [f, f0](const Point2& l) { return f.f1()(l[0]) + f.f2()(l[1]) - f0; };
}

bool in_Delta(const Point2& l) { return std::abs(l[0]) + std::abs(l[1]) < 1.0; }

bool in_G49(const Point2& l) {
  if (!(std::abs(l[0]) < 1.0 && std::abs(l[1]) < 1.0)) return false;
  return (std::abs(l[0]) + std::abs(l[1])) * std::abs(1.0 + l[0] * l[1]) < 1.0;
}

bool in_H(const Point2& l) {
  const double m1 = std::abs(l[0]);
  const double m2 = std::abs(l[1]);
  if (!(m1 < 1.0 && m2 < 1.0)) return false;
  const bool first = m2 / (1.0 - m2) < 0.5 * (1.0 - m1) / (1.0 + m1);
  const bool second = m1 / (1.0 - m1) < 0.5 * (1.0 - m2) / (1.0 + m2);
  return first || second;
}

void TauFamily::add(std::array<cplx, 2> tau, TwoVarFunction correction) {
  require_unimodular(tau[0], "TauFamily");
  require_unimodular(tau[1], "TauFamily");
  entries_.push_back({tau, std::move(correction)});
}

TauFamily TauFamily::grid(int n1, int n2, const std::function<TwoVarFunction(std::array<cplx, 2>)>& make) {
  TauFamily fam;
  for (int j = 0; j < n1; ++j)
    for (int k = 0; k < n2; ++k) {
      std::array<cplx, 2> tau = {std::polar(1.0, 2.0 * std::numbers::pi * j / n1),
                                 std::polar(1.0, 2.0 * std::numbers::pi * k / n2)};
      fam.add(tau, make(tau));
    }
  return fam;
}

TauFamily TauFamily::linear_grid(int n) {
  return grid(1, n, [](std::array<cplx, 2> tau) -> TwoVarFunction {
    return [tau](const Point2& l) { return tau[0] * l[0] + tau[1] * l[1]; };
  });
}

double tau_family_gauge(const TauFamily& fam, const Point2& l) {
  double g = 0.0;
  for (const auto& e : fam.entries()) {
    const cplx v = e.tau[0] * l[0] + e.tau[1] * l[1] + l[0] * l[1] * e.correction(l);
    g = std::max(g, std::abs(v));
  }
  return g;
}

bool in_G_tau_family(const TauFamily& fam, const Point2& l) {
  if (!(std::abs(l[0]) < 1.0 && std::abs(l[1]) < 1.0)) return false;
  return tau_family_gauge(fam, l) < 1.0;
}

bool radius_obstruction(const Point2& v, double radius) {
  const double nv = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  if (std::abs(nv - 1.0) > 1e-12) throw InputError("radius_obstruction: v must be a unit vector");
  if (!(radius > 0.0)) throw DomainError("radius_obstruction: radius must be positive");
  return radius > 1.0 / (std::abs(v[0]) + std::abs(v[1])) + 1e-12;
}

}  // namespace nptk
