#include "nptk/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nptk/errors.hpp"

namespace nptk {

namespace {

constexpr int kGridCells = 256;  // 257 grid points in t
constexpr double kGoldenTol = 1e-12;

bool finite_c(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double z_r_norm_at_t(const Point3& z, double t) {
  t = std::clamp(t, 0.0, 1.0);
  return operator_norm(z_r_matrix(z, std::sqrt(t)));
}

// Golden-section maximisation of g on [lo, hi].
std::pair<double, double> golden_max(const Point3& z, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = z_r_norm_at_t(z, c);
  double fd = z_r_norm_at_t(z, d);
  while (hi - lo > kGoldenTol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = z_r_norm_at_t(z, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = z_r_norm_at_t(z, d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

bool Point3::finite() const { return finite_c(z1) && finite_c(z2) && finite_c(z3); }

bool in_V(const Point3& z, double tol) {
  if (!(std::abs(z.z1) < 1.0 && std::abs(z.z2) < 1.0 && std::abs(z.z3) < 1.0)) return false;
  return std::abs(z.z3 * z.z3 - z.z1 * z.z2) <= tol;
}

Point3 branched_cover(cplx l1, cplx l2) { return {l1 * l1, l2 * l2, l1 * l2}; }

ComplexMatrix z_r_matrix(const Point3& z, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("z_r_matrix: r must lie in [0, 1]");
  const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
  return {{r * z.z1, s * z.z3}, {s * z.z3, -r * z.z2}};
}

NormU norm_u(const Point3& z) {
  if (!z.finite()) throw InputError("norm_u: non-finite point");
  int best_k = 0;
  double best = -1.0;
  for (int k = 0; k <= kGridCells; ++k) {
    const double v = z_r_norm_at_t(z, static_cast<double>(k) / kGridCells);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  double best_t = static_cast<double>(best_k) / kGridCells;
  const double lo = static_cast<double>(std::max(0, best_k - 1)) / kGridCells;
  const double hi = static_cast<double>(std::min(kGridCells, best_k + 1)) / kGridCells;
  const auto [t_ref, v_ref] = golden_max(z, lo, hi);
  if (v_ref > best) {
    best = v_ref;
    best_t = t_ref;
  }
  return {best, std::sqrt(std::clamp(best_t, 0.0, 1.0))};
}

ClosedForm in_G_closed_form(const Point3& z) {
  const double a1 = std::abs(z.z1), a2 = std::abs(z.z2), a3 = std::abs(z.z3);
  const double amax = std::max({a1, a2, a3});
  if (!(amax < 1.0)) return {false, 1.0 - amax};
  const double lhs = std::abs(z.z1 * z.z2 - z.z3 * z.z3);
  const double rhs = (1.0 - a3 * a3) + std::sqrt(1.0 - a1 * a1) * std::sqrt(1.0 - a2 * a2);
  return {lhs < rhs, rhs - lhs};
}

EnvelopeReport in_G(const Point3& z, double boundary_band) {
  const ClosedForm cf = in_G_closed_form(z);
  const NormU nu = norm_u(z);
  EnvelopeReport rep;
  rep.closed_form_margin = cf.margin;
  rep.norm_u = nu.value;
  rep.argmax_r = nu.argmax_r;
  rep.agreement = cf.member == (nu.value < 1.0);
  rep.member = cf.member;
  const bool in_band = std::abs(cf.margin) < boundary_band;
  if (in_band) {
    rep.status = MembershipStatus::boundary_indeterminate;
  } else {
    if (!rep.agreement) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "in_G: oracle disagreement at z = (" << z.z1 << ", " << z.z2 << ", " << z.z3 << "): margin "
          << cf.margin << ", norm_u " << nu.value;
      throw ConsistencyError(msg.str());
    }
    rep.status = cf.member ? MembershipStatus::member : MembershipStatus::non_member;
  }
  return rep;
}

ComplexMatrix z_U_matrix(const Point3& z, const DecomposedOperator& u) {
  const std::size_t n1 = u.dim1(), n2 = u.dim2();
  ComplexMatrix out(n1 + n2, n1 + n2);
  out.set_block(0, 0, u.a() * z.z1);
  out.set_block(0, n1, u.b() * z.z3);
  out.set_block(n1, 0, u.c() * z.z3);
  out.set_block(n1, n1, u.d() * z.z2);
  return out;
}

DecomposedOperator reflection_unitary(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("reflection_unitary: r must lie in [0, 1]");
  const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
  return DecomposedOperator(ComplexMatrix{{r, s}, {s, -r}}, 1, 1);
}

double sample_u2_bound(const Point3& z, int n, std::uint64_t seed) {
  Rng rng(seed);
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const DecomposedOperator u(random_unitary(4, rng), 2, 2);
    best = std::max(best, operator_norm(z_U_matrix(z, u)));
  }
  return best;
}

cplx SeparatingFunctional::operator()(const Point3& w) const {
  const CVector image = z_U_matrix(w, u).apply(xi);
  return inner(image, eta);
}

std::array<cplx, 3> SeparatingFunctional::coefficients() const {
  return {(*this)(Point3{1.0, 0.0, 0.0}), (*this)(Point3{0.0, 1.0, 0.0}), (*this)(Point3{0.0, 0.0, 1.0})};
}

SeparatingFunctional separating_functional(const Point3& z) {
  const NormU nu = norm_u(z);
  if (!(nu.value > 1.0)) throw NoWitnessError("separating_functional: z lies in the closed envelope, no witness");
  DecomposedOperator u = reflection_unitary(nu.argmax_r);
  const SingularTriple tr = top_singular_triple_2x2(z_U_matrix(z, u));
  SeparatingFunctional sf{u, tr.right, tr.left, 0.0, nu.argmax_r};
  sf.value = sf(z);
  return sf;
}

}  // namespace nptk
