#include "nptk/realization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nptk/errors.hpp"

namespace nptk {

Realization::Realization(cplx a, CVector beta, CVector gamma, ComplexMatrix d, double tol)
    : a_(a), beta_(std::move(beta)), gamma_(std::move(gamma)), d_(std::move(d)) {
  if (beta_.size() != gamma_.size() || !d_.is_square() || d_.rows() != beta_.size())
    throw InputError("Realization: beta, gamma and D must share the model-space dimension");
  if (!is_unitary(colligation(), tol)) throw InputError("Realization: colligation is not unitary");
  if (operator_norm(d_) > 1.0 + tol) throw InputError("Realization: ||D|| > 1");
}

Realization Realization::from_colligation(const ComplexMatrix& l, double tol) {
  if (!l.is_square() || l.rows() < 2) throw InputError("Realization: colligation must be square of side >= 2");
  const std::size_t n = l.rows() - 1;
  CVector beta(n), gamma(n);
  for (std::size_t i = 0; i < n; ++i) {
    beta[i] = std::conj(l(0, i + 1));
    gamma[i] = l(i + 1, 0);
  }
  return Realization(l(0, 0), std::move(beta), std::move(gamma), l.block(1, 1, n, n), tol);
}

Realization Realization::unchecked(cplx a, CVector beta, CVector gamma, ComplexMatrix d) {
  if (beta.size() != gamma.size() || !d.is_square() || d.rows() != beta.size())
    throw InputError("Realization: beta, gamma and D must share the model-space dimension");
  Realization r;
  r.a_ = a;
  r.beta_ = std::move(beta);
  r.gamma_ = std::move(gamma);
  r.d_ = std::move(d);
  return r;
}

ComplexMatrix Realization::colligation() const {
  const std::size_t n = dim();
  ComplexMatrix l(n + 1, n + 1);
  l(0, 0) = a_;
  for (std::size_t i = 0; i < n; ++i) {
    l(0, i + 1) = std::conj(beta_[i]);
    l(i + 1, 0) = gamma_[i];
  }
  l.set_block(1, 1, d_);
  return l;
}

cplx F_xi(const Realization& xi, const ComplexMatrix& x) {
  if (x.rows() != xi.dim() || x.cols() != xi.dim()) throw InputError("F_xi: X must act on the model space");
  // ||X|| <= ||X||_F, so the Frobenius norm settles most calls cheaply.
  if (!(x.frobenius_norm() < 1.0) && !(operator_norm(x) < 1.0)) throw DomainError("F_xi: requires ||X|| < 1");
  const ComplexMatrix resolvent = inverse(ComplexMatrix::identity(xi.dim()) - xi.d() * x, 1e12);
  const CVector w = x.apply(resolvent.apply(xi.gamma()));
  return xi.a() + inner(w, xi.beta());
}

ComplexMatrix lambda_action(const Point2& l, std::size_t n1, std::size_t n2) {
  CVector diag(n1 + n2);
  std::fill(diag.begin(), diag.begin() + static_cast<std::ptrdiff_t>(n1), l[0]);
  std::fill(diag.begin() + static_cast<std::ptrdiff_t>(n1), diag.end(), l[1]);
  return ComplexMatrix::diagonal(diag);
}

EvenModel::EvenModel(DecomposedOperator u_, Realization xi_) : u(std::move(u_)), xi(std::move(xi_)) {
  if (u.dim1() + u.dim2() != xi.dim())
    throw InputError("EvenModel: block split of U must match the model space of xi");
}

cplx even_schur_eval(const EvenModel& m, const Point2& l) {
  const ComplexMatrix lam = lambda_action(l, m.u.dim1(), m.u.dim2());
  return F_xi(m.xi, lam * m.u.matrix() * lam);
}

cplx extension_eval(const EvenModel& m, const Point3& z) { return F_xi(m.xi, z_U_matrix(z, m.u)); }

EvenModel random_even_model(std::size_t n1, std::size_t n2, Rng& rng) {
  if (n1 + n2 == 0) throw InputError("random_even_model: empty model space");
  DecomposedOperator u(random_unitary(n1 + n2, rng), n1, n2);
  return EvenModel(std::move(u), Realization::from_colligation(random_unitary(n1 + n2 + 1, rng)));
}

EvenModel explicit_square_model() {
  DecomposedOperator swap(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}, 1, 1);
  Realization xi(0.0, {1.0, 0.0}, {1.0, 0.0}, ComplexMatrix{{0.0, 0.0}, {0.0, 1.0}});
  return EvenModel(std::move(swap), std::move(xi));
}

ModelCheckReport model_consistency_check(const EvenModel& m, int n, std::uint64_t seed) {
  ModelCheckReport rep;
  Rng rng(seed);
  auto fail = [&rep](const std::string& what) {
    ++rep.failures;
    if (rep.messages.size() < 10) rep.messages.push_back(what);
  };
  for (int i = 0; i < n; ++i) {
    // Half the samples boundary-biased, where |phi| is largest.
    const double r1 = i % 2 == 0 ? std::sqrt(rng.uniform()) : rng.boundary_biased_radius(4.0);
    const double r2 = i % 2 == 0 ? std::sqrt(rng.uniform()) : rng.boundary_biased_radius(4.0);
    const Point2 l = {r1 * rng.unimodular(), r2 * rng.unimodular()};
    ++rep.samples;
    try {
      const cplx phi = even_schur_eval(m, l);
      const cplx phi_neg = even_schur_eval(m, {-l[0], -l[1]});
      const cplx big_phi = extension_eval(m, branched_cover(l[0], l[1]));
      const double mod = std::abs(phi);
      const double even_res = std::abs(phi_neg - phi);
      const double cover_res = std::abs(big_phi - phi);
      rep.max_modulus = std::max(rep.max_modulus, mod);
      rep.max_evenness_residual = std::max(rep.max_evenness_residual, even_res);
      rep.max_cover_residual = std::max(rep.max_cover_residual, cover_res);
      std::ostringstream where;
      where.precision(17);
      where << " at l = (" << l[0] << ", " << l[1] << ")";
      if (mod > 1.0 + 1e-10) fail("|phi| = " + std::to_string(mod) + " > 1" + where.str());
      if (even_res > 1e-12) fail("evenness residual " + std::to_string(even_res) + where.str());
      if (cover_res > 1e-12) fail("cover residual " + std::to_string(cover_res) + where.str());
    } catch (const Error& e) {
      fail(std::string("evaluation failed: ") + e.what());
    }
  }
  return rep;
}

}  // namespace nptk
