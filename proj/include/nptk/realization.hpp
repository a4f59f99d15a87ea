#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nptk/complex_matrix.hpp"
#include "nptk/disc.hpp"
#include "nptk/envelope.hpp"

namespace nptk {

/// Colligation xi = (a, beta, gamma, D) on a model space M whose block
/// operator L = [[a, beta*], [gamma, D]] on C (+) M is unitary.
class Realization {
 public:
  Realization(cplx a, CVector beta, CVector gamma, ComplexMatrix d, double tol = 1e-10);
  /// Reads (a, beta, gamma, D) off a unitary L on C (+) M.
  static Realization from_colligation(const ComplexMatrix& l, double tol = 1e-10);
  /// Skips the unitarity check. Only for negative controls.
  static Realization unchecked(cplx a, CVector beta, CVector gamma, ComplexMatrix d);

  cplx a() const { return a_; }
  const CVector& beta() const { return beta_; }
  const CVector& gamma() const { return gamma_; }
  const ComplexMatrix& d() const { return d_; }
  std::size_t dim() const { return beta_.size(); }
  ComplexMatrix colligation() const;

 private:
  Realization() = default;
  cplx a_{};
  CVector beta_;
  CVector gamma_;
  ComplexMatrix d_;
};

/// F(X) = a + <X (1 - D X)^{-1} gamma, beta> for ||X|| < 1.
cplx F_xi(const Realization& xi, const ComplexMatrix& x);

/// diag(l1 I_{n1}, l2 I_{n2}).
ComplexMatrix lambda_action(const Point2& l, std::size_t n1, std::size_t n2);

/// phi(l) = F(l U l): U a unitary on M1 (+) M2 and xi a colligation on the
/// same total space.
struct EvenModel {
  DecomposedOperator u;
  Realization xi;

  EvenModel(DecomposedOperator u, Realization xi);
};

cplx even_schur_eval(const EvenModel& m, const Point2& l);
/// Phi(z) = F(z_U); requires ||z_U|| < 1, which holds on the envelope.
cplx extension_eval(const EvenModel& m, const Point3& z);

/// U from a Haar unitary on C^{n1+n2}, xi from a Haar unitary on C^{1+n1+n2}.
EvenModel random_even_model(std::size_t n1, std::size_t n2, Rng& rng);
/// U = swap on C (+) C, xi = (0, e1, e1, diag(0, 1)): phi(l) = (l1 l2)^2 and
/// Phi(z) = z3^2.
EvenModel explicit_square_model();

struct ModelCheckReport {
  int samples = 0;
  double max_modulus = 0.0;            // max |phi(l)|
  double max_evenness_residual = 0.0;  // max |phi(-l) - phi(l)|
  double max_cover_residual = 0.0;     // max |Phi(pi(l)) - phi(l)|
  int failures = 0;
  std::vector<std::string> messages;   // first few failures
  bool passed() const { return failures == 0; }
};

/// Samples l in the bidisc and checks |phi| <= 1 + 1e-10, evenness to 1e-12
/// and cover consistency to 1e-12. Failures are reported, never thrown.
ModelCheckReport model_consistency_check(const EvenModel& m, int n, std::uint64_t seed);

}  // namespace nptk
