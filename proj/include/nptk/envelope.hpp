#pragma once

#include <array>
#include <cstdint>

#include "nptk/complex_matrix.hpp"

namespace nptk {

/// Coordinates (z1, z2, z3) in C^3. The variety is z3^2 = z1 z2.
struct Point3 {
  cplx z1{}, z2{}, z3{};

  friend Point3 operator+(const Point3& a, const Point3& b) { return {a.z1 + b.z1, a.z2 + b.z2, a.z3 + b.z3}; }
  friend Point3 operator*(cplx s, const Point3& a) { return {s * a.z1, s * a.z2, s * a.z3}; }
  bool finite() const;
};

enum class MembershipStatus { member, non_member, boundary_indeterminate };

struct EnvelopeReport {
  bool member = false;
  MembershipStatus status = MembershipStatus::non_member;
  double closed_form_margin = 0.0;  // RHS - LHS of the closed-form inequality
  double norm_u = 0.0;              // max_r ||z_r||
  double argmax_r = 0.0;
  bool agreement = true;  // both oracles returned the same verdict
};

struct NormU {
  double value;
  double argmax_r;
};

struct ClosedForm {
  bool member;
  double margin;
};

bool in_V(const Point3& z, double tol);

/// pi(l) = (l1^2, l2^2, l1 l2), the two-to-one cover of the variety.
Point3 branched_cover(cplx l1, cplx l2);

/// [[r z1, sqrt(1-r^2) z3], [sqrt(1-r^2) z3, -r z2]].
ComplexMatrix z_r_matrix(const Point3& z, double r);

/// sup over r in [0,1] of ||z_r||: 257-point grid in t = r^2, then
/// golden-section refinement around the best cell to 1e-12 in t.
NormU norm_u(const Point3& z);

/// |z1 z2 - z3^2| < (1 - |z3|^2) + sqrt(1 - |z1|^2) sqrt(1 - |z2|^2) inside
/// the unit polydisc. Outside it, margin is 1 - max|z_i| (<= 0).
ClosedForm in_G_closed_form(const Point3& z);

/// Runs both oracles. Points with |margin| < boundary_band are reported as
/// boundary-indeterminate (member then follows the closed form); outside the
/// band a disagreement throws ConsistencyError.
EnvelopeReport in_G(const Point3& z, double boundary_band = 1e-6);

/// [[A z1, B z3], [C z3, D z2]] for U = [[A, B], [C, D]].
ComplexMatrix z_U_matrix(const Point3& z, const DecomposedOperator& u);

/// The 1+1 unitary [[r, s], [s, -r]], s = sqrt(1 - r^2), for which z_U = z_r.
DecomposedOperator reflection_unitary(double r);

/// max over n Haar 4x4 unitaries split 2+2 of ||z_U||. Never exceeds
/// norm_u(z) (up to rounding).
double sample_u2_bound(const Point3& z, int n, std::uint64_t seed);

/// Linear functional w -> <w_U xi, eta> with |value at z| = norm_u(z) > 1.
/// Its modulus is below one on the whole envelope.
struct SeparatingFunctional {
  DecomposedOperator u;
  CVector xi;
  CVector eta;
  cplx value;
  double argmax_r;

  cplx operator()(const Point3& w) const;
  /// Coefficients (c1, c2, c3) with functional(w) = c1 w1 + c2 w2 + c3 w3.
  std::array<cplx, 3> coefficients() const;
};

/// Throws NoWitnessError unless norm_u(z) > 1.
SeparatingFunctional separating_functional(const Point3& z);

}  // namespace nptk
