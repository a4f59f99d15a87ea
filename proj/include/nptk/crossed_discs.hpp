#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "nptk/disc.hpp"

namespace nptk {

using TwoVarFunction = std::function<cplx(const Point2&)>;

/// A holomorphic function on the crossed discs T = (D x {0}) u ({0} x D),
/// i.e. a pair (f1, f2) of disc functions with f1(0) = f2(0).
class TFunction {
 public:
  TFunction(DiscFunction f1, DiscFunction f2);

  const DiscFunction& f1() const { return f1_; }
  const DiscFunction& f2() const { return f2_; }
  cplx at_origin() const { return f1_.at_zero(); }
  bool is_constant() const { return f1_.is_constant() && f2_.is_constant(); }
  /// sup over T, when both branches know their sup exactly.
  std::optional<double> exact_norm() const;

 private:
  DiscFunction f1_;
  DiscFunction f2_;
};

enum class Branch { first = 1, second = 2 };

/// Branch first is the point (z, 0), branch second is (0, z).
struct TPoint {
  Branch branch;
  cplx z;

  Point2 embed() const { return branch == Branch::first ? Point2{z, 0.0} : Point2{0.0, z}; }
};

cplx eval_T(const TFunction& f, const TPoint& p);

/// b_tau = (tau1 z, tau2 z); needs |tau_i| = 1.
TFunction b_tau(cplx tau1, cplx tau2);

/// Random compatible pair of scaled Blaschke products, each with 1..3
/// zeros, whose sup over T is exactly norm_t.
TFunction random_tfunction(Rng& rng, double norm_t = 1.0);

/// F = n * m_a(m_a(f1(l1)/n) + m_a(f2(l2)/n)) with n = norm_t and
/// a = f(0)/n. Restricts to f on T and has sup over Delta equal to norm_t.
/// Constant f is rejected with DegenerateInputError (use constant_extension).
TwoVarFunction np_extension(const TFunction& f, double norm_t);
/// Uses f.exact_norm(); InputError when the norm is not known exactly.
TwoVarFunction np_extension(const TFunction& f);
TwoVarFunction constant_extension(const TFunction& f);

/// E f (l) = f1(l1) + f2(l2) - f1(0). Linear in f.
TwoVarFunction linear_E(const TFunction& f);

bool in_Delta(const Point2& l);
/// (|l1| + |l2|) |1 + l1 l2| < 1 inside the bidisc.
bool in_G49(const Point2& l);
bool in_H(const Point2& l);

/// Lambda-dependent correction C_tau attached to a unimodular pair tau.
struct TauEntry {
  std::array<cplx, 2> tau;
  TwoVarFunction correction;
};

/// Finite sample of a family tau -> C_tau. The domain it describes is cut
/// out by |tau.l + l1 l2 C_tau(l)| < 1 for *all* tau on the torus; a finite
/// grid only checks some of those inequalities, so membership computed from
/// it is an outer approximation.
class TauFamily {
 public:
  void add(std::array<cplx, 2> tau, TwoVarFunction correction);
  const std::vector<TauEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Product grid tau = (e^{2 pi i j / n1}, e^{2 pi i k / n2}) with a
  /// correction computed from tau.
  static TauFamily grid(int n1, int n2, const std::function<TwoVarFunction(std::array<cplx, 2>)>& make);
  /// C_tau(l) = tau.l on a grid of relative phases: tau = (1, e^{2 pi i k / n}).
  /// The modulus tested depends only on the relative phase of tau.
  static TauFamily linear_grid(int n = 64);

 private:
  std::vector<TauEntry> entries_;
};

/// Point of the bidisc passing every sampled inequality of the family.
bool in_G_tau_family(const TauFamily& fam, const Point2& l);
/// max over entries of |tau.l + l1 l2 C_tau(l)|.
double tau_family_gauge(const TauFamily& fam, const Point2& l);

/// True when a norm-preserving extension from T is impossible for a domain
/// whose radius in direction v is R, i.e. R > 1 / (|v1| + |v2|).
bool radius_obstruction(const Point2& v, double radius);

}  // namespace nptk
