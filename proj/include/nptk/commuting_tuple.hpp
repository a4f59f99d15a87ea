#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nptk/complex_matrix.hpp"
#include "nptk/polynomial.hpp"
#include "nptk/random.hpp"

namespace nptk {

/// One summand x_i = lambda_i I + N_i of a Jordan-type assembly: N_i are
/// commuting strictly upper triangular matrices of a common size.
struct JordanBlock {
  CVector point;
  std::vector<ComplexMatrix> nilpotent;

  std::size_t size() const { return nilpotent.empty() ? 0 : nilpotent.front().rows(); }
};

/// y = S^{-1} (x_1 (+) ... (+) x_m) S.
struct Assembly {
  ComplexMatrix s;
  ComplexMatrix s_inv;
  std::vector<JordanBlock> blocks;
};

/// d commuting n x n matrices, optionally with assembly data that exposes
/// the joint spectrum and drives the functional calculus.
class CommutingTuple {
 public:
  /// Checks pairwise commutators against 1e-10 * max(1, max ||x_k||^2).
  explicit CommutingTuple(std::vector<ComplexMatrix> matrices);
  /// Builds the matrices from blocks; S defaults to the identity and S^{-1}
  /// is computed when not given.
  static CommutingTuple from_blocks(std::vector<JordanBlock> blocks, std::optional<ComplexMatrix> s = std::nullopt,
                                    std::optional<ComplexMatrix> s_inv = std::nullopt);
  /// Matrices together with assembly data; the assembly must reproduce them.
  static CommutingTuple with_assembly(std::vector<ComplexMatrix> matrices, Assembly assembly);
  static CommutingTuple scalar(std::span<const cplx> point);

  std::size_t nvars() const { return matrices_.size(); }
  std::size_t size() const { return matrices_.front().rows(); }
  const std::vector<ComplexMatrix>& matrices() const { return matrices_; }
  const ComplexMatrix& operator[](std::size_t k) const { return matrices_[k]; }
  const std::optional<Assembly>& assembly() const { return assembly_; }
  double max_commutator_norm() const;

  /// s * y, keeping assembly data consistent.
  CommutingTuple scaled(double s) const;

 private:
  CommutingTuple() = default;
  std::vector<ComplexMatrix> matrices_;
  std::optional<Assembly> assembly_;
};

/// S'^{-1} y S'. With assembly data the new similarity is S S'.
CommutingTuple conjugate(const CommutingTuple& y, const ComplexMatrix& s, const ComplexMatrix& s_inv);
CommutingTuple conjugate(const CommutingTuple& y, const ComplexMatrix& s);
CommutingTuple direct_sum(const CommutingTuple& x, const CommutingTuple& y);

/// Block matrix [p_ij(x)] of size (I n) x (J n).
ComplexMatrix eval_poly_tuple(const PolyMatrix& p, const CommutingTuple& x);
/// Scalar evaluation p(l).
ComplexMatrix eval_poly_point(const PolyMatrix& p, std::span<const cplx> l);
bool in_Gp(const PolyMatrix& p, std::span<const cplx> l);
bool in_Fp(const PolyMatrix& p, const CommutingTuple& x);

struct SpectrumPoint {
  CVector point;
  int multiplicity;
};
/// Joint eigenvalues with multiplicities, from assembly blocks or, failing
/// that, from the diagonals of upper triangular matrices.
std::vector<SpectrumPoint> spectrum(const CommutingTuple& x, double triangular_tol = 1e-12);

/// Smallest k such that every degree-k monomial in the block's N vanishes.
int nilpotency_order(const JordanBlock& b);

/// f(y) through the Taylor expansion of f at every block point.
ComplexMatrix func_calc(const Polynomial& f, const CommutingTuple& y);
ComplexMatrix func_calc(const TruncatedSeries& f, const CommutingTuple& y);
/// sum c_alpha y^alpha by direct matrix products; needs no assembly data.
ComplexMatrix eval_poly_direct(const Polynomial& f, const CommutingTuple& y);

/// Generator-vanishing test: ||g(y)|| <= tol for every generator g.
bool is_subordinate(const CommutingTuple& y, const VarietySpec& v, double tol = 1e-10);

/// Largest t found by doubling and bisection with g(t) < target, for g
/// increasing along a ray; nullopt when g(0) >= target or g never reaches it.
std::optional<double> radial_bisect(const std::function<double(double)>& g, double target);

/// Parameters from which a tuple is rebuilt deterministically; the hill
/// climber perturbs these.
struct TupleRecipe {
  std::size_t nvars = 0;
  std::vector<cplx> mu;                    // per block: eigenvalue of the base matrix
  std::vector<ComplexMatrix> upper;        // per block: strictly upper part of the base matrix
  std::vector<std::array<cplx, 4>> q;      // per variable: coefficients of q_k, degree <= 3
  ComplexMatrix su, sv;                    // S = su diag(exp(log_sigma)) sv*
  std::vector<double> log_sigma;
  double target_exponent = 2.0;            // target norm 1 - 10^{-target_exponent}

  std::size_t size() const;
  double target() const;
};

struct TupleGenOptions {
  std::optional<double> target;            // fixed target norm in (0, 1)
  bool random_similarity = true;
  double max_condition = 10.0;
  std::size_t max_block = 4;
};

/// Random size-n recipe: blocks of random sizes, q_k random of degree <= 3,
/// S with singular values log-uniform in [1, max_condition].
TupleRecipe random_recipe(std::size_t d, std::size_t n, Rng& rng, const TupleGenOptions& opt = {});
/// Builds the tuple from the recipe and rescales it radially so that
/// ||p(s x)|| sits just below the target. Throws DegenerateInputError when
/// the ray never reaches the target.
CommutingTuple realize(const TupleRecipe& r, const PolyMatrix& p);
CommutingTuple gen_commuting_tuple(std::size_t d, std::size_t n, std::uint64_t seed, const PolyMatrix& p,
                                   const TupleGenOptions& opt = {});

/// Up to max_terms monomials of total degree <= max_degree with standard
/// complex normal coefficients.
Polynomial random_polynomial(std::size_t nvars, int max_degree, Rng& rng, int max_terms = 6);

/// Fixed tuples from the worked examples: 4 x 4 pair subordinate to
/// {l1^2 = l2^2} and the 2 x 2 pair that is not.
CommutingTuple example_pair_4x4(cplx c, cplx d);
CommutingTuple example_pair_2x2(cplx c, cplx d);

}  // namespace nptk
