#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "nptk/random.hpp"

namespace nptk {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Dense complex matrix, row-major. Small sizes only (at most a few dozen).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);  // zero-filled
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  /// Validating factory: entries.size() == rows*cols and all finite.
  static ComplexMatrix from_entries(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  static ComplexMatrix column(std::span<const cplx> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const cplx> entries() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);

  bool all_finite() const;
  bool is_upper_triangular(double tol = 0.0) const;
  double max_abs() const;
  double frobenius_norm() const;
  cplx trace() const;

  CVector apply(std::span<const cplx> v) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Square operator on M1 (+) M2 together with its block split
/// [[A, B], [C, D]], A acting on M1.
class DecomposedOperator {
 public:
  DecomposedOperator(ComplexMatrix block, std::size_t dim1, std::size_t dim2);
  /// Same, additionally requiring block to be unitary within tol.
  static DecomposedOperator unitary(ComplexMatrix block, std::size_t dim1, std::size_t dim2,
                                    double tol = 1e-10);

  const ComplexMatrix& matrix() const { return block_; }
  std::size_t dim1() const { return dim1_; }
  std::size_t dim2() const { return dim2_; }
  ComplexMatrix a() const { return block_.block(0, 0, dim1_, dim1_); }
  ComplexMatrix b() const { return block_.block(0, dim1_, dim1_, dim2_); }
  ComplexMatrix c() const { return block_.block(dim1_, 0, dim2_, dim1_); }
  ComplexMatrix d() const { return block_.block(dim1_, dim1_, dim2_, dim2_); }

 private:
  ComplexMatrix block_;
  std::size_t dim1_;
  std::size_t dim2_;
};

/// Largest singular value. Gram matrices of side 1 and 2 use closed forms;
/// larger ones use power iteration on the Gram matrix.
double operator_norm(const ComplexMatrix& m);

/// Largest eigenvalue of a Hermitian positive semidefinite matrix by power
/// iteration (relative tolerance 1e-12, at most 10^4 steps). Exposed for
/// cross-checking the closed forms.
double power_iteration_top_eigenvalue(const ComplexMatrix& hermitian_psd);

/// Largest singular value together with unit right/left singular vectors
/// (m * right = sigma * left). Only for matrices with at most 2 columns.
struct SingularTriple {
  double sigma;
  CVector right;
  CVector left;
};
SingularTriple top_singular_triple_2x2(const ComplexMatrix& m);

/// Gauss-Jordan with partial pivoting. Throws SingularMatrixError when a
/// pivot collapses or the 1-norm condition number exceeds max_condition.
ComplexMatrix inverse(const ComplexMatrix& m, double max_condition = 1e12);

/// ||M M* - I|| <= tol and ||M* M - I|| <= tol.
bool is_unitary(const ComplexMatrix& m, double tol);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal absorbed into Q.
ComplexMatrix random_unitary(std::size_t n, Rng& rng);
ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed);

ComplexMatrix direct_sum(std::span<const ComplexMatrix> parts);
ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

cplx inner(std::span<const cplx> x, std::span<const cplx> y);  // <x, y> = sum x_i conj(y_i)
double norm2(std::span<const cplx> x);

}  // namespace nptk
