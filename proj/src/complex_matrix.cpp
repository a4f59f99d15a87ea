#include "nptk/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nptk/errors.hpp"

namespace nptk {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InputError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::from_entries(std::size_t rows, std::size_t cols, std::vector<cplx> entries) {
  if (entries.size() != rows * cols) throw InputError("ComplexMatrix: entry count does not match rows*cols");
  ComplexMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(entries);
  if (!m.all_finite()) throw InputError("ComplexMatrix: non-finite entry");
  return m;
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> v) {
  ComplexMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw InputError("ComplexMatrix::block out of range");
  ComplexMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw InputError("ComplexMatrix::set_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool ComplexMatrix::is_upper_triangular(double tol) const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < std::min(i, cols_); ++j)
      if (std::abs((*this)(i, j)) > tol) return false;
  return true;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

CVector ComplexMatrix::apply(std::span<const cplx> v) const {
  if (v.size() != cols_) throw InputError("ComplexMatrix::apply: dimension mismatch");
  CVector out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      const cplx a = data_[i * cols_ + j];
      re += a.real() * v[j].real() - a.imag() * v[j].imag();
      im += a.real() * v[j].imag() + a.imag() * v[j].real();
    }
    out[i] = {re, im};
  }
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("ComplexMatrix +: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("ComplexMatrix -: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw InputError("ComplexMatrix *: dimension mismatch");
  ComplexMatrix c(a.rows_, b.cols_);
  // Plain real arithmetic: std::complex products take the slow
  // inf/nan-recovery path, and entries are finite by construction.
  const std::size_t n = b.cols_;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    cplx* crow = &c.data_[i * n];
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double ar = a.data_[i * a.cols_ + k].real(), ai = a.data_[i * a.cols_ + k].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const cplx* brow = &b.data_[k * n];
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[j].real(), bi = brow[j].imag();
        crow[j] = {crow[j].real() + ar * br - ai * bi, crow[j].imag() + ar * bi + ai * br};
      }
    }
  }
  return c;
}

DecomposedOperator::DecomposedOperator(ComplexMatrix block, std::size_t dim1, std::size_t dim2)
    : block_(std::move(block)), dim1_(dim1), dim2_(dim2) {
  if (!block_.is_square() || block_.rows() != dim1 + dim2)
    throw InputError("DecomposedOperator: block must be square with side dim1 + dim2");
}

DecomposedOperator DecomposedOperator::unitary(ComplexMatrix block, std::size_t dim1, std::size_t dim2,
                                               double tol) {
  DecomposedOperator op(std::move(block), dim1, dim2);
  if (!is_unitary(op.block_, tol)) throw InputError("DecomposedOperator: block is not unitary");
  return op;
}

namespace {

ComplexMatrix gram(const ComplexMatrix& m) {
  // The smaller of M M* and M* M; both share the nonzero spectrum.
  return m.rows() <= m.cols() ? m * m.adjoint() : m.adjoint() * m;
}

// Top eigenvalue of Hermitian [[p, q], [conj(q), s]]. The discriminant
// tau^2 - 4 det is written as (p - s)^2 + 4|q|^2 to avoid cancellation.
double top_eigenvalue_2x2(double p, double s, cplx q) {
  const double half_gap = 0.5 * (p - s);
  return 0.5 * (p + s) + std::sqrt(half_gap * half_gap + std::norm(q));
}

}  // namespace

double power_iteration_top_eigenvalue(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 0.0;
  cplx tr = a.trace();
  if (!(tr.real() > 0.0)) return 0.0;
  // Repeated squaring of a / trace amplifies the dominant eigendirection
  // doubly exponentially, so clustered or exactly repeated eigenvalues do
  // not stall the plain iteration that follows. Stop once the normalised
  // power is idempotent.
  ComplexMatrix p = a * (1.0 / tr.real());
  for (int k = 0; k < 64; ++k) {
    ComplexMatrix q = p * p;
    tr = q.trace();
    if (!(tr.real() > 0.0)) break;
    q *= 1.0 / tr.real();
    const double change = (q - p).max_abs();
    p = std::move(q);
    if (change <= 1e-15) break;
  }
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(p(i, j));
    if (s > best_norm) {
      best_norm = s;
      best = j;
    }
  }
  CVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = p(i, best);
  double nv = norm2(v);
  if (!(nv > 0.0)) return 0.0;
  for (auto& x : v) x /= nv;

  double rho = 0.0;
  double prev_delta = 0.0;
  constexpr double kTol = 1e-12;
  constexpr int kMaxIter = 10000;
  for (int it = 0; it < kMaxIter; ++it) {
    CVector w = a.apply(v);
    const double next = std::real(inner(w, v));
    nv = norm2(w);
    if (nv == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nv;
    const double delta = std::abs(next - rho);
    rho = next;
    // Changes at rounding level carry no rate information.
    if (delta <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(rho)) break;
    if (it >= 2) {
      // Geometric-rate extrapolation of the remaining error.
      const double rate = prev_delta > 0.0 ? std::clamp(delta / prev_delta, 0.0, 0.999999) : 0.0;
      if (delta <= kTol * std::abs(rho) * (1.0 - rate)) break;
    }
    prev_delta = delta;
  }
  return rho;
}

double operator_norm(const ComplexMatrix& m) {
  if (!m.all_finite()) throw InputError("operator_norm: non-finite entries");
  if (m.empty()) return 0.0;
  const ComplexMatrix g = gram(m);
  if (g.rows() == 1) return std::sqrt(std::max(0.0, g(0, 0).real()));
  if (g.rows() == 2)
    return std::sqrt(std::max(0.0, top_eigenvalue_2x2(g(0, 0).real(), g(1, 1).real(), g(0, 1))));
  return std::sqrt(std::max(0.0, power_iteration_top_eigenvalue(g)));
}

SingularTriple top_singular_triple_2x2(const ComplexMatrix& m) {
  if (m.cols() > 2 || m.cols() == 0) throw UnsupportedInputError("top_singular_triple_2x2: at most 2 columns");
  const ComplexMatrix g = m.adjoint() * m;
  SingularTriple out;
  CVector v;
  double lambda;
  if (g.rows() == 1) {
    lambda = g(0, 0).real();
    v = {1.0};
  } else {
    const double p = g(0, 0).real();
    const double s = g(1, 1).real();
    const cplx q = g(0, 1);
    lambda = top_eigenvalue_2x2(p, s, q);
    CVector v1 = {q, lambda - p};
    CVector v2 = {lambda - s, std::conj(q)};
    v = norm2(v1) >= norm2(v2) ? v1 : v2;
    const double nv = norm2(v);
    if (nv <= 1e-300) {
      v = {1.0, 0.0};
    } else {
      for (auto& x : v) x /= nv;
    }
  }
  out.sigma = std::sqrt(std::max(0.0, lambda));
  out.right = v;
  CVector u = m.apply(v);
  const double nu = norm2(u);
  if (nu > 1e-300) {
    for (auto& x : u) x /= nu;
  } else {
    u.assign(m.rows(), 0.0);
    u[0] = 1.0;
  }
  out.left = u;
  return out;
}

ComplexMatrix inverse(const ComplexMatrix& m, double max_condition) {
  if (!m.is_square()) throw InputError("inverse: matrix must be square");
  if (!m.all_finite()) throw InputError("inverse: non-finite entries");
  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  ComplexMatrix inv = ComplexMatrix::identity(n);
  const double scale = std::max(m.max_abs(), 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) <= 1e-14 * scale) throw SingularMatrixError("inverse: pivot below threshold");
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    const cplx d = 1.0 / a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) *= d;
      inv(col, j) *= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const cplx f = a(r, col);
      if (f == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  auto one_norm = [](const ComplexMatrix& x) {
    double best = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) s += std::abs(x(i, j));
      best = std::max(best, s);
    }
    return best;
  };
  const double cond = one_norm(m) * one_norm(inv);
  if (!(cond <= max_condition)) throw SingularMatrixError("inverse: condition estimate above threshold");
  return inv;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) throw InputError("is_unitary: matrix must be square");
  const auto id = ComplexMatrix::identity(m.rows());
  return operator_norm(m * m.adjoint() - id) <= tol && operator_norm(m.adjoint() * m - id) <= tol;
}

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  if (n == 0) throw InputError("random_unitary: n must be >= 1");
  // Columns of a Ginibre matrix, orthonormalised by modified Gram-Schmidt
  // (two passes). The first-pass norms are R's diagonal, which is real and
  // positive in this convention, so the phase correction is built in: the
  // result is the Q of the QR factorisation with positive diag(R), which is
  // Haar distributed.
  std::vector<CVector> cols(n, CVector(n));
  for (auto& c : cols)
    for (auto& x : c) x = rng.complex_normal();
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const cplx proj = inner(cols[j], cols[k]);
        for (std::size_t i = 0; i < n; ++i) cols[j][i] -= proj * cols[k][i];
      }
    }
    const double nj = norm2(cols[j]);
    for (auto& x : cols[j]) x /= nj;
  }
  ComplexMatrix q(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) q(i, j) = cols[j][i];
  return q;
}

ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(n, rng);
}

ComplexMatrix direct_sum(std::span<const ComplexMatrix> parts) {
  std::size_t r = 0, c = 0;
  for (const auto& p : parts) {
    r += p.rows();
    c += p.cols();
  }
  ComplexMatrix out(r, c);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& p : parts) {
    out.set_block(r0, c0, p);
    r0 += p.rows();
    c0 += p.cols();
  }
  return out;
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix parts[] = {a, b};
  return direct_sum(parts);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw InputError("inner: dimension mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

double norm2(std::span<const cplx> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace nptk
