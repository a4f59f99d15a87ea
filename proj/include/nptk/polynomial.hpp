#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nptk {

using cplx = std::complex<double>;
using MultiIndex = std::vector<int>;

struct Monomial {
  MultiIndex exponents;
  cplx coeff;
};

/// Commutative polynomial in a fixed number of variables. Terms with equal
/// exponents are merged and exact zeros dropped on construction.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::size_t nvars, std::vector<Monomial> terms);

  static Polynomial constant(std::size_t nvars, cplx c);
  static Polynomial variable(std::size_t nvars, std::size_t k);

  std::size_t nvars() const { return nvars_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }

  cplx operator()(std::span<const cplx> point) const;
  Polynomial derivative(std::size_t k) const;
  /// Coefficient of h^beta in f(point + h), i.e. d^beta f(point) / beta!.
  cplx taylor_coefficient(std::span<const cplx> point, const MultiIndex& beta) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(cplx s, const Polynomial& a);

 private:
  std::size_t nvars_ = 0;
  std::vector<Monomial> terms_;
};

/// Truncated power series given by its local Taylor coefficients: for a
/// centre point and multi-index beta, coefficient(point, beta) must return
/// d^beta f(point) / beta! for every |beta| <= order.
struct TruncatedSeries {
  std::size_t nvars;
  int order;
  std::function<cplx(std::span<const cplx>, const MultiIndex&)> coefficient;
};

/// I x J matrix of polynomials in a common number of variables, defining
/// the operhedron G_p = {l : ||p(l)|| < 1}.
class PolyMatrix {
 public:
  PolyMatrix(std::size_t rows, std::size_t cols, std::vector<Polynomial> entries);

  /// diag(l1, ..., ld): the polydisc.
  static PolyMatrix polydisc(std::size_t d);
  /// column (l1, ..., ld): the Euclidean ball.
  static PolyMatrix ball(std::size_t d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nvars() const { return nvars_; }
  const Polynomial& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

 private:
  std::size_t rows_, cols_, nvars_;
  std::vector<Polynomial> entries_;
};

/// Common zero set of a nonempty list of generators.
class VarietySpec {
 public:
  explicit VarietySpec(std::vector<Polynomial> generators);
  const std::vector<Polynomial>& generators() const { return generators_; }
  std::size_t nvars() const { return generators_.front().nvars(); }

 private:
  std::vector<Polynomial> generators_;
};

/// Enumerate multi-indices in nvars variables with |beta| <= max_total,
/// graded by total degree.
std::vector<MultiIndex> multi_indices_up_to(std::size_t nvars, int max_total);

}  // namespace nptk
