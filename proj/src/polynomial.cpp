#include "nptk/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nptk/errors.hpp"

namespace nptk {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

cplx ipow(cplx z, int e) {
  cplx r = 1.0;
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

}  // namespace

Polynomial::Polynomial(std::size_t nvars, std::vector<Monomial> terms) : nvars_(nvars) {
  std::map<MultiIndex, cplx> merged;
  for (auto& t : terms) {
    if (t.exponents.size() != nvars) throw InputError("Polynomial: exponent length does not match variable count");
    for (int e : t.exponents)
      if (e < 0) throw InputError("Polynomial: negative exponent");
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
      throw InputError("Polynomial: non-finite coefficient");
    merged[t.exponents] += t.coeff;
  }
  for (auto& [e, c] : merged)
    if (c != cplx{}) terms_.push_back({e, c});
}

Polynomial Polynomial::constant(std::size_t nvars, cplx c) { return Polynomial(nvars, {{MultiIndex(nvars, 0), c}}); }

Polynomial Polynomial::variable(std::size_t nvars, std::size_t k) {
  if (k >= nvars) throw InputError("Polynomial::variable: index out of range");
  MultiIndex e(nvars, 0);
  e[k] = 1;
  return Polynomial(nvars, {{e, 1.0}});
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int e : t.exponents) s += e;
    d = std::max(d, s);
  }
  return d;
}

cplx Polynomial::operator()(std::span<const cplx> point) const {
  if (point.size() != nvars_) throw InputError("Polynomial: point dimension mismatch");
  cplx acc = 0.0;
  for (const auto& t : terms_) {
    cplx m = t.coeff;
    for (std::size_t k = 0; k < nvars_; ++k) m *= ipow(point[k], t.exponents[k]);
    acc += m;
  }
  return acc;
}

Polynomial Polynomial::derivative(std::size_t k) const {
  if (k >= nvars_) throw InputError("Polynomial::derivative: index out of range");
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    if (t.exponents[k] == 0) continue;
    Monomial m = t;
    m.coeff *= static_cast<double>(m.exponents[k]);
    m.exponents[k] -= 1;
    out.push_back(std::move(m));
  }
  return Polynomial(nvars_, std::move(out));
}

cplx Polynomial::taylor_coefficient(std::span<const cplx> point, const MultiIndex& beta) const {
  if (point.size() != nvars_ || beta.size() != nvars_) throw InputError("Polynomial: dimension mismatch");
  cplx acc = 0.0;
  for (const auto& t : terms_) {
    cplx m = t.coeff;
    for (std::size_t k = 0; k < nvars_ && m != cplx{}; ++k) {
      const int a = t.exponents[k], b = beta[k];
      if (b > a) {
        m = 0.0;
        break;
      }
      m *= binomial(a, b) * ipow(point[k], a - b);
    }
    acc += m;
  }
  return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw InputError("Polynomial +: variable count mismatch");
  std::vector<Monomial> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return Polynomial(a.nvars_, std::move(t));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + cplx(-1.0) * b; }

Polynomial operator*(cplx s, const Polynomial& a) {
  std::vector<Monomial> t = a.terms_;
  for (auto& m : t) m.coeff *= s;
  return Polynomial(a.nvars_, std::move(t));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw InputError("Polynomial *: variable count mismatch");
  std::vector<Monomial> t;
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) {
      MultiIndex e(a.nvars_);
      for (std::size_t k = 0; k < a.nvars_; ++k) e[k] = x.exponents[k] + y.exponents[k];
      t.push_back({e, x.coeff * y.coeff});
    }
  return Polynomial(a.nvars_, std::move(t));
}

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, std::vector<Polynomial> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0 || entries_.size() != rows * cols)
    throw InputError("PolyMatrix: entry count does not match rows*cols");
  nvars_ = entries_.front().nvars();
  for (const auto& e : entries_)
    if (e.nvars() != nvars_) throw InputError("PolyMatrix: entries must share the variable count");
}

PolyMatrix PolyMatrix::polydisc(std::size_t d) {
  std::vector<Polynomial> e;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) e.push_back(i == j ? Polynomial::variable(d, i) : Polynomial(d, {}));
  return PolyMatrix(d, d, std::move(e));
}

PolyMatrix PolyMatrix::ball(std::size_t d) {
  std::vector<Polynomial> e;
  for (std::size_t i = 0; i < d; ++i) e.push_back(Polynomial::variable(d, i));
  return PolyMatrix(d, 1, std::move(e));
}

VarietySpec::VarietySpec(std::vector<Polynomial> generators) : generators_(std::move(generators)) {
  if (generators_.empty()) throw InputError("VarietySpec: generator list must be nonempty");
  for (const auto& g : generators_)
    if (g.nvars() != generators_.front().nvars()) throw InputError("VarietySpec: generators must share the variable count");
}

std::vector<MultiIndex> multi_indices_up_to(std::size_t nvars, int max_total) {
  std::vector<MultiIndex> out;
  if (max_total < 0) return out;
  out.push_back(MultiIndex(nvars, 0));
  std::size_t level_begin = 0;
  for (int deg = 1; deg <= max_total; ++deg) {
    const std::size_t level_end = out.size();
    // Extend each index of the previous degree by one in a variable at or
    // after its last nonzero slot, so every index is produced once.
    for (std::size_t i = level_begin; i < level_end; ++i) {
      const MultiIndex base = out[i];
      std::size_t last = 0;
      for (std::size_t k = 0; k < nvars; ++k)
        if (base[k] > 0) last = k;
      for (std::size_t k = last; k < nvars; ++k) {
        MultiIndex next = base;
        ++next[k];
        out.push_back(std::move(next));
      }
    }
    level_begin = level_end;
  }
  return out;
}

}  // namespace nptk
