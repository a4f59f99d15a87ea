#include "nptk/commuting_tuple.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nptk/errors.hpp"

namespace nptk {

namespace {

double tuple_scale(std::span<const ComplexMatrix> ms) {
  double s = 1.0;
  for (const auto& m : ms) s = std::max(s, m.max_abs());
  return s;
}

void check_commuting(std::span<const ComplexMatrix> ms) {
  const double scale = tuple_scale(ms);
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j)
      if (commutator(ms[i], ms[j]).max_abs() > 1e-10 * scale * scale * static_cast<double>(ms[i].rows()))
        throw InputError("CommutingTuple: matrices do not commute");
}

// Zeroes the diagonal and lower part after checking it is negligible.
ComplexMatrix strict_upper(const ComplexMatrix& m, double tol) {
  ComplexMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      if (std::abs(m(i, j)) > tol) throw InputError("JordanBlock: nilpotent part must be strictly upper triangular");
      out(i, j) = 0.0;
    }
  return out;
}

JordanBlock validated(JordanBlock b, std::size_t d) {
  if (b.point.size() != d || b.nilpotent.size() != d)
    throw InputError("JordanBlock: point and nilpotent list must have one entry per variable");
  const std::size_t m = b.nilpotent.front().rows();
  if (m == 0) throw InputError("JordanBlock: empty block");
  double scale = 1.0;
  for (const auto& n : b.nilpotent) {
    if (n.rows() != m || n.cols() != m) throw InputError("JordanBlock: nilpotent parts must be square of equal size");
    scale = std::max(scale, n.max_abs());
  }
  for (auto& n : b.nilpotent) n = strict_upper(n, 1e-12 * scale);
  return b;
}

std::vector<ComplexMatrix> assemble(const Assembly& a, std::size_t d) {
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<ComplexMatrix> parts;
    for (const auto& b : a.blocks) parts.push_back(b.point[k] * ComplexMatrix::identity(b.size()) + b.nilpotent[k]);
    out.push_back(a.s_inv * direct_sum(parts) * a.s);
  }
  return out;
}

// Powers x_k^e for e <= max_exp, then sum c_alpha x^alpha.
ComplexMatrix eval_direct(const Polynomial& f, std::span<const ComplexMatrix> xs) {
  if (f.nvars() != xs.size()) throw InputError("polynomial evaluation: variable count does not match tuple");
  const std::size_t n = xs.front().rows();
  const int deg = f.degree();
  std::vector<std::vector<ComplexMatrix>> pw(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    pw[k].push_back(ComplexMatrix::identity(n));
    for (int e = 1; e <= deg; ++e) pw[k].push_back(pw[k].back() * xs[k]);
  }
  ComplexMatrix acc(n, n);
  for (const auto& t : f.terms()) {
    ComplexMatrix m = ComplexMatrix::identity(n);
    for (std::size_t k = 0; k < xs.size(); ++k)
      if (t.exponents[k] > 0) m = m * pw[k][static_cast<std::size_t>(t.exponents[k])];
    acc += t.coeff * m;
  }
  return acc;
}

ComplexMatrix eval_poly_matrices(const PolyMatrix& p, std::span<const ComplexMatrix> xs) {
  if (p.nvars() != xs.size()) throw InputError("eval_poly_tuple: variable count mismatch");
  const std::size_t n = xs.front().rows();
  ComplexMatrix out(p.rows() * n, p.cols() * n);
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j)
      if (!p(i, j).is_zero()) out.set_block(i * n, j * n, eval_direct(p(i, j), xs));
  return out;
}

// Monomials N^beta for every |beta| <= k, keyed by beta.
std::map<MultiIndex, ComplexMatrix> nilpotent_monomials(const JordanBlock& b, int k) {
  std::map<MultiIndex, ComplexMatrix> out;
  const std::size_t d = b.nilpotent.size();
  for (const auto& beta : multi_indices_up_to(d, k)) {
    std::size_t last = d;
    for (std::size_t j = 0; j < d; ++j)
      if (beta[j] > 0) last = j;
    if (last == d) {
      out.emplace(beta, ComplexMatrix::identity(b.size()));
    } else {
      MultiIndex prev = beta;
      --prev[last];
      out.emplace(beta, out.at(prev) * b.nilpotent[last]);
    }
  }
  return out;
}

template <class Coefficient>
ComplexMatrix taylor_calc(const CommutingTuple& y, std::size_t nvars, std::optional<int> order, int cap,
                          Coefficient&& coefficient) {
  if (!y.assembly()) throw UnsupportedInputError("func_calc: tuple carries no assembly data");
  if (nvars != y.nvars()) throw InputError("func_calc: variable count does not match tuple");
  const Assembly& a = *y.assembly();
  std::vector<ComplexMatrix> parts;
  for (const auto& b : a.blocks) {
    int k = nilpotency_order(b) - 1;
    if (order && *order < k)
      throw InsufficientSeriesError("func_calc: block needs Taylor order " + std::to_string(k) +
                                    ", series is truncated at " + std::to_string(*order));
    k = std::min(k, cap);
    ComplexMatrix acc(b.size(), b.size());
    for (const auto& [beta, mono] : nilpotent_monomials(b, k)) acc += coefficient(std::span<const cplx>(b.point), beta) * mono;
    parts.push_back(std::move(acc));
  }
  return a.s_inv * direct_sum(parts) * a.s;
}

}  // namespace

CommutingTuple::CommutingTuple(std::vector<ComplexMatrix> matrices) : matrices_(std::move(matrices)) {
  if (matrices_.empty()) throw InputError("CommutingTuple: need at least one matrix");
  const std::size_t n = matrices_.front().rows();
  if (n == 0) throw InputError("CommutingTuple: empty matrices");
  for (const auto& m : matrices_) {
    if (m.rows() != n || m.cols() != n) throw InputError("CommutingTuple: matrices must be square of a common size");
    if (!m.all_finite()) throw InputError("CommutingTuple: non-finite entry");
  }
  check_commuting(matrices_);
}

CommutingTuple CommutingTuple::from_blocks(std::vector<JordanBlock> blocks, std::optional<ComplexMatrix> s,
                                           std::optional<ComplexMatrix> s_inv) {
  if (blocks.empty()) throw InputError("CommutingTuple: need at least one block");
  const std::size_t d = blocks.front().point.size();
  if (d == 0) throw InputError("CommutingTuple: blocks need at least one variable");
  std::size_t n = 0;
  for (auto& b : blocks) {
    b = validated(std::move(b), d);
    n += b.size();
  }
  Assembly a;
  a.s = s ? *s : ComplexMatrix::identity(n);
  if (a.s.rows() != n || a.s.cols() != n) throw InputError("CommutingTuple: similarity has the wrong size");
  if (s_inv) {
    a.s_inv = *s_inv;
    if (a.s_inv.rows() != n || a.s_inv.cols() != n) throw InputError("CommutingTuple: inverse similarity has the wrong size");
    if ((a.s * a.s_inv - ComplexMatrix::identity(n)).max_abs() > 1e-9)
      throw InputError("CommutingTuple: S and S^{-1} are not inverse to each other");
  } else {
    a.s_inv = inverse(a.s);
  }
  a.blocks = std::move(blocks);
  CommutingTuple t(assemble(a, d));
  t.assembly_ = std::move(a);
  return t;
}

CommutingTuple CommutingTuple::with_assembly(std::vector<ComplexMatrix> matrices, Assembly assembly) {
  CommutingTuple stored(std::move(matrices));
  CommutingTuple rebuilt = from_blocks(std::move(assembly.blocks), std::move(assembly.s), std::move(assembly.s_inv));
  if (rebuilt.nvars() != stored.nvars() || rebuilt.size() != stored.size())
    throw InputError("CommutingTuple: assembly data has the wrong shape");
  const double scale = tuple_scale(stored.matrices_);
  for (std::size_t k = 0; k < stored.nvars(); ++k)
    if ((rebuilt.matrices_[k] - stored.matrices_[k]).max_abs() > 1e-10 * scale)
      throw InputError("CommutingTuple: assembly does not reproduce the stored matrices");
  stored.assembly_ = std::move(rebuilt.assembly_);
  return stored;
}

CommutingTuple CommutingTuple::scalar(std::span<const cplx> point) {
  JordanBlock b{CVector(point.begin(), point.end()), std::vector<ComplexMatrix>(point.size(), ComplexMatrix(1, 1))};
  return from_blocks({std::move(b)});
}

double CommutingTuple::max_commutator_norm() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < matrices_.size(); ++i)
    for (std::size_t j = i + 1; j < matrices_.size(); ++j)
      worst = std::max(worst, operator_norm(commutator(matrices_[i], matrices_[j])));
  return worst;
}

CommutingTuple CommutingTuple::scaled(double s) const {
  CommutingTuple t;
  for (const auto& m : matrices_) t.matrices_.push_back(s * m);
  if (assembly_) {
    Assembly a = *assembly_;
    for (auto& b : a.blocks) {
      for (auto& l : b.point) l *= s;
      for (auto& n : b.nilpotent) n *= s;
    }
    t.assembly_ = std::move(a);
  }
  return t;
}

CommutingTuple conjugate(const CommutingTuple& y, const ComplexMatrix& s, const ComplexMatrix& s_inv) {
  if (s.rows() != y.size() || s.cols() != y.size() || s_inv.rows() != y.size() || s_inv.cols() != y.size())
    throw InputError("conjugate: similarity has the wrong size");
  if (y.assembly()) {
    const Assembly& a = *y.assembly();
    return CommutingTuple::from_blocks(a.blocks, a.s * s, s_inv * a.s_inv);
  }
  std::vector<ComplexMatrix> ms;
  for (const auto& m : y.matrices()) ms.push_back(s_inv * m * s);
  return CommutingTuple(std::move(ms));
}

CommutingTuple conjugate(const CommutingTuple& y, const ComplexMatrix& s) { return conjugate(y, s, inverse(s)); }

CommutingTuple direct_sum(const CommutingTuple& x, const CommutingTuple& y) {
  if (x.nvars() != y.nvars()) throw InputError("direct_sum: tuples must have the same variable count");
  if (x.assembly() && y.assembly()) {
    std::vector<JordanBlock> blocks = x.assembly()->blocks;
    blocks.insert(blocks.end(), y.assembly()->blocks.begin(), y.assembly()->blocks.end());
    return CommutingTuple::from_blocks(std::move(blocks), direct_sum(x.assembly()->s, y.assembly()->s),
                                       direct_sum(x.assembly()->s_inv, y.assembly()->s_inv));
  }
  std::vector<ComplexMatrix> ms;
  for (std::size_t k = 0; k < x.nvars(); ++k) ms.push_back(direct_sum(x[k], y[k]));
  return CommutingTuple(std::move(ms));
}

ComplexMatrix eval_poly_tuple(const PolyMatrix& p, const CommutingTuple& x) { return eval_poly_matrices(p, x.matrices()); }

ComplexMatrix eval_poly_point(const PolyMatrix& p, std::span<const cplx> l) {
  if (p.nvars() != l.size()) throw InputError("eval_poly_point: variable count mismatch");
  ComplexMatrix out(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) out(i, j) = p(i, j)(l);
  return out;
}

bool in_Gp(const PolyMatrix& p, std::span<const cplx> l) { return operator_norm(eval_poly_point(p, l)) < 1.0; }

bool in_Fp(const PolyMatrix& p, const CommutingTuple& x) { return operator_norm(eval_poly_tuple(p, x)) < 1.0; }

std::vector<SpectrumPoint> spectrum(const CommutingTuple& x, double triangular_tol) {
  std::vector<SpectrumPoint> out;
  auto add = [&out](const CVector& pt, int mult) {
    for (auto& s : out)
      if (s.point == pt) {
        s.multiplicity += mult;
        return;
      }
    out.push_back({pt, mult});
  };
  if (x.assembly()) {
    for (const auto& b : x.assembly()->blocks) add(b.point, static_cast<int>(b.size()));
    return out;
  }
  for (const auto& m : x.matrices())
    if (!m.is_upper_triangular(triangular_tol * std::max(1.0, m.max_abs())))
      throw UnsupportedInputError("spectrum: no assembly data and the matrices are not upper triangular");
  for (std::size_t i = 0; i < x.size(); ++i) {
    CVector pt;
    for (const auto& m : x.matrices()) pt.push_back(m(i, i));
    add(pt, 1);
  }
  return out;
}

int nilpotency_order(const JordanBlock& b) {
  const std::size_t d = b.nilpotent.size();
  std::vector<ComplexMatrix> level{ComplexMatrix::identity(b.size())};
  for (int k = 1;; ++k) {
    std::vector<ComplexMatrix> next;
    bool all_zero = true;
    for (const auto& m : level)
      for (std::size_t j = 0; j < d; ++j) {
        ComplexMatrix p = m * b.nilpotent[j];
        if (p.max_abs() != 0.0) {
          all_zero = false;
          next.push_back(std::move(p));
        }
      }
    if (all_zero) return k;
    // Strictly upper triangular factors: products of size() of them vanish.
    if (k > static_cast<int>(b.size())) throw ConsistencyError("nilpotency_order: block is not nilpotent");
    level = std::move(next);
  }
}

ComplexMatrix func_calc(const Polynomial& f, const CommutingTuple& y) {
  return taylor_calc(y, f.nvars(), std::nullopt, f.degree(),
                     [&f](std::span<const cplx> pt, const MultiIndex& beta) { return f.taylor_coefficient(pt, beta); });
}

ComplexMatrix func_calc(const TruncatedSeries& f, const CommutingTuple& y) {
  if (!f.coefficient) throw InputError("func_calc: series has no coefficient table");
  return taylor_calc(y, f.nvars, f.order, f.order, f.coefficient);
}

ComplexMatrix eval_poly_direct(const Polynomial& f, const CommutingTuple& y) { return eval_direct(f, y.matrices()); }

bool is_subordinate(const CommutingTuple& y, const VarietySpec& v, double tol) {
  if (!y.assembly()) throw UnsupportedInputError("is_subordinate: tuple carries no assembly data");
  for (const auto& g : v.generators())
    if (operator_norm(func_calc(g, y)) > tol) return false;
  return true;
}

std::optional<double> radial_bisect(const std::function<double(double)>& g, double target) {
  if (!(g(0.0) < target)) return std::nullopt;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; g(hi) < target; ++i) {
    if (i == 60) return std::nullopt;
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 80 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < target ? lo : hi) = mid;
  }
  return lo;
}

std::size_t TupleRecipe::size() const {
  std::size_t n = 0;
  for (const auto& u : upper) n += u.rows();
  return n;
}

double TupleRecipe::target() const { return 1.0 - std::pow(10.0, -target_exponent); }

TupleRecipe random_recipe(std::size_t d, std::size_t n, Rng& rng, const TupleGenOptions& opt) {
  if (d == 0 || n == 0 || n > 16) throw InputError("random_recipe: need d >= 1 and 1 <= n <= 16");
  if (opt.target && !(*opt.target > 0.0 && *opt.target < 1.0)) throw InputError("random_recipe: target must lie in (0, 1)");
  TupleRecipe r;
  r.nvars = d;
  std::size_t left = n;
  while (left > 0) {
    const auto m = static_cast<std::size_t>(rng.uniform_int(1, static_cast<int>(std::min(left, opt.max_block))));
    r.mu.push_back(rng.in_disc());
    ComplexMatrix u(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) u(i, j) = rng.uniform() * rng.complex_normal();
    r.upper.push_back(std::move(u));
    left -= m;
  }
  for (std::size_t k = 0; k < d; ++k) {
    const int deg = rng.uniform_int(1, 3);
    std::array<cplx, 4> q{};
    for (int j = 0; j <= deg; ++j) q[static_cast<std::size_t>(j)] = rng.complex_normal();
    r.q.push_back(q);
  }
  if (opt.random_similarity) {
    r.su = random_unitary(n, rng);
    r.sv = random_unitary(n, rng);
    for (std::size_t i = 0; i < n; ++i) r.log_sigma.push_back(rng.uniform(0.0, std::log(opt.max_condition)));
  } else {
    r.su = r.sv = ComplexMatrix::identity(n);
    r.log_sigma.assign(n, 0.0);
  }
  r.target_exponent = opt.target ? -std::log10(1.0 - *opt.target) : rng.uniform(0.3, 6.0);
  return r;
}

CommutingTuple realize(const TupleRecipe& r, const PolyMatrix& p) {
  const std::size_t d = r.nvars, n = r.size();
  if (p.nvars() != d || r.q.size() != d || r.mu.size() != r.upper.size() || r.log_sigma.size() != n)
    throw InputError("realize: recipe is inconsistent");
  std::vector<JordanBlock> blocks;
  for (std::size_t i = 0; i < r.mu.size(); ++i) {
    const std::size_t m = r.upper[i].rows();
    const ComplexMatrix id = ComplexMatrix::identity(m);
    const ComplexMatrix base = r.mu[i] * id + r.upper[i];
    JordanBlock b;
    for (std::size_t k = 0; k < d; ++k) {
      const auto& q = r.q[k];
      // Horner in both the matrix and the scalar, so the diagonals agree.
      ComplexMatrix x = q[3] * id;
      cplx l = q[3];
      for (int j = 2; j >= 0; --j) {
        x = x * base + q[static_cast<std::size_t>(j)] * id;
        l = l * r.mu[i] + q[static_cast<std::size_t>(j)];
      }
      ComplexMatrix nil = x - l * id;
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t c = 0; c <= a; ++c) nil(a, c) = 0.0;
      b.point.push_back(l);
      b.nilpotent.push_back(std::move(nil));
    }
    blocks.push_back(std::move(b));
  }
  CVector sig(n), inv_sig(n);
  for (std::size_t i = 0; i < n; ++i) {
    sig[i] = std::exp(r.log_sigma[i]);
    inv_sig[i] = 1.0 / sig[i];
  }
  const ComplexMatrix s = r.su * ComplexMatrix::diagonal(sig) * r.sv.adjoint();
  const ComplexMatrix s_inv = r.sv * ComplexMatrix::diagonal(inv_sig) * r.su.adjoint();
  const CommutingTuple x = CommutingTuple::from_blocks(std::move(blocks), s, s_inv);

  const double target = r.target();
  const auto lo = radial_bisect(
      [&](double t) {
        std::vector<ComplexMatrix> ms;
        for (const auto& m : x.matrices()) ms.push_back(t * m);
        return operator_norm(eval_poly_matrices(p, ms));
      },
      target);
  if (!lo) throw DegenerateInputError("realize: the ray never reaches the target norm");
  return x.scaled(*lo);
}

CommutingTuple gen_commuting_tuple(std::size_t d, std::size_t n, std::uint64_t seed, const PolyMatrix& p,
                                   const TupleGenOptions& opt) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    try {
      return realize(random_recipe(d, n, rng, opt), p);
    } catch (const DegenerateInputError&) {
    }
  }
  throw DegenerateInputError("gen_commuting_tuple: 100 consecutive degenerate draws");
}

Polynomial random_polynomial(std::size_t nvars, int max_degree, Rng& rng, int max_terms) {
  const auto all = multi_indices_up_to(nvars, max_degree);
  std::vector<Monomial> terms;
  const int count = rng.uniform_int(1, max_terms);
  for (int i = 0; i < count; ++i)
    terms.push_back({all[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(all.size()) - 1))], rng.complex_normal()});
  return Polynomial(nvars, std::move(terms));
}

CommutingTuple example_pair_4x4(cplx c, cplx d) {
  ComplexMatrix e12(2, 2);
  e12(0, 1) = d;
  JordanBlock odd{{c, -c}, {e12, -1.0 * e12}};
  JordanBlock even{{c, c}, {e12, e12}};
  return CommutingTuple::from_blocks({odd, even});
}

CommutingTuple example_pair_2x2(cplx c, cplx d) {
  ComplexMatrix e12(2, 2);
  e12(0, 1) = d;
  return CommutingTuple::from_blocks({JordanBlock{{c, -c}, {e12, e12}}});
}

}  // namespace nptk
