#include "nptk/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "nptk/errors.hpp"

namespace nptk {

namespace {

constexpr int kHillPeriod = 4;  // every 4th step refines the best witness

struct StepSize {
  double value = 0.3;
  void grow() { value = std::min(1.0, value * 1.5); }
  void shrink() { value = std::max(1e-5, value * 0.7); }
};

TupleRecipe perturb(const TupleRecipe& base, Rng& rng, double step) {
  TupleRecipe r = base;
  switch (rng.uniform_int(0, 4)) {
    case 0:
      r.mu[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(r.mu.size()) - 1))] += step * rng.complex_normal();
      break;
    case 1: {
      auto& u = r.upper[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(r.upper.size()) - 1))];
      if (u.rows() > 1) {
        const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(u.rows()) - 2));
        const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<int>(i) + 1, static_cast<int>(u.rows()) - 1));
        u(i, j) += step * rng.complex_normal();
      }
      break;
    }
    case 2: {
      auto& q = r.q[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(r.q.size()) - 1))];
      q[static_cast<std::size_t>(rng.uniform_int(0, 3))] += step * rng.complex_normal();
      break;
    }
    case 3: {
      auto& s = r.log_sigma[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(r.log_sigma.size()) - 1))];
      s = std::clamp(s + step * rng.normal(), 0.0, std::log(10.0));
      break;
    }
    default:
      r.target_exponent = std::clamp(r.target_exponent + 3.0 * step * rng.normal(), 0.3, 8.0);
  }
  return r;
}

// Gradient matrix J_jk = d g_j / d l_k.
ComplexMatrix jacobian(const std::vector<std::vector<Polynomial>>& grads, std::span<const cplx> l) {
  ComplexMatrix j(grads.size(), l.size());
  for (std::size_t a = 0; a < grads.size(); ++a)
    for (std::size_t k = 0; k < l.size(); ++k) j(a, k) = grads[a][k](l);
  return j;
}

std::vector<std::vector<Polynomial>> gradients(const VarietySpec& v) {
  std::vector<std::vector<Polynomial>> out;
  for (const auto& g : v.generators()) {
    std::vector<Polynomial> row;
    for (std::size_t k = 0; k < v.nvars(); ++k) row.push_back(g.derivative(k));
    out.push_back(std::move(row));
  }
  return out;
}

// w minus its component along the gradients; nullopt when the gradients are
// rank deficient without vanishing.
std::optional<CVector> tangent_part(const ComplexMatrix& j, CVector w) {
  if (j.max_abs() <= 1e-12) return w;
  try {
    const ComplexMatrix jh = j.adjoint();
    const CVector coef = inverse(j * jh, 1e10).apply(j.apply(w));
    const CVector normal = jh.apply(coef);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] -= normal[k];
    return w;
  } catch (const SingularMatrixError&) {
    return std::nullopt;
  }
}

struct SubordinateRecipe {
  std::vector<CVector> points;    // on V, inside G_p
  std::vector<CVector> tangents;  // empty: 1 x 1 block
  ComplexMatrix su, sv;
  std::vector<double> log_sigma;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& t : tangents) n += t.empty() ? 1 : 2;
    return n;
  }
};

class SubordinateSampler {
 public:
  SubordinateSampler(const PolyMatrix& p, const VarietySpec& v) : p_(p), v_(v), grads_(gradients(v)) {
    if (p.nvars() != v.nvars()) throw InputError("pVnorm_estimate: p and V use different variable counts");
  }

  std::optional<CVector> point(Rng& rng) const {
    const std::size_t d = p_.nvars();
    for (int attempt = 0; attempt < 8; ++attempt) {
      CVector w(d);
      for (auto& c : w) c = rng.complex_normal();
      const double target = rng.boundary_biased_radius(6.0);
      const auto t = radial_bisect(
          [&](double s) {
            CVector l = w;
            for (auto& c : l) c *= s;
            return operator_norm(eval_poly_point(p_, l));
          },
          target);
      if (!t) continue;
      for (auto& c : w) c *= *t;
      if (auto l = accept(std::move(w))) return l;
    }
    return std::nullopt;
  }

  std::optional<CVector> accept(CVector l) const {
    auto proj = project_to_variety(v_, std::move(l));
    if (!proj || !in_Gp(p_, *proj)) return std::nullopt;
    return proj;
  }

  CVector tangent(const CVector& l, Rng& rng) const {
    CVector w(l.size());
    for (auto& c : w) c = rng.complex_normal();
    auto t = tangent_part(jacobian(grads_, l), std::move(w));
    if (!t) return {};
    const double nrm = norm2(*t);
    if (!(nrm > 1e-12)) return {};
    const double len = rng.uniform(0.05, 2.0) / nrm;
    for (auto& c : *t) c *= len;
    return *t;
  }

  std::optional<SubordinateRecipe> recipe(Rng& rng) const {
    SubordinateRecipe r;
    const int blocks = rng.uniform_int(1, 4);
    for (int b = 0; b < blocks; ++b) {
      auto l = point(rng);
      if (!l) return std::nullopt;
      r.tangents.push_back(rng.uniform() < 0.5 ? tangent(*l, rng) : CVector{});
      r.points.push_back(std::move(*l));
    }
    const std::size_t n = r.size();
    r.su = random_unitary(n, rng);
    r.sv = random_unitary(n, rng);
    for (std::size_t i = 0; i < n; ++i) r.log_sigma.push_back(rng.uniform(0.0, std::log(10.0)));
    return r;
  }

  std::optional<SubordinateRecipe> perturb(const SubordinateRecipe& base, Rng& rng, double step) const {
    SubordinateRecipe r = base;
    const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(r.points.size()) - 1));
    switch (rng.uniform_int(0, 2)) {
      case 0: {
        CVector l = r.points[i];
        for (auto& c : l) c += step * rng.complex_normal();
        auto moved = accept(std::move(l));
        if (!moved) return std::nullopt;
        r.points[i] = std::move(*moved);
        if (!r.tangents[i].empty()) {
          auto t = tangent_part(jacobian(grads_, r.points[i]), r.tangents[i]);
          r.tangents[i] = t ? *t : CVector{};
          if (r.tangents[i].empty()) return std::nullopt;  // block size would change
        }
        break;
      }
      case 1: {
        if (r.tangents[i].empty()) return std::nullopt;
        CVector t = r.tangents[i];
        for (auto& c : t) c += step * rng.complex_normal();
        auto proj = tangent_part(jacobian(grads_, r.points[i]), std::move(t));
        if (!proj) return std::nullopt;
        r.tangents[i] = std::move(*proj);
        break;
      }
      default: {
        auto& s = r.log_sigma[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(r.log_sigma.size()) - 1))];
        s = std::clamp(s + step * rng.normal(), 0.0, std::log(10.0));
      }
    }
    return r;
  }

  // Shrinks the similarity towards a unitary and the tangents towards zero
  // until the tuple lies in F_p; both limits give a direct sum of points of
  // G_p under a unitary, which always qualifies.
  CommutingTuple realize(const SubordinateRecipe& r) const {
    const std::size_t n = r.size(), d = p_.nvars();
    double theta = 1.0, tan = 1.0;
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 40) theta = tan = 0.0;
      std::vector<JordanBlock> blocks;
      for (std::size_t i = 0; i < r.points.size(); ++i) {
        JordanBlock b{r.points[i], {}};
        const std::size_t m = r.tangents[i].empty() ? 1 : 2;
        for (std::size_t k = 0; k < d; ++k) {
          ComplexMatrix nil(m, m);
          if (m == 2) nil(0, 1) = tan * r.tangents[i][k];
          b.nilpotent.push_back(std::move(nil));
        }
        blocks.push_back(std::move(b));
      }
      CVector sig(n), inv_sig(n);
      for (std::size_t i = 0; i < n; ++i) {
        sig[i] = std::exp(theta * r.log_sigma[i]);
        inv_sig[i] = 1.0 / sig[i];
      }
      CommutingTuple y = CommutingTuple::from_blocks(std::move(blocks), r.su * ComplexMatrix::diagonal(sig) * r.sv.adjoint(),
                                                     r.sv * ComplexMatrix::diagonal(inv_sig) * r.su.adjoint());
      if (in_Fp(p_, y) || attempt >= 40) return y;
      if (attempt % 2 == 0)
        theta *= 0.5;
      else
        tan *= 0.5;
    }
  }

 private:
  const PolyMatrix& p_;
  const VarietySpec& v_;
  std::vector<std::vector<Polynomial>> grads_;
};

void consider(NormEstimate& est, double value, CommutingTuple&& y) {
  ++est.accepted;
  if (!est.witness || value > est.value) {
    est.value = value;
    est.witness = std::move(y);
  }
}

}  // namespace

std::optional<CVector> project_to_variety(const VarietySpec& v, CVector l, double tol) {
  if (l.size() != v.nvars()) throw InputError("project_to_variety: dimension mismatch");
  const auto grads = gradients(v);
  for (int it = 0; it < 60; ++it) {
    CVector g;
    double res = 0.0;
    for (const auto& gen : v.generators()) {
      g.push_back(gen(l));
      res = std::max(res, std::abs(g.back()));
    }
    if (res <= tol) return l;
    const ComplexMatrix j = jacobian(grads, l);
    if (j.max_abs() <= 1e-14) return std::nullopt;
    try {
      const ComplexMatrix jh = j.adjoint();
      const CVector step = jh.apply(inverse(j * jh, 1e12).apply(g));
      for (std::size_t k = 0; k < l.size(); ++k) l[k] -= step[k];
    } catch (const SingularMatrixError&) {
      return std::nullopt;
    }
    for (const auto& c : l)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return std::nullopt;
  }
  return std::nullopt;
}

NormEstimate pnorm_estimate(const PolyMatrix& p, const Polynomial& f, int budget, std::uint64_t seed) {
  if (budget < 1) throw InputError("pnorm_estimate: budget must be positive");
  if (f.nvars() != p.nvars()) throw InputError("pnorm_estimate: f and p use different variable counts");
  Rng rng(seed);
  NormEstimate est;
  std::optional<TupleRecipe> best;
  StepSize step;
  for (int i = 0; i < budget; ++i) {
    ++est.evaluations;
    const bool hill = best && i % kHillPeriod == kHillPeriod - 1;
    const TupleRecipe cand =
        hill ? perturb(*best, rng, step.value)
             : random_recipe(p.nvars(), static_cast<std::size_t>(rng.uniform_int(1, 8)), rng);
    try {
      CommutingTuple x = realize(cand, p);
      const double v = operator_norm(func_calc(f, x));
      if (!std::isfinite(v)) continue;
      const bool improved = !est.witness || v > est.value;
      consider(est, v, std::move(x));
      if (improved) best = cand;
      if (hill) improved ? step.grow() : step.shrink();
    } catch (const Error&) {
      if (hill) step.shrink();
    }
  }
  if (!est.witness) {
    est.feasible = false;
    est.warning = "no tuple in F_p could be generated within the budget";
  }
  return est;
}

NormEstimate pVnorm_estimate(const PolyMatrix& p, const VarietySpec& v, const Polynomial& f, int budget,
                             std::uint64_t seed) {
  if (budget < 1) throw InputError("pVnorm_estimate: budget must be positive");
  if (f.nvars() != p.nvars()) throw InputError("pVnorm_estimate: f and p use different variable counts");
  const SubordinateSampler sampler(p, v);
  Rng rng(seed);
  NormEstimate est;
  std::optional<SubordinateRecipe> best;
  StepSize step;
  for (int i = 0; i < budget; ++i) {
    ++est.evaluations;
    const bool hill = best && i % kHillPeriod == kHillPeriod - 1;
    const auto cand = hill ? sampler.perturb(*best, rng, step.value) : sampler.recipe(rng);
    if (!cand) {
      if (hill) step.shrink();
      continue;
    }
    try {
      CommutingTuple y = sampler.realize(*cand);
      if (!is_subordinate(y, v) || !in_Fp(p, y)) throw ConsistencyError("candidate left F_{p,V}");
      const double val = operator_norm(func_calc(f, y));
      if (!std::isfinite(val)) continue;
      const bool improved = !est.witness || val > est.value;
      consider(est, val, std::move(y));
      if (improved) best = *cand;
      if (hill) improved ? step.grow() : step.shrink();
    } catch (const Error&) {
      if (hill) step.shrink();
    }
  }
  if (!est.witness) {
    est.value = 0.0;
    est.feasible = false;
    est.warning = "empty feasible set: no subordinate tuple in F_p was found within the budget";
  }
  return est;
}

}  // namespace nptk
