#include "nptk/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "nptk/commuting_tuple.hpp"
#include "nptk/crossed_discs.hpp"
#include "nptk/envelope.hpp"
#include "nptk/errors.hpp"
#include "nptk/json_io.hpp"
#include "nptk/realization.hpp"

namespace nptk {

namespace {

using json = nlohmann::json;
constexpr std::size_t kReportedFailures = 20;

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

class Log {
 public:
  template <class Input>
  void leq(double lhs, double rhs, const std::string& relation, Input&& input) {
    const double excess = std::isnan(lhs) || std::isnan(rhs) ? INFINITY : lhs - rhs;
    out_.violation = std::max(out_.violation, excess);
    if (excess > 0.0) out_.failures.push_back({input(), relation, num(lhs) + " > " + num(rhs)});
  }
  template <class Input>
  void expect(bool ok, const std::string& relation, Input&& input, const std::string& observed) {
    if (!ok) out_.failures.push_back({input(), relation, observed});
  }
  SampleOutcome take() { return std::move(out_); }

 private:
  SampleOutcome out_;
};

Point2 random_bidisc_point(Rng& rng, bool boundary) {
  const double r1 = boundary ? rng.boundary_biased_radius(4.0) : std::sqrt(rng.uniform());
  const double r2 = boundary ? rng.boundary_biased_radius(4.0) : std::sqrt(rng.uniform());
  return {r1 * rng.unimodular(), r2 * rng.unimodular()};
}

std::string point2_text(const Point2& l) { return json_io::from_vector(l).dump(); }

// Member of the envelope by rejection from the tridisc.
std::optional<Point3> random_member(Rng& rng) {
  for (int i = 0; i < 100; ++i) {
    const Point3 z{rng.in_disc(), rng.in_disc(), rng.in_disc()};
    if (in_G_closed_form(z).member) return z;
  }
  return std::nullopt;
}

void envelope_sample(int, Rng& rng, const VerifyOptions& opt, Log& log) {
  const Point3 z{rng.in_disc(), rng.in_disc(), rng.in_disc()};
  auto zin = [&] { return json_io::from_point3(z).dump(); };
  const ClosedForm cf = in_G_closed_form(z);
  const NormU nu = norm_u(z);
  if (std::abs(cf.margin) >= opt.boundary_band)
    log.expect(cf.member == (nu.value < 1.0), "closed-form membership == (sup_r ||z_r|| < 1)", zin,
               "margin " + num(cf.margin) + ", norm_u " + num(nu.value));

  const DecomposedOperator u(random_unitary(4, rng), 2, 2);
  log.leq(operator_norm(z_U_matrix(z, u)), nu.value + opt.tol_inequality, "||z_U|| <= sup_r ||z_r||", zin);

  const cplx l1 = rng.in_disc(), l2 = rng.in_disc();
  const Point3 w = branched_cover(l1, l2);
  auto win = [&] { return point2_text({l1, l2}); };
  log.leq(std::abs(w.z1 * w.z2 - w.z3 * w.z3), opt.tol_algebraic, "cover point: |z1 z2 - z3^2| ~ 0", win);
  log.expect(in_G_closed_form(w).member, "cover point lies in the envelope", win, "non-member");

  const auto a = random_member(rng), b = random_member(rng);
  if (a && b) {
    const double t = rng.uniform();
    const Point3 c = cplx(1.0 - t) * *a + cplx(t) * *b;
    log.leq(-in_G_closed_form(c).margin, opt.tol_algebraic, "convex combination of members is a member", [&] {
      return json{{"a", json_io::from_point3(*a)}, {"b", json_io::from_point3(*b)}, {"t", t}}.dump();
    });
  }
}

void crossed_sample(int, Rng& rng, const VerifyOptions& opt, Log& log) {
  const double norm_t = rng.uniform(0.2, 1.0);
  const TFunction f = random_tfunction(rng, norm_t);
  auto fin = [&] {
    auto enc = [](const DiscFunction& g) {
      const Blaschke* b = g.blaschke();
      if (!b) return json{{"poly", json_io::from_vector(g.poly()->coeffs)}};
      return json{{"blaschke", {{"zeros", json_io::from_vector(b->zeros)}, {"phase", json_io::from_complex(b->phase)}, {"scale", b->scale}}}};
    };
    return json{{"f1", enc(f.f1())}, {"f2", enc(f.f2())}}.dump();
  };
  const TwoVarFunction ext = np_extension(f, norm_t);

  const TPoint tp{rng.uniform() < 0.5 ? Branch::first : Branch::second, rng.boundary_biased_radius() * rng.unimodular()};
  log.leq(std::abs(ext(tp.embed()) - eval_T(f, tp)), opt.tol_inequality, "extension restricts to f on T", fin);

  const double t = rng.uniform(), r = rng.boundary_biased_radius();
  const Point2 l{r * t * rng.unimodular(), r * (1.0 - t) * rng.unimodular()};
  log.leq(std::abs(ext(l)), norm_t + opt.tol_inequality, "|F| <= ||f||_T on Delta", fin);

  // H: |l2| / (1 - |l2|) < k(|l1|) with k(s) = (1 - s) / (2 (1 + s)), or swapped.
  const TFunction g = random_tfunction(rng, 1.0);
  const double s1 = rng.boundary_biased_radius(3.0);
  const double k = 0.5 * (1.0 - s1) / (1.0 + s1);
  const double s2 = rng.uniform() * k / (1.0 + k);
  Point2 h{s1 * rng.unimodular(), s2 * rng.unimodular()};
  if (rng.uniform() < 0.5) std::swap(h[0], h[1]);
  if (in_H(h)) {
    const double v = std::abs(linear_E(g)(h));
    log.expect(v < 1.0, "|E f| < 1 on H for ||f||_T = 1", [&] { return point2_text(h); }, num(v));
  }

  const DiscFunction b(random_blaschke(rng));
  const cplx z = rng.in_disc(0.999);
  const SchwarzPickResult sp = schwarz_pick_bounds(b, z, opt.tol_inequality);
  log.leq(sp.value1, sp.bound1 + opt.tol_inequality, "|g(z)| <= (|g0| + |z|) / (1 + |z||g0|)",
          [&] { return json_io::from_complex(z).dump(); });
  log.leq(sp.value2, sp.bound2 + opt.tol_inequality, "|g(z) - g0| <= |z| (1 - |g0|^2) / (1 - |z|)",
          [&] { return json_io::from_complex(z).dump(); });
}

void realization_sample(int, Rng& rng, const VerifyOptions& opt, Log& log) {
  const auto n1 = static_cast<std::size_t>(rng.uniform_int(1, 4));
  const auto n2 = static_cast<std::size_t>(rng.uniform_int(1, 4));
  const EvenModel m = random_even_model(n1, n2, rng);
  for (int k = 0; k < 10; ++k) {
    const Point2 l = random_bidisc_point(rng, k % 2 == 1);
    auto in = [&] { return json{{"split", {n1, n2}}, {"point", json_io::from_vector(l)}}.dump(); };
    const cplx phi = even_schur_eval(m, l);
    log.leq(std::abs(phi), 1.0 + opt.tol_inequality, "|phi| <= 1", in);
    log.leq(std::abs(even_schur_eval(m, {-l[0], -l[1]}) - phi), opt.tol_algebraic, "phi(-l) = phi(l)", in);
    log.leq(std::abs(extension_eval(m, branched_cover(l[0], l[1])) - phi), opt.tol_inequality, "Phi(pi(l)) = phi(l)", in);
  }
}

ComplexMatrix random_similarity(std::size_t n, Rng& rng, ComplexMatrix& inv) {
  const ComplexMatrix u = random_unitary(n, rng), v = random_unitary(n, rng);
  CVector s(n), si(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::exp(rng.uniform(0.0, std::log(10.0)));
    si[i] = 1.0 / s[i];
  }
  inv = v * ComplexMatrix::diagonal(si) * u.adjoint();
  return u * ComplexMatrix::diagonal(s) * v.adjoint();
}

void calculus_sample(int i, Rng& rng, const VerifyOptions& opt, Log& log) {
  const auto d = static_cast<std::size_t>(rng.uniform_int(1, 3));
  const PolyMatrix p = i % 2 == 0 ? PolyMatrix::polydisc(d) : PolyMatrix::ball(d);
  const auto n = static_cast<std::size_t>(rng.uniform_int(1, 8));
  const CommutingTuple x = gen_commuting_tuple(d, n, rng.engine()(), p);
  auto xin = [&] { return json_io::from_tuple(x).dump(); };
  log.leq(x.max_commutator_norm(), opt.tol_inequality, "generated tuple commutes", xin);
  log.expect(in_Fp(p, x), "generated tuple lies in F_p", xin, num(operator_norm(eval_poly_tuple(p, x))));
  for (const auto& sp : spectrum(x))
    log.expect(in_Gp(p, sp.point), "joint spectrum lies in G_p", xin, json_io::from_vector(sp.point).dump());

  const Polynomial f = random_polynomial(d, 4, rng);
  const ComplexMatrix fx = func_calc(f, x);
  const ComplexMatrix brute = eval_poly_direct(f, x);
  const double scale = std::max(1.0, brute.max_abs());
  log.leq((fx - brute).max_abs() / scale, opt.tol_inequality, "Taylor calculus = direct evaluation", xin);

  ComplexMatrix s_inv;
  const ComplexMatrix s = random_similarity(n, rng, s_inv);
  const ComplexMatrix lhs = func_calc(f, conjugate(x, s, s_inv));
  const ComplexMatrix rhs = s_inv * fx * s;
  log.leq((lhs - rhs).max_abs() / std::max(1.0, rhs.max_abs()), 1e-9, "f(S^-1 y S) = S^-1 f(y) S", xin);

  const CommutingTuple x2 = gen_commuting_tuple(d, static_cast<std::size_t>(rng.uniform_int(1, 4)), rng.engine()(), p);
  const double joint = operator_norm(func_calc(f, direct_sum(x, x2)));
  const double sep = std::max(operator_norm(fx), operator_norm(func_calc(f, x2)));
  log.leq(std::abs(joint - sep) / std::max(1.0, sep), opt.tol_inequality, "||f(x + x')|| = max(||f(x)||, ||f(x')||)", xin);
}

void linalg_sample(int, Rng& rng, const VerifyOptions& opt, Log& log) {
  const auto rows = static_cast<std::size_t>(rng.uniform_int(1, 6));
  const auto cols = static_cast<std::size_t>(rng.uniform_int(1, 6));
  ComplexMatrix m(rows, cols);
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < cols; ++b) m(a, b) = rng.complex_normal();
  auto min = [&] { return json_io::from_matrix(m).dump(); };
  const double nm = operator_norm(m);
  CVector v(cols);
  for (auto& c : v) c = rng.complex_normal();
  const double vn = norm2(v);
  for (auto& c : v) c /= vn;
  log.leq(norm2(m.apply(v)), nm * (1.0 + opt.tol_algebraic), "||M v|| <= ||M|| for unit v", min);
  log.leq(nm, m.frobenius_norm() * (1.0 + opt.tol_algebraic), "||M|| <= ||M||_F", min);
  log.leq(m.frobenius_norm(), nm * std::sqrt(static_cast<double>(std::min(rows, cols))) * (1.0 + opt.tol_algebraic),
          "||M||_F <= sqrt(rank) ||M||", min);
  if (cols <= 2) {
    const SingularTriple tr = top_singular_triple_2x2(m);
    const CVector mv = m.apply(tr.right);
    double res = 0.0;
    for (std::size_t a = 0; a < rows; ++a) res = std::max(res, std::abs(mv[a] - tr.sigma * tr.left[a]));
    log.leq(res, 1e-10 * std::max(1.0, nm), "M v = sigma u for the top singular pair", min);
  }

  const auto n = static_cast<std::size_t>(rng.uniform_int(1, 8));
  const ComplexMatrix u = random_unitary(n, rng);
  log.expect(is_unitary(u, opt.tol_algebraic * 10), "random_unitary is unitary", [] { return std::string("{}"); },
             "||U U* - I|| too large");
  log.leq(std::abs(operator_norm(u) - 1.0), opt.tol_inequality, "||U|| = 1", [&] { return json_io::from_matrix(u).dump(); });

  ComplexMatrix s_inv;
  const ComplexMatrix s = random_similarity(n, rng, s_inv);
  log.leq((s * inverse(s) - ComplexMatrix::identity(n)).max_abs(), opt.tol_inequality, "S inverse(S) = I",
          [&] { return json_io::from_matrix(s).dump(); });

  const cplx a = rng.in_disc(0.99), z = rng.in_disc();
  log.leq(std::abs(moebius(a, moebius(a, z)) - z), 100 * opt.tol_algebraic, "m_a is an involution",
          [&] { return json{{"a", json_io::from_complex(a)}, {"z", json_io::from_complex(z)}}.dump(); });
}

using SampleFn = void (*)(int, Rng&, const VerifyOptions&, Log&);

const std::map<std::string, std::pair<std::uint64_t, SampleFn>>& registry() {
  static const std::map<std::string, std::pair<std::uint64_t, SampleFn>> r = {
      {"envelope", {1, envelope_sample}},       {"crossed", {2, crossed_sample}}, {"realization", {3, realization_sample}},
      {"calculus", {4, calculus_sample}},       {"linalg", {5, linalg_sample}},
  };
  return r;
}

VerificationReport run_single(const std::string& suite, std::uint64_t stream, SampleFn fn, const VerifyOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.suite = suite;
  rep.samples = opt.samples;
  rep.seed = opt.seed;
  rep.outcomes.resize(static_cast<std::size_t>(std::max(0, opt.samples)));
  parallel_for(opt.samples, [&](int i) {
    Log log;
    Rng rng(derive_seed(opt.seed, stream, static_cast<std::uint64_t>(i)));
    try {
      fn(i, rng, opt, log);
    } catch (const std::exception& e) {
      log.expect(false, "sample evaluates without error", [i] { return "sample " + std::to_string(i); }, e.what());
    }
    rep.outcomes[static_cast<std::size_t>(i)] = log.take();
  });
  for (const auto& o : rep.outcomes) {
    rep.failure_count += static_cast<int>(o.failures.size());
    rep.max_violation = std::max(rep.max_violation, o.violation);
    for (const auto& f : o.failures)
      if (rep.failures.size() < kReportedFailures) rep.failures.push_back(f);
  }
  rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"envelope", "crossed", "realization", "calculus", "linalg", "all"};
  return names;
}

VerificationReport run_suite(const std::string& suite, const VerifyOptions& opt) {
  if (opt.samples < 0) throw InputError("verify: sample count must be nonnegative");
  if (suite == "all") {
    const auto start = std::chrono::steady_clock::now();
    VerificationReport all;
    all.suite = "all";
    all.seed = opt.seed;
    for (const auto& [name, entry] : registry()) {
      VerificationReport part = run_single(name, entry.first, entry.second, opt);
      all.samples += part.samples;
      all.failure_count += part.failure_count;
      all.max_violation = std::max(all.max_violation, part.max_violation);
      for (const auto& f : part.failures)
        if (all.failures.size() < kReportedFailures) all.failures.push_back(f);
      all.outcomes.insert(all.outcomes.end(), part.outcomes.begin(), part.outcomes.end());
      all.parts.push_back(std::move(part));
    }
    all.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return all;
  }
  const auto it = registry().find(suite);
  if (it == registry().end()) throw InputError("verify: unknown suite \"" + suite + "\"");
  return run_single(suite, it->second.first, it->second.second, opt);
}

nlohmann::json to_json(const VerificationReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back({{"input", f.input}, {"expected", f.relation}, {"observed", f.observed}});
  json out = {{"suite", r.suite},
              {"samples", r.samples},
              {"seed", r.seed},
              {"passed", r.passed()},
              {"failure_count", r.failure_count},
              {"failures", failures},
              {"max_violation", r.max_violation},
              {"elapsed", r.elapsed}};
  if (!r.parts.empty()) {
    out["parts"] = json::array();
    for (const auto& p : r.parts) out["parts"].push_back(to_json(p));
  }
  return out;
}

void write_csv(const VerificationReport& r, std::ostream& out) {
  out << "index,violation,failures\n";
  out.precision(17);
  for (std::size_t i = 0; i < r.outcomes.size(); ++i)
    out << i << ',' << r.outcomes[i].violation << ',' << r.outcomes[i].failures.size() << '\n';
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NP_TOOLKIT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

void parallel_for(int n, const std::function<void(int)>& body) {
  if (n <= 0) return;
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) body(i);
    });
}

}  // namespace nptk
