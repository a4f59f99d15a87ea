#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "nptk/commuting_tuple.hpp"
#include "nptk/errors.hpp"
#include "nptk/estimators.hpp"

using namespace nptk;

namespace {

Polynomial poly(std::size_t d, std::vector<MultiIndex> exps, std::vector<cplx> coeffs) {
  std::vector<Monomial> t;
  for (std::size_t k = 0; k < exps.size(); ++k) t.push_back({exps[k], coeffs[k]});
  return Polynomial(d, t);
}

const Polynomial l1 = Polynomial::variable(2, 0), l2 = Polynomial::variable(2, 1);
const VarietySpec squares({l1 * l1 - l2 * l2});

ComplexMatrix jordan(cplx lambda, cplx eps, std::size_t n = 2) {
  ComplexMatrix m = ComplexMatrix::identity(n) * lambda;
  for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = eps;
  return m;
}

// ||[[a, b], [0, a]]|| for real a, b >= 0.
double jordan_norm(double a, double b) { return 0.5 * (std::sqrt(b * b + 4.0 * a * a) + b); }

ComplexMatrix random_similarity(std::size_t n, Rng& rng) {
  CVector sig(n);
  for (auto& s : sig) s = std::exp(rng.uniform(0.0, std::log(10.0)));
  return random_unitary(n, rng) * ComplexMatrix::diagonal(sig) * random_unitary(n, rng);
}

double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).max_abs() / std::max(1.0, b.max_abs());
}

}  // namespace

TEST_CASE("polynomial algebra") {
  const Polynomial p = poly(2, {{2, 0}, {0, 1}, {0, 0}}, {1.0, 3.0, -2.0});
  const CVector at{0.5, cplx(0.0, 1.0)};
  CHECK(std::abs(p(at) - (0.25 + 3.0 * cplx(0.0, 1.0) - 2.0)) < 1e-15);
  CHECK(p.degree() == 2);
  CHECK((p - p).is_zero());
  CHECK(std::abs((p * p)(at) - p(at) * p(at)) < 1e-14);
  CHECK(std::abs(p.derivative(0)(at) - 1.0) < 1e-15);
  // d^beta p / beta! at a point.
  CHECK(std::abs(p.taylor_coefficient(at, {1, 0}) - 1.0) < 1e-15);
  CHECK(std::abs(p.taylor_coefficient(at, {2, 0}) - 1.0) < 1e-15);
  CHECK(std::abs(p.taylor_coefficient(at, {0, 0}) - p(at)) < 1e-15);
  CHECK(p.taylor_coefficient(at, {3, 0}) == cplx(0.0));
  CHECK(poly(1, {{1}, {1}}, {1.0, -1.0}).is_zero());
  CHECK_THROWS_AS(poly(2, {{1}}, {1.0}), InputError);
  CHECK_THROWS_AS(poly(1, {{-1}}, {1.0}), InputError);

  const auto idx = multi_indices_up_to(3, 3);
  CHECK(idx.size() == 20);
  CHECK(std::set<MultiIndex>(idx.begin(), idx.end()).size() == idx.size());
  CHECK(std::is_sorted(idx.begin(), idx.end(), [](const MultiIndex& a, const MultiIndex& b) {
    return a[0] + a[1] + a[2] < b[0] + b[1] + b[2];
  }));
  CHECK_THROWS_AS(VarietySpec({}), InputError);
}

TEST_CASE("tuple validation") {
  CHECK_THROWS_AS(CommutingTuple({jordan(0.1, 1.0), ComplexMatrix{{0.0, 0.0}, {1.0, 0.0}}}), InputError);
  CHECK_THROWS_AS(CommutingTuple({ComplexMatrix::identity(2), ComplexMatrix::identity(3)}), InputError);
  CHECK_NOTHROW(CommutingTuple({jordan(0.1, 1.0), jordan(0.3, 2.0)}));
  CHECK_THROWS_AS(CommutingTuple::with_assembly({ComplexMatrix::identity(1)},
                                                Assembly{ComplexMatrix::identity(1), ComplexMatrix::identity(1),
                                                         {JordanBlock{{0.5}, {ComplexMatrix(1, 1)}}}}),
                  InputError);
}

TEST_CASE("polynomial matrices on tuples") {
  const PolyMatrix pd = PolyMatrix::polydisc(2), ball = PolyMatrix::ball(2);
  const PolyMatrix single(1, 1, {Polynomial::variable(2, 0)});
  const CVector a{0.3, 0.4};
  CHECK(eval_poly_tuple(single, CommutingTuple::scalar(a)) == ComplexMatrix{{0.3}});
  const ComplexMatrix d = eval_poly_tuple(pd, CommutingTuple::scalar(a));
  CHECK(d == ComplexMatrix{{0.3, 0.0}, {0.0, 0.4}});
  CHECK(operator_norm(d) == doctest::Approx(0.4));
  const ComplexMatrix b = eval_poly_tuple(ball, CommutingTuple::scalar(CVector{0.6, 0.8}));
  CHECK(b.rows() == 2);
  CHECK(b.cols() == 1);
  CHECK(operator_norm(b) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(in_Gp(pd, CVector{0.5, -0.5}));
  CHECK_FALSE(in_Gp(ball, CVector{0.8, 0.8}));
  CHECK(in_Gp(ball, CVector{0.0, 0.0}));
  CHECK(in_Fp(ball, CommutingTuple({ComplexMatrix(3, 3), ComplexMatrix(3, 3)})));

  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const CVector l{rng.in_disc(1.2), rng.in_disc(1.2)};
    CHECK(in_Fp(pd, CommutingTuple::scalar(l)) == in_Gp(pd, l));
    CHECK(in_Fp(ball, CommutingTuple::scalar(l)) == in_Gp(ball, l));
  }

  // Pairs of Jordan blocks: ||diag(J, J)|| = ||J||.
  for (auto [lam, eps] : {std::pair{0.9, 0.3}, std::pair{0.6, 0.3}}) {
    const CommutingTuple x({jordan(lam, eps), jordan(lam, eps)});
    CHECK(operator_norm(eval_poly_tuple(pd, x)) == doctest::Approx(jordan_norm(lam, eps)).epsilon(1e-13));
    CHECK(in_Fp(pd, x) == (jordan_norm(lam, eps) < 1.0));
  }
  CHECK_FALSE(in_Fp(pd, CommutingTuple({jordan(0.9, 0.3), jordan(0.9, 0.3)})));
  CHECK_THROWS_AS(eval_poly_tuple(PolyMatrix::polydisc(3), CommutingTuple::scalar(a)), InputError);
}

TEST_CASE("spectrum") {
  const ComplexMatrix da = ComplexMatrix::diagonal(CVector{0.1, 0.2}), db = ComplexMatrix::diagonal(CVector{0.3, 0.4});
  const auto s = spectrum(CommutingTuple({da, db}));
  REQUIRE(s.size() == 2);
  CHECK((s[0].point == CVector{0.1, 0.3}));
  CHECK((s[1].point == CVector{0.2, 0.4}));

  ComplexMatrix n(3, 3);
  n(0, 1) = 1.0;
  n(1, 2) = 2.0;
  const auto j = spectrum(CommutingTuple::from_blocks({JordanBlock{{0.5}, {n}}}));
  REQUIRE(j.size() == 1);
  CHECK(j[0].multiplicity == 3);
  CHECK((j[0].point == CVector{0.5}));

  const cplx c(0.3, 0.1), d(0.2);
  const auto e = spectrum(example_pair_4x4(c, d));
  REQUIRE(e.size() == 2);
  CHECK((e[0].point == CVector{c, -c}));
  CHECK(e[0].multiplicity == 2);
  CHECK((e[1].point == CVector{c, c}));
  CHECK(e[1].multiplicity == 2);

  Rng rng(2);
  const ComplexMatrix u = random_unitary(2, rng);
  const CommutingTuple full({u * da * u.adjoint(), u * db * u.adjoint()});
  CHECK_THROWS_AS(spectrum(full), UnsupportedInputError);
}

TEST_CASE("generated tuples") {
  const PolyMatrix pd = PolyMatrix::polydisc(2), ball = PolyMatrix::ball(3);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 1 + seed % 8;
    const CommutingTuple x = gen_commuting_tuple(seed % 2 ? 2 : 3, n, seed, seed % 2 ? pd : ball);
    const PolyMatrix& p = seed % 2 ? pd : ball;
    CHECK(x.size() == n);
    CHECK(in_Fp(p, x));
    CHECK(x.max_commutator_norm() < 1e-10);
    REQUIRE(x.assembly());
    for (const auto& sp : spectrum(x)) CHECK(in_Gp(p, sp.point));
  }
  const CommutingTuple s = gen_commuting_tuple(2, 1, 5, pd);
  CHECK(s.size() == 1);
  CHECK(in_Gp(pd, CVector{s[0](0, 0), s[1](0, 0)}));
  CHECK_THROWS_AS(gen_commuting_tuple(2, 17, 1, pd), InputError);
  TupleGenOptions fixed;
  fixed.target = 0.5;
  CHECK(operator_norm(eval_poly_tuple(pd, gen_commuting_tuple(2, 4, 3, pd, fixed))) ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("functional calculus examples") {
  const cplx lam(0.3, -0.2);
  const Polynomial sq = poly(1, {{2}}, {1.0});
  ComplexMatrix e12(2, 2);
  e12(0, 1) = 1.0;
  const CommutingTuple jb = CommutingTuple::from_blocks({JordanBlock{{lam}, {e12}}});
  const ComplexMatrix expect{{lam * lam, 2.0 * lam}, {0.0, lam * lam}};
  CHECK((func_calc(sq, jb) - expect).max_abs() < 1e-15);

  Rng rng(3);
  const CommutingTuple y = gen_commuting_tuple(2, 6, 9, PolyMatrix::polydisc(2));
  const cplx a0 = rng.complex_normal(), a1 = rng.complex_normal(), a2 = rng.complex_normal();
  const Polynomial lin = poly(2, {{0, 0}, {1, 0}, {0, 1}}, {a0, a1, a2});
  const ComplexMatrix direct = ComplexMatrix::identity(6) * a0 + y[0] * a1 + y[1] * a2;
  CHECK(rel_diff(func_calc(lin, y), direct) < 1e-12);

  CHECK_THROWS_AS(func_calc(sq, CommutingTuple({jordan(0.1, 1.0)})), UnsupportedInputError);
}

TEST_CASE("functional calculus matches brute force and is covariant") {
  Rng rng(4);
  const PolyMatrix pd = PolyMatrix::polydisc(2), ball = PolyMatrix::ball(2);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = rng.uniform_int(1, 8);
    const CommutingTuple y = gen_commuting_tuple(2, n, 100 + i, i % 2 ? pd : ball);
    const Polynomial f = random_polynomial(2, 5, rng);
    const ComplexMatrix fy = func_calc(f, y);
    CHECK(rel_diff(fy, eval_poly_direct(f, y)) < 1e-10);

    const ComplexMatrix s = random_similarity(n, rng), s_inv = inverse(s);
    const ComplexMatrix lhs = func_calc(f, conjugate(y, s, s_inv));
    CHECK(rel_diff(lhs, s_inv * fy * s) < 1e-9);

    const CommutingTuple z = gen_commuting_tuple(2, rng.uniform_int(1, 4), 500 + i, pd);
    const double joint = operator_norm(func_calc(f, direct_sum(y, z)));
    const double sep = std::max(operator_norm(fy), operator_norm(func_calc(f, z)));
    CHECK(std::abs(joint - sep) <= 1e-12 * std::max(1.0, sep));
  }
}

TEST_CASE("truncated series") {
  // exp(l) with Taylor coefficients exp(c) / k!.
  auto exp_series = [](int order) {
    return TruncatedSeries{1, order, [](std::span<const cplx> c, const MultiIndex& b) {
                             return std::exp(c[0]) / std::tgamma(b[0] + 1.0);
                           }};
  };
  ComplexMatrix n(3, 3);
  n(0, 1) = 1.0;
  n(1, 2) = 1.0;
  const cplx lam(0.2, 0.1);
  const CommutingTuple y = CommutingTuple::from_blocks({JordanBlock{{lam}, {n}}});
  CHECK(nilpotency_order(y.assembly()->blocks[0]) == 3);
  const ComplexMatrix expect = (ComplexMatrix::identity(3) + n + n * n * cplx(0.5)) * std::exp(lam);
  CHECK((func_calc(exp_series(2), y) - expect).max_abs() < 1e-15);
  CHECK((func_calc(exp_series(7), y) - expect).max_abs() < 1e-15);
  CHECK_THROWS_AS(func_calc(exp_series(1), y), InsufficientSeriesError);
}

TEST_CASE("subordination of the worked examples") {
  const cplx c(0.4, 0.1), d(-0.3, 0.2);
  CHECK(is_subordinate(example_pair_4x4(c, d), squares));
  const CommutingTuple two = example_pair_2x2(c, d);
  CHECK_FALSE(is_subordinate(two, squares));
  const ComplexMatrix g = func_calc(squares.generators()[0], two);
  CHECK(std::abs(g(0, 1) - 4.0 * c * d) < 1e-15);
  CHECK(std::abs(g(0, 0)) + std::abs(g(1, 0)) + std::abs(g(1, 1)) < 1e-15);
  CHECK(is_subordinate(CommutingTuple::scalar(CVector{0.3, -0.3}), squares));
  CHECK_FALSE(is_subordinate(CommutingTuple::scalar(CVector{0.3, 0.2}), squares));
  CHECK_THROWS_AS(is_subordinate(CommutingTuple({jordan(0.1, 1.0), jordan(0.2, 1.0)}), squares),
                  UnsupportedInputError);
  // With d = 0 the 2 x 2 pair is scalar and lies on V.
  CHECK(is_subordinate(example_pair_2x2(c, 0.0), squares));
}

TEST_CASE("radial bisection") {
  const auto t = radial_bisect([](double s) { return 2.0 * s; }, 0.5);
  REQUIRE(t);
  CHECK(*t == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(2.0 * *t < 0.5);
  CHECK_FALSE(radial_bisect([](double) { return 1.0; }, 0.5));
  CHECK_FALSE(radial_bisect([](double) { return 0.0; }, 0.5));
}

TEST_CASE("variety projection") {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto v = project_to_variety(squares, {rng.in_disc(), rng.in_disc()});
    REQUIRE(v);
    CHECK(std::abs((*v)[0] * (*v)[0] - (*v)[1] * (*v)[1]) <= 1e-13);
  }
}

TEST_CASE("p-norm estimator examples") {
  const PolyMatrix disc(1, 1, {Polynomial::variable(1, 0)});
  const NormEstimate z = pnorm_estimate(disc, Polynomial::variable(1, 0), 4000, 1);
  CHECK(z.value >= 0.99);
  CHECK(z.value <= 1.0 + 1e-9);
  REQUIRE(z.witness);
  CHECK(in_Fp(disc, *z.witness));
  CHECK(operator_norm(eval_poly_tuple(disc, *z.witness)) == doctest::Approx(z.value));

  const NormEstimate c = pnorm_estimate(PolyMatrix::polydisc(2), Polynomial::constant(2, cplx(0.3, 0.4)), 50, 2);
  CHECK(c.value == doctest::Approx(0.5).epsilon(1e-14));

  const NormEstimate pr = pnorm_estimate(PolyMatrix::polydisc(2), l1 * l2, 4000, 3);
  CHECK(pr.value >= 0.99);
  CHECK(pr.value <= 1.0 + 1e-9);
}

TEST_CASE("p-norm estimator is monotone in the budget") {
  const PolyMatrix ball = PolyMatrix::ball(2);
  Rng rng(6);
  for (int i = 0; i < 4; ++i) {
    const Polynomial f = random_polynomial(2, 3, rng);
    double prev = 0.0;
    for (int budget : {50, 100, 200, 400}) {
      const NormEstimate e = pnorm_estimate(ball, f, budget, 11 + i);
      CHECK(e.value >= prev);
      CHECK(e.evaluations <= budget);
      prev = e.value;
    }
  }
}

TEST_CASE("von Neumann upper bound in one variable") {
  const PolyMatrix disc(1, 1, {Polynomial::variable(1, 0)});
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Polynomial f = random_polynomial(1, 4, rng, 4);
    double sup = 0.0;
    for (int k = 0; k < 20000; ++k) {
      const CVector z{std::polar(1.0, 2.0 * std::numbers::pi * k / 20000.0)};
      sup = std::max(sup, std::abs(f(z)));
    }
    const NormEstimate e = pnorm_estimate(disc, f, 300, 20 + i);
    CHECK(e.value <= sup + 1e-6);
  }
}

TEST_CASE("scalar tuples bound the estimator from below") {
  const PolyMatrix pd = PolyMatrix::polydisc(2);
  Rng rng(8);
  for (int i = 0; i < 4; ++i) {
    const Polynomial f = random_polynomial(2, 3, rng);
    double scalar_sup = 0.0;
    for (int k = 0; k < 2000; ++k) {
      const CVector l{rng.in_disc(0.9), rng.in_disc(0.9)};
      scalar_sup = std::max(scalar_sup, std::abs(f(l)));
    }
    CHECK(pnorm_estimate(pd, f, 1000, 30 + i).value >= scalar_sup - 1e-9);
  }
}

TEST_CASE("(p, V)-norm estimator examples") {
  const PolyMatrix pd = PolyMatrix::polydisc(2);
  const NormEstimate a = pVnorm_estimate(pd, squares, l1, 3000, 1);
  CHECK(a.feasible);
  CHECK(a.value >= 0.99);
  CHECK(a.value <= 1.0 + 1e-9);
  REQUIRE(a.witness);
  CHECK(is_subordinate(*a.witness, squares));
  CHECK(in_Fp(pd, *a.witness));

  CHECK(pVnorm_estimate(pd, squares, l1 * l1 - l2 * l2, 1000, 2).value <= 1e-9);
  CHECK(pVnorm_estimate(pd, squares, Polynomial::constant(2, 0.5), 100, 3).value ==
        doctest::Approx(0.5).epsilon(1e-14));

  const NormEstimate empty = pVnorm_estimate(pd, VarietySpec({Polynomial::constant(2, 1.0)}), l1, 50, 4);
  CHECK_FALSE(empty.feasible);
  CHECK(empty.value == 0.0);
  CHECK_FALSE(empty.warning.empty());
}
