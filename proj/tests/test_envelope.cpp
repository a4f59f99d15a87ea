#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "nptk/envelope.hpp"
#include "nptk/errors.hpp"

using namespace nptk;

namespace {

const cplx I{0.0, 1.0};
const Point3 outside{0.8, 0.8, 0.8 * I};

Point3 random_point(Rng& rng) { return {rng.in_disc(), rng.in_disc(), rng.in_disc()}; }

Point3 random_member(Rng& rng) {
  for (;;) {
    const Point3 z = random_point(rng);
    if (in_G_closed_form(z).member) return z;
  }
}

// Independent brute force: fine grid in r with Eigen's SVD.
double eigen_grid_norm(const Point3& z, int n) {
  double best = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double r = static_cast<double>(k) / n, s = std::sqrt(1.0 - r * r);
    Eigen::Matrix2cd m;
    m << r * z.z1, s * z.z3, s * z.z3, -r * z.z2;
    best = std::max(best, Eigen::JacobiSVD<Eigen::Matrix2cd>(m).singularValues()(0));
  }
  return best;
}

}  // namespace

TEST_CASE("variety and branched cover") {
  CHECK(in_V({0.25, 0.25, 0.25}, 1e-14));
  CHECK(in_V({0.5, 0.5, -0.5}, 1e-14));
  CHECK_FALSE(in_V({0.5, 0.5, 0.4}, 1e-14));

  const Point3 o = branched_cover(0.0, 0.0);
  CHECK((o.z1 == cplx(0.0) && o.z2 == cplx(0.0) && o.z3 == cplx(0.0)));
  const Point3 p = branched_cover(0.5, 0.5);
  CHECK((p.z1 == cplx(0.25) && p.z2 == cplx(0.25) && p.z3 == cplx(0.25)));
  const Point3 q = branched_cover(0.5, -0.5);
  CHECK((q.z1 == cplx(0.25) && q.z2 == cplx(0.25) && q.z3 == cplx(-0.25)));

  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const cplx l1 = rng.in_disc(), l2 = rng.in_disc();
    const Point3 a = branched_cover(l1, l2), b = branched_cover(-l1, -l2);
    CHECK(in_V(a, 1e-14));
    CHECK((a.z1 == b.z1 && a.z2 == b.z2 && a.z3 == b.z3));
  }
}

TEST_CASE("z_r endpoints and closed-form norm") {
  const Point3 z{0.3, cplx(0.1, -0.5), 0.2 * I};
  const ComplexMatrix d = z_r_matrix(z, 1.0);
  CHECK(d(0, 0) == z.z1);
  CHECK(d(1, 1) == -z.z2);
  CHECK(operator_norm(d) == doctest::Approx(std::abs(z.z2)).epsilon(1e-15));
  const ComplexMatrix a = z_r_matrix(z, 0.0);
  CHECK(a(0, 1) == z.z3);
  CHECK(a(1, 0) == z.z3);
  CHECK(operator_norm(a) == doctest::Approx(0.2).epsilon(1e-15));

  const ComplexMatrix m = z_r_matrix(outside, 1.0 / std::sqrt(2.0));
  const double closed = operator_norm(m);
  const double power = std::sqrt(power_iteration_top_eigenvalue(m * m.adjoint()));
  CHECK(std::abs(closed - power) < 1e-10);
  Eigen::Matrix2cd e;
  e << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
  CHECK(std::abs(closed - Eigen::JacobiSVD<Eigen::Matrix2cd>(e).singularValues()(0)) < 1e-13);
}

TEST_CASE("spectral-radius condition reduces to a quadratic in t") {
  // 1 + det - trace of z_r z_r^* equals t^2 a - t (a + b - c) + b with
  // a = |z1 z2 - z3^2|^2, b = (1 - |z3|^2)^2, c = (1 - |z1|^2)(1 - |z2|^2).
  Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    const Point3 z = random_point(rng);
    const double t = rng.uniform();
    const ComplexMatrix m = z_r_matrix(z, std::sqrt(t));
    const ComplexMatrix g = m * m.adjoint();
    const double tr = g.trace().real();
    const double det = (g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0)).real();
    const double a = std::norm(z.z1 * z.z2 - z.z3 * z.z3);
    const double b = std::pow(1.0 - std::norm(z.z3), 2);
    const double c = (1.0 - std::norm(z.z1)) * (1.0 - std::norm(z.z2));
    CHECK(std::abs((1.0 + det - tr) - (t * t * a - t * (a + b - c) + b)) < 1e-13);
  }
}

TEST_CASE("norm_u examples") {
  const NormU diag = norm_u({0.3, cplx(0.0, 0.6), 0.0});
  CHECK(diag.value == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(diag.argmax_r == doctest::Approx(1.0));
  const NormU anti = norm_u({0.0, 0.0, cplx(0.3, 0.4)});
  CHECK(anti.value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(anti.argmax_r == doctest::Approx(0.0));
  CHECK(norm_u(outside).value >= 1.0);
}

TEST_CASE("norm_u against a fine Eigen grid") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Point3 z = random_point(rng);
    const NormU n = norm_u(z);
    const double grid = eigen_grid_norm(z, 4000);
    CHECK(n.value >= grid - 1e-12);
    CHECK(n.value <= grid + 1e-4);
    CHECK(n.argmax_r >= 0.0);
    CHECK(n.argmax_r <= 1.0);
    CHECK(std::abs(operator_norm(z_r_matrix(z, n.argmax_r)) - n.value) < 1e-14);
  }
}

TEST_CASE("closed form examples") {
  const ClosedForm o = in_G_closed_form({0.0, 0.0, 0.0});
  CHECK(o.member);
  CHECK(o.margin == doctest::Approx(2.0));
  const ClosedForm x = in_G_closed_form(outside);
  CHECK_FALSE(x.member);
  CHECK(x.margin == doctest::Approx(0.72 - 1.28));
  const ClosedForm y = in_G_closed_form({0.99, -0.99, 0.0});
  CHECK(y.member);
  CHECK(y.margin == doctest::Approx(1.0199 - 0.9801));
  CHECK_FALSE(in_G_closed_form({1.0, 0.0, 0.0}).member);
}

TEST_CASE("in_G examples") {
  const EnvelopeReport a = in_G({0.25, 0.25, 0.25});
  CHECK(a.member);
  CHECK(a.status == MembershipStatus::member);
  CHECK(a.agreement);
  const EnvelopeReport b = in_G(outside);
  CHECK_FALSE(b.member);
  CHECK(b.status == MembershipStatus::non_member);
  CHECK(in_G({0.99, -0.99, 0.0}).member);
  CHECK_THROWS_AS(in_G({NAN, 0.0, 0.0}), InputError);
}

TEST_CASE("oracle agreement and report invariants") {
  Rng rng(4);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    const Point3 z = random_point(rng);
    const EnvelopeReport r = in_G(z);
    if (r.member) {
      CHECK(r.norm_u < 1.0 + 1e-9);
      CHECK(r.closed_form_margin > -1e-9);
    }
    if (std::abs(r.closed_form_margin) >= 1e-6) {
      ++checked;
      CHECK(r.agreement);
      CHECK(r.member == (r.norm_u < 1.0));
      CHECK(r.status != MembershipStatus::boundary_indeterminate);
    } else {
      CHECK(r.status == MembershipStatus::boundary_indeterminate);
    }
  }
  CHECK(checked > 4900);
}

TEST_CASE("variety lies in the envelope") {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Point3 z = branched_cover(rng.in_disc(), rng.in_disc());
    CHECK(std::abs(z.z1 * z.z2 - z.z3 * z.z3) < 1e-12);
    CHECK(in_G(z).member);
  }
}

TEST_CASE("z_U block assembly") {
  const Point3 z{cplx(0.1, 0.2), -0.3, cplx(0.0, 0.4)};
  const ComplexMatrix id = z_U_matrix(z, DecomposedOperator(ComplexMatrix::identity(2), 1, 1));
  CHECK(id == ComplexMatrix{{z.z1, 0.0}, {0.0, z.z2}});
  const ComplexMatrix sw = z_U_matrix(z, DecomposedOperator(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}, 1, 1));
  CHECK(sw == ComplexMatrix{{0.0, z.z3}, {z.z3, 0.0}});
  for (double r : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const ComplexMatrix a = z_U_matrix(z, reflection_unitary(r)), b = z_r_matrix(z, r);
    CHECK((a - b).max_abs() < 1e-16);
  }
}

TEST_CASE("random 2+2 unitaries never beat norm_u") {
  CHECK(sample_u2_bound({0.0, 0.0, 0.0}, 10, 1) == 0.0);
  CHECK(sample_u2_bound({0.5, 0.0, 0.0}, 100, 2) <= 0.5 + 1e-9);
  const double s = sample_u2_bound(outside, 500, 3), n = norm_u(outside).value;
  CHECK(s <= n + 1e-9);
  CHECK(s > n * 0.95);
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const Point3 z = random_point(rng);
    CHECK(sample_u2_bound(z, 50, 100 + i) <= norm_u(z).value + 1e-9);
  }
}

TEST_CASE("convexity and balance") {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const Point3 z = random_member(rng), w = random_member(rng);
    for (int k = 1; k <= 9; ++k) {
      const double th = 0.1 * k;
      CHECK(in_G(cplx(th) * z + cplx(1.0 - th) * w).member);
    }
    CHECK(in_G(rng.in_disc() * z).member);
    CHECK(in_G(rng.unimodular() * z).member);
  }
}

TEST_CASE("separating functional") {
  const SeparatingFunctional d = separating_functional({1.5, 0.0, 0.0});
  CHECK(d.argmax_r == doctest::Approx(1.0));
  CHECK(std::abs(d.value) == doctest::Approx(1.5));
  const auto c = d.coefficients();
  CHECK(std::abs(c[0]) == doctest::Approx(1.0));
  CHECK(std::abs(c[1]) < 1e-12);

  const SeparatingFunctional f = separating_functional(outside);
  const double n = norm_u(outside).value;
  CHECK(std::abs(f.value) == doctest::Approx(n).epsilon(1e-12));
  CHECK(std::abs(f(outside)) == doctest::Approx(n).epsilon(1e-12));
  CHECK(std::abs(norm2(f.xi) - 1.0) < 1e-12);
  CHECK(std::abs(norm2(f.eta) - 1.0) < 1e-12);

  CHECK_THROWS_AS(separating_functional({0.0, 0.0, 0.0}), NoWitnessError);

  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const Point3 a = random_point(rng), b = random_point(rng);
    CHECK(std::abs(f(a + b) - f(a) - f(b)) < 1e-12);
    const auto k = f.coefficients();
    CHECK(std::abs(f(a) - (k[0] * a.z1 + k[1] * a.z2 + k[2] * a.z3)) < 1e-12);
    CHECK(std::abs(f(random_member(rng))) < 1.0);
  }
}
