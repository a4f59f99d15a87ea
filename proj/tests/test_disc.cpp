#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nptk/disc.hpp"
#include "nptk/errors.hpp"

using namespace nptk;

TEST_CASE("moebius swaps a and 0") {
  const cplx a{0.3, -0.5};
  CHECK(std::abs(moebius(a, a)) < 1e-15);
  CHECK(std::abs(moebius(a, 0.0) - a) < 1e-15);
  CHECK(std::abs(moebius(0.0, cplx(0.2, 0.7)) - cplx(-0.2, -0.7)) < 1e-15);
  CHECK_THROWS_AS(moebius(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(moebius(0.5, 2.0), DomainError);
}

TEST_CASE("moebius is an involution of the disc") {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const cplx a = rng.in_disc(0.999), z = rng.in_disc();
    CHECK(std::abs(moebius(a, moebius(a, z)) - z) < 1e-12);
    CHECK(std::abs(moebius(a, z)) < 1.0);
  }
}

TEST_CASE("cayley") {
  CHECK(std::abs(cayley(0.0) - 1.0) < 1e-15);
  CHECK(std::abs(cayley(-1.0)) < 1e-15);
  // (1 + i/2) / (1 - i/2) = (1 + i/2)^2 / (5/4) = (3/4 + i) * 4/5.
  CHECK(std::abs(cayley(cplx(0.0, 0.5)) - cplx(0.6, 0.8)) < 1e-15);
  Rng rng(2);
  for (int i = 0; i < 2000; ++i) CHECK(cayley(rng.in_disc()).real() > 0.0);
  CHECK_THROWS_AS(cayley(1.0), DomainError);
}

TEST_CASE("disc_eval") {
  const cplx a{0.4, 0.1};
  CHECK(std::abs(disc_eval(DiscFunction::moebius(a), a)) < 1e-15);
  CHECK(disc_eval(DiscFunction::identity(), 0.5) == cplx(0.5));
  const cplx ph = std::polar(1.0, 0.7);
  const DiscFunction b(Blaschke{{0.0}, ph, 0.7});
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const cplx z = rng.in_disc();
    CHECK(std::abs(disc_eval(b, z) - 0.7 * ph * z) < 1e-15);
    CHECK(std::abs(disc_eval(b, z)) == doctest::Approx(0.7 * std::abs(z)));
  }
  CHECK(*b.exact_sup() == 0.7);
}

TEST_CASE("disc function validation") {
  CHECK_THROWS_AS(DiscFunction(Blaschke{{1.0}, 1.0, 1.0}), InputError);
  CHECK_THROWS_AS(DiscFunction(Blaschke{{0.5}, 1.1, 1.0}), InputError);
  CHECK_THROWS_AS(DiscFunction(Blaschke{{0.5}, 1.0, 1.5}), InputError);
  CHECK_THROWS_AS(DiscFunction(Blaschke{{0.5}, 1.0, 0.0}), InputError);
  CHECK_THROWS_AS(disc_eval(DiscFunction(Blaschke{{0.5}, 1.0, 1.0}), 2.0), DomainError);
  CHECK(DiscFunction::constant(0.3).is_constant());
  CHECK_FALSE(DiscFunction::identity().is_constant());
}

TEST_CASE("linear combination of polynomials") {
  const DiscFunction f = linear_combination(2.0, DiscFunction::polynomial({1.0, 1.0}), cplx(0.0, 1.0),
                                            DiscFunction::polynomial({0.0, 0.0, 1.0}));
  const cplx z{0.3, 0.2};
  CHECK(std::abs(f(z) - (2.0 * (1.0 + z) + cplx(0.0, 1.0) * z * z)) < 1e-15);
  CHECK_THROWS_AS(linear_combination(1.0, DiscFunction::moebius(0.2), 1.0, DiscFunction::identity()),
                  UnsupportedInputError);
}

TEST_CASE("Blaschke sup is the scale") {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const double s = rng.uniform(0.1, 1.0);
    const DiscFunction b(random_blaschke(rng, 3, 0.9, s));
    // Unimodular on the circle up to the scale.
    for (int k = 0; k < 16; ++k) CHECK(std::abs(b(std::polar(1.0, 0.4 * k))) == doctest::Approx(s).epsilon(1e-12));
    const double sup = sampled_sup(b, unit_disc_domain(), 2000, 10 + i);
    CHECK(sup <= s + 1e-12);
    CHECK(sup >= s - 1e-3);
  }
}

TEST_CASE("Schwarz-Pick bounds") {
  const SchwarzPickResult c = schwarz_pick_bounds(DiscFunction::constant(0.4), cplx(0.5, 0.1));
  CHECK(c.ok);
  CHECK(c.value1 == doctest::Approx(0.4));
  CHECK(c.value2 == 0.0);
  const SchwarzPickResult id = schwarz_pick_bounds(DiscFunction::identity(), 0.5);
  CHECK(id.ok);
  CHECK(id.value1 == doctest::Approx(0.5));
  CHECK(id.bound1 == doctest::Approx(0.5));
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const DiscFunction g(random_blaschke(rng, 3, 0.95, rng.uniform(0.1, 1.0)));
    const cplx z = rng.in_disc(0.999);
    const SchwarzPickResult r = schwarz_pick_bounds(g, z);
    CHECK(r.ok);
    CHECK(r.value1 <= r.bound1);
    CHECK(r.value2 <= r.bound2);
  }
}

TEST_CASE("sampled sup") {
  const auto id = [](cplx z) { return z; };
  const double s1 = sampled_sup(id, unit_disc_domain(), 10000, 1);
  CHECK(s1 >= 0.999);
  CHECK(s1 <= 1.0);
  CHECK(sampled_sup([](cplx) { return cplx(0.3); }, unit_disc_domain(), 100, 1) == 0.3);
  const double s2 = sampled_sup([](const Point2& l) { return l[0] + l[1]; }, delta_domain(), 10000, 2);
  CHECK(s2 >= 0.999);
  CHECK(s2 <= 1.0 + 1e-15);
  CHECK(sampled_sup(id, unit_disc_domain(), 500, 9) == sampled_sup(id, unit_disc_domain(), 500, 9));
}

TEST_CASE("domain samplers stay on the gauge-one boundary") {
  Rng rng(6);
  const auto delta = delta_domain();
  const auto bidisc = bidisc_domain();
  for (int i = 0; i < 500; ++i) {
    const Point2 d = delta.boundary_point(rng);
    CHECK(std::abs(d[0]) + std::abs(d[1]) == doctest::Approx(1.0));
    const Point2 b = bidisc.boundary_point(rng);
    CHECK(std::max(std::abs(b[0]), std::abs(b[1])) == doctest::Approx(1.0));
  }
}
