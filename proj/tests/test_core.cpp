#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "gdv/core.hpp"

using namespace gdv;

TEST_CASE("sample space validation") {
  CHECK_NOTHROW(SampleSpace({"a", "b"}, {0.5, 0.5}));
  CHECK_THROWS_AS(SampleSpace({"a", "b"}, {0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(SampleSpace({"a", "b"}, {1.1, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(SampleSpace({"a", "b"}, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SampleSpace({"a"}, {0.5, 0.5}), std::invalid_argument);
  SampleSpace u = SampleSpace::uniform(4);
  CHECK(u.size() == 4);
  CHECK(u.probs[2] == doctest::Approx(0.25));
}

TEST_CASE("claim arithmetic") {
  Claim a({1.0, 2.0}), b({-1.0, 0.5});
  CHECK((a + b)[0] == doctest::Approx(0.0));
  CHECK((a - b)[1] == doctest::Approx(1.5));
  CHECK((-a)[0] == doctest::Approx(-1.0));
  CHECK((2.0 * a)[1] == doctest::Approx(4.0));
  CHECK(shift(a, 3.0)[0] == doctest::Approx(4.0));
  CHECK(constant_claim(3, 2.0)[2] == doctest::Approx(2.0));
  Claim e = unit_claim(3, 1, 5.0);
  CHECK(e[0] == 0.0);
  CHECK(e[1] == 5.0);
  CHECK_THROWS_AS(Claim({1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("density validation and classification") {
  SampleSpace sp({"a", "b"}, {0.5, 0.5});
  Density q({0.25, 0.75});
  CHECK(classify_density(sp, q) == DensityClass::Equivalent);
  CHECK(classify_density(sp, Density({1.0, 0.0})) ==
        DensityClass::AbsolutelyContinuous);
  CHECK_THROWS_AS(Density({0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(Density({1.5, -0.5}), std::invalid_argument);
  auto rn = q.radon_nikodym(sp);
  CHECK(rn[0] == doctest::Approx(0.5));
  CHECK(rn[1] == doctest::Approx(1.5));
}

TEST_CASE("expectation is bilinear") {
  SampleSpace sp = SampleSpace::uniform(3);
  Density q({0.2, 0.3, 0.5});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> xv(3), yv(3);
    for (auto& v : xv) v = u(rng);
    for (auto& v : yv) v = u(rng);
    Claim x(xv), y(yv);
    double s = u(rng);
    CHECK(expectation(sp, q, x + s * y) ==
          doctest::Approx(expectation(sp, q, x) + s * expectation(sp, q, y))
              .epsilon(1e-12));
  }
}

TEST_CASE("young functions") {
  YoungFunction p2 = YoungFunction::power(2.0);
  CHECK(p2(3.0) == doctest::Approx(9.0));
  CHECK(p2(-3.0) == doctest::Approx(9.0));
  CHECK(p2(0.0) == doctest::Approx(0.0));
  YoungFunction ex = YoungFunction::exponential(1.0);
  CHECK(ex(1.0) == doctest::Approx(std::exp(1.0) - 1.0));
  CHECK(ex(0.0) == doctest::Approx(0.0));
  YoungFunction cap = YoungFunction::capped();
  CHECK(cap(0.5) == doctest::Approx(0.5));
  CHECK(std::isinf(cap(1.5)));
}

TEST_CASE("luxemburg norm closed forms") {
  SampleSpace sp({"a", "b"}, {0.5, 0.5});
  // Power p: the norm is the weighted p-norm.
  CHECK(luxemburg_norm(YoungFunction::power(2.0), sp, Claim({2.0, 0.0})) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(luxemburg_norm(YoungFunction::power(1.0), sp, Claim({2.0, 4.0})) ==
        doctest::Approx(3.0).epsilon(1e-9));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (double p : {1.0, 2.0, 3.0}) {
    YoungFunction phi = YoungFunction::power(p);
    for (int i = 0; i < 50; ++i) {
      std::vector<double> xv(2);
      for (auto& v : xv) v = u(rng);
      Claim x(xv);
      double expect = std::pow(
          0.5 * std::pow(std::abs(xv[0]), p) + 0.5 * std::pow(std::abs(xv[1]), p),
          1.0 / p);
      CHECK(luxemburg_norm(phi, sp, x) == doctest::Approx(expect).epsilon(1e-9));
    }
  }
}

TEST_CASE("luxemburg norm properties") {
  SampleSpace sp = SampleSpace::uniform(3);
  YoungFunction phi = YoungFunction::exponential(1.0);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> xv(3), yv(3);
    for (auto& v : xv) v = u(rng);
    for (auto& v : yv) v = u(rng);
    Claim x(xv), y(yv);
    double nx = luxemburg_norm(phi, sp, x);
    double ny = luxemburg_norm(phi, sp, y);
    // Absolute homogeneity.
    CHECK(luxemburg_norm(phi, sp, 2.5 * x) ==
          doctest::Approx(2.5 * nx).epsilon(1e-8));
    CHECK(luxemburg_norm(phi, sp, -1.0 * x) == doctest::Approx(nx).epsilon(1e-9));
    // Triangle inequality.
    CHECK(luxemburg_norm(phi, sp, x + y) <= nx + ny + 1e-8);
  }
  CHECK(luxemburg_norm(phi, sp, constant_claim(3, 0.0)) == 0.0);
  // Capped variant: the norm is max of sup-norm and the L1 gauge.
  SampleSpace sp2({"a", "b"}, {0.5, 0.5});
  CHECK(luxemburg_norm(YoungFunction::capped(), sp2, Claim({2.0, 0.0})) ==
        doctest::Approx(2.0).epsilon(1e-9));
}
