#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gdv/risk_measures.hpp"

using namespace gdv;

namespace {

MarketModel illiquid_two_state() {
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  return MarketModel::illiquid(sp, Claim({1.0, -1.0}), Friction{}, -0.5, 0.5);
}

MarketModel scaled_half() {
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  return MarketModel::scaled_box(sp, {Claim({1.0, 0.5})}, {0.0}, {1.0});
}

MarketModel trivial_market(std::size_t n) {
  return MarketModel::polytope(SampleSpace::uniform(n), {});
}

}  // namespace

TEST_CASE("superhedging on the trivial market is the worst loss") {
  MarketModel M = trivial_market(2);
  CHECK(superhedging_rho0(M, Claim({1.0, -2.0})).value() == doctest::Approx(2.0));
  CHECK(superhedging_rho0(M, Claim({3.0, 4.0})).value() == doctest::Approx(-3.0));
}

TEST_CASE("superhedging spot values") {
  // Full position theta=1 yields (1, 1/2), so zero superhedges from -1/2.
  CHECK(superhedging_rho0(scaled_half(), Claim({0.0, 0.0})).value() ==
        doctest::Approx(-0.5));
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  MarketModel cap = MarketModel::scaled_box(sp, {Claim({1.0, 1.0})}, {0.0}, {1.0});
  CHECK(superhedging_rho0(cap, Claim({0.0, 0.0})).value() ==
        doctest::Approx(-1.0));
  // Unlimited nonnegative cash positions push the cost to -infinity.
  MarketModel ray = MarketModel::scaled_box(sp, {Claim({1.0, 1.0})}, {0.0}, {kInf});
  CHECK(superhedging_rho0(ray, Claim({0.0, 0.0})).is_minus_inf());
  // ...and leave no density with finite support value.
  CHECK(rho_hat0(ray, Claim({0.0, 0.0})).is_minus_inf());
}

TEST_CASE("dual bound reproduces the worked illiquid values") {
  MarketModel M = illiquid_two_state();
  CHECK(rho_hat0(M, Claim({-0.5, 0.0})).value() ==
        doctest::Approx(0.3125).epsilon(1e-10));
  CHECK(rho_hat0(M, Claim({0.0, 0.0})).value() ==
        doctest::Approx(0.0).epsilon(1e-10));
  SimplexMin sm = min_support_over_simplex(M);
  CHECK(sm.value.value() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(sm.argmin[0] == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("dual bound on the scaled-half market") {
  MarketModel M = scaled_half();
  SimplexMin sm = min_support_over_simplex(M);
  CHECK(sm.value.value() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rho_hat0(M, Claim({0.0, 0.0})).value() ==
        doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("duality between primal and dual bounds") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  // Polyhedral: exact LP duality.
  for (int t = 0; t < 40; ++t) {
    std::size_t n = 2 + rng() % 4, J = 1 + rng() % 4;
    SampleSpace sp = SampleSpace::uniform(n);
    std::vector<Claim> gens;
    for (std::size_t j = 0; j < J; ++j) {
      std::vector<double> g(n);
      for (auto& v : g) v = u(rng);
      gens.push_back(Claim(std::move(g)));
    }
    MarketModel M = MarketModel::polytope(sp, std::move(gens));
    for (int s = 0; s < 5; ++s) {
      std::vector<double> xv(n);
      for (auto& v : xv) v = u(rng);
      Claim x(xv);
      double lhs = superhedging_rho0(M, x).value();
      double rhs = rho_hat0(M, x).value();
      CHECK(std::abs(lhs - rhs) <= 1e-7);
    }
  }
  // Illiquid: minorant within golden-section accuracy.
  MarketModel M = illiquid_two_state();
  for (int s = 0; s < 50; ++s) {
    std::vector<double> xv(2);
    for (auto& v : xv) v = u(rng);
    Claim x(xv);
    CHECK(rho_hat0(M, x).value() <=
          superhedging_rho0(M, x).value() + 1e-9);
  }
}

TEST_CASE("entropic closed form and penalty oracle") {
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  RiskMeasure rho = entropic(sp, 1.0);
  CHECK(rho.evaluate(Claim({1.0, -1.0})) ==
        doctest::Approx(std::log(std::cosh(1.0))).epsilon(1e-13));
  CHECK(rho.evaluate(Claim({0.0, 0.0})) == doctest::Approx(0.0));
  // Scaled relative entropy is the penalty: the dual inequality holds for
  // random claims and is tight at x = -log(dQ/dP) / gamma.
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double q1 : {0.2, 0.5, 0.7}) {
    Density q({q1, 1.0 - q1});
    double kl = q1 * std::log(q1 / 0.5) + (1.0 - q1) * std::log((1.0 - q1) / 0.5);
    for (int s = 0; s < 50; ++s) {
      Claim x({u(rng), u(rng)});
      CHECK(rho.evaluate(x) >= -(q1 * x[0] + (1.0 - q1) * x[1]) - kl - 1e-12);
    }
    Claim xstar({-std::log(q1 / 0.5), -std::log((1.0 - q1) / 0.5)});
    CHECK(rho.evaluate(xstar) ==
          doctest::Approx(-(q1 * xstar[0] + (1.0 - q1) * xstar[1]) - kl)
              .epsilon(1e-12));
    // The probe estimator stays below the oracle value.
    PenaltyEstimate est = penalty_of(rho, sp, q);
    CHECK(!est.exact);
    CHECK(est.value.value() <= kl + 1e-9);
    CHECK(est.value.value() >= -1e-12);
  }
}

TEST_CASE("worst case measure and its exact penalty") {
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  Density q({0.3, 0.7});
  RiskMeasure rho = worst_case(sp, q);
  CHECK(rho.evaluate(Claim({1.0, -1.0})) == doctest::Approx(0.4));
  PenaltyEstimate est = penalty_of(rho, sp, q);
  CHECK(est.exact);
  CHECK(est.value.value() == 0.0);
  CHECK(penalty_of(rho, sp, Density({0.5, 0.5})).value.is_plus_inf());
}

TEST_CASE("penalty table measure") {
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  RiskMeasure rho = penalty_table(sp, {{Density({1.0, 0.0}), 0.25},
                                       {Density({0.5, 0.5}), 0.0},
                                       {Density({0.0, 1.0}), 0.25}});
  CHECK(rho.evaluate(Claim({-0.5, 0.0})) == doctest::Approx(0.25));
  CHECK(rho.evaluate(Claim({0.0, 0.0})) == doctest::Approx(0.0));
  REQUIRE(rho.has_exact_penalty());
  CHECK(rho.exact_penalty(Density({0.25, 0.75})).value() ==
        doctest::Approx(0.125));  // |2q-1|/4 at q1 = 1/4
  CHECK(rho.exact_penalty(Density({0.5, 0.5})).value() == doctest::Approx(0.0));
}

TEST_CASE("dual-bound measure carries its market") {
  MarketModel M = illiquid_two_state();
  RiskMeasure rho = rho_hat0_measure(M);
  CHECK(rho.support_market != nullptr);
  CHECK(rho.evaluate(Claim({-0.5, 0.0})) == doctest::Approx(0.3125).epsilon(1e-9));
  CHECK(rho.exact_penalty(Density({0.75, 0.25})).value() ==
        doctest::Approx(1.0 / 16).epsilon(1e-9));
}

TEST_CASE("market inner minimization") {
  MarketModel M = illiquid_two_state();
  SampleSpace sp = M.space;
  // min over alpha of entropic(m(alpha)): alpha^2 + log cosh(alpha) has its
  // minimum 0 at alpha = 0.
  RiskMeasure eta = entropic(sp, 1.0);
  MarketMin mm = minimize_over_market(
      M, [&](const Claim& m) { return eta.evaluate(m); }, 1e-12);
  REQUIRE(mm.status == MarketMin::Status::Ok);
  CHECK(mm.value == doctest::Approx(0.0).epsilon(1e-9));

  // Linear objective over a polytope reaches a generator.
  SampleSpace sp3 = SampleSpace::uniform(2);
  MarketModel P = MarketModel::polytope(
      sp3, {Claim({1.0, -3.0}), Claim({-1.0, 1.0})});
  MarketMin pm = minimize_over_market(
      P, [&](const Claim& m) { return m[0] + m[1]; }, 1e-12);
  REQUIRE(pm.status == MarketMin::Status::Ok);
  CHECK(pm.value == doctest::Approx(-2.0).epsilon(1e-8));

  // Unbounded descent is reported as a status.
  SampleSpace sp2({"w1", "w2"}, {0.5, 0.5});
  MarketModel ray =
      MarketModel::scaled_box(sp2, {Claim({1.0, 1.0})}, {0.0}, {kInf});
  MarketMin rm = minimize_over_market(
      ray, [&](const Claim& m) { return -m[0]; }, 1e-12);
  CHECK(rm.status == MarketMin::Status::Unbounded);
}

TEST_CASE("shortfall functional closed form") {
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  MarketModel M = trivial_market(2);
  YoungFunction loss = YoungFunction::power(2.0);
  // With no hedging, E[min(r,0)^2] = delta pins r = -sqrt(delta).
  CHECK(shortfall_functional(sp, M, loss, 0.04, constant_claim(2, 0.0)) ==
        doctest::Approx(-0.2).epsilon(1e-9));
  // Cash invariance of the functional.
  Claim y({0.3, -0.8});
  double base = shortfall_functional(sp, M, loss, 0.04, y);
  CHECK(shortfall_functional(sp, M, loss, 0.04, shift(y, 0.7)) ==
        doctest::Approx(base - 0.7).epsilon(1e-8));
  CHECK(shortfall_price(sp, M, loss, 0.04, -y) == doctest::Approx(base));
  RiskMeasure rho = shortfall_measure(sp, M, loss, 0.04);
  CHECK(rho.evaluate(constant_claim(2, 0.0)) == doctest::Approx(0.0));
}

TEST_CASE("acceptance set measures") {
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  MarketModel M = trivial_market(2);
  AcceptanceSet A = AcceptanceSet::nonnegative_orthant(2);
  // Equals the superhedging cost.
  for (const Claim& x : {Claim({1.0, -2.0}), Claim({0.5, 0.25})}) {
    CHECK(acceptance_set_measure(A, M, x).value() ==
          doctest::Approx(superhedging_rho0(M, x).value()).epsilon(1e-8));
  }
  // Sublevel set of the dual bound over the worked illiquid market:
  // hedging lowers the unhedged dual bound 0.3125 to 9/32, and the
  // acceptance formulation agrees with the direct inner minimization.
  MarketModel I = illiquid_two_state();
  RiskMeasure dual = rho_hat0_measure(I);
  AcceptanceSet S = AcceptanceSet::sublevel(dual);
  double hedged = acceptance_set_measure(S, I, Claim({-0.5, 0.0})).value();
  CHECK(hedged == doctest::Approx(0.28125).epsilon(1e-6));
  MarketMin direct = minimize_over_market(
      I, [&](const Claim& m) { return dual.evaluate(m + Claim({-0.5, 0.0})); },
      1e-12);
  CHECK(hedged == doctest::Approx(direct.value).epsilon(1e-7));
}

TEST_CASE("indifference prices") {
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  MarketModel M = trivial_market(2);
  RiskMeasure eta = entropic(sp, 1.0);
  IndifferencePrice p = indifference_price(eta, M, Claim({1.0, -1.0}));
  REQUIRE(p.status == IndifferencePrice::Status::Ok);
  CHECK(p.price == doctest::Approx(std::log(std::cosh(1.0))).epsilon(1e-10));
  CHECK(p.inner_inf_at_zero == doctest::Approx(0.0));

  // Hedging in the illiquid market lowers the price; the optimally hedged
  // baseline is still zero.
  MarketModel I = illiquid_two_state();
  IndifferencePrice q = indifference_price(eta, I, Claim({1.0, -1.0}));
  REQUIRE(q.status == IndifferencePrice::Status::Ok);
  CHECK(q.inner_inf_at_zero == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(q.price < p.price);
  CHECK(indifference_price(eta, I, constant_claim(2, 0.0)).price ==
        doctest::Approx(0.0).epsilon(1e-9));

  RiskMeasure im = indifference_measure(eta, I);
  CHECK(im.evaluate(Claim({1.0, -1.0})) == doctest::Approx(q.price).epsilon(1e-9));
}

TEST_CASE("conical restriction collapses to the pinned density") {
  MarketModel M = illiquid_two_state();
  RiskMeasure rho = rho_hat0_measure(M);
  auto rp = restrict_conical(rho, M);
  REQUIRE(rp.has_value());
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int s = 0; s < 60; ++s) {
    Claim x({u(rng), u(rng)});
    CHECK(rp->evaluate(x) ==
          doctest::Approx(-(x[0] + x[1]) / 2.0).epsilon(1e-9));
    CHECK(rp->evaluate(x) <= rho.evaluate(x) + 1e-9);
  }
  // Empty zero set: no conical restriction.
  RiskMeasure rho2 = rho_hat0_measure(scaled_half());
  CHECK(!restrict_conical(rho2, scaled_half()).has_value());
}

TEST_CASE("axioms checker") {
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  AxiomsOptions opt;
  opt.sample_count = 2000;

  DiagnosticReport re = axioms_check(entropic(sp, 1.0), sp, opt);
  CHECK(re.holds());
  CHECK(re.margins.at("homogeneity") > 1e-6);
  CHECK(re.witnesses.count("homogeneity_claim") == 1);

  DiagnosticReport rw = axioms_check(worst_case(sp, Density({0.3, 0.7})), sp, opt);
  CHECK(rw.holds());
  CHECK(rw.margins.at("homogeneity") <= 1e-9);

  // A non-normalized measure fails.
  RiskMeasure shifted = entropic(sp, 1.0);
  auto base = shifted.evaluate;
  shifted.evaluate = [base](const Claim& x) { return base(x) + 0.1; };
  CHECK(!axioms_check(shifted, sp, opt).holds());
}
