// Acceptance battery: ten numbered criteria, one line of output each.
// Exits nonzero iff any criterion fails. All tolerances are pinned below.
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gdv/diagnostics.hpp"

using namespace gdv;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what,
            const std::string& detail = "") {
  std::printf("[%2d] %s %s%s%s\n", id, pass ? "PASS" : "FAIL", what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

MarketModel illiquid_two_state() {
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  return MarketModel::illiquid(sp, Claim({1.0, -1.0}), Friction{}, -0.5, 0.5);
}

MarketModel scaled_half() {
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  return MarketModel::scaled_box(sp, {Claim({1.0, 0.5})}, {0.0}, {1.0});
}

MarketModel monotone_cap() {
  SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  return MarketModel::scaled_box(sp, {Claim({1.0, 1.0})}, {0.0}, {1.0});
}

RiskMeasure abs_penalty_measure(const SampleSpace& sp) {
  return penalty_table(sp, {{Density({1.0, 0.0}), 0.25},
                            {Density({0.5, 0.5}), 0.0},
                            {Density({0.0, 1.0}), 0.25}});
}

bool check_le(double v, double tol, double& worst) {
  worst = std::max(worst, v);
  return v <= tol;
}

// --- criterion 1 -----------------------------------------------------------

void criterion_1() {
  const double kGridTol = 1e-9, kValueTol = 1e-9, kIdentityTol = 1e-9;
  const double kNonConvexMin = 1e-3;
  MarketModel M = illiquid_two_state();
  std::ostringstream why;
  bool ok = true;

  double worst_grid = 0.0;
  for (int i = 0; i <= 20; ++i) {
    double q1 = i / 20.0;
    double expect = (2.0 * q1 - 1.0) * (2.0 * q1 - 1.0) / 4.0;
    double got = penalty_rho0(M, Density({q1, 1.0 - q1})).value();
    worst_grid = std::max(worst_grid, std::abs(got - expect));
  }
  if (worst_grid > kGridTol) { ok = false; why << "penalty grid off by " << worst_grid; }

  Claim x({-0.5, 0.0});
  double dual = rho_hat0(M, x).value();
  if (std::abs(dual - 0.3125) > kValueTol) { ok = false; why << " dual value " << dual; }

  RiskMeasure abs = abs_penalty_measure(M.space);
  double abs_val = abs.evaluate(x);
  if (std::abs(abs_val - 0.25) > kValueTol) { ok = false; why << " abs value " << abs_val; }
  if (!is_gdv(abs, M).holds()) { ok = false; why << " abs measure rejected"; }

  // Penalty identity: the measure's penalty |2q-1|/4 meets the market
  // penalty (2q-1)^2/4 at q1 in {0, 1/2, 1} but exceeds it strictly at
  // q1 = 1/4; an indifference price would keep the gap concave in q.
  auto beta = [&](double q1) {
    Density q({q1, 1.0 - q1});
    return abs.exact_penalty(q).value() - penalty_rho0(M, q).value();
  };
  for (double q1 : {0.0, 0.5, 1.0})
    if (std::abs(beta(q1)) > kIdentityTol) { ok = false; why << " identity fails at " << q1; }
  double sag = beta(0.25) - (beta(0.0) + beta(0.5)) / 2.0;
  if (sag < kNonConvexMin) { ok = false; why << " non-convexity margin " << sag; }

  report(1, ok, "illiquid two-state worked values and indifference-price obstruction",
         why.str());
}

// --- criterion 2 -----------------------------------------------------------

void criterion_2() {
  const double kTol = 1e-9;
  MarketModel M = scaled_half();
  std::ostringstream why;
  bool ok = true;

  double mp = min_support_over_simplex(M).value.value();
  if (std::abs(mp - 0.5) > kTol) { ok = false; why << "min penalty " << mp; }
  double v0 = rho_hat0(M, constant_claim(2, 0.0)).value();
  if (std::abs(v0 + 0.5) > kTol) { ok = false; why << " rho_hat0(0) " << v0; }
  if (gdv_exists(M).report.holds()) { ok = false; why << " existence should fail"; }
  if (coherent_gdv(M).measure.has_value()) { ok = false; why << " coherent measure should be absent"; }

  report(2, ok, "scaled-half market: no normalized valuation exists", why.str());
}

// --- criterion 3 -----------------------------------------------------------

void criterion_3() {
  const double kDualityTol = 1e-7;   // |rho0 - rho_hat0| on polyhedral markets
  const double kMinorantTol = 1e-9;  // rho_hat0 <= rho0 + tol on illiquid ones
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> gen(-2.0, 2.0);
  std::uniform_real_distribution<double> pos(0.1, 1.0);
  std::ostringstream why;
  bool ok = true;

  double worst_gap = 0.0;
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 2 + rng() % 5, J = 1 + rng() % 6;
    std::vector<Claim> gens;
    for (std::size_t j = 0; j < J; ++j) {
      std::vector<double> g(n);
      for (auto& v : g) v = gen(rng);
      gens.push_back(Claim(std::move(g)));
    }
    MarketModel M = MarketModel::polytope(SampleSpace::uniform(n), std::move(gens));
    for (int s = 0; s < 10; ++s) {
      std::vector<double> xv(n);
      for (auto& v : xv) v = gen(rng);
      Claim x(std::move(xv));
      double primal = superhedging_rho0(M, x).value();
      double dual = rho_hat0(M, x).value();
      worst_gap = std::max(worst_gap, std::abs(primal - dual));
      ++checked;
    }
  }
  if (worst_gap > kDualityTol) { ok = false; why << "polyhedral gap " << worst_gap; }

  double worst_excess = -1e300;
  for (int t = 0; t < 200; ++t) {
    double s0 = gen(rng), s1 = gen(rng);
    if (std::abs(s0) < 0.05) s0 = 0.5;
    if (std::abs(s1) < 0.05) s1 = -0.5;
    SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
    MarketModel M = MarketModel::illiquid(sp, Claim({s0, s1}),
                                          Friction{Friction::Kind::Quadratic, pos(rng)},
                                          -pos(rng), pos(rng));
    Claim x({gen(rng), gen(rng)});
    double primal = superhedging_rho0(M, x).value();
    double dual = rho_hat0(M, x).value();
    worst_excess = std::max(worst_excess, dual - primal);
  }
  if (worst_excess > kMinorantTol) { ok = false; why << " illiquid excess " << worst_excess; }

  std::ostringstream what;
  what << "duality on " << checked << " polyhedral claims and 200 illiquid instances";
  report(3, ok, what.str(), why.str());
}

// --- criteria 4 and 5: fixture batteries -----------------------------------

struct Fixture {
  std::string name;
  MarketModel market;
};

std::vector<Fixture> fixtures() {
  SampleSpace sp2({"w1", "w2"}, {0.5, 0.5});
  std::vector<Fixture> out;
  out.push_back({"illiquid-two-state", illiquid_two_state()});
  out.push_back({"scaled-half", scaled_half()});
  out.push_back({"monotone-cap", monotone_cap()});
  out.push_back({"zero-market-2", MarketModel::polytope(sp2, {})});
  out.push_back({"zero-market-3", MarketModel::polytope(SampleSpace::uniform(3), {})});
  out.push_back({"two-generator", MarketModel::polytope(
                                      sp2, {Claim({2.0, -1.0}), Claim({-1.0, 3.0})})});
  out.push_back({"geometric-S-6", build_truncation(TruncationId::GeometricS, 6).market});
  out.push_back({"indicator-grid-4", build_truncation(TruncationId::IndicatorGrid, 4).market});
  out.push_back({"counterexample-1-4", build_truncation(TruncationId::Counterexample1, 4).market});
  out.push_back({"counterexample-2-3", build_truncation(TruncationId::Counterexample2, 3).market});
  return out;
}

void criterion_4() {
  const double kPenaltyTol = 1e-8;  // min-penalty "approximately zero"
  const double kNormTol = 1e-7;     // |rho_hat0(0)|
  std::ostringstream why;
  bool ok = true;

  for (const Fixture& f : fixtures()) {
    bool a = min_support_over_simplex(f.market).value.value() <= kPenaltyTol;

    XReal v0 = rho_hat0(f.market, constant_claim(f.market.dim(), 0.0));
    bool b = v0.is_finite() && std::abs(v0.value()) <= kNormTol;

    bool c = is_gdv(rho_hat0_measure(f.market), f.market).holds();

    bool d = true;
    for (int e = -10; e <= 4; ++e)
      d = d && !contains(f.market, constant_claim(f.market.dim(), std::ldexp(1.0, e)));

    if (!(a == b && b == c && c == d)) {
      ok = false;
      why << f.name << "(" << a << b << c << d << ") ";
    }
  }
  report(4, ok, "five-way existence equivalence agrees on all fixture markets",
         why.str());
}

void criterion_5() {
  std::ostringstream why;
  bool ok = true;
  for (const Fixture& f : fixtures()) {
    DiagnosticReport nfl = nfl_check(f.market);
    if (nfl.verdict == Verdict::Inconclusive) {
      ok = false;
      why << f.name << " routes disagree; ";
      continue;
    }
    bool relevant = is_relevant(rho_hat0_measure(f.market), f.market).holds();
    if (nfl.holds() != relevant) {
      ok = false;
      why << f.name << " nfl=" << nfl.holds() << " relevant=" << relevant << "; ";
    }
  }
  report(5, ok, "no-free-lunch routes and relevance agree on all fixture markets",
         why.str());
}

// --- criterion 6 -----------------------------------------------------------

void criterion_6() {
  const double kTol = 1e-9;
  std::ostringstream why;
  bool ok = true;

  for (int N = 2; N <= 64; ++N) {
    TruncationFamily f = build_truncation(TruncationId::Counterexample1, N);
    double mp = min_support_over_simplex(f.market).value.value();
    if (std::abs(mp - 1.0 / N) > kTol) {
      ok = false; why << "ce1 N=" << N << " min " << mp << "; ";
    }
    if (nfl_check(f.market).verdict != Verdict::Fails) {
      ok = false; why << "ce1 N=" << N << " nfl should fail; ";
    }
  }

  TruncationFamily ce2 = build_truncation(TruncationId::Counterexample2, 6);
  for (std::size_t t = 0; t < ce2.densities.size(); ++t) {
    double j = double(t + 1);
    double got = penalty_rho0(ce2.market, ce2.densities[t]).value();
    if (std::abs(got - 1.0 / (j * j)) > kTol) {
      ok = false; why << "ce2 tent j=" << j << " penalty " << got << "; ";
    }
  }
  if (!is_relevant(rho_hat0_measure(ce2.market), ce2.market).holds()) {
    ok = false; why << "ce2 relevance should hold; ";
  }
  for (const std::string& note : ce2.notes)
    std::printf("     note: %s\n", note.c_str());

  report(6, ok, "counterexample truncations: exact penalties, NFL failure, relevance",
         why.str());
}

// --- criterion 7 -----------------------------------------------------------

void criterion_7() {
  AxiomsOptions opt;        // 10^4 random triples, tol 1e-9, seed pinned
  opt.sample_count = 10000;
  opt.tol = 1e-9;
  std::ostringstream why;
  bool ok = true;

  MarketModel M = illiquid_two_state();
  SampleSpace sp2 = M.space;
  MarketModel trivial = MarketModel::polytope(sp2, {});

  struct Entry {
    std::string name;
    RiskMeasure rho;
    SampleSpace space;
    bool homogeneous;
  };
  std::vector<Entry> entries;
  entries.push_back({"entropic", entropic(sp2, 1.0), sp2, false});
  entries.push_back({"superhedging-dual", rho_hat0_measure(M), sp2, false});
  entries.push_back({"worst-case", worst_case(sp2, Density({0.5, 0.5})), sp2, true});
  entries.push_back({"shortfall-normalized",
                     shortfall_measure(sp2, trivial, YoungFunction::power(2.0), 0.04),
                     sp2, false});
  entries.push_back({"indifference", indifference_measure(entropic(sp2, 1.0), M),
                     sp2, false});

  for (const Entry& e : entries) {
    DiagnosticReport rep = axioms_check(e.rho, e.space, opt);
    if (!rep.holds()) {
      ok = false;
      why << e.name << " violates convex axioms (mono " << rep.margins.at("monotonicity")
          << ", cash " << rep.margins.at("cash_invariance") << ", conv "
          << rep.margins.at("convexity") << "); ";
    }
    bool homog = rep.margins.at("homogeneity") <= opt.tol;
    if (e.homogeneous && !homog) { ok = false; why << e.name << " should be homogeneous; "; }
    if (e.name == "entropic" || e.name == "superhedging-dual") {
      if (homog) { ok = false; why << e.name << " should break homogeneity; "; }
      if (!rep.witnesses.count("homogeneity_claim")) {
        ok = false; why << e.name << " missing homogeneity witness; ";
      }
    }
  }
  report(7, ok, "axioms hold on 10^4 triples for five measures; homogeneity splits as expected",
         why.str());
}

// --- criterion 8 -----------------------------------------------------------

void criterion_8() {
  std::ostringstream why;
  bool ok = true;

  SampleSpace sp2({"w1", "w2"}, {0.5, 0.5});
  double ent = entropic(sp2, 1.0).evaluate(Claim({1.0, -1.0}));
  if (std::abs(ent - std::log(std::cosh(1.0))) > 1e-12) {
    ok = false; why << "entropic " << ent << "; ";
  }

  MarketModel trivial = MarketModel::polytope(sp2, {});
  double sf = shortfall_price(sp2, trivial, YoungFunction::power(2.0), 0.04,
                              constant_claim(2, 0.0));
  if (std::abs(sf + 0.2) > 1e-9) { ok = false; why << "shortfall " << sf << "; "; }

  double nrm = luxemburg_norm(YoungFunction::power(2.0), sp2, Claim({2.0, 0.0}));
  if (std::abs(nrm - std::sqrt(2.0)) > 1e-10) { ok = false; why << "norm " << nrm << "; "; }

  report(8, ok, "closed-form spot values: entropic, shortfall, Luxemburg norm",
         why.str());
}

// --- criterion 9 -----------------------------------------------------------

void criterion_9() {
  const double kTol = 1e-9;
  MarketModel M = illiquid_two_state();
  std::ostringstream why;
  bool ok = true;

  auto restricted = restrict_conical(rho_hat0_measure(M), M);
  if (!restricted) {
    report(9, false, "conical restriction", "restriction unexpectedly empty");
    return;
  }

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> gen(-2.0, 2.0);
  double worst_eq = 0.0, worst_dom = -1e300;
  for (int t = 0; t < 100; ++t) {
    Claim x({gen(rng), gen(rng)});
    double rp = restricted->evaluate(x);
    double expect = -(0.5 * x.values[0] + 0.5 * x.values[1]);
    worst_eq = std::max(worst_eq, std::abs(rp - expect));
    worst_dom = std::max(worst_dom, rp - rho_hat0(M, x).value());
  }
  if (worst_eq > kTol) { ok = false; why << "mismatch with E_{1/2}[-x]: " << worst_eq; }
  if (worst_dom > kTol) { ok = false; why << " exceeds unrestricted value by " << worst_dom; }

  // Valuation property on the conical market: nonpositive on every element
  // c * m(alpha) of the cone, and normalized at zero.
  Friction f;
  double worst_elem = -1e300;
  for (int i = 0; i <= 20; ++i) {
    double alpha = -0.5 + i / 20.0;
    Claim m({alpha * 1.0 - f(alpha), alpha * -1.0 - f(alpha)});
    for (int e = -2; e <= 6; ++e) {
      double c = std::ldexp(1.0, e);
      worst_elem = std::max(worst_elem, restricted->evaluate(-(c * m)));
    }
  }
  if (worst_elem > kTol) { ok = false; why << " positive on a cone element: " << worst_elem; }
  if (std::abs(restricted->evaluate(constant_claim(2, 0.0))) > kTol) {
    ok = false; why << " not normalized";
  }

  report(9, ok, "conical restriction equals the q=1/2 expectation and stays a valuation",
         why.str());
}

// --- criterion 10 ----------------------------------------------------------

void criterion_10() {
  std::ostringstream why;
  bool ok = true;

  MarketModel M = illiquid_two_state();
  MarketModel trivial = MarketModel::polytope(M.space, {});

  struct Pair {
    std::string name;
    RiskMeasure rho;
    const MarketModel* market;
    Verdict expect;
  };
  RiskMeasure dual = rho_hat0_measure(M);
  RiskMeasure abs = abs_penalty_measure(M.space);
  RiskMeasure null_atom = worst_case(M.space, Density({1.0, 0.0}));
  std::vector<Pair> pairs = {
      {"dual-on-illiquid", dual, &M, Verdict::Holds},
      {"abs-penalty-on-illiquid", abs, &M, Verdict::Holds},
      {"null-atom-worst-case", null_atom, &trivial, Verdict::Fails},
  };
  for (const Pair& p : pairs) {
    DiagnosticReport rep = extension_consistency(p.rho, *p.market);
    if (rep.verdict == Verdict::Inconclusive) {
      ok = false; why << p.name << " routes disagree; ";
    } else if (rep.verdict != p.expect) {
      ok = false; why << p.name << " verdict " << to_string(rep.verdict) << "; ";
    }
  }
  report(10, ok, "extension routes agree on all pairs, including the null-atom failure",
         why.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s: %d of 10 criteria passed\n",
              g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
