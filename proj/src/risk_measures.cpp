#include "gdv/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gdv/solvers.hpp"

namespace gdv {

namespace {

constexpr double kBig = 1e30;

double clamp_finite(double v) {
  if (std::isinf(v)) return v > 0 ? kBig : -kBig;
  return v;
}

std::vector<double> neg_values(const Claim& x) {
  std::vector<double> v = x.values;
  for (double& a : v) a = -a;
  return v;
}

}  // namespace

XReal superhedging_rho0(const MarketModel& M, const Claim& x) {
  detail::require(x.size() == M.dim(), "claim dimension mismatch");
  const std::size_t n = M.dim();

  if (const auto* ill = M.as_illiquid()) {
    auto worst_shortfall = [&](double a) {
      double worst = -kInf;
      for (std::size_t k = 0; k < n; ++k)
        worst = std::max(worst,
                         ill->friction(a) - a * ill->underlying[k] - x[k]);
      return worst;  // convex in a
    };
    double lo = std::max(ill->alpha_lo, -1.0), hi = std::min(ill->alpha_hi, 1.0);
    double span = 1.0;
    while ((lo > ill->alpha_lo &&
            worst_shortfall(lo) < worst_shortfall(lo + 1e-9 * span)) ||
           (hi < ill->alpha_hi &&
            worst_shortfall(hi) < worst_shortfall(hi - 1e-9 * span))) {
      span *= 2.0;
      if (span > 1e12) return XReal::minus_inf();
      lo = std::max(ill->alpha_lo, -span);
      hi = std::min(ill->alpha_hi, span);
    }
    auto [amin, val] = minimize_convex_1d(worst_shortfall, lo, hi, 1e-11);
    (void)amin;
    return XReal::finite(val);
  }

  if (const auto* poly = M.as_polytope()) {
    std::size_t J = poly->generators.size();
    LinearProgram lp(J + 1);  // lambda, r
    lp.c[J] = 1.0;
    lp.set_free(J);
    std::vector<double> srow(J + 1, 1.0);
    srow[J] = 0.0;
    lp.add_row(srow, LinearProgram::Sense::LE, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<double> a(J + 1, 0.0);
      for (std::size_t j = 0; j < J; ++j) a[j] = poly->generators[j][k];
      a[J] = 1.0;
      lp.add_row(std::move(a), LinearProgram::Sense::GE, -x[k]);
    }
    SolveResult r = solve_lp(lp);
    if (r.status == SolveResult::Status::Unbounded) return XReal::minus_inf();
    detail::require(r.status == SolveResult::Status::Optimal,
                    "superhedging LP unexpectedly infeasible");
    return XReal::finite(r.value);
  }

  const auto* box = M.as_scaled_box();
  std::size_t d = box->underlyings.size();
  LinearProgram lp(d + 1);  // theta, r
  lp.c[d] = 1.0;
  lp.set_free(d);
  for (std::size_t i = 0; i < d; ++i) lp.set_bounds(i, box->lo[i], box->hi[i]);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> a(d + 1, 0.0);
    for (std::size_t i = 0; i < d; ++i) a[i] = box->underlyings[i][k];
    a[d] = 1.0;
    lp.add_row(std::move(a), LinearProgram::Sense::GE, -x[k]);
  }
  SolveResult r = solve_lp(lp);
  if (r.status == SolveResult::Status::Unbounded) return XReal::minus_inf();
  detail::require(r.status == SolveResult::Status::Optimal,
                  "superhedging LP unexpectedly infeasible");
  return XReal::finite(r.value);
}

XReal penalty_rho0(const MarketModel& M, const Density& q) {
  return support_function(M, q);
}

namespace {

// Concave value+supergradient of -sigma_M at a nonnegative weight vector
// (illiquid body; polyhedral bodies use exact LPs instead).
ConcaveEval neg_support_eval(const MarketModel& M, const std::vector<double>& q) {
  const auto* ill = M.as_illiquid();
  double s = 0.0, wsum = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    s += std::max(q[k], 0.0) * ill->underlying[k];
    wsum += std::max(q[k], 0.0);
  }
  IlliquidSup sup = illiquid_support(*ill, s, wsum);
  detail::require(sup.value.is_finite(),
                  "illiquid support function unbounded on the simplex");
  ConcaveEval ev;
  ev.value = -sup.value.value();
  ev.grad.assign(q.size(), 0.0);
  double fa = ill->friction(sup.alpha);
  for (std::size_t k = 0; k < q.size(); ++k)
    ev.grad[k] = -(sup.alpha * ill->underlying[k] - fa);
  return ev;
}

// Shared polyhedral LP: optimize obj.q - sum t over simplex x epigraph.
// maximize=true gives rho_hat0-type problems, false the sigma minimum.
SolveResult epigraph_lp(const MarketModel& M, const SupportEpigraph& epi,
                        const std::vector<double>& obj, bool maximize) {
  const std::size_t n = M.dim(), aux = epi.num_aux;
  LinearProgram lp(n + aux);
  lp.maximize = maximize;
  for (std::size_t k = 0; k < n; ++k) lp.c[k] = obj.empty() ? 0.0 : obj[k];
  for (std::size_t i = 0; i < aux; ++i) {
    lp.c[n + i] = maximize ? -1.0 : 1.0;
    lp.set_free(n + i);
  }
  std::vector<double> srow(n + aux, 0.0);
  for (std::size_t k = 0; k < n; ++k) srow[k] = 1.0;
  lp.add_row(std::move(srow), LinearProgram::Sense::EQ, 1.0);
  for (const auto& row : epi.rows) lp.add_row(row.a, row.sense, row.rhs);
  return solve_lp(lp);
}

}  // namespace

SimplexMin min_support_over_simplex(const MarketModel& M, double tol) {
  const std::size_t n = M.dim();
  if (auto epi = support_epigraph(M)) {
    SolveResult r = epigraph_lp(M, *epi, {}, false);
    if (r.status != SolveResult::Status::Optimal)
      return SimplexMin{XReal::plus_inf(), {}};
    std::vector<double> q(r.x.begin(), r.x.begin() + long(n));
    return SimplexMin{XReal::finite(r.value), std::move(q)};
  }
  if (n == 2) {
    auto sigma1 = [&](double q1) {
      return support_function(M, std::vector<double>{q1, 1.0 - q1}).value();
    };
    auto [q1, v] = minimize_convex_1d(sigma1, 0.0, 1.0, 1e-12);
    return SimplexMin{XReal::finite(v), {q1, 1.0 - q1}};
  }
  auto res = maximize_concave_simplex(
      [&](const std::vector<double>& q) { return neg_support_eval(M, q); }, n,
      tol);
  detail::require(res.status != ConcaveMaxResult::Status::Infeasible,
                  "simplex region infeasible");
  return SimplexMin{XReal::finite(-res.value), res.argmax};
}

XReal rho_hat0(const MarketModel& M, const Claim& x, double tol) {
  detail::require(x.size() == M.dim(), "claim dimension mismatch");
  const std::size_t n = M.dim();
  if (auto epi = support_epigraph(M)) {
    SolveResult r = epigraph_lp(M, *epi, neg_values(x), true);
    if (r.status != SolveResult::Status::Optimal) return XReal::minus_inf();
    return XReal::finite(r.value);
  }
  if (n == 2) {
    auto neg_h = [&](double q1) {
      double sig =
          support_function(M, std::vector<double>{q1, 1.0 - q1}).value();
      return q1 * x[0] + (1.0 - q1) * x[1] + sig;
    };
    auto [q1, v] = minimize_convex_1d(neg_h, 0.0, 1.0, 1e-12);
    (void)q1;
    return XReal::finite(-v);
  }
  auto res = maximize_concave_simplex(
      [&](const std::vector<double>& q) {
        ConcaveEval ev = neg_support_eval(M, q);
        for (std::size_t k = 0; k < n; ++k) {
          ev.value -= q[k] * x[k];
          ev.grad[k] -= x[k];
        }
        return ev;
      },
      n, tol);
  detail::require(res.status != ConcaveMaxResult::Status::Infeasible,
                  "simplex region infeasible");
  return XReal::finite(res.value);
}

RiskMeasure entropic(const SampleSpace& space, double gamma) {
  detail::require(gamma > 0.0, "entropic risk aversion must be positive");
  SampleSpace sp = space;
  RiskMeasure rho;
  rho.name = "entropic(gamma=" + std::to_string(gamma) + ")";
  rho.evaluate = [sp, gamma](const Claim& x) {
    detail::require(x.size() == sp.size(), "claim dimension mismatch");
    double shift = -kInf;
    for (double v : x.values) shift = std::max(shift, -gamma * v);
    double acc = 0.0;
    for (std::size_t k = 0; k < sp.size(); ++k)
      acc += sp.probs[k] * std::exp(-gamma * x[k] - shift);
    return (shift + std::log(acc)) / gamma;
  };
  return rho;
}

RiskMeasure worst_case(const SampleSpace& space, const Density& q) {
  detail::require(space.size() == q.size(), "density dimension mismatch");
  SampleSpace sp = space;
  Density qq = q;
  RiskMeasure rho;
  rho.name = "worst_case";
  rho.evaluate = [sp, qq](const Claim& x) { return -expectation(sp, qq, x); };
  rho.exact_penalty = [qq](const Density& p) {
    for (std::size_t k = 0; k < p.size(); ++k)
      if (std::abs(p[k] - qq[k]) > 1e-9) return XReal::plus_inf();
    return XReal::finite(0.0);
  };
  return rho;
}

RiskMeasure rho_hat0_measure(const MarketModel& M) {
  auto shared = std::make_shared<const MarketModel>(M);
  RiskMeasure rho;
  rho.name = "rho_hat0";
  rho.support_market = shared;
  rho.evaluate = [shared](const Claim& x) {
    XReal v = rho_hat0(*shared, x);
    detail::require(v.is_finite(), "rho_hat0 undefined: Q is empty");
    return v.value();
  };
  rho.exact_penalty = [shared](const Density& q) {
    return penalty_rho0(*shared, q);
  };
  return rho;
}

RiskMeasure penalty_table(const SampleSpace& space,
                          std::vector<std::pair<Density, double>> table) {
  detail::require(!table.empty(), "penalty table must be nonempty");
  for (const auto& [q, alpha] : table) {
    detail::require(q.size() == space.size(), "density dimension mismatch");
    detail::require(std::isfinite(alpha) && alpha >= 0.0,
                    "table penalties must be finite and nonnegative");
  }
  SampleSpace sp = space;
  auto pts = std::make_shared<std::vector<std::pair<Density, double>>>(
      std::move(table));
  RiskMeasure rho;
  rho.name = "penalty_table";
  rho.evaluate = [sp, pts](const Claim& x) {
    double best = -kInf;
    for (const auto& [q, alpha] : *pts)
      best = std::max(best, expectation(sp, q, neg_values(x)) - alpha);
    return best;
  };
  if (space.size() == 2) {
    // Piecewise-linear interpolation in q_1; +inf outside the table hull.
    std::vector<std::pair<double, double>> knots;
    for (const auto& [q, alpha] : *pts) knots.emplace_back(q[0], alpha);
    std::sort(knots.begin(), knots.end());
    rho.exact_penalty = [knots](const Density& q) {
      double t = q[0];
      if (t < knots.front().first - 1e-12 || t > knots.back().first + 1e-12)
        return XReal::plus_inf();
      for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        auto [t0, a0] = knots[i];
        auto [t1, a1] = knots[i + 1];
        if (t <= t1 + 1e-12) {
          if (t1 - t0 < 1e-14) return XReal::finite(std::min(a0, a1));
          double w = (t - t0) / (t1 - t0);
          return XReal::finite((1.0 - w) * a0 + w * a1);
        }
      }
      return XReal::finite(knots.back().second);
    };
  }
  return rho;
}

MarketMin minimize_over_market(const MarketModel& M,
                               const std::function<double(const Claim&)>& g,
                               double tol) {
  const std::size_t n = M.dim();

  if (const auto* ill = M.as_illiquid()) {
    auto val = [&](double a) {
      Claim m(std::vector<double>(n, 0.0));
      double fa = ill->friction(a);
      for (std::size_t k = 0; k < n; ++k)
        m[k] = a * ill->underlying[k] - fa;
      return clamp_finite(g(m));
    };
    double lo = std::max(ill->alpha_lo, -1.0), hi = std::min(ill->alpha_hi, 1.0);
    double span = 1.0;
    while ((lo > ill->alpha_lo && val(lo) < val(lo + 1e-9 * span)) ||
           (hi < ill->alpha_hi && val(hi) < val(hi - 1e-9 * span))) {
      span *= 2.0;
      if (span > 1e9) return MarketMin{MarketMin::Status::Unbounded, 0.0, {}};
      lo = std::max(ill->alpha_lo, -span);
      hi = std::min(ill->alpha_hi, span);
    }
    auto [amin, v] = minimize_convex_1d(val, lo, hi, 1e-10);
    Claim m(std::vector<double>(n, 0.0));
    double fa = ill->friction(amin);
    for (std::size_t k = 0; k < n; ++k) m[k] = amin * ill->underlying[k] - fa;
    return MarketMin{MarketMin::Status::Ok, v, std::move(m)};
  }

  if (const auto* poly = M.as_polytope()) {
    std::size_t J = poly->generators.size();
    auto assemble = [&](const std::vector<double>& lam) {
      Claim m(std::vector<double>(n, 0.0));
      for (std::size_t j = 0; j < J; ++j)
        for (std::size_t k = 0; k < n; ++k)
          m[k] += lam[j] * poly->generators[j][k];
      return m;
    };
    if (J == 0) {
      Claim zero(std::vector<double>(n, 0.0));
      return MarketMin{MarketMin::Status::Ok, clamp_finite(g(zero)), zero};
    }
    std::vector<double> lam(J, 0.0);
    auto val = [&](const std::vector<double>& l) {
      return clamp_finite(g(assemble(l)));
    };
    double cur = val(lam);
    for (int sweep = 0; sweep < 200; ++sweep) {
      double before = cur;
      for (std::size_t j = 0; j < J; ++j) {
        double others = std::accumulate(lam.begin(), lam.end(), 0.0) - lam[j];
        double cap = 1.0 - others;
        auto line = [&](double t) {
          std::vector<double> l = lam;
          l[j] = t;
          return val(l);
        };
        auto [t, v] = minimize_convex_1d(line, 0.0, std::max(cap, 0.0), 1e-10);
        if (v < cur) { lam[j] = t; cur = v; }
      }
      // Pairwise mass transfers unstick simplex corners.
      for (std::size_t i = 0; i < J; ++i) {
        for (std::size_t j = i + 1; j < J; ++j) {
          auto line = [&](double t) {
            std::vector<double> l = lam;
            l[i] += t;
            l[j] -= t;
            return val(l);
          };
          auto [t, v] = minimize_convex_1d(line, -lam[i], lam[j], 1e-10);
          if (v < cur) { lam[i] += t; lam[j] -= t; cur = v; }
        }
      }
      if (before - cur <= tol * std::max(1.0, std::abs(cur))) break;
    }
    return MarketMin{MarketMin::Status::Ok, cur, assemble(lam)};
  }

  const auto* box = M.as_scaled_box();
  std::size_t d = box->underlyings.size();
  auto assemble = [&](const std::vector<double>& th) {
    Claim m(std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < n; ++k)
        m[k] += th[i] * box->underlyings[i][k];
    return m;
  };
  std::vector<double> theta(d, 0.0);
  auto val = [&](const std::vector<double>& th) {
    return clamp_finite(g(assemble(th)));
  };
  double cur = val(theta);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double before = cur;
    for (std::size_t i = 0; i < d; ++i) {
      double span = 1.0;
      double lo, hi;
      for (;;) {
        lo = std::max(box->lo[i], theta[i] - span);
        hi = std::min(box->hi[i], theta[i] + span);
        auto line = [&](double t) {
          std::vector<double> th = theta;
          th[i] = t;
          return val(th);
        };
        bool lo_active = lo > box->lo[i] && line(lo) < line(lo + 1e-9 * span);
        bool hi_active = hi < box->hi[i] && line(hi) < line(hi - 1e-9 * span);
        if (!lo_active && !hi_active) break;
        span *= 2.0;
        if (span > 1e9)
          return MarketMin{MarketMin::Status::Unbounded, 0.0, {}};
      }
      auto line = [&](double t) {
        std::vector<double> th = theta;
        th[i] = t;
        return val(th);
      };
      auto [t, v] = minimize_convex_1d(line, lo, hi, 1e-10);
      if (v < cur) { theta[i] = t; cur = v; }
    }
    if (before - cur <= tol * std::max(1.0, std::abs(cur))) break;
  }
  return MarketMin{MarketMin::Status::Ok, cur, assemble(theta)};
}

double shortfall_functional(const SampleSpace& space, const MarketModel& M,
                            const YoungFunction& loss, double delta,
                            const Claim& y) {
  detail::require(delta > 0.0, "shortfall level must be positive");
  detail::require(y.size() == space.size(), "claim dimension mismatch");
  auto expected_loss = [&](double r) {
    auto g = [&](const Claim& m) {
      double acc = 0.0;
      for (std::size_t k = 0; k < space.size(); ++k) {
        double a = r + m[k] + y[k];
        double lv = loss(std::min(a, 0.0));
        if (std::isinf(lv)) return kBig;
        acc += space.probs[k] * lv;
      }
      return acc;
    };
    MarketMin mm = minimize_over_market(M, g, 1e-12);
    detail::require(mm.status == MarketMin::Status::Ok,
                    "shortfall inner minimization unbounded");
    return mm.value - delta;
  };
  double hi = 1.0 - *std::min_element(y.values.begin(), y.values.end());
  while (expected_loss(hi) > 0.0) hi = hi * 2.0 + 1.0;
  double step = 1.0, lo = hi - step;
  while (expected_loss(lo) <= 0.0) {
    hi = lo;
    step *= 2.0;
    lo = hi - step;
    detail::require(lo > -1e9, "shortfall price unbounded below");
  }
  return bisect_root([&](double r) { return expected_loss(r); }, lo, hi, 1e-11);
}

double shortfall_price(const SampleSpace& space, const MarketModel& M,
                       const YoungFunction& loss, double delta, const Claim& x) {
  return shortfall_functional(space, M, loss, delta, -x);
}

RiskMeasure shortfall_measure(const SampleSpace& space, const MarketModel& M,
                              const YoungFunction& loss, double delta) {
  auto sp = std::make_shared<const SampleSpace>(space);
  auto mkt = std::make_shared<const MarketModel>(M);
  double at_zero = shortfall_functional(
      space, M, loss, delta, constant_claim(space.size(), 0.0));
  RiskMeasure rho;
  rho.name = "shortfall(delta=" + std::to_string(delta) + ")";
  rho.evaluate = [sp, mkt, loss, delta, at_zero](const Claim& y) {
    return shortfall_functional(*sp, *mkt, loss, delta, y) - at_zero;
  };
  return rho;
}

AcceptanceSet AcceptanceSet::nonnegative_orthant(std::size_t n) {
  return AcceptanceSet{[n](const Claim& y) {
    detail::require(y.size() == n, "claim dimension mismatch");
    double worst = -kInf;
    for (double v : y.values) worst = std::max(worst, -v);
    return worst;
  }};
}

AcceptanceSet AcceptanceSet::sublevel(const RiskMeasure& rho) {
  auto eval = rho.evaluate;
  return AcceptanceSet{[eval](const Claim& y) { return eval(y); }};
}

XReal acceptance_set_measure(const AcceptanceSet& A, const MarketModel& M,
                             const Claim& x) {
  auto best_violation = [&](double r) {
    auto g = [&](const Claim& m) {
      return clamp_finite(A.violation(shift(m + x, r)));
    };
    MarketMin mm = minimize_over_market(M, g, 1e-12);
    detail::require(mm.status == MarketMin::Status::Ok,
                    "acceptance inner search unbounded");
    return mm.value;
  };
  double hi = 1.0;
  while (best_violation(hi) > 0.0) {
    hi = hi * 2.0 + 1.0;
    if (hi > 1e6) return XReal::plus_inf();
  }
  double step = 1.0, lo = hi - step;
  while (best_violation(lo) <= 0.0) {
    hi = lo;
    step *= 2.0;
    lo = hi - step;
    if (lo < -1e6) return XReal::minus_inf();
  }
  return XReal::finite(
      bisect_root([&](double r) { return best_violation(r); }, lo, hi, 1e-11));
}

IndifferencePrice indifference_price(const RiskMeasure& eta,
                                     const MarketModel& M, const Claim& x) {
  IndifferencePrice out;
  auto inner = [&](const Claim& offset) {
    return minimize_over_market(
        M, [&](const Claim& m) { return eta.evaluate(m + offset); }, 1e-12);
  };
  MarketMin at_zero = inner(constant_claim(M.dim(), 0.0));
  MarketMin with_x = inner(x);
  if (at_zero.status != MarketMin::Status::Ok ||
      with_x.status != MarketMin::Status::Ok) {
    out.status = IndifferencePrice::Status::NotProper;
    return out;
  }
  out.inner_inf_at_zero = at_zero.value;
  out.inner_inf_with = with_x.value;
  out.price = with_x.value - at_zero.value;
  return out;
}

RiskMeasure indifference_measure(const RiskMeasure& eta, const MarketModel& M) {
  auto e = std::make_shared<const RiskMeasure>(eta);
  auto mkt = std::make_shared<const MarketModel>(M);
  IndifferencePrice probe =
      indifference_price(eta, M, constant_claim(M.dim(), 0.0));
  detail::require(probe.status == IndifferencePrice::Status::Ok,
                  "indifference price not proper on this market");
  double at_zero = probe.inner_inf_at_zero;
  RiskMeasure rho;
  rho.name = "indifference(" + eta.name + ")";
  rho.evaluate = [e, mkt, at_zero](const Claim& x) {
    MarketMin mm = minimize_over_market(
        *mkt, [&](const Claim& m) { return e->evaluate(m + x); }, 1e-12);
    detail::require(mm.status == MarketMin::Status::Ok,
                    "indifference price not proper");
    return mm.value - at_zero;
  };
  return rho;
}

std::optional<RiskMeasure> restrict_conical(const RiskMeasure& rho,
                                            const MarketModel& M) {
  detail::require(rho.has_exact_penalty(),
                  "conical restriction needs an exact penalty");
  const std::size_t n = M.dim();
  Polyhedron region = Polyhedron::simplex(n);
  for (const auto& row : support_zero_set_rows(M)) region.rows.push_back(row);

  LinearProgram feas(n);
  for (const auto& row : region.rows) feas.add_row(row.a, row.sense, row.rhs);
  for (std::size_t j = 0; j < n; ++j) feas.set_bounds(j, 0.0, 1.0);
  if (solve_lp(feas).status != SolveResult::Status::Optimal)
    return std::nullopt;  // Q_0 empty

  auto base = std::make_shared<const RiskMeasure>(rho);
  auto reg = std::make_shared<const Polyhedron>(std::move(region));
  auto penalty_at = [base](const std::vector<double>& q) {
    std::vector<double> clipped = q;
    double sum = 0.0;
    for (double& v : clipped) { v = std::max(v, 0.0); sum += v; }
    for (double& v : clipped) v /= sum;
    XReal p = base->exact_penalty(Density(clipped));
    detail::require(p.is_finite(),
                    "penalty must be finite on the support zero set");
    return p.value();
  };

  RiskMeasure out;
  out.name = rho.name + "_conical";
  out.evaluate = [base, reg, penalty_at](const Claim& x) {
    auto h = with_numeric_gradient([&](const std::vector<double>& q) {
      double acc = -penalty_at(q);
      for (std::size_t k = 0; k < q.size(); ++k) acc -= q[k] * x[k];
      return acc;
    });
    auto res = maximize_concave(h, *reg, 1e-10, 3000);
    detail::require(res.status == ConcaveMaxResult::Status::Optimal,
                    "conical restriction did not converge");
    return res.value;
  };
  out.exact_penalty = [base, reg](const Density& q) {
    for (const auto& row : reg->rows) {
      double v = 0.0;
      for (std::size_t k = 0; k < q.size(); ++k) v += row.a[k] * q[k];
      bool ok = row.sense == LinearProgram::Sense::LE ? v <= row.rhs + 1e-9
                : row.sense == LinearProgram::Sense::GE ? v >= row.rhs - 1e-9
                                                        : std::abs(v - row.rhs) <= 1e-9;
      if (!ok) return XReal::plus_inf();
    }
    return base->exact_penalty(q);
  };
  return out;
}

DiagnosticReport axioms_check(const RiskMeasure& rho, const SampleSpace& space,
                              const AxiomsOptions& opt) {
  detail::require(opt.sample_count >= 1, "sample count must be positive");
  const std::size_t n = space.size();
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> sym(-opt.radius, opt.radius);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.1, 4.0);

  auto random_claim = [&] {
    std::vector<double> v(n);
    for (double& a : v) a = sym(rng);
    return Claim(std::move(v));
  };

  DiagnosticReport rep;
  rep.check = "axioms(" + rho.name + ")";
  double worst_mono = -kInf, worst_cash = 0.0, worst_conv = -kInf;
  double worst_homog = 0.0;
  Claim homog_witness;
  double homog_scale = 1.0;

  double at_zero = rho.evaluate(constant_claim(n, 0.0));

  for (int s = 0; s < opt.sample_count; ++s) {
    Claim x = random_claim(), y = random_claim();
    double rx = rho.evaluate(x), ry = rho.evaluate(y);

    std::vector<double> u(n);
    for (double& a : u) a = unit(rng) * opt.radius;
    worst_mono = std::max(worst_mono, rho.evaluate(x + Claim(u)) - rx);

    double r = sym(rng);
    worst_cash = std::max(worst_cash,
                          std::abs(rho.evaluate(shift(x, r)) - (rx - r)));

    double lam = unit(rng);
    Claim mix = lam * x + (1.0 - lam) * y;
    worst_conv = std::max(worst_conv,
                          rho.evaluate(mix) - lam * rx - (1.0 - lam) * ry);

    double c = scale(rng);
    double hv = std::abs(rho.evaluate(c * x) - c * rx);
    if (hv > worst_homog) {
      worst_homog = hv;
      homog_witness = x;
      homog_scale = c;
    }
  }

  rep.margins["monotonicity"] = worst_mono;
  rep.margins["cash_invariance"] = worst_cash;
  rep.margins["convexity"] = worst_conv;
  rep.margins["normalization"] = std::abs(at_zero);
  rep.margins["homogeneity"] = worst_homog;
  bool convex_ok = worst_mono <= opt.tol && worst_cash <= opt.tol &&
                   worst_conv <= opt.tol && std::abs(at_zero) <= opt.tol;
  rep.verdict = convex_ok ? Verdict::Holds : Verdict::Fails;
  if (worst_homog > opt.tol) {
    rep.witnesses["homogeneity_claim"] = homog_witness.values;
    rep.witnesses["homogeneity_scale"] = {homog_scale};
    rep.notes.push_back("positive homogeneity fails; coherent only if it holds");
  } else {
    rep.notes.push_back("positive homogeneity holds on all samples");
  }
  return rep;
}

PenaltyEstimate penalty_of(const RiskMeasure& rho, const SampleSpace& space,
                           const Density& q, const PenaltyProbeOptions& opt,
                           const MarketModel* market) {
  detail::require(opt.probe_count >= 1, "probe count must be positive");
  if (rho.has_exact_penalty())
    return PenaltyEstimate{rho.exact_penalty(q), true};

  const std::size_t n = space.size();
  double best = -kInf;
  auto consider = [&](const Claim& x) {
    double v = expectation(space, q, neg_values(x)) - rho.evaluate(x);
    best = std::max(best, v);
  };

  consider(constant_claim(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    consider(unit_claim(n, k, opt.probe_radius));
    consider(unit_claim(n, k, -opt.probe_radius));
  }
  consider(constant_claim(n, opt.probe_radius));
  consider(constant_claim(n, -opt.probe_radius));
  if (market != nullptr) {
    if (const auto* poly = market->as_polytope()) {
      for (const auto& g : poly->generators) {
        consider(g);
        consider(-g);
      }
    }
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> sym(-opt.probe_radius,
                                             opt.probe_radius);
  for (int s = 0; s < opt.probe_count; ++s) {
    std::vector<double> v(n);
    for (double& a : v) a = sym(rng);
    consider(Claim(std::move(v)));
  }
  return PenaltyEstimate{XReal::finite(best), false};
}

}  // namespace gdv
