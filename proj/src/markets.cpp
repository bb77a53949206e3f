#include "gdv/markets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gdv {

double XReal::value() const {
  detail::require(is_finite(), "infinite status used as a number");
  return v;
}

double Friction::operator()(double a) const {
  switch (kind) {
    case Kind::Quadratic:
      return scale * a * a;
    case Kind::Exp:
      return (std::cosh(scale * a) - 1.0) / scale;
  }
  return 0.0;
}

MarketModel MarketModel::polytope(SampleSpace space,
                                  std::vector<Claim> generators) {
  for (const auto& g : generators)
    detail::require(g.size() == space.size(), "generator dimension mismatch");
  return MarketModel{std::move(space), PolytopeBody{std::move(generators)}};
}

MarketModel MarketModel::illiquid(SampleSpace space, Claim underlying,
                                  Friction friction, double alpha_lo,
                                  double alpha_hi) {
  detail::require(underlying.size() == space.size(),
                  "underlying dimension mismatch");
  detail::require(alpha_lo <= 0.0 && alpha_hi >= 0.0,
                  "position bounds must contain 0");
  return MarketModel{std::move(space),
                     IlliquidBody{std::move(underlying), friction, alpha_lo,
                                  alpha_hi}};
}

MarketModel MarketModel::scaled_box(SampleSpace space,
                                    std::vector<Claim> underlyings,
                                    std::vector<double> lo,
                                    std::vector<double> hi) {
  detail::require(underlyings.size() == lo.size() && lo.size() == hi.size(),
                  "scaled-box parameter count mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    detail::require(lo[i] <= 0.0 && hi[i] >= 0.0, "box must contain 0");
    detail::require(underlyings[i].size() == space.size(),
                    "underlying dimension mismatch");
  }
  return MarketModel{std::move(space),
                     ScaledBoxBody{std::move(underlyings), std::move(lo),
                                   std::move(hi)}};
}

bool MarketModel::is_polyhedral() const {
  return !std::holds_alternative<IlliquidBody>(body);
}

const PolytopeBody* MarketModel::as_polytope() const {
  return std::get_if<PolytopeBody>(&body);
}
const IlliquidBody* MarketModel::as_illiquid() const {
  return std::get_if<IlliquidBody>(&body);
}
const ScaledBoxBody* MarketModel::as_scaled_box() const {
  return std::get_if<ScaledBoxBody>(&body);
}

namespace {

double dot(const std::vector<double>& w, const Claim& x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * x[k];
  return acc;
}

}  // namespace

// sup over alpha in [lo, hi] of (alpha*s - f(alpha)*wsum); +inf status when
// no finite maximizer exists under an unbounded position range.
IlliquidSup illiquid_support(const IlliquidBody& b, double s, double wsum) {
  auto g = [&](double a) { return b.friction(a) * wsum - a * s; };  // convex
  double lo = b.alpha_lo, hi = b.alpha_hi;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    // Expand until the minimum of g leaves the artificial boundary.
    double span = 1.0;
    for (;;) {
      double elo = std::max(lo, -span), ehi = std::min(hi, span);
      bool lo_active = elo > lo && g(elo) < g(elo + 1e-9 * span);
      bool hi_active = ehi < hi && g(ehi) < g(ehi - 1e-9 * span);
      if (!lo_active && !hi_active) {
        lo = elo;
        hi = ehi;
        break;
      }
      span *= 2.0;
      if (span > 1e15) return IlliquidSup{XReal::plus_inf(), 0.0};
    }
  }
  auto [amin, gmin] = minimize_convex_1d(g, lo, hi, 1e-10 * std::max(1.0, hi - lo));
  return IlliquidSup{XReal::finite(-gmin), amin};
}

XReal support_function(const MarketModel& M, const std::vector<double>& w) {
  detail::require(w.size() == M.dim(), "weight dimension mismatch");
  // Slightly negative entries (solver round-off, finite-difference probes)
  // are evaluated through the parametrized body alone.
  for (double wk : w)
    detail::require(wk >= -1e-6, "support function needs nonnegative weights");

  if (const auto* poly = M.as_polytope()) {
    double best = 0.0;  // zero generator
    for (const auto& g : poly->generators) best = std::max(best, dot(w, g));
    return XReal::finite(best);
  }
  if (const auto* ill = M.as_illiquid()) {
    double s = 0.0, wsum = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      s += w[k] * ill->underlying[k];
      wsum += w[k];
    }
    return illiquid_support(*ill, s, wsum).value;
  }
  const auto* box = M.as_scaled_box();
  double total = 0.0;
  for (std::size_t i = 0; i < box->underlyings.size(); ++i) {
    double u = dot(w, box->underlyings[i]);
    double a = box->lo[i], b = box->hi[i];
    if (u > 1e-12 && !std::isfinite(b)) return XReal::plus_inf();
    if (u < -1e-12 && !std::isfinite(a)) return XReal::plus_inf();
    double contrib = 0.0;
    if (std::isfinite(a)) contrib = std::max(contrib, a * u);
    if (std::isfinite(b)) contrib = std::max(contrib, b * u);
    total += contrib;
  }
  return XReal::finite(total);
}

XReal support_function(const MarketModel& M, const Density& q) {
  return support_function(M, q.q);
}

bool contains(const MarketModel& M, const Claim& x, double tol) {
  detail::require(tol > 0.0, "membership tolerance must be positive");
  detail::require(x.size() == M.dim(), "claim dimension mismatch");
  const std::size_t n = M.dim();

  if (const auto* ill = M.as_illiquid()) {
    // max over alpha of min_k (alpha S_k - f(alpha) - x_k), concave in alpha.
    auto neg_slack = [&](double a) {
      double worst = kInf;
      for (std::size_t k = 0; k < n; ++k)
        worst = std::min(worst, a * ill->underlying[k] - ill->friction(a) - x[k]);
      return -worst;
    };
    double lo = std::max(ill->alpha_lo, -1.0), hi = std::min(ill->alpha_hi, 1.0);
    double span = 1.0;
    while ((lo > ill->alpha_lo && neg_slack(lo) < neg_slack(lo + 1e-9)) ||
           (hi < ill->alpha_hi && neg_slack(hi) < neg_slack(hi - 1e-9))) {
      span *= 2.0;
      lo = std::max(ill->alpha_lo, -span);
      hi = std::min(ill->alpha_hi, span);
      if (span > 1e12) break;
    }
    auto [amin, worst] = minimize_convex_1d(neg_slack, lo, hi, 1e-11);
    (void)amin;
    return -worst >= -tol;
  }

  // Polyhedral: maximize the uniform slack s with m - s*1 >= x.
  if (const auto* poly = M.as_polytope()) {
    std::size_t J = poly->generators.size();
    LinearProgram lp(J + 1);  // lambda_1..J, s
    lp.maximize = true;
    lp.c[J] = 1.0;
    lp.set_free(J);
    std::vector<double> simplex_row(J + 1, 1.0);
    simplex_row[J] = 0.0;
    lp.add_row(simplex_row, LinearProgram::Sense::LE, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<double> a(J + 1, 0.0);
      for (std::size_t j = 0; j < J; ++j) a[j] = poly->generators[j][k];
      a[J] = -1.0;
      lp.add_row(std::move(a), LinearProgram::Sense::GE, x[k]);
    }
    SolveResult r = solve_lp(lp);
    if (r.status == SolveResult::Status::Unbounded) return true;
    return r.status == SolveResult::Status::Optimal && r.value >= -tol;
  }

  const auto* box = M.as_scaled_box();
  std::size_t d = box->underlyings.size();
  LinearProgram lp(d + 1);  // theta_1..d, s
  lp.maximize = true;
  lp.c[d] = 1.0;
  lp.set_free(d);
  for (std::size_t i = 0; i < d; ++i) lp.set_bounds(i, box->lo[i], box->hi[i]);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> a(d + 1, 0.0);
    for (std::size_t i = 0; i < d; ++i) a[i] = box->underlyings[i][k];
    a[d] = -1.0;
    lp.add_row(std::move(a), LinearProgram::Sense::GE, x[k]);
  }
  SolveResult r = solve_lp(lp);
  if (r.status == SolveResult::Status::Unbounded) return true;
  return r.status == SolveResult::Status::Optimal && r.value >= -tol;
}

std::vector<LinearProgram::Row> support_zero_set_rows(const MarketModel& M) {
  using Sense = LinearProgram::Sense;
  std::vector<LinearProgram::Row> rows;
  const std::size_t n = M.dim();

  if (const auto* poly = M.as_polytope()) {
    for (const auto& g : poly->generators)
      rows.push_back({g.values, Sense::LE, 0.0});
    return rows;
  }
  if (const auto* ill = M.as_illiquid()) {
    // Built-in frictions are smooth with zero slope at 0, so sigma vanishes
    // exactly where the admissible position directions see no positive slope.
    if (ill->alpha_hi > 0.0)
      rows.push_back({ill->underlying.values, Sense::LE, 0.0});
    if (ill->alpha_lo < 0.0)
      rows.push_back({ill->underlying.values, Sense::GE, 0.0});
    return rows;
  }
  const auto* box = M.as_scaled_box();
  for (std::size_t i = 0; i < box->underlyings.size(); ++i) {
    if (box->hi[i] > 0.0)
      rows.push_back({box->underlyings[i].values, Sense::LE, 0.0});
    if (box->lo[i] < 0.0)
      rows.push_back({box->underlyings[i].values, Sense::GE, 0.0});
  }
  (void)n;
  return rows;
}

std::optional<SupportEpigraph> support_epigraph(const MarketModel& M) {
  using Sense = LinearProgram::Sense;
  const std::size_t n = M.dim();
  SupportEpigraph epi;

  if (const auto* poly = M.as_polytope()) {
    epi.num_aux = 1;
    for (const auto& g : poly->generators) {
      std::vector<double> a = g.values;
      a.push_back(-1.0);
      epi.rows.push_back({std::move(a), Sense::LE, 0.0});  // w.m_j <= t
    }
    std::vector<double> zero(n, 0.0);
    zero.push_back(-1.0);
    epi.rows.push_back({std::move(zero), Sense::LE, 0.0});  // 0 <= t
    return epi;
  }
  if (M.as_illiquid()) return std::nullopt;

  const auto* box = M.as_scaled_box();
  std::size_t d = box->underlyings.size();
  epi.num_aux = d;
  for (std::size_t i = 0; i < d; ++i) {
    auto bound_row = [&](double theta) {
      std::vector<double> a(n + d, 0.0);
      for (std::size_t k = 0; k < n; ++k) a[k] = theta * box->underlyings[i][k];
      a[n + i] = -1.0;
      epi.rows.push_back({std::move(a), Sense::LE, 0.0});  // theta*(w.S) <= t_i
    };
    auto sign_row = [&](Sense s) {
      std::vector<double> a(n + d, 0.0);
      for (std::size_t k = 0; k < n; ++k) a[k] = box->underlyings[i][k];
      epi.rows.push_back({std::move(a), s, 0.0});
    };
    if (std::isfinite(box->lo[i])) bound_row(box->lo[i]); else sign_row(Sense::GE);
    if (std::isfinite(box->hi[i])) bound_row(box->hi[i]); else sign_row(Sense::LE);
  }
  return epi;
}

ConicalMarket conical_hull(const MarketModel& M) { return ConicalMarket{M}; }

XReal support_function(const ConicalMarket& C, const Density& q) {
  for (const auto& row : support_zero_set_rows(C.base)) {
    double v = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) v += row.a[k] * q[k];
    bool ok = row.sense == LinearProgram::Sense::LE ? v <= row.rhs + 1e-9
                                                    : v >= row.rhs - 1e-9;
    if (!ok) return XReal::plus_inf();
  }
  return XReal::finite(0.0);
}

bool ExtendedMarket::contains(const Claim& x) const { return rho(-x) <= tol; }

}  // namespace gdv
