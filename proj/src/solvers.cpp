#include "gdv/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gdv/core.hpp"

namespace gdv {

LinearProgram::LinearProgram(std::size_t nvars)
    : c(nvars, 0.0), lower(nvars, 0.0), upper(nvars, kInf) {}

void LinearProgram::add_row(std::vector<double> a, Sense sense, double rhs) {
  detail::require(a.size() == num_vars(), "LP row dimension mismatch");
  rows.push_back(Row{std::move(a), sense, rhs});
}

void LinearProgram::set_bounds(std::size_t j, double lo, double hi) {
  lower.at(j) = lo;
  upper.at(j) = hi;
}

void LinearProgram::set_free(std::size_t j) { set_bounds(j, -kInf, kInf); }

namespace {

constexpr double kEps = 1e-9;

struct Tableau {
  // T is m x (ncols+1); last column is the rhs.
  std::vector<std::vector<double>> T;
  std::vector<int> basis;          // basic column per row
  std::size_t ncols = 0;

  double rhs(std::size_t i) const { return T[i][ncols]; }

  void pivot(std::size_t pr, std::size_t pc) {
    double piv = T[pr][pc];
    for (double& v : T[pr]) v /= piv;
    for (std::size_t i = 0; i < T.size(); ++i) {
      if (i == pr) continue;
      double f = T[i][pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= ncols; ++j) T[i][j] -= f * T[pr][j];
    }
    basis[pr] = int(pc);
  }
};

enum class LoopStatus { Optimal, Unbounded };

// Minimizes cost'u with Bland's rule. banned columns never enter.
LoopStatus simplex_loop(Tableau& tb, const std::vector<double>& cost,
                        const std::vector<bool>& banned) {
  const std::size_t m = tb.T.size();
  for (;;) {
    // Reduced costs on demand: rc_j = c_j - c_B . T[:,j].
    int enter = -1;
    for (std::size_t j = 0; j < tb.ncols; ++j) {
      if (banned[j]) continue;
      bool is_basic = false;
      for (std::size_t i = 0; i < m; ++i)
        if (tb.basis[i] == int(j)) { is_basic = true; break; }
      if (is_basic) continue;
      double rc = cost[j];
      for (std::size_t i = 0; i < m; ++i)
        rc -= cost[tb.basis[i]] * tb.T[i][j];
      if (rc < -kEps) { enter = int(j); break; }  // Bland: smallest index
    }
    if (enter < 0) return LoopStatus::Optimal;

    int leave = -1;
    double best_ratio = kInf;
    for (std::size_t i = 0; i < m; ++i) {
      double a = tb.T[i][std::size_t(enter)];
      if (a > kEps) {
        double ratio = tb.rhs(i) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && leave >= 0 &&
             tb.basis[i] < tb.basis[std::size_t(leave)])) {
          best_ratio = ratio;
          leave = int(i);
        }
      }
    }
    if (leave < 0) return LoopStatus::Unbounded;
    tb.pivot(std::size_t(leave), std::size_t(enter));
  }
}

}  // namespace

SolveResult solve_lp(const LinearProgram& lp) {
  using Sense = LinearProgram::Sense;
  const std::size_t n = lp.num_vars();
  for (const auto& row : lp.rows)
    detail::require(detail::all_finite(row.a) && std::isfinite(row.rhs),
                    "LP coefficients must be finite");
  detail::require(detail::all_finite(lp.c), "LP objective must be finite");

  // Variable transform to u >= 0: x_j = shift_j + sgn_j*u_{col1} - u_{col2}.
  std::vector<double> shiftv(n, 0.0), sgn(n, 1.0);
  std::vector<int> col1(n, -1), col2(n, -1);
  std::size_t ncols = 0;
  struct BoundRow { std::size_t col; double cap; };
  std::vector<BoundRow> bound_rows;
  for (std::size_t j = 0; j < n; ++j) {
    double lo = lp.lower[j], hi = lp.upper[j];
    detail::require(!(lo > hi), "LP variable bounds inverted");
    if (std::isfinite(lo)) {
      shiftv[j] = lo;
      col1[j] = int(ncols++);
      if (std::isfinite(hi)) bound_rows.push_back({std::size_t(col1[j]), hi - lo});
    } else if (std::isfinite(hi)) {
      shiftv[j] = hi;
      sgn[j] = -1.0;
      col1[j] = int(ncols++);
    } else {
      col1[j] = int(ncols++);
      col2[j] = int(ncols++);
    }
  }

  // Internal rows: transformed input rows then upper-bound rows.
  const std::size_t m_in = lp.rows.size();
  const std::size_t m = m_in + bound_rows.size();
  std::vector<std::vector<double>> A(m, std::vector<double>(ncols, 0.0));
  std::vector<double> b(m, 0.0);
  std::vector<Sense> sense(m, Sense::LE);
  for (std::size_t i = 0; i < m_in; ++i) {
    const auto& row = lp.rows[i];
    double rhs = row.rhs;
    for (std::size_t j = 0; j < n; ++j) {
      double a = row.a[j];
      if (a == 0.0) continue;
      rhs -= a * shiftv[j];
      A[i][std::size_t(col1[j])] += a * sgn[j];
      if (col2[j] >= 0) A[i][std::size_t(col2[j])] -= a;
    }
    b[i] = rhs;
    sense[i] = row.sense;
  }
  for (std::size_t r = 0; r < bound_rows.size(); ++r) {
    A[m_in + r][bound_rows[r].col] = 1.0;
    b[m_in + r] = bound_rows[r].cap;
    sense[m_in + r] = Sense::LE;
  }

  // Internal objective (always minimized).
  double obj_sign = lp.maximize ? -1.0 : 1.0;
  std::vector<double> c_int(ncols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double cj = obj_sign * lp.c[j];
    c_int[std::size_t(col1[j])] += cj * sgn[j];
    if (col2[j] >= 0) c_int[std::size_t(col2[j])] -= cj;
  }

  // Equality form with slacks, rhs >= 0, artificials where needed.
  std::vector<double> negated(m, 1.0);
  std::vector<int> slack_col(m, -1);
  std::size_t total = ncols;
  for (std::size_t i = 0; i < m; ++i)
    if (sense[i] != Sense::EQ) slack_col[i] = int(total++);
  std::vector<int> art_col(m, -1);
  std::vector<int> init_col(m, -1);
  // First pass decides which rows need artificials.
  std::vector<double> slack_coef(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (slack_col[i] >= 0)
      slack_coef[i] = (sense[i] == Sense::LE) ? 1.0 : -1.0;
    if (b[i] < 0.0) {
      negated[i] = -1.0;
      b[i] = -b[i];
      for (double& v : A[i]) v = -v;
      slack_coef[i] = -slack_coef[i];
    }
    if (slack_coef[i] > 0.0)
      init_col[i] = slack_col[i];
    else
      art_col[i] = 1;  // marker, index assigned below
  }
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (art_col[i] == 1) art_col[i] = int(total + n_art++);
  std::size_t nart_base = total;
  total += n_art;

  Tableau tb;
  tb.ncols = total;
  tb.T.assign(m, std::vector<double>(total + 1, 0.0));
  tb.basis.assign(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < ncols; ++j) tb.T[i][j] = A[i][j];
    if (slack_col[i] >= 0) tb.T[i][std::size_t(slack_col[i])] = slack_coef[i];
    if (art_col[i] >= 0) {
      tb.T[i][std::size_t(art_col[i])] = 1.0;
      init_col[i] = art_col[i];
      tb.basis[i] = art_col[i];
    } else {
      tb.basis[i] = init_col[i];
    }
    tb.T[i][total] = b[i];
  }

  SolveResult res;
  std::vector<bool> banned(total, false);

  if (n_art > 0) {
    std::vector<double> phase1(total + 1, 0.0);
    for (std::size_t j = nart_base; j < total; ++j) phase1[j] = 1.0;
    simplex_loop(tb, phase1, banned);
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (tb.basis[i] >= int(nart_base)) infeas += tb.rhs(i);
    if (infeas > 1e-7) {
      res.status = SolveResult::Status::Infeasible;
      return res;
    }
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (tb.basis[i] < int(nart_base)) continue;
      for (std::size_t j = 0; j < nart_base; ++j) {
        if (std::abs(tb.T[i][j]) > kEps) {
          tb.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = nart_base; j < total; ++j) banned[j] = true;
  }

  std::vector<double> phase2(total + 1, 0.0);
  for (std::size_t j = 0; j < ncols; ++j) phase2[j] = c_int[j];
  if (simplex_loop(tb, phase2, banned) == LoopStatus::Unbounded) {
    res.status = SolveResult::Status::Unbounded;
    return res;
  }

  // Recover primal point.
  std::vector<double> u(total, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    u[std::size_t(tb.basis[i])] = tb.rhs(i);
  res.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    res.x[j] = shiftv[j] + sgn[j] * u[std::size_t(col1[j])];
    if (col2[j] >= 0) res.x[j] -= u[std::size_t(col2[j])];
  }
  res.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) res.value += lp.c[j] * res.x[j];

  // Duals: y_int = c_B B^{-1}, read off the initial identity columns.
  std::vector<double> y_int(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double yi = 0.0;
    for (std::size_t r = 0; r < m; ++r)
      yi += phase2[std::size_t(tb.basis[r])] * tb.T[r][std::size_t(init_col[i])];
    y_int[i] = yi;
  }
  double dual_int = 0.0;
  for (std::size_t i = 0; i < m; ++i) dual_int += y_int[i] * b[i];
  double const_obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) const_obj += obj_sign * lp.c[j] * shiftv[j];
  res.dual_value = obj_sign * (dual_int + const_obj);
  res.y.assign(m_in, 0.0);
  for (std::size_t i = 0; i < m_in; ++i)
    res.y[i] = obj_sign * y_int[i] * negated[i];

  res.status = SolveResult::Status::Optimal;
  return res;
}

std::pair<double, double> minimize_convex_1d(
    const std::function<double(double)>& f, double lo, double hi, double tol) {
  detail::require(tol > 0.0 && lo <= hi, "bad golden-section bracket");
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  detail::require(std::isfinite(f1) && std::isfinite(f2),
                  "non-finite value in 1-d minimization");
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
    detail::require(std::isfinite(f1) && std::isfinite(f2),
                    "non-finite value in 1-d minimization");
  }
  double xm = 0.5 * (a + b);
  double fm = f(xm);
  if (f1 < fm) { xm = x1; fm = f1; }
  if (f2 < fm) { xm = x2; fm = f2; }
  // Endpoint minima of monotone sections.
  double fa = f(lo), fb = f(hi);
  if (fa < fm) { xm = lo; fm = fa; }
  if (fb < fm) { xm = hi; fm = fb; }
  return {xm, fm};
}

double bisect_root(const std::function<double(double)>& g, double lo, double hi,
                   double tol) {
  detail::require(tol > 0.0 && lo < hi, "bad bisection bracket");
  double glo = g(lo), ghi = g(hi);
  detail::require(std::isfinite(glo) && std::isfinite(ghi),
                  "non-finite value in bisection");
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  detail::require(glo * ghi < 0.0, "no sign change on bisection bracket");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if (gm == 0.0) return mid;
    if (gm * glo < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  return 0.5 * (lo + hi);
}

Polyhedron Polyhedron::simplex(std::size_t n) {
  Polyhedron p;
  p.dim = n;
  p.lower.assign(n, 0.0);
  p.upper.assign(n, 1.0);
  p.rows.push_back(LinearProgram::Row{std::vector<double>(n, 1.0),
                                      LinearProgram::Sense::EQ, 1.0});
  return p;
}

Polyhedron Polyhedron::box(std::vector<double> lo, std::vector<double> hi) {
  Polyhedron p;
  p.dim = lo.size();
  p.lower = std::move(lo);
  p.upper = std::move(hi);
  return p;
}

void Polyhedron::add_row(std::vector<double> a, LinearProgram::Sense sense,
                         double rhs) {
  detail::require(a.size() == dim, "polyhedron row dimension mismatch");
  rows.push_back(LinearProgram::Row{std::move(a), sense, rhs});
}

ConcaveMaxResult maximize_concave(const ConcaveFn& h, const Polyhedron& region,
                                  double tol, int max_iter) {
  const std::size_t n = region.dim;
  ConcaveMaxResult res;

  // Feasibility / starting point: analytic-center-ish via max of min slack
  // is overkill here; a vertex from a zero-objective solve suffices.
  LinearProgram feas(n);
  for (const auto& row : region.rows) feas.add_row(row.a, row.sense, row.rhs);
  for (std::size_t j = 0; j < n; ++j)
    feas.set_bounds(j, region.lower[j], region.upper[j]);
  SolveResult start = solve_lp(feas);
  if (start.status != SolveResult::Status::Optimal) {
    res.status = ConcaveMaxResult::Status::Infeasible;
    return res;
  }

  struct Cut { double offset; std::vector<double> grad; };
  std::vector<Cut> cuts;
  std::vector<double> best_x = start.x;
  double best_v = -kInf;

  std::vector<double> probe = start.x;
  for (int it = 0; it < max_iter; ++it) {
    ConcaveEval ev = h(probe);
    detail::require(ev.grad.size() == n, "supergradient dimension mismatch");
    if (std::isfinite(ev.value) && ev.value > best_v) {
      best_v = ev.value;
      best_x = probe;
    }
    double offset = ev.value;
    for (std::size_t j = 0; j < n; ++j) offset -= ev.grad[j] * probe[j];
    cuts.push_back(Cut{offset, ev.grad});

    // max t  s.t.  t <= offset_i + grad_i . q, q in region.
    LinearProgram master(n + 1);
    master.maximize = true;
    master.c[n] = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      master.set_bounds(j, region.lower[j], region.upper[j]);
    master.set_free(n);
    for (const auto& row : region.rows) {
      std::vector<double> a = row.a;
      a.push_back(0.0);
      master.add_row(std::move(a), row.sense, row.rhs);
    }
    for (const auto& cut : cuts) {
      std::vector<double> a(n + 1, 0.0);
      for (std::size_t j = 0; j < n; ++j) a[j] = -cut.grad[j];
      a[n] = 1.0;
      master.add_row(std::move(a), LinearProgram::Sense::LE, cut.offset);
    }
    SolveResult sol = solve_lp(master);
    if (sol.status != SolveResult::Status::Optimal) {
      // Region is bounded, so this can only be numerical breakdown.
      res.status = ConcaveMaxResult::Status::IterationLimit;
      break;
    }
    res.upper_bound = sol.value;
    if (sol.value - best_v <= tol) {
      res.status = ConcaveMaxResult::Status::Optimal;
      probe.assign(sol.x.begin(), sol.x.begin() + long(n));
      ConcaveEval last = h(probe);
      if (std::isfinite(last.value) && last.value > best_v) {
        best_v = last.value;
        best_x = probe;
      }
      break;
    }
    probe.assign(sol.x.begin(), sol.x.begin() + long(n));
    res.status = ConcaveMaxResult::Status::IterationLimit;
  }
  res.value = best_v;
  res.argmax = best_x;
  if (res.status == ConcaveMaxResult::Status::IterationLimit &&
      res.upper_bound - best_v <= std::max(tol, 1e-7))
    res.status = ConcaveMaxResult::Status::Optimal;
  return res;
}

ConcaveMaxResult maximize_concave_simplex(const ConcaveFn& h, std::size_t n,
                                          double tol, int max_iter) {
  return maximize_concave(h, Polyhedron::simplex(n), tol, max_iter);
}

ConcaveFn with_numeric_gradient(
    const std::function<double(const std::vector<double>&)>& f, double step) {
  return [f, step](const std::vector<double>& q) {
    ConcaveEval ev;
    ev.value = f(q);
    ev.grad.assign(q.size(), 0.0);
    for (std::size_t j = 0; j < q.size(); ++j) {
      std::vector<double> qp = q, qm = q;
      qp[j] += step;
      qm[j] -= step;
      ev.grad[j] = (f(qp) - f(qm)) / (2.0 * step);
    }
    return ev;
  };
}

}  // namespace gdv
