#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace gdv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dense LP in general form: optimize c'x subject to row constraints and
/// variable bounds (+-infinity allowed).
struct LinearProgram {
  enum class Sense : char { LE = '<', GE = '>', EQ = '=' };

  struct Row {
    std::vector<double> a;
    Sense sense;
    double rhs;
  };

  bool maximize = false;
  std::vector<double> c;
  std::vector<Row> rows;
  std::vector<double> lower;  // default 0
  std::vector<double> upper;  // default +inf

  explicit LinearProgram(std::size_t nvars);

  std::size_t num_vars() const { return c.size(); }
  void add_row(std::vector<double> a, Sense sense, double rhs);
  void set_bounds(std::size_t j, double lo, double hi);
  void set_free(std::size_t j);
};

struct SolveResult {
  enum class Status { Optimal, Infeasible, Unbounded };

  Status status = Status::Infeasible;
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> y;   // duals per input row (original sense/orientation)
  double dual_value = 0.0;
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule.
SolveResult solve_lp(const LinearProgram& lp);

/// Golden-section minimization of a convex function on [lo, hi].
/// Returns (argmin, min). tol bounds the argmin error.
std::pair<double, double> minimize_convex_1d(
    const std::function<double(double)>& f, double lo, double hi, double tol);

/// Monotone root bracketing + bisection. g must change sign on [lo, hi].
double bisect_root(const std::function<double(double)>& g, double lo, double hi,
                   double tol);

/// Value and supergradient of a concave function.
struct ConcaveEval {
  double value;
  std::vector<double> grad;
};

using ConcaveFn = std::function<ConcaveEval(const std::vector<double>&)>;

/// A bounded polyhedral feasible region for the cutting-plane solver.
struct Polyhedron {
  std::size_t dim;
  std::vector<LinearProgram::Row> rows;
  std::vector<double> lower, upper;  // must be finite (region bounded)

  static Polyhedron simplex(std::size_t n);
  static Polyhedron box(std::vector<double> lo, std::vector<double> hi);
  void add_row(std::vector<double> a, LinearProgram::Sense sense, double rhs);
};

struct ConcaveMaxResult {
  enum class Status { Optimal, Infeasible, IterationLimit };

  Status status = Status::Infeasible;
  double value = 0.0;            // best evaluated value (a valid lower bound)
  double upper_bound = 0.0;      // cutting-plane upper bound at termination
  std::vector<double> argmax;
};

/// Kelley cutting-plane maximization of a concave function over a bounded
/// polyhedron, terminating when upper bound minus best value <= tol.
ConcaveMaxResult maximize_concave(const ConcaveFn& h, const Polyhedron& region,
                                  double tol, int max_iter = 2000);

/// Convenience wrapper over the probability simplex.
ConcaveMaxResult maximize_concave_simplex(const ConcaveFn& h, std::size_t n,
                                          double tol, int max_iter = 2000);

/// Finite-difference supergradient adapter for functions given by value only.
ConcaveFn with_numeric_gradient(const std::function<double(const std::vector<double>&)>& f,
                                double step = 1e-7);

}  // namespace gdv
