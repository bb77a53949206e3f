#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "gdv/core.hpp"
#include "gdv/solvers.hpp"

namespace gdv {

/// An extended real used for support-function and valuation results.
/// +-infinity are statuses, never operands.
struct XReal {
  enum class Kind { Finite, PlusInf, MinusInf };

  Kind kind = Kind::Finite;
  double v = 0.0;

  static XReal finite(double x) { return XReal{Kind::Finite, x}; }
  static XReal plus_inf() { return XReal{Kind::PlusInf, 0.0}; }
  static XReal minus_inf() { return XReal{Kind::MinusInf, 0.0}; }

  bool is_finite() const { return kind == Kind::Finite; }
  bool is_plus_inf() const { return kind == Kind::PlusInf; }
  bool is_minus_inf() const { return kind == Kind::MinusInf; }
  /// Finite value; throws on an infinity status.
  double value() const;
};

/// conv{0, m_1..m_J} - L_+. The zero generator is always adjoined.
struct PolytopeBody {
  std::vector<Claim> generators;
};

/// Convex friction functions for the illiquid one-asset market:
/// f(0) = 0, decreasing then increasing, smooth.
struct Friction {
  enum class Kind { Quadratic, Exp };

  Kind kind = Kind::Quadratic;
  double scale = 1.0;

  double operator()(double a) const;
  /// One-sided slopes at 0 (0 for both built-ins).
  double slope_at_zero() const { return 0.0; }
};

/// {alpha S - f(alpha) | alpha in [lo, hi]} - L_+.
struct IlliquidBody {
  Claim underlying;
  Friction friction;
  double alpha_lo = -kInf;
  double alpha_hi = kInf;
};

/// {sum theta_i S_i | theta in K} - L_+ for a box K containing 0.
struct ScaledBoxBody {
  std::vector<Claim> underlyings;
  std::vector<double> lo, hi;  // +-inf allowed, 0 in the box
};

struct MarketModel {
  SampleSpace space;
  std::variant<PolytopeBody, IlliquidBody, ScaledBoxBody> body;

  static MarketModel polytope(SampleSpace space, std::vector<Claim> generators);
  static MarketModel illiquid(SampleSpace space, Claim underlying,
                              Friction friction, double alpha_lo = -kInf,
                              double alpha_hi = kInf);
  static MarketModel scaled_box(SampleSpace space, std::vector<Claim> underlyings,
                                std::vector<double> lo, std::vector<double> hi);

  std::size_t dim() const { return space.size(); }
  bool is_polyhedral() const;
  const PolytopeBody* as_polytope() const;
  const IlliquidBody* as_illiquid() const;
  const ScaledBoxBody* as_scaled_box() const;
};

/// sigma_M(w) = sup_{m in M} sum_k w_k m_k for a nonnegative weight vector
/// (densities included). +infinity signals w outside the finite domain.
XReal support_function(const MarketModel& M, const std::vector<double>& w);

/// Support value together with the maximizing position for the illiquid
/// body (used to form supergradients of sigma).
struct IlliquidSup {
  XReal value;
  double alpha = 0.0;
};
IlliquidSup illiquid_support(const IlliquidBody& body, double s, double wsum);
XReal support_function(const MarketModel& M, const Density& q);

/// Membership oracle: true iff some parametrized m dominates x - tol.
bool contains(const MarketModel& M, const Claim& x, double tol = 1e-9);

/// Linear description of the zero set {w >= 0 | sigma_M(w) <= 0} as rows
/// over w; exact for all three body variants. Appending these rows to the
/// simplex yields the polytope of densities in Q_0.
std::vector<LinearProgram::Row> support_zero_set_rows(const MarketModel& M);

/// Epigraph description of sigma_M for polyhedral bodies: auxiliary
/// variables t_1..t_aux with sigma(w) = sum t_i under the returned rows
/// over (w, t). Empty optional for the illiquid (non-polyhedral) body.
struct SupportEpigraph {
  std::size_t num_aux = 0;
  // Rows over (w_1..w_n, t_1..t_aux).
  std::vector<LinearProgram::Row> rows;
};
std::optional<SupportEpigraph> support_epigraph(const MarketModel& M);

/// M' = {c m | c >= 0, m in M}: support function is 0 on the zero set of
/// sigma_M and +infinity elsewhere.
struct ConicalMarket {
  MarketModel base;
};

ConicalMarket conical_hull(const MarketModel& M);
XReal support_function(const ConicalMarket& C, const Density& q);

/// {x | rho(-x) <= tol} as a membership oracle.
struct ExtendedMarket {
  std::function<double(const Claim&)> rho;
  double tol = 1e-9;

  bool contains(const Claim& x) const;
};

}  // namespace gdv
