#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gdv/core.hpp"
#include "gdv/markets.hpp"
#include "gdv/report.hpp"

namespace gdv {

/// An evaluatable convex risk measure, optionally carrying its exact
/// penalty function. Measures without a closed-form penalty leave
/// exact_penalty empty and rely on the probe estimator below.
struct RiskMeasure {
  std::string name;
  std::function<double(const Claim&)> evaluate;
  std::function<XReal(const Density&)> exact_penalty;  // may be empty
  /// Set when the penalty is the support function of this market
  /// (i.e. the measure is rho_hat0 of it); enables exact LP paths.
  std::shared_ptr<const MarketModel> support_market;

  bool has_exact_penalty() const { return bool(exact_penalty); }
  double operator()(const Claim& x) const { return evaluate(x); }
};

// --- superhedging and its dual minorant -----------------------------------

/// rho0(x) = inf{r | some m in M has r + m + x >= 0}. MinusInf status when
/// the infimum is unbounded below.
XReal superhedging_rho0(const MarketModel& M, const Claim& x);

/// Penalty of rho0 = support function of M; PlusInf signals q outside Q.
XReal penalty_rho0(const MarketModel& M, const Density& q);

/// rho_hat0(x) = sup over Q of E_Q[-x] - sigma_M(Q); MinusInf iff Q empty.
XReal rho_hat0(const MarketModel& M, const Claim& x, double tol = 1e-10);

/// Minimum of sigma_M over the probability simplex with its argmin.
/// Infeasible (Q empty) reported as PlusInf.
struct SimplexMin {
  XReal value;
  std::vector<double> argmin;
};
SimplexMin min_support_over_simplex(const MarketModel& M, double tol = 1e-10);

// --- built-in measures -----------------------------------------------------

RiskMeasure entropic(const SampleSpace& space, double gamma);

RiskMeasure worst_case(const SampleSpace& space, const Density& q);

/// rho_hat0 as a measure; requires Q nonempty.
RiskMeasure rho_hat0_measure(const MarketModel& M);

/// rho(x) = max_i (E_{q_i}[-x] - alpha_i): the measure whose penalty is the
/// convex interpolation of the table. The exact penalty evaluator is
/// provided for two-atom spaces (piecewise-linear in q_1).
RiskMeasure penalty_table(const SampleSpace& space,
                          std::vector<std::pair<Density, double>> table);

// --- shortfall -------------------------------------------------------------

/// rho_l(y) = inf{r | some m in M has E[l(r + m + y)] <= delta} with
/// l(a) = Phi(min(a, 0)).
double shortfall_functional(const SampleSpace& space, const MarketModel& M,
                            const YoungFunction& loss, double delta,
                            const Claim& y);

/// Least acceptable selling price rho_l(-x).
double shortfall_price(const SampleSpace& space, const MarketModel& M,
                       const YoungFunction& loss, double delta, const Claim& x);

/// Normalized companion rho_l - rho_l(0) as a measure.
RiskMeasure shortfall_measure(const SampleSpace& space, const MarketModel& M,
                              const YoungFunction& loss, double delta);

// --- acceptance sets and indifference prices ------------------------------

/// Convex monotone acceptance set {y | violation(y) <= 0} with 0 inside.
struct AcceptanceSet {
  std::function<double(const Claim&)> violation;

  static AcceptanceSet nonnegative_orthant(std::size_t n);
  static AcceptanceSet sublevel(const RiskMeasure& rho);
};

/// inf{r | some m in M has r + m + x in A}; PlusInf when no feasible r is
/// found in the search window.
XReal acceptance_set_measure(const AcceptanceSet& A, const MarketModel& M,
                             const Claim& x);

struct IndifferencePrice {
  enum class Status { Ok, NotProper };

  Status status = Status::Ok;
  double price = 0.0;
  double inner_inf_with = 0.0;
  double inner_inf_at_zero = 0.0;
};

/// I(eta)(x) = inf_m eta(m + x) - inf_m eta(m).
IndifferencePrice indifference_price(const RiskMeasure& eta,
                                     const MarketModel& M, const Claim& x);

/// I(eta) wrapped as a measure (throws if not proper at 0).
RiskMeasure indifference_measure(const RiskMeasure& eta, const MarketModel& M);

// --- conical restriction ---------------------------------------------------

/// rho'(x) = sup over Q_0 = {sigma_M = 0} of E_Q[-x] - rho*(Q). Requires an
/// exact penalty on rho. Empty optional when Q_0 is empty.
std::optional<RiskMeasure> restrict_conical(const RiskMeasure& rho,
                                            const MarketModel& M);

// --- inner minimization over a market --------------------------------------

struct MarketMin {
  enum class Status { Ok, Unbounded };

  Status status = Status::Ok;
  double value = 0.0;
  Claim argmin;
};

/// Minimizes a convex function of the parametrized market element
/// (the -L_+ part is dropped; valid for monotone objectives).
MarketMin minimize_over_market(const MarketModel& M,
                               const std::function<double(const Claim&)>& g,
                               double tol = 1e-9);

// --- randomized axiom verification -----------------------------------------

struct AxiomsOptions {
  int sample_count = 10000;
  std::uint64_t seed = 42;
  double radius = 1.0;
  double tol = 1e-9;
};

/// Randomized check of monotonicity, cash-invariance, convexity,
/// normalization, plus a positive-homogeneity flag with witness.
DiagnosticReport axioms_check(const RiskMeasure& rho, const SampleSpace& space,
                              const AxiomsOptions& opt = {});

// --- penalty probing --------------------------------------------------------

struct PenaltyProbeOptions {
  double probe_radius = 4.0;
  int probe_count = 10000;
  std::uint64_t seed = 42;
};

struct PenaltyEstimate {
  XReal value;
  bool exact = false;  // false: lower estimate from finitely many probes
};

/// Exact penalty when rho carries one; otherwise the probe lower bound
/// sup over probes x of E_q[-x] - rho(x).
PenaltyEstimate penalty_of(const RiskMeasure& rho, const SampleSpace& space,
                           const Density& q,
                           const PenaltyProbeOptions& opt = {},
                           const MarketModel* market = nullptr);

}  // namespace gdv
