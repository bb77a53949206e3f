#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gdv/markets.hpp"
#include "gdv/report.hpp"
#include "gdv/risk_measures.hpp"

namespace gdv {

// --- existence and verification --------------------------------------------

/// Does a good-deal valuation exist? Holds iff the minimum of sigma_M over
/// the simplex is <= 1e-8; on holds, `gdv` carries rho_hat0 of M as the
/// constructive valuation.
struct GdvExistence {
  DiagnosticReport report;
  std::optional<RiskMeasure> gdv;
};
GdvExistence gdv_exists(const MarketModel& M);

struct IsGdvOptions {
  std::uint64_t seed = 42;
  int random_samples = 200;
  double tol = 1e-8;
};

/// Verifies rho is a good-deal valuation for M: normalization gate,
/// rho(-m) <= 0 on extreme and random market elements (with -L_+
/// perturbations), penalty domination when rho carries an exact penalty,
/// and a sublevel-set spot check.
DiagnosticReport is_gdv(const RiskMeasure& rho, const MarketModel& M,
                        const IsGdvOptions& opt = {});

// --- relevance and no-free-lunch -------------------------------------------

struct RelevanceOptions {
  double delta_min = 1e-4;
  double tol = 1e-9;
};

/// Relevance of rho. When rho is rho_hat0 of its own market (support_market
/// set, polyhedral or illiquid), the test is exact per atom:
/// min{sigma(y) : y >= 0, y_k = 1} <= tol. Otherwise rho(-delta e_k) > 0 is
/// verified at delta_min and certified on [delta_min, inf) by monotonicity.
DiagnosticReport is_relevant(const RiskMeasure& rho, const MarketModel& M,
                             const RelevanceOptions& opt = {});

/// No-free-lunch check via two cross-checked routes: (i) maximize the mass
/// of a market element clipped to [0,1]; (ii) relevance of rho_hat0.
/// Disagreement yields an inconclusive verdict with both witnesses.
DiagnosticReport nfl_check(const MarketModel& M);

/// Arbitrage of the first kind: atom k is flagged iff delta e_k can be
/// superhedged at cost <= 1e-9 (delta = 1e-4). Holds = no atom flagged.
DiagnosticReport first_kind_arbitrage(const MarketModel& M);

// --- coherent valuations ----------------------------------------------------

/// Searches for q with sigma_M(q) = 0 (most-uniform tie-break); on success
/// returns the worst-case measure E_q[-.] and verifies it is a GDV.
struct CoherentGdv {
  DiagnosticReport report;
  std::optional<RiskMeasure> measure;
};
CoherentGdv coherent_gdv(const MarketModel& M);

/// Maximizes min_k q_k over {sigma_M = 0}; holds iff the optimum is
/// strictly positive, i.e. some equivalent density has zero support value.
DiagnosticReport relevant_coherent_gdv(const MarketModel& M);

// --- separation -------------------------------------------------------------

/// Separates M from the polytope B = conv{b_1..b_I} (nonnegative claims
/// containing a positive constant): maximizes min_i q.b_i - sigma_M(q) over
/// densities. Holds iff the gap is strictly positive.
/// Throws std::invalid_argument when B intersects M.
struct Separation {
  DiagnosticReport report;
  std::optional<Density> witness;
};
Separation separate(const MarketModel& M, const std::vector<Claim>& b_gens);

// --- extension consistency --------------------------------------------------

struct ExtensionOptions {
  std::uint64_t seed = 42;
  int random_samples = 60;
  double tol = 1e-9;
};

/// Cross-checks four characterizations of relevance for a valuation rho:
/// (1) the relevance verdict itself, (2) -rho_hat0(x - z) < rho(-x),
/// (3) -rho0(x - z) < rho(-x), (4) the extended market {rho(-.) <= 0}
/// contains no nonzero nonnegative claim. All four must agree; otherwise
/// the verdict is inconclusive.
DiagnosticReport extension_consistency(const RiskMeasure& rho,
                                       const MarketModel& M,
                                       const ExtensionOptions& opt = {});

// --- truncation families ----------------------------------------------------

enum class TruncationId {
  Counterexample1,  // indicator generators e_k, dyadic probabilities
  Counterexample2,  // difference generators on a symmetric window
  GeometricS,       // single underlying S(k) = 2^-k, box [0,1]
  IndicatorGrid,    // underlyings e_k, box [0,1]^N
};

TruncationId truncation_id_from_string(const std::string& s);
std::string to_string(TruncationId id);

/// A finite truncation of one of the reference infinite families, with
/// its distinguished densities materialized and labeled.
struct TruncationFamily {
  TruncationId id;
  int N = 0;
  MarketModel market;
  std::vector<Density> densities;
  std::vector<std::string> density_labels;
  /// Caveats about which quantities survive truncation (printed verbatim
  /// by reports over this family).
  std::vector<std::string> notes;
};

/// Builds the family at size N (N >= 2). Probabilities are dyadic with the
/// tail mass folded into the boundary atoms.
TruncationFamily build_truncation(TruncationId id, int N);

}  // namespace gdv
