#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "gdv/markets.hpp"
#include "gdv/report.hpp"
#include "gdv/risk_measures.hpp"

namespace gdv {

/// A market description file: sample space, market body, named claims.
struct MarketFile {
  MarketModel market;
  std::map<std::string, Claim> claims;
};

/// Parses the canonical market JSON schema. Probabilities drifting from
/// sum one by more than 1e-9 are an error; smaller drift is renormalized.
/// Throws std::invalid_argument on schema violations.
MarketFile parse_market_file(const nlohmann::json& j);
MarketFile load_market_file(const std::string& path);

/// Canonical serialization (sorted keys; infinities as "inf"/"-inf").
nlohmann::json serialize_market_file(const MarketFile& mf);

/// Builds a measure from a descriptor {"kind": ..., parameters...}.
/// Kinds: rho_hat0, entropic, worst_case, shortfall, penalty_table.
RiskMeasure parse_measure(const nlohmann::json& j, const MarketModel& M);

/// Parses an inline claim: either a name from the file or a JSON array.
Claim parse_claim(const std::string& text, const MarketFile& mf);

nlohmann::json report_to_json(const DiagnosticReport& rep);

}  // namespace gdv
