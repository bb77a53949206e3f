#include "gdv/io.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace gdv {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) {
  throw std::invalid_argument(msg);
}

std::vector<double> number_array(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) bad(what + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double bound_value(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  bad(what + " must be a number or \"inf\"/\"-inf\"");
}

json bound_json(double v) {
  if (v == kInf) return json("inf");
  if (v == -kInf) return json("-inf");
  return json(v);
}

Friction parse_friction(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    bad("friction must be an object with a kind");
  Friction f;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "quadratic") {
    f.kind = Friction::Kind::Quadratic;
  } else if (kind == "exp") {
    f.kind = Friction::Kind::Exp;
  } else {
    bad("unknown friction kind: " + kind);
  }
  f.scale = j.value("scale", 1.0);
  if (!(f.scale > 0.0)) bad("friction scale must be positive");
  return f;
}

}  // namespace

MarketFile parse_market_file(const nlohmann::json& j) {
  if (!j.is_object()) bad("market file must be a JSON object");
  if (!j.contains("space") || !j.contains("market"))
    bad("market file needs \"space\" and \"market\"");

  const json& js = j.at("space");
  if (!js.contains("atoms") || !js.contains("probs"))
    bad("space needs \"atoms\" and \"probs\"");
  std::vector<std::string> atoms;
  for (const auto& a : js.at("atoms")) atoms.push_back(a.get<std::string>());
  std::vector<double> probs = number_array(js.at("probs"), "probs");
  double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9)
    bad("probabilities must sum to one (drift above 1e-9)");
  for (double& p : probs) p /= total;
  SampleSpace space(std::move(atoms), std::move(probs));
  const std::size_t n = space.size();

  const json& jm = j.at("market");
  std::string type = jm.value("type", "");
  std::optional<MarketModel> market;
  if (type == "polytope") {
    std::vector<Claim> gens;
    for (const auto& g : jm.value("generators", json::array())) {
      std::vector<double> v = number_array(g, "generator");
      if (v.size() != n) bad("generator dimension mismatch");
      gens.push_back(Claim(std::move(v)));
    }
    market = MarketModel::polytope(space, std::move(gens));
  } else if (type == "illiquid") {
    std::vector<double> s = number_array(jm.at("S"), "S");
    if (s.size() != n) bad("underlying dimension mismatch");
    double lo = -kInf, hi = kInf;
    if (jm.contains("alpha")) {
      const json& ja = jm.at("alpha");
      if (!ja.is_array() || ja.size() != 2) bad("alpha must be [lo, hi]");
      lo = bound_value(ja[0], "alpha bound");
      hi = bound_value(ja[1], "alpha bound");
    }
    market = MarketModel::illiquid(space, Claim(std::move(s)),
                                   parse_friction(jm.value("friction", json{{"kind", "quadratic"}})),
                                   lo, hi);
  } else if (type == "scaled_box") {
    std::vector<Claim> und;
    for (const auto& g : jm.at("S")) {
      std::vector<double> v = number_array(g, "underlying");
      if (v.size() != n) bad("underlying dimension mismatch");
      und.push_back(Claim(std::move(v)));
    }
    std::vector<double> lo, hi;
    const json& jb = jm.at("box");
    if (!jb.is_array() || jb.size() != und.size())
      bad("box must list one [lo, hi] per underlying");
    for (const auto& pair : jb) {
      if (!pair.is_array() || pair.size() != 2) bad("box entries are [lo, hi]");
      lo.push_back(bound_value(pair[0], "box bound"));
      hi.push_back(bound_value(pair[1], "box bound"));
    }
    market = MarketModel::scaled_box(space, std::move(und), std::move(lo),
                                     std::move(hi));
  } else {
    bad("unknown market type: " + type);
  }

  MarketFile mf{std::move(*market), {}};
  const json jclaims = j.value("claims", json::object());
  for (const auto& [name, arr] : jclaims.items()) {
    std::vector<double> v = number_array(arr, "claim " + name);
    if (v.size() != n) bad("claim dimension mismatch: " + name);
    mf.claims.emplace(name, Claim(std::move(v)));
  }
  return mf;
}

MarketFile load_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open market file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    bad("invalid JSON in " + path + ": " + e.what());
  }
  return parse_market_file(j);
}

nlohmann::json serialize_market_file(const MarketFile& mf) {
  json j;
  const SampleSpace& sp = mf.market.space;
  j["space"] = {{"atoms", sp.atoms}, {"probs", sp.probs}};
  json jm;
  if (const auto* poly = mf.market.as_polytope()) {
    jm["type"] = "polytope";
    json gens = json::array();
    for (const auto& g : poly->generators) gens.push_back(g.values);
    jm["generators"] = gens;
  } else if (const auto* ill = mf.market.as_illiquid()) {
    jm["type"] = "illiquid";
    jm["S"] = ill->underlying.values;
    jm["friction"] = {
        {"kind", ill->friction.kind == Friction::Kind::Quadratic ? "quadratic"
                                                                 : "exp"},
        {"scale", ill->friction.scale}};
    jm["alpha"] = json::array({bound_json(ill->alpha_lo), bound_json(ill->alpha_hi)});
  } else {
    const auto* box = mf.market.as_scaled_box();
    jm["type"] = "scaled_box";
    json und = json::array(), bounds = json::array();
    for (const auto& s : box->underlyings) und.push_back(s.values);
    for (std::size_t i = 0; i < box->lo.size(); ++i)
      bounds.push_back(json::array({bound_json(box->lo[i]), bound_json(box->hi[i])}));
    jm["S"] = und;
    jm["box"] = bounds;
  }
  j["market"] = jm;
  json claims = json::object();
  for (const auto& [name, c] : mf.claims) claims[name] = c.values;
  j["claims"] = claims;
  return j;
}

RiskMeasure parse_measure(const nlohmann::json& j, const MarketModel& M) {
  if (!j.is_object() || !j.contains("kind"))
    bad("measure descriptor must be an object with a kind");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "rho_hat0") return rho_hat0_measure(M);
  if (kind == "entropic") {
    return entropic(M.space, j.value("gamma", 1.0));
  }
  if (kind == "worst_case") {
    std::vector<double> q = number_array(j.at("q"), "q");
    if (q.size() != M.dim()) bad("density dimension mismatch");
    return worst_case(M.space, Density(std::move(q)));
  }
  if (kind == "shortfall") {
    double delta = j.value("delta", 0.04);
    YoungFunction loss = YoungFunction::power(2.0);
    if (j.contains("loss")) {
      const json& jl = j.at("loss");
      std::string lk = jl.value("kind", "power");
      if (lk == "power") {
        loss = YoungFunction::power(jl.value("p", 2.0));
      } else if (lk == "exponential") {
        loss = YoungFunction::exponential(jl.value("gamma", 1.0));
      } else {
        bad("unknown loss kind: " + lk);
      }
    }
    return shortfall_measure(M.space, M, loss, delta);
  }
  if (kind == "penalty_table") {
    std::vector<std::pair<Density, double>> table;
    for (const auto& row : j.at("table")) {
      std::vector<double> q = number_array(row.at("q"), "table density");
      if (q.size() != M.dim()) bad("density dimension mismatch");
      table.emplace_back(Density(std::move(q)), row.at("alpha").get<double>());
    }
    return penalty_table(M.space, std::move(table));
  }
  bad("unknown measure kind: " + kind);
}

Claim parse_claim(const std::string& text, const MarketFile& mf) {
  auto it = mf.claims.find(text);
  if (it != mf.claims.end()) return it->second;
  json j = json::parse(text, nullptr, false);
  if (j.is_array()) {
    std::vector<double> v = number_array(j, "claim");
    if (v.size() != mf.market.dim()) bad("claim dimension mismatch");
    return Claim(std::move(v));
  }
  bad("claim must name a file claim or be a JSON array: " + text);
}

nlohmann::json report_to_json(const DiagnosticReport& rep) {
  json j;
  j["check"] = rep.check;
  j["verdict"] = to_string(rep.verdict);
  j["margins"] = rep.margins;
  j["witnesses"] = rep.witnesses;
  j["notes"] = rep.notes;
  return j;
}

}  // namespace gdv
