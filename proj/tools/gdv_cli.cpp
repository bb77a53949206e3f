// Command-line surface for the good-deal valuation library: valuations,
// theorem-level checks, reference cases, indifference prices, and the
// Luxemburg norm. Output is canonical JSON (or an aligned table).

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdv/core.hpp"
#include "gdv/diagnostics.hpp"
#include "gdv/io.hpp"
#include "gdv/markets.hpp"
#include "gdv/risk_measures.hpp"

namespace {

using nlohmann::json;

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitNumeric = 65;

int verdict_exit(gdv::Verdict v) {
  switch (v) {
    case gdv::Verdict::Holds: return kExitHolds;
    case gdv::Verdict::Fails: return kExitFails;
    default: return kExitInconclusive;
  }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json xreal_json(const gdv::XReal& v) {
  if (v.is_plus_inf()) return json("inf");
  if (v.is_minus_inf()) return json("-inf");
  return json(v.value());
}

struct Row {
  std::string name;
  double expected;
  double computed;
  double tol;
  bool pass;
};

Row make_row(std::string name, double expected, double computed, double tol) {
  bool pass = std::abs(expected - computed) <= tol;
  return Row{std::move(name), expected, computed, tol, pass};
}

int emit_rows(const std::string& title, const std::vector<Row>& rows,
              const std::vector<std::string>& notes, bool table) {
  bool all = true;
  for (const auto& r : rows) all = all && r.pass;
  if (table) {
    std::printf("%s\n", title.c_str());
    std::printf("%-40s %16s %16s %6s\n", "quantity", "expected", "computed",
                "pass");
    for (const auto& r : rows)
      std::printf("%-40s %16.10g %16.10g %6s\n", r.name.c_str(), r.expected,
                  r.computed, r.pass ? "yes" : "NO");
    for (const auto& n : notes) std::printf("note: %s\n", n.c_str());
    std::printf("overall: %s\n", all ? "pass" : "FAIL");
  } else {
    json j;
    j["case"] = title;
    json jr = json::array();
    for (const auto& r : rows)
      jr.push_back({{"name", r.name},
                    {"expected", r.expected},
                    {"computed", r.computed},
                    {"tol", r.tol},
                    {"pass", r.pass}});
    j["rows"] = jr;
    j["notes"] = notes;
    j["pass"] = all;
    emit(j);
  }
  return all ? kExitHolds : kExitFails;
}

gdv::MarketModel example_illiquid_two_state() {
  gdv::SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  return gdv::MarketModel::illiquid(sp, gdv::Claim({1.0, -1.0}),
                                    gdv::Friction{}, -0.5, 0.5);
}

gdv::MarketModel example_scaled_half() {
  gdv::SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  return gdv::MarketModel::scaled_box(sp, {gdv::Claim({1.0, 0.5})}, {0.0},
                                      {1.0});
}

gdv::MarketModel example_monotone_cap() {
  gdv::SampleSpace sp({"w1", "w2"}, {0.5, 0.5});
  return gdv::MarketModel::scaled_box(sp, {gdv::Claim({1.0, 1.0})}, {0.0},
                                      {1.0});
}

gdv::RiskMeasure abs_penalty_measure(const gdv::SampleSpace& sp) {
  // Penalty |2q-1|/4: piecewise-linear with knots at q1 = 0, 1/2, 1.
  return gdv::penalty_table(
      sp, {{gdv::Density({1.0, 0.0}), 0.25},
           {gdv::Density({0.5, 0.5}), 0.0},
           {gdv::Density({0.0, 1.0}), 0.25}});
}

int run_papercase(const std::string& id, int size, bool table) {
  std::vector<Row> rows;
  std::vector<std::string> notes;

  if (id == "illiquid-two-state") {
    gdv::MarketModel M = example_illiquid_two_state();
    for (int i = 0; i <= 20; ++i) {
      double q1 = i / 20.0;
      double expect = (2.0 * q1 - 1.0) * (2.0 * q1 - 1.0) / 4.0;
      gdv::XReal got = gdv::penalty_rho0(M, gdv::Density({q1, 1.0 - q1}));
      rows.push_back(make_row("penalty(q1=" + std::to_string(q1) + ")", expect,
                              got.value(), 1e-9));
    }
    gdv::Claim x({-0.5, 0.0});
    rows.push_back(make_row("dual_bound(-half_indicator)", 0.3125,
                            gdv::rho_hat0(M, x).value(), 1e-9));
    gdv::RiskMeasure rho = abs_penalty_measure(M.space);
    rows.push_back(make_row("abs_penalty_value", 0.25, rho.evaluate(x), 1e-9));
    rows.push_back(make_row("abs_penalty_is_gdv", 1.0,
                            gdv::is_gdv(rho, M).holds() ? 1.0 : 0.0, 0.0));
    // Not an indifference price: the gap between the candidate's penalty
    // and the superhedging penalty agrees with zero at q1 in {0, 1/2, 1}
    // but rises strictly above the chord in between, so the gap is not
    // convex, which the penalty identity of indifference prices requires.
    auto beta = [&](double q1) {
      gdv::Density q({q1, 1.0 - q1});
      return rho.exact_penalty(q).value() - gdv::penalty_rho0(M, q).value();
    };
    for (double q1 : {0.0, 0.5, 1.0})
      rows.push_back(make_row("penalty_match(q1=" + std::to_string(q1) + ")",
                              0.0, beta(q1), 1e-9));
    double sag = beta(0.25) - (beta(0.0) + beta(0.5)) / 2.0;
    rows.push_back(make_row("non_convexity_margin_at_quarter", 0.0625, sag,
                            1e-9));
    Row strict = make_row("not_indifference_price", 1.0,
                          sag > 1e-3 ? 1.0 : 0.0, 0.0);
    rows.push_back(strict);
    return emit_rows(id, rows, notes, table);
  }

  if (id == "scaled-half") {
    gdv::MarketModel M = example_scaled_half();
    rows.push_back(make_row("min_penalty", 0.5,
                            gdv::min_support_over_simplex(M).value.value(),
                            1e-9));
    gdv::Claim zero({0.0, 0.0});
    rows.push_back(
        make_row("dual_bound_at_zero", -0.5, gdv::rho_hat0(M, zero).value(), 1e-9));
    rows.push_back(make_row("gdv_exists", 0.0,
                            gdv::gdv_exists(M).report.holds() ? 1.0 : 0.0, 0.0));
    rows.push_back(make_row("coherent_gdv", 0.0,
                            gdv::coherent_gdv(M).report.holds() ? 1.0 : 0.0,
                            0.0));
    return emit_rows(id, rows, notes, table);
  }

  if (id == "monotone-cap") {
    gdv::MarketModel M = example_monotone_cap();
    gdv::Claim zero({0.0, 0.0});
    rows.push_back(make_row("superhedge_at_zero", -1.0,
                            gdv::superhedging_rho0(M, zero).value(), 1e-9));
    rows.push_back(make_row("min_penalty", 1.0,
                            gdv::min_support_over_simplex(M).value.value(),
                            1e-9));
    rows.push_back(make_row("dual_bound_at_zero", -1.0,
                            gdv::rho_hat0(M, zero).value(), 1e-9));
    return emit_rows(id, rows, notes, table);
  }

  gdv::TruncationId fam_id = gdv::truncation_id_from_string(id);
  int N = size > 0 ? size
                   : (fam_id == gdv::TruncationId::IndicatorGrid ? 6 : 8);
  gdv::TruncationFamily fam = gdv::build_truncation(fam_id, N);
  notes = fam.notes;

  if (fam_id == gdv::TruncationId::Counterexample1) {
    rows.push_back(make_row("min_penalty", 1.0 / N,
                            gdv::min_support_over_simplex(fam.market)
                                .value.value(),
                            1e-9));
    rows.push_back(make_row("nfl_fails", 1.0,
                            gdv::nfl_check(fam.market).verdict ==
                                    gdv::Verdict::Fails
                                ? 1.0
                                : 0.0,
                            0.0));
  } else if (fam_id == gdv::TruncationId::Counterexample2) {
    for (std::size_t t = 0; t < fam.densities.size(); ++t) {
      double j = double(t + 1);
      rows.push_back(make_row(
          "penalty(" + fam.density_labels[t] + ")", 1.0 / (j * j),
          gdv::penalty_rho0(fam.market, fam.densities[t]).value(), 1e-9));
    }
    gdv::RiskMeasure dual = gdv::rho_hat0_measure(fam.market);
    rows.push_back(make_row("dual_bound_relevant", 1.0,
                            gdv::is_relevant(dual, fam.market).holds() ? 1.0
                                                                       : 0.0,
                            0.0));
  } else if (fam_id == gdv::TruncationId::GeometricS) {
    rows.push_back(make_row("min_penalty", std::ldexp(1.0, -N),
                            gdv::min_support_over_simplex(fam.market)
                                .value.value(),
                            1e-12));
  } else {  // indicator-grid
    for (std::size_t t = 0; t < fam.densities.size(); ++t)
      rows.push_back(make_row(
          "penalty(" + fam.density_labels[t] + ")", 1.0,
          gdv::penalty_rho0(fam.market, fam.densities[t]).value(), 1e-9));
    rows.push_back(make_row(
        "penalty(point_mass_first)", 1.0,
        gdv::penalty_rho0(fam.market,
                          gdv::Density([&] {
                            std::vector<double> q(std::size_t(N), 0.0);
                            q[0] = 1.0;
                            return q;
                          }()))
            .value(),
        1e-9));
  }
  return emit_rows(id, rows, notes, table);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"good-deal valuation toolkit"};
  app.require_subcommand(1);

  std::string market_path, claim_text, measure_text = R"({"kind":"rho_hat0"})";
  double tol = 1e-9;
  std::uint64_t seed = 42;
  int samples = 10000;
  bool table = false, bound = false;

  auto add_common = [&](CLI::App* cmd, bool needs_market) {
    auto* m = cmd->add_option("--market", market_path, "market JSON file");
    if (needs_market) m->required();
    cmd->add_option("--tol", tol, "decision tolerance");
    cmd->add_option("--seed", seed, "seed for randomized checks");
    cmd->add_option("--samples", samples, "sample count for randomized checks");
    cmd->add_flag("--table", table, "aligned table output");
  };

  // value
  auto* cv = app.add_subcommand("value", "evaluate a measure on a claim");
  add_common(cv, true);
  cv->add_option("--claim", claim_text, "claim name or inline JSON array")
      ->required();
  cv->add_option("--measure", measure_text, "measure descriptor JSON");
  cv->add_flag("--bound", bound, "also print good-deal and no-arbitrage bounds");

  // check
  auto* cc = app.add_subcommand("check", "run a theorem-level check");
  std::string check_name;
  std::string b_gens_text;
  add_common(cc, true);
  cc->add_option("name", check_name, "check name")->required();
  cc->add_option("--measure", measure_text, "measure descriptor JSON");
  cc->add_option("--target", b_gens_text,
                 "separation target generators (JSON array of arrays)");

  // papercase
  auto* cp = app.add_subcommand("papercase", "reproduce a reference case");
  std::string case_id;
  int size = 0;
  cp->add_option("case", case_id, "case id")->required();
  cp->add_option("--size", size, "truncation size");
  cp->add_flag("--table", table, "aligned table output");

  // indiff
  auto* ci = app.add_subcommand("indiff", "risk indifference price");
  std::string eta_text = R"({"kind":"entropic","gamma":1.0})";
  add_common(ci, true);
  ci->add_option("--claim", claim_text, "claim name or inline JSON array")
      ->required();
  ci->add_option("--eta", eta_text, "hedging measure descriptor JSON");

  // norm
  auto* cn = app.add_subcommand("norm", "Luxemburg norm of a claim");
  std::string phi_text = R"({"kind":"power","p":2.0})";
  add_common(cn, true);
  cn->add_option("--claim", claim_text, "claim name or inline JSON array")
      ->required();
  cn->add_option("--phi", phi_text, "Young function descriptor JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (cv->parsed()) {
      gdv::MarketFile mf = gdv::load_market_file(market_path);
      gdv::Claim x = gdv::parse_claim(claim_text, mf);
      gdv::RiskMeasure rho =
          gdv::parse_measure(nlohmann::json::parse(measure_text), mf.market);
      json out;
      out["value"] = rho.evaluate(x);
      if (bound) {
        out["good_deal_bound"] =
            json::array({-rho.evaluate(x), rho.evaluate(-x)});
        gdv::XReal lo = gdv::superhedging_rho0(mf.market, x);
        gdv::XReal hi = gdv::superhedging_rho0(mf.market, -x);
        out["no_arbitrage_bound"] = json::array(
            {lo.is_finite() ? json(-lo.value()) : json("-inf"), xreal_json(hi)});
      }
      emit(out);
      return kExitHolds;
    }

    if (cc->parsed()) {
      gdv::MarketFile mf = gdv::load_market_file(market_path);
      const gdv::MarketModel& M = mf.market;
      gdv::DiagnosticReport rep;
      if (check_name == "gdv-exists") {
        rep = gdv::gdv_exists(M).report;
      } else if (check_name == "is-gdv") {
        gdv::RiskMeasure rho =
            gdv::parse_measure(nlohmann::json::parse(measure_text), M);
        gdv::IsGdvOptions opt;
        opt.seed = seed;
        rep = gdv::is_gdv(rho, M, opt);
      } else if (check_name == "relevant") {
        gdv::RiskMeasure rho =
            gdv::parse_measure(nlohmann::json::parse(measure_text), M);
        rep = gdv::is_relevant(rho, M);
      } else if (check_name == "nfl") {
        rep = gdv::nfl_check(M);
      } else if (check_name == "coherent") {
        rep = gdv::coherent_gdv(M).report;
      } else if (check_name == "relevant-coherent") {
        rep = gdv::relevant_coherent_gdv(M);
      } else if (check_name == "first-kind") {
        rep = gdv::first_kind_arbitrage(M);
      } else if (check_name == "extension") {
        gdv::RiskMeasure rho =
            gdv::parse_measure(nlohmann::json::parse(measure_text), M);
        gdv::ExtensionOptions opt;
        opt.seed = seed;
        rep = gdv::extension_consistency(rho, M, opt);
      } else if (check_name == "separate") {
        std::vector<gdv::Claim> b_gens;
        for (const auto& g : nlohmann::json::parse(b_gens_text))
          b_gens.push_back(gdv::Claim(g.get<std::vector<double>>()));
        rep = gdv::separate(M, b_gens).report;
      } else if (check_name == "axioms") {
        gdv::RiskMeasure rho =
            gdv::parse_measure(nlohmann::json::parse(measure_text), M);
        gdv::AxiomsOptions opt;
        opt.seed = seed;
        opt.sample_count = samples;
        rep = gdv::axioms_check(rho, M.space, opt);
      } else {
        std::cerr << "unknown check: " << check_name << "\n";
        return kExitUsage;
      }
      emit(gdv::report_to_json(rep));
      return verdict_exit(rep.verdict);
    }

    if (cp->parsed()) {
      return run_papercase(case_id, size, table);
    }

    if (ci->parsed()) {
      gdv::MarketFile mf = gdv::load_market_file(market_path);
      gdv::Claim x = gdv::parse_claim(claim_text, mf);
      gdv::RiskMeasure eta =
          gdv::parse_measure(nlohmann::json::parse(eta_text), mf.market);
      gdv::IndifferencePrice p = gdv::indifference_price(eta, mf.market, x);
      if (p.status != gdv::IndifferencePrice::Status::Ok) {
        emit(json{{"status", "not-proper"}});
        return kExitNumeric;
      }
      emit(json{{"price", p.price},
                {"inner_inf", p.inner_inf_with},
                {"inner_inf_at_zero", p.inner_inf_at_zero}});
      return kExitHolds;
    }

    // norm
    gdv::MarketFile mf = gdv::load_market_file(market_path);
    gdv::Claim x = gdv::parse_claim(claim_text, mf);
    nlohmann::json jp = nlohmann::json::parse(phi_text);
    gdv::YoungFunction phi = gdv::YoungFunction::power(2.0);
    std::string pk = jp.value("kind", "power");
    if (pk == "power") {
      phi = gdv::YoungFunction::power(jp.value("p", 2.0));
    } else if (pk == "exponential") {
      phi = gdv::YoungFunction::exponential(jp.value("gamma", 1.0));
    } else if (pk == "capped") {
      phi = gdv::YoungFunction::capped();
    } else {
      std::cerr << "unknown Young function kind: " << pk << "\n";
      return kExitUsage;
    }
    emit(json{{"norm", gdv::luxemburg_norm(phi, mf.market.space, x)}});
    return kExitHolds;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric status: " << e.what() << "\n";
    return kExitNumeric;
  }
}
