#pragma once

#include <map>
#include <string>
#include <vector>

namespace gdv {

enum class Verdict { Holds, Fails, Inconclusive };

std::string to_string(Verdict v);

/// Structured outcome of a theorem-level check: verdict plus reproducible
/// numeric witnesses and margins.
struct DiagnosticReport {
  std::string check;
  Verdict verdict = Verdict::Inconclusive;
  std::map<std::string, double> margins;
  std::map<std::string, std::vector<double>> witnesses;
  std::vector<std::string> notes;

  bool holds() const { return verdict == Verdict::Holds; }
};

}  // namespace gdv
