#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace metricforge {

enum class Verdict { Holds, Violated, NotApplicable };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

// Uniform result of an inequality check. `values` carries the evaluated
// quantities by name, `witness` the point indices involved (when any), and
// `parts` the sub-verdicts of compound checks. `scope` states how the
// universally quantified claim was decided: "exact" for complete finite
// sweeps, "holds on grid" or "numeric estimate" for grid surrogates over the
// positive reals -- a grid verdict is evidence, never a proof.
struct CheckReport {
  std::string check;
  Verdict verdict = Verdict::Holds;
  std::string scope = "exact";
  std::map<std::string, double> values;
  std::vector<std::size_t> witness;
  std::vector<CheckReport> parts;

  bool holds() const { return verdict == Verdict::Holds; }
};

}  // namespace metricforge
