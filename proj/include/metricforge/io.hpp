#pragma once

// JSON file formats and report serialization.
//
// space file    {"labels": [str...], "matrix": [[num...]...]}
// modulus file  {"family": "power", "C": num, "alpha": num}
//               {"family": "pwl", "anchors": [[t, y]...], "final_slope": num}
// map file      {"source": <space object or path>, "target": <same>,
//                "assignment": [target index per source index]}
//
// Paths inside a map file resolve relative to the map file's directory.
// Numbers serialize with shortest round-trip precision, so a written report
// re-read reproduces every double bit for bit. Every parse or validation
// failure surfaces as Error with the offending file prepended; the error
// code survives rewrapping.

#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "metricforge/additive.hpp"
#include "metricforge/distortion.hpp"
#include "metricforge/errors.hpp"
#include "metricforge/modulus.hpp"
#include "metricforge/preservation.hpp"
#include "metricforge/quasisym.hpp"
#include "metricforge/report.hpp"
#include "metricforge/space.hpp"

namespace metricforge {

using json = nlohmann::json;

namespace detail {

inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, path.string() + ": cannot open file");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorCode::ParseError, path.string() + ": not valid JSON");
  return j;
}

inline void store_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, path.string() + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::ParseError, path.string() + ": write failed");
}

template <typename Fn>
auto with_file_context(const std::filesystem::path& path, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

}  // namespace detail

inline json space_to_json(const FiniteSemimetricSpace& X) {
  json j;
  j["labels"] = X.labels();
  j["matrix"] = X.matrix();
  return j;
}

inline FiniteSemimetricSpace space_from_json(const json& j) {
  if (!j.is_object() || !j.contains("labels") || !j.contains("matrix"))
    throw Error(ErrorCode::ParseError, "space needs \"labels\" and \"matrix\" fields");
  std::vector<std::string> labels;
  std::vector<std::vector<double>> matrix;
  try {
    labels = j.at("labels").get<std::vector<std::string>>();
    matrix = j.at("matrix").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed space: ") + e.what());
  }
  return validate(std::move(labels), matrix);
}

inline FiniteSemimetricSpace read_space(const std::filesystem::path& path) {
  return detail::with_file_context(path,
                                   [&] { return space_from_json(detail::load_json_file(path)); });
}

inline void write_space(const std::filesystem::path& path, const FiniteSemimetricSpace& X) {
  detail::store_json_file(path, space_to_json(X));
}

inline json modulus_to_json(const Modulus& eta) {
  json j;
  if (const auto* p = eta.as_power()) {
    j["family"] = "power";
    j["C"] = p->scale;
    j["alpha"] = p->exponent;
  } else {
    const auto* pl = eta.as_piecewise();
    j["family"] = "pwl";
    j["anchors"] = pl->anchors;
    j["final_slope"] = pl->final_slope;
  }
  return j;
}

inline Modulus modulus_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family"))
    throw Error(ErrorCode::ParseError, "modulus needs a \"family\" field");
  const std::string family = j.at("family").get<std::string>();
  try {
    if (family == "power")
      return Modulus::power(j.at("C").get<double>(), j.at("alpha").get<double>());
    if (family == "pwl")
      return Modulus::piecewise_linear(
          j.at("anchors").get<std::vector<std::array<double, 2>>>(),
          j.at("final_slope").get<double>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed modulus: ") + e.what());
  }
  throw Error(ErrorCode::ParseError, "unknown modulus family \"" + family + "\"");
}

inline Modulus read_modulus(const std::filesystem::path& path) {
  return detail::with_file_context(
      path, [&] { return modulus_from_json(detail::load_json_file(path)); });
}

inline void write_modulus(const std::filesystem::path& path, const Modulus& eta) {
  detail::store_json_file(path, modulus_to_json(eta));
}

// "source"/"target" may be inline space objects or path strings relative to
// base_dir (the map file's directory when reading from disk).
inline PointMap map_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("source") || !j.contains("target") ||
      !j.contains("assignment"))
    throw Error(ErrorCode::ParseError, "map needs \"source\", \"target\" and \"assignment\"");
  auto load_side = [&](const json& side, const char* name) {
    if (side.is_string())
      return read_space(base_dir / std::filesystem::path(side.get<std::string>()));
    if (side.is_object()) return space_from_json(side);
    throw Error(ErrorCode::ParseError,
                std::string("\"") + name + "\" must be a space object or a path string");
  };
  FiniteSemimetricSpace source = load_side(j.at("source"), "source");
  FiniteSemimetricSpace target = load_side(j.at("target"), "target");
  std::vector<std::size_t> assignment;
  try {
    assignment = j.at("assignment").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed assignment: ") + e.what());
  }
  return PointMap(std::move(source), std::move(target), std::move(assignment));
}

inline PointMap read_map(const std::filesystem::path& path) {
  return detail::with_file_context(path, [&] {
    return map_from_json(detail::load_json_file(path), path.parent_path());
  });
}

// Maps are written self-contained, with both spaces inline.
inline json map_to_json(const PointMap& f) {
  json j;
  j["source"] = space_to_json(f.source());
  j["target"] = space_to_json(f.target());
  j["assignment"] = f.assignment();
  return j;
}

inline void write_map(const std::filesystem::path& path, const PointMap& f) {
  detail::store_json_file(path, map_to_json(f));
}

inline json check_report_to_json(const CheckReport& rep) {
  json j;
  j["check"] = rep.check;
  j["verdict"] = verdict_name(rep.verdict);
  j["scope"] = rep.scope;
  if (!rep.values.empty()) j["values"] = rep.values;
  if (!rep.witness.empty()) j["witness"] = rep.witness;
  if (!rep.parts.empty()) {
    json parts = json::array();
    for (const auto& part : rep.parts) parts.push_back(check_report_to_json(part));
    j["parts"] = std::move(parts);
  }
  return j;
}

inline json coefficient_report_to_json(const CoefficientReport& rep) {
  json j;
  j["raw_sup"] = rep.raw_sup;
  j["coefficient"] = rep.coefficient;
  if (rep.has_witness) j["witness"] = rep.witness;
  return j;
}

inline json distortion_report_to_json(const DistortionReport& rep) {
  json j;
  j["subset_a"] = rep.subset_a;
  j["subset_b"] = rep.subset_b;
  j["diam_a"] = rep.diam_a;
  j["diam_b"] = rep.diam_b;
  j["diam_fa"] = rep.diam_fa;
  j["diam_fb"] = rep.diam_fb;
  j["lower_bound"] = rep.lower_bound;
  j["ratio"] = rep.ratio;
  j["upper_bound"] = rep.upper_bound;
  j["k1"] = rep.k1;
  j["k2"] = rep.k2;
  j["coefficients_overridden"] = rep.coefficients_overridden;
  j["holds"] = rep.holds;
  return j;
}

inline json sweep_result_to_json(const SweepResult& result) {
  json j;
  j["pairs_checked"] = result.pairs_checked;
  j["skipped_degenerate"] = result.skipped_degenerate;
  j["violations"] = result.violations;
  json reports = json::array();
  for (const auto& rep : result.reports) reports.push_back(distortion_report_to_json(rep));
  j["reports"] = std::move(reports);
  return j;
}

inline json preservation_report_to_json(const PreservationReport& rep) {
  json j;
  j["k1"] = rep.k1;
  j["k2_estimate"] = rep.k2_estimate;
  if (rep.k2_closed_form) j["k2_closed_form"] = *rep.k2_closed_form;
  if (rep.k2_empirical) j["k2_empirical"] = *rep.k2_empirical;
  if (rep.bilipschitz) j["bilipschitz"] = *rep.bilipschitz;
  if (!rep.grid_spec.empty()) j["grid_spec"] = rep.grid_spec;
  j["scope"] = rep.scope;
  j["holds"] = rep.holds;
  return j;
}

inline json additivity_report_to_json(const AdditivityReport& rep) {
  json j;
  j["holds"] = rep.holds;
  j["quadruples_checked"] = rep.quadruples_checked;
  if (rep.has_witness) {
    j["witness"] = rep.witness;
    j["sums"] = rep.sums;
    j["slack"] = rep.slack;
  }
  return j;
}

inline json tuple_scan_to_json(const TupleScanResult& result) {
  json j;
  j["samples"] = result.samples;
  j["premise_true"] = result.premise_true;
  j["conclusion_failed"] = result.conclusion_failed;
  if (result.first_failure) {
    const auto& s = *result.first_failure;
    j["first_failure"] = {s.t1, s.t2, s.t3, s.t4, s.t5};
  }
  return j;
}

inline json power_fit_to_json(const PowerFit& fit) {
  json j;
  j["C"] = fit.scale;
  j["alpha"] = fit.exponent;
  j["profile"] = fit.profile;
  return j;
}

inline void write_report(const std::filesystem::path& path, const json& j) {
  detail::store_json_file(path, j);
}

}  // namespace metricforge
