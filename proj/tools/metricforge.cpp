// Command-line front end. Exit codes: 0 every performed check holds, 1 a
// checked inequality or axiom expectation is violated (details and witness
// on stdout), 2 malformed input or usage (diagnostic on stderr). Reports go
// to stdout; --out additionally writes the machine-readable JSON artifact.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metricforge/metricforge.hpp"

namespace mf = metricforge;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_indices(const std::vector<std::size_t>& idx) {
  std::string out = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(idx[i]);
  }
  return out + ")";
}

void print_check(const mf::CheckReport& rep, int indent = 0) {
  const std::string pad(std::size_t(indent) * 2, ' ');
  std::cout << pad << rep.check << ": " << mf::verdict_name(rep.verdict) << " [" << rep.scope
            << "]\n";
  if (!rep.witness.empty()) std::cout << pad << "  witness " << join_indices(rep.witness) << "\n";
  for (const auto& [key, value] : rep.values)
    std::cout << pad << "  " << key << " = " << fmt(value) << "\n";
  for (const auto& part : rep.parts) print_check(part, indent + 1);
}

void maybe_write(const std::optional<std::string>& path, const mf::json& j) {
  if (path) mf::write_report(*path, j);
}

int verdict_exit(mf::Verdict v) { return v == mf::Verdict::Holds ? 0 : 1; }

struct Options {
  double tol_rel = 1e-9;
  unsigned threads = 0;

  mf::Tolerance tol() const {
    mf::Tolerance t;
    t.rel = tol_rel;
    return t;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite semimetric spaces, quasisymmetric maps, and their inequalities"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--tol", opt.tol_rel, "relative tolerance for inequality checks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--threads", opt.threads,
                 "worker cap, 0 = METRICFORGE_THREADS or hardware")
      ->capture_default_str();

  int exit_code = 0;

  // validate <space>
  {
    auto* sub = app.add_subcommand("validate", "check a space file against the semimetric axioms");
    sub->fallthrough();
    auto space_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("space", *space_path, "space JSON file")->required();
    sub->add_option("--out", *out, "write a summary JSON report");
    sub->callback([&, space_path, out] {
      mf::FiniteSemimetricSpace X = mf::read_space(*space_path);
      std::cout << "valid space with " << X.size() << " points\n";
      mf::json j;
      j["valid"] = true;
      j["points"] = X.size();
      j["labels"] = X.labels();
      maybe_write(*out, j);
    });
  }

  // coefficient <space>
  {
    auto* sub = app.add_subcommand("coefficient", "relaxation constant of the triangle inequality");
    sub->fallthrough();
    auto space_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("space", *space_path, "space JSON file")->required();
    sub->add_option("--out", *out, "write the coefficient report JSON");
    sub->callback([&, space_path, out] {
      mf::FiniteSemimetricSpace X = mf::read_space(*space_path);
      mf::CoefficientReport rep = mf::relaxation_constant(X, opt.threads);
      std::cout << "raw_sup = " << fmt(rep.raw_sup) << "\n";
      std::cout << "coefficient = " << fmt(rep.coefficient) << "\n";
      if (rep.has_witness)
        std::cout << "witness = (" << rep.witness[0] << "," << rep.witness[1] << ","
                  << rep.witness[2] << ")\n";
      maybe_write(*out, mf::coefficient_report_to_json(rep));
    });
  }

  // diameter <space> --subset
  {
    auto* sub = app.add_subcommand("diameter", "diameter of a point subset");
    sub->fallthrough();
    auto space_path = std::make_shared<std::string>();
    auto subset = std::make_shared<std::vector<std::size_t>>();
    sub->add_option("space", *space_path, "space JSON file")->required();
    sub->add_option("--subset", *subset, "comma-separated point indices")
        ->required()
        ->delimiter(',');
    sub->callback([&, space_path, subset] {
      mf::FiniteSemimetricSpace X = mf::read_space(*space_path);
      std::cout << "diameter = " << fmt(mf::diameter(X, mf::SubsetRef{*subset})) << "\n";
    });
  }

  // classify <space> [--expect CLASS]
  {
    auto* sub = app.add_subcommand("classify", "metric / ultrametric / additive classification");
    sub->fallthrough();
    auto space_path = std::make_shared<std::string>();
    auto expect = std::make_shared<std::string>();
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("space", *space_path, "space JSON file")->required();
    sub->add_option("--expect", *expect, "exit 1 unless the space is of this class")
        ->check(CLI::IsMember({"semimetric", "metric", "ultrametric", "additive"}));
    sub->add_option("--out", *out, "write the classification JSON");
    sub->callback([&, space_path, expect, out] {
      mf::FiniteSemimetricSpace X = mf::read_space(*space_path);
      const mf::Tolerance tol = opt.tol();
      mf::CoefficientReport coeff = mf::relaxation_constant(X, opt.threads);
      const bool metric = coeff.raw_sup <= 1.0 + tol.margin(1.0);
      const bool ultra = mf::is_ultrametric(X, tol, opt.threads);
      const bool additive = mf::is_additive(X, tol, opt.threads).holds;
      std::cout << "coefficient = " << fmt(coeff.coefficient) << "\n";
      std::cout << "metric: " << (metric ? "yes" : "no") << "\n";
      std::cout << "ultrametric: " << (ultra ? "yes" : "no") << "\n";
      std::cout << "additive: " << (additive ? "yes" : "no") << "\n";
      mf::json j;
      j["coefficient"] = coeff.coefficient;
      j["metric"] = metric;
      j["ultrametric"] = ultra;
      j["additive"] = additive;
      maybe_write(*out, j);
      if (!expect->empty()) {
        bool ok = *expect == "semimetric" || (*expect == "metric" && metric) ||
                  (*expect == "ultrametric" && ultra) || (*expect == "additive" && additive);
        if (!ok) {
          std::cout << "expectation \"" << *expect << "\" not met\n";
          exit_code = 1;
        }
      }
    });
  }

  // qs-check --map --modulus
  {
    auto* sub = app.add_subcommand("qs-check", "test a map against a control modulus");
    sub->fallthrough();
    auto map_path = std::make_shared<std::string>();
    auto mod_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("--map", *map_path, "map JSON file")->required();
    sub->add_option("--modulus", *mod_path, "modulus JSON file")->required();
    sub->add_option("--out", *out, "write the check report JSON");
    sub->callback([&, map_path, mod_path, out] {
      mf::PointMap f = mf::read_map(*map_path);
      mf::Modulus eta = mf::read_modulus(*mod_path);
      mf::CheckReport rep = mf::check_quasisymmetry(f, eta, opt.tol(), opt.threads);
      print_check(rep);
      maybe_write(*out, mf::check_report_to_json(rep));
      exit_code = verdict_exit(rep.verdict);
    });
  }

  // qs-fit --map
  {
    auto* sub = app.add_subcommand("qs-fit", "least dominating power-law modulus of a map");
    sub->fallthrough();
    auto map_path = std::make_shared<std::string>();
    auto lo = std::make_shared<double>(0.05);
    auto hi = std::make_shared<double>(4.0);
    auto count = std::make_shared<std::size_t>(200);
    auto out = std::make_shared<std::optional<std::string>>();
    auto mod_out = std::make_shared<std::optional<std::string>>();
    sub->add_option("--map", *map_path, "map JSON file")->required();
    sub->add_option("--alpha-lo", *lo, "exponent grid lower end")->capture_default_str();
    sub->add_option("--alpha-hi", *hi, "exponent grid upper end")->capture_default_str();
    sub->add_option("--alpha-count", *count, "exponent grid size")->capture_default_str();
    sub->add_option("--out", *out, "write the fit JSON (profile included)");
    sub->add_option("--write-modulus", *mod_out, "write the fitted modulus as a modulus file");
    sub->callback([&, map_path, lo, hi, count, out, mod_out] {
      mf::PointMap f = mf::read_map(*map_path);
      mf::ControlFunction cf = mf::control_function(f, opt.threads);
      mf::PowerFit fit =
          mf::fit_dominating_power(cf, mf::log_grid(mf::GridSpec{*lo, *hi, *count}));
      std::cout << "C = " << fmt(fit.scale) << "\n";
      std::cout << "alpha = " << fmt(fit.exponent) << "\n";
      maybe_write(*out, mf::power_fit_to_json(fit));
      if (*mod_out) mf::write_modulus(**mod_out, fit.modulus());
    });
  }

  // qs-inverse --map --modulus
  {
    auto* sub = app.add_subcommand(
        "qs-inverse", "check the inverse map against the inverse control modulus");
    sub->fallthrough();
    auto map_path = std::make_shared<std::string>();
    auto mod_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::optional<std::string>>();
    auto map_out = std::make_shared<std::optional<std::string>>();
    auto mod_out = std::make_shared<std::optional<std::string>>();
    sub->add_option("--map", *map_path, "map JSON file (must be surjective)")->required();
    sub->add_option("--modulus", *mod_path, "modulus JSON file")->required();
    sub->add_option("--out", *out, "write the round-trip report JSON");
    sub->add_option("--write-map", *map_out, "write the inverse map as a map file");
    sub->add_option("--write-modulus", *mod_out,
                    "write the closed-form inverse modulus (power laws only)");
    sub->callback([&, map_path, mod_path, out, map_out, mod_out] {
      mf::PointMap f = mf::read_map(*map_path);
      mf::Modulus eta = mf::read_modulus(*mod_path);
      mf::CheckReport rep = mf::verify_inverse_round_trip(f, eta, opt.tol(), opt.threads);
      print_check(rep);
      maybe_write(*out, mf::check_report_to_json(rep));
      if (*map_out) mf::write_map(**map_out, mf::inverse_map(f));
      if (*mod_out) {
        auto closed = mf::inverse_modulus_closed_form(eta);
        if (!closed)
          throw mf::Error(mf::ErrorCode::InvalidModulus,
                          "no closed-form inverse for this modulus family");
        mf::write_modulus(**mod_out, *closed);
      }
      exit_code = verdict_exit(rep.verdict);
    });
  }

  // distortion-sweep --map --modulus [--subset-a --subset-b | sweep opts]
  {
    auto* sub = app.add_subcommand(
        "distortion-sweep", "diameter-distortion bounds over nested subset pairs");
    sub->fallthrough();
    auto map_path = std::make_shared<std::string>();
    auto mod_path = std::make_shared<std::string>();
    auto subset_a = std::make_shared<std::vector<std::size_t>>();
    auto subset_b = std::make_shared<std::vector<std::size_t>>();
    auto samples = std::make_shared<std::size_t>(0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto k1_override = std::make_shared<double>(0.0);
    auto k2_override = std::make_shared<double>(0.0);
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("--map", *map_path, "map JSON file")->required();
    sub->add_option("--modulus", *mod_path, "modulus JSON file")->required();
    auto* oa = sub->add_option("--subset-a", *subset_a, "single pair: indices of A")
                   ->delimiter(',');
    sub->add_option("--subset-b", *subset_b, "single pair: indices of B")
        ->delimiter(',')
        ->needs(oa);
    sub->add_option("--samples", *samples,
                    "sampled sweep size (default: exhaustive, which needs n <= 8)");
    sub->add_option("--seed", *seed, "seed for the sampled sweep")->capture_default_str();
    auto* o1 = sub->add_option("--k1", *k1_override, "override the source coefficient");
    auto* o2 = sub->add_option("--k2", *k2_override, "override the target coefficient");
    sub->add_option("--out", *out, "write the sweep (or single report) JSON");
    sub->callback([&, map_path, mod_path, subset_a, subset_b, samples, seed, k1_override,
                   k2_override, out, oa, o1, o2] {
      mf::PointMap f = mf::read_map(*map_path);
      mf::Modulus eta = mf::read_modulus(*mod_path);
      const mf::Tolerance tol = opt.tol();
      if (!subset_a->empty() || oa->count() > 0) {
        mf::CoefficientOverride ov;
        if (o1->count() > 0) ov.k1 = *k1_override;
        if (o2->count() > 0) ov.k2 = *k2_override;
        mf::DistortionReport rep = mf::check_diameter_distortion(
            f, eta, mf::SubsetRef{*subset_a}, mf::SubsetRef{*subset_b}, tol, opt.threads, ov);
        std::cout << "diam_a = " << fmt(rep.diam_a) << ", diam_b = " << fmt(rep.diam_b) << "\n";
        std::cout << "lower = " << fmt(rep.lower_bound) << ", ratio = " << fmt(rep.ratio)
                  << ", upper = " << fmt(rep.upper_bound) << "\n";
        std::cout << (rep.holds ? "holds" : "violated") << "\n";
        maybe_write(*out, mf::distortion_report_to_json(rep));
        exit_code = rep.holds ? 0 : 1;
        return;
      }
      mf::SweepStrategy strategy = mf::Exhaustive{};
      if (*samples > 0) strategy = mf::Sampled{*samples, *seed};
      mf::SweepResult result = mf::sweep_subsets(f, eta, strategy, tol, opt.threads);
      std::printf("%-16s %-16s %12s %12s %12s %s\n", "A", "B", "lower", "ratio", "upper", "holds");
      for (const auto& rep : result.reports)
        std::printf("%-16s %-16s %12.6g %12.6g %12.6g %s\n", join_indices(rep.subset_a).c_str(),
                    join_indices(rep.subset_b).c_str(), rep.lower_bound, rep.ratio,
                    rep.upper_bound, rep.holds ? "yes" : "NO");
      std::cout << "pairs = " << result.pairs_checked
                << ", skipped degenerate = " << result.skipped_degenerate
                << ", violations = " << result.violations << "\n";
      maybe_write(*out, mf::sweep_result_to_json(result));
      exit_code = result.violations == 0 ? 0 : 1;
    });
  }

  // cor23 --modulus --k1 --k2 --t
  {
    auto* sub = app.add_subcommand(
        "cor23", "product lower bound 2*K2*eta(2*K1*t)*eta(1/t) >= 1 for a diameter ratio");
    sub->fallthrough();
    auto mod_path = std::make_shared<std::string>();
    auto k1 = std::make_shared<double>(1.0);
    auto k2 = std::make_shared<double>(1.0);
    auto t = std::make_shared<double>(1.0);
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("--modulus", *mod_path, "modulus JSON file")->required();
    sub->add_option("--k1", *k1, "source coefficient")->capture_default_str();
    sub->add_option("--k2", *k2, "target coefficient")->capture_default_str();
    sub->add_option("--t", *t, "diameter ratio in (0,1]")->required();
    sub->add_option("--out", *out, "write the check report JSON");
    sub->callback([&, mod_path, k1, k2, t, out] {
      mf::Modulus eta = mf::read_modulus(*mod_path);
      mf::CheckReport rep = mf::check_diameter_product_bound(eta, *k1, *k2, *t, opt.tol());
      print_check(rep);
      maybe_write(*out, mf::check_report_to_json(rep));
      exit_code = verdict_exit(rep.verdict);
    });
  }

  // preserve-k2 --modulus [--k1 | --space [--realizable] | --map]
  {
    auto* sub = app.add_subcommand(
        "preserve-k2", "minimal image coefficient implied by a control modulus");
    sub->fallthrough();
    auto mod_path = std::make_shared<std::string>();
    auto k1 = std::make_shared<double>(1.0);
    auto space_path = std::make_shared<std::optional<std::string>>();
    auto map_path = std::make_shared<std::optional<std::string>>();
    auto realizable = std::make_shared<bool>(false);
    auto grid_count = std::make_shared<std::size_t>(4096);
    auto grid_span = std::make_shared<double>(1e8);
    auto grid_offset = std::make_shared<double>(1e-6);
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("--modulus", *mod_path, "modulus JSON file")->required();
    auto* ok1 = sub->add_option("--k1", *k1, "source coefficient")->capture_default_str();
    sub->add_option("--space", *space_path,
                    "space file; supplies K1, and the ratio pairs with --realizable");
    sub->add_option("--map", *map_path, "surjective map file; compares the estimate "
                                        "against the actual image coefficient");
    sub->add_flag("--realizable", *realizable,
                  "restrict the search to ratio pairs realizable in --space");
    sub->add_option("--grid-count", *grid_count, "boundary grid size")->capture_default_str();
    sub->add_option("--grid-span", *grid_span, "boundary grid upper end, times K1")
        ->capture_default_str();
    sub->add_option("--grid-offset", *grid_offset, "boundary grid lower gap above K1")
        ->capture_default_str();
    sub->add_option("--out", *out, "write the preservation report JSON");
    sub->callback([&, mod_path, k1, space_path, map_path, realizable, grid_count, grid_span,
                   grid_offset, out, ok1] {
      mf::Modulus eta = mf::read_modulus(*mod_path);
      const mf::BoundaryGrid grid{*grid_count, *grid_offset, *grid_span};
      mf::PreservationReport rep;
      if (*map_path) {
        mf::PointMap f = mf::read_map(**map_path);
        rep = mf::verify_image_coefficient_bound(f, eta, grid, opt.tol(), opt.threads);
        exit_code = rep.holds ? 0 : 1;
      } else if (*realizable) {
        if (!*space_path)
          throw mf::Error(mf::ErrorCode::InvalidSpec, "--realizable needs --space");
        rep = mf::minimal_k2_realizable(eta, mf::read_space(**space_path), opt.threads);
      } else {
        double k1_value = *k1;
        if (*space_path)
          k1_value =
              mf::relaxation_constant(mf::read_space(**space_path), opt.threads).coefficient;
        else if (ok1->count() == 0)
          throw mf::Error(mf::ErrorCode::InvalidSpec, "supply --k1 or --space");
        rep = mf::minimal_k2(eta, k1_value, grid, opt.threads);
      }
      std::cout << "k1 = " << fmt(rep.k1) << "\n";
      std::cout << "k2_estimate = " << fmt(rep.k2_estimate) << " [" << rep.scope << "]\n";
      if (rep.k2_closed_form) std::cout << "k2_closed_form = " << fmt(*rep.k2_closed_form) << "\n";
      if (rep.k2_empirical) std::cout << "k2_empirical = " << fmt(*rep.k2_empirical) << "\n";
      if (rep.k2_empirical) std::cout << (rep.holds ? "holds" : "violated") << "\n";
      maybe_write(*out, mf::preservation_report_to_json(rep));
    });
  }

  // cor32 --modulus --k1 --k2
  {
    auto* sub = app.add_subcommand(
        "cor32", "modulus conditions that guarantee an image coefficient K2");
    sub->fallthrough();
    auto mod_path = std::make_shared<std::string>();
    auto k1 = std::make_shared<double>(1.0);
    auto k2 = std::make_shared<double>(1.0);
    auto grid_lo = std::make_shared<double>(1e-4);
    auto grid_hi = std::make_shared<double>(1e4);
    auto grid_count = std::make_shared<std::size_t>(128);
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("--modulus", *mod_path, "modulus JSON file")->required();
    sub->add_option("--k1", *k1, "source coefficient")->capture_default_str();
    sub->add_option("--k2", *k2, "candidate image coefficient")->capture_default_str();
    sub->add_option("--grid-lo", *grid_lo, "grid lower end")->capture_default_str();
    sub->add_option("--grid-hi", *grid_hi, "grid upper end")->capture_default_str();
    sub->add_option("--grid-count", *grid_count, "grid size per axis")->capture_default_str();
    sub->add_option("--out", *out, "write the check report JSON");
    sub->callback([&, mod_path, k1, k2, grid_lo, grid_hi, grid_count, out] {
      mf::Modulus eta = mf::read_modulus(*mod_path);
      mf::CheckReport rep = mf::check_preservation_conditions(
          eta, *k1, *k2, mf::GridSpec{*grid_lo, *grid_hi, *grid_count}, opt.tol(), opt.threads);
      print_check(rep);
      maybe_write(*out, mf::check_report_to_json(rep));
      exit_code = verdict_exit(rep.verdict);
    });
  }

  // bilip --map
  {
    auto* sub = app.add_subcommand("bilip", "least distortion constant of a map");
    sub->fallthrough();
    auto map_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("--map", *map_path, "map JSON file")->required();
    sub->add_option("--out", *out, "write {\"bilipschitz\": L}");
    sub->callback([&, map_path, out] {
      const double L = mf::bilipschitz_constant(mf::read_map(*map_path));
      std::cout << "L = " << fmt(L) << "\n";
      mf::json j;
      j["bilipschitz"] = L;
      maybe_write(*out, j);
    });
  }

  // cor37 --map
  {
    auto* sub = app.add_subcommand(
        "cor37", "image coefficient against the bi-Lipschitz bound K1*L^2");
    sub->fallthrough();
    auto map_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("--map", *map_path, "surjective map JSON file")->required();
    sub->add_option("--out", *out, "write the preservation report JSON");
    sub->callback([&, map_path, out] {
      mf::PointMap f = mf::read_map(*map_path);
      mf::PreservationReport rep = mf::check_bilipschitz_bound(f, opt.tol(), opt.threads);
      std::cout << "k1 = " << fmt(rep.k1) << ", L = " << fmt(*rep.bilipschitz) << "\n";
      std::cout << "bound = " << fmt(rep.k2_estimate)
                << ", empirical = " << fmt(*rep.k2_empirical) << "\n";
      std::cout << (rep.holds ? "holds" : "violated") << "\n";
      maybe_write(*out, mf::preservation_report_to_json(rep));
      exit_code = rep.holds ? 0 : 1;
    });
  }

  // additive-check <space>
  {
    auto* sub = app.add_subcommand("additive-check", "four-point inequality over all quadruples");
    sub->fallthrough();
    auto space_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("space", *space_path, "space JSON file")->required();
    sub->add_option("--out", *out, "write the additivity report JSON");
    sub->callback([&, space_path, out] {
      mf::AdditivityReport rep = mf::is_additive(mf::read_space(*space_path), opt.tol(),
                                                 opt.threads);
      std::cout << "additive: " << (rep.holds ? "yes" : "no") << " (" << rep.quadruples_checked
                << " quadruples)\n";
      if (rep.has_witness) {
        std::cout << "worst quadruple (" << rep.witness[0] << "," << rep.witness[1] << ","
                  << rep.witness[2] << "," << rep.witness[3] << ") sums " << fmt(rep.sums[0])
                  << ", " << fmt(rep.sums[1]) << ", " << fmt(rep.sums[2]) << " slack "
                  << fmt(rep.slack) << "\n";
      }
      maybe_write(*out, mf::additivity_report_to_json(rep));
      exit_code = rep.holds ? 0 : 1;
    });
  }

  // thm41-tuples --modulus --count --seed
  {
    auto* sub = app.add_subcommand(
        "thm41-tuples", "random scan of the additivity ratio implication for a modulus");
    sub->fallthrough();
    auto mod_path = std::make_shared<std::string>();
    auto count = std::make_shared<std::size_t>(100000);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto lo = std::make_shared<double>(1e-3);
    auto hi = std::make_shared<double>(1e3);
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("--modulus", *mod_path, "modulus JSON file")->required();
    sub->add_option("--count", *count, "number of sampled tuples")->capture_default_str();
    sub->add_option("--seed", *seed, "sample seed")->capture_default_str();
    sub->add_option("--lo", *lo, "tuple component range, lower")->capture_default_str();
    sub->add_option("--hi", *hi, "tuple component range, upper")->capture_default_str();
    sub->add_option("--out", *out, "write the scan result JSON");
    sub->callback([&, mod_path, count, seed, lo, hi, out] {
      mf::Modulus eta = mf::read_modulus(*mod_path);
      mf::TupleScanResult result =
          mf::scan_tuple_implication(eta, *count, *seed, opt.tol(), opt.threads, *lo, *hi);
      std::cout << "samples = " << result.samples << "\n";
      std::cout << "premise_true = " << result.premise_true << "\n";
      std::cout << "conclusion_failed = " << result.conclusion_failed << "\n";
      if (result.first_failure) {
        const auto& s = *result.first_failure;
        std::cout << "first failure (" << fmt(s.t1) << "," << fmt(s.t2) << "," << fmt(s.t3) << ","
                  << fmt(s.t4) << "," << fmt(s.t5) << ")\n";
      }
      maybe_write(*out, mf::tuple_scan_to_json(result));
      exit_code = result.conclusion_failed == 0 ? 0 : 1;
    });
  }

  // thm41-empirical --map --modulus
  {
    auto* sub = app.add_subcommand(
        "thm41-empirical", "additivity preservation on a concrete quasisymmetric map");
    sub->fallthrough();
    auto map_path = std::make_shared<std::string>();
    auto mod_path = std::make_shared<std::string>();
    auto samples = std::make_shared<std::size_t>(100000);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::optional<std::string>>();
    sub->add_option("--map", *map_path, "surjective map JSON file, additive source")->required();
    sub->add_option("--modulus", *mod_path, "modulus JSON file")->required();
    sub->add_option("--samples", *samples, "quadruple samples when n > 12")
        ->capture_default_str();
    sub->add_option("--seed", *seed, "sample seed")->capture_default_str();
    sub->add_option("--out", *out, "write the check report JSON");
    sub->callback([&, map_path, mod_path, samples, seed, out] {
      mf::PointMap f = mf::read_map(*map_path);
      mf::Modulus eta = mf::read_modulus(*mod_path);
      mf::CheckReport rep =
          mf::verify_additivity_preservation(f, eta, opt.tol(), opt.threads, *samples, *seed);
      print_check(rep);
      maybe_write(*out, mf::check_report_to_json(rep));
      exit_code = verdict_exit(rep.verdict);
    });
  }

  // generate --kind ... --out
  {
    auto* sub = app.add_subcommand("generate", "seeded random instance generator");
    sub->fallthrough();
    auto kind = std::make_shared<std::string>();
    auto inner_kind = std::make_shared<std::string>("metric");
    auto n = std::make_shared<std::size_t>(8);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto density = std::make_shared<double>(0.3);
    auto levels = std::make_shared<std::size_t>(3);
    auto alpha = std::make_shared<double>(0.5);
    auto range = std::make_shared<std::vector<double>>();
    auto out = std::make_shared<std::string>();
    auto map_out = std::make_shared<std::optional<std::string>>();
    auto mod_out = std::make_shared<std::optional<std::string>>();
    sub->add_option("--kind", *kind, "metric | tree | ultrametric | snowflake | bilip")
        ->required()
        ->check(CLI::IsMember({"metric", "tree", "ultrametric", "snowflake", "bilip"}));
    sub->add_option("--inner-kind", *inner_kind, "inner instance for snowflake/bilip")
        ->check(CLI::IsMember({"metric", "tree", "ultrametric"}))
        ->capture_default_str();
    sub->add_option("--n", *n, "points (leaves for tree kind)")->capture_default_str();
    sub->add_option("--seed", *seed, "generator seed")->capture_default_str();
    sub->add_option("--density", *density, "extra-edge density for metric kind")
        ->capture_default_str();
    sub->add_option("--levels", *levels, "merge levels for ultrametric kind")
        ->capture_default_str();
    sub->add_option("--alpha", *alpha, "snowflake exponent")->capture_default_str();
    sub->add_option("--range", *range,
                    "weight/height/multiplier range lo,hi (default 1,2; bilip 0.5,2)")
        ->delimiter(',')
        ->expected(2);
    sub->add_option("--out", *out, "output space file")->required();
    sub->add_option("--map-out", *map_out, "output map file (snowflake/bilip)");
    sub->add_option("--modulus-out", *mod_out, "output control modulus file (snowflake/bilip)");
    sub->callback([&, kind, inner_kind, n, seed, density, levels, alpha, range, out, map_out,
                   mod_out] {
      auto base_spec = [&](const std::string& k, std::uint64_t s) {
        mf::GeneratorSpec spec;
        spec.seed = s;
        double lo = 1.0, hi = 2.0;
        if (range->size() == 2) {
          lo = (*range)[0];
          hi = (*range)[1];
        }
        if (k == "metric")
          spec.kind = mf::RandomMetricSpec{*n, *density, lo, hi};
        else if (k == "tree")
          spec.kind = mf::RandomTreeMetricSpec{*n, lo, hi};
        else
          spec.kind = mf::RandomUltrametricSpec{*n, *levels, lo, hi};
        return spec;
      };
      mf::GeneratorSpec spec;
      if (*kind == "snowflake" || *kind == "bilip") {
        // the inner instance draws from its own stream, decorrelated from the
        // outer multipliers
        const std::uint64_t inner_seed = mf::SplitMix64(*seed).next_u64();
        auto inner = std::make_shared<mf::GeneratorSpec>(base_spec(*inner_kind, inner_seed));
        spec.seed = *seed;
        if (*kind == "snowflake")
          spec.kind = mf::SnowflakeOfSpec{inner, *alpha};
        else {
          double lo = 0.5, hi = 2.0;
          if (range->size() == 2) {
            lo = (*range)[0];
            hi = (*range)[1];
          }
          spec.kind = mf::BiLipschitzImageSpec{inner, lo, hi};
        }
      } else {
        spec = base_spec(*kind, *seed);
      }
      mf::GeneratedInstance inst = mf::generate(spec);
      mf::write_space(*out, inst.space);
      std::cout << "wrote " << *out << " (" << inst.kind << ", " << inst.space.size()
                << " points)\n";
      if (*map_out) {
        if (!inst.map)
          throw mf::Error(mf::ErrorCode::InvalidSpec,
                          "--map-out applies to snowflake/bilip kinds only");
        mf::write_map(**map_out, *inst.map);
        std::cout << "wrote " << **map_out << "\n";
      }
      if (*mod_out) {
        if (!inst.control)
          throw mf::Error(mf::ErrorCode::InvalidSpec,
                          "--modulus-out applies to snowflake/bilip kinds only");
        mf::write_modulus(**mod_out, *inst.control);
        std::cout << "wrote " << **mod_out << "\n";
      }
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const mf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
