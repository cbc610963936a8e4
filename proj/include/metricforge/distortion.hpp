#pragma once

// Diameter distortion under a quasisymmetric map f with control modulus eta.
// For nested subsets A inside B of the source with diam A > 0,
//
//     1 / (2 K2 eta(diam B / diam A))
//         <= diam f(A) / diam f(B)
//         <= eta(2 K1 diam A / diam B),
//
// where K1 and K2 are the relaxation coefficients of the source and target.
// The product form of the lower bound, 2 K2 eta(2 K1 t) eta(1/t) >= 1 at
// t = diam A / diam B, is exposed separately as a pure modulus inequality.
//
// Metric inputs have K1 = K2 = 1 and reproduce the classical bounds; nothing
// here assumes more than the semimetric axioms plus a verified modulus.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "metricforge/errors.hpp"
#include "metricforge/modulus.hpp"
#include "metricforge/parallel.hpp"
#include "metricforge/quasisym.hpp"
#include "metricforge/report.hpp"
#include "metricforge/rng.hpp"
#include "metricforge/space.hpp"
#include "metricforge/tolerance.hpp"

namespace metricforge {

struct DistortionReport {
  std::vector<std::size_t> subset_a;
  std::vector<std::size_t> subset_b;
  double diam_a = 0.0, diam_b = 0.0;
  double diam_fa = 0.0, diam_fb = 0.0;
  double lower_bound = 0.0;
  double ratio = 0.0;
  double upper_bound = 0.0;
  double k1 = 1.0, k2 = 1.0;
  bool coefficients_overridden = false;
  bool holds = false;
};

// Caller-supplied coefficients for experimentation; reports flag their use.
// Left empty, coefficients are recomputed from the actual spaces.
struct CoefficientOverride {
  std::optional<double> k1;
  std::optional<double> k2;
  bool any() const { return k1.has_value() || k2.has_value(); }
};

namespace detail {

inline double subset_diameter_image(const PointMap& f, const std::vector<std::size_t>& idx) {
  double d = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j) d = std::max(d, f.rho(idx[i], idx[j]));
  return d;
}

inline double subset_diameter_source(const PointMap& f, const std::vector<std::size_t>& idx) {
  double d = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      d = std::max(d, f.source().dist(idx[i], idx[j]));
  return d;
}

// Bounds for one nested pair; quasisymmetry and the coefficients are taken
// as already established by the caller.
template <ModulusLike M>
DistortionReport distortion_single(const PointMap& f, const M& eta,
                                   std::vector<std::size_t> idx_a, std::vector<std::size_t> idx_b,
                                   double k1, double k2, bool overridden, Tolerance tol) {
  DistortionReport rep;
  rep.subset_a = std::move(idx_a);
  rep.subset_b = std::move(idx_b);
  rep.k1 = k1;
  rep.k2 = k2;
  rep.coefficients_overridden = overridden;
  rep.diam_a = subset_diameter_source(f, rep.subset_a);
  rep.diam_b = subset_diameter_source(f, rep.subset_b);
  rep.diam_fa = subset_diameter_image(f, rep.subset_a);
  rep.diam_fb = subset_diameter_image(f, rep.subset_b);
  rep.lower_bound = 1.0 / (2.0 * k2 * eta.eval(rep.diam_b / rep.diam_a));
  rep.upper_bound = eta.eval(2.0 * k1 * rep.diam_a / rep.diam_b);
  rep.ratio = rep.diam_fa / rep.diam_fb;
  rep.holds = tol.leq(rep.lower_bound, rep.ratio) && tol.leq(rep.ratio, rep.upper_bound);
  return rep;
}

}  // namespace detail

// Verifies the double inequality for one nested pair A inside B. The
// coefficients are recomputed from the spaces unless explicitly overridden,
// and the modulus must actually dominate the map: hypotheses are checked,
// not assumed.
template <ModulusLike M>
DistortionReport check_diameter_distortion(const PointMap& f, const M& eta, const SubsetRef& a,
                                           const SubsetRef& b, Tolerance tol = {},
                                           unsigned threads = 0,
                                           const CoefficientOverride& override_k = {}) {
  auto idx_a = detail::normalized_subset(f.source(), a);
  auto idx_b = detail::normalized_subset(f.source(), b);
  if (!std::includes(idx_b.begin(), idx_b.end(), idx_a.begin(), idx_a.end()))
    throw Error(ErrorCode::NotNested, "A is not a subset of B");
  if (idx_a.size() < 2) throw Error(ErrorCode::DegenerateA, "diam A = 0");

  const double k1 = override_k.k1 ? *override_k.k1
                                  : relaxation_constant(f.source(), threads).coefficient;
  const double k2 = override_k.k2 ? *override_k.k2
                                  : relaxation_constant(f.target(), threads).coefficient;
  CheckReport qs = check_quasisymmetry(f, eta, tol, threads);
  if (qs.verdict != Verdict::Holds) {
    std::string w;
    for (std::size_t i : qs.witness) w += (w.empty() ? "" : ",") + std::to_string(i);
    throw Error(ErrorCode::NotQuasisymmetric, "modulus does not dominate the map at triple (" + w + ")");
  }
  return detail::distortion_single(f, eta, std::move(idx_a), std::move(idx_b), k1, k2,
                                   override_k.any(), tol);
}

// 2 K2 eta(2 K1 t) eta(1/t) >= 1 for a diameter ratio t in (0, 1].
inline CheckReport check_diameter_product_bound(const Modulus& eta, double k1, double k2,
                                                double t, Tolerance tol = {}) {
  if (!(k1 >= 1.0) || !(k2 >= 1.0))
    throw Error(ErrorCode::InvalidSpec, "coefficients must be >= 1");
  if (!(t > 0.0) || t > 1.0)
    throw Error(ErrorCode::InvalidRatio, "diameter ratio must lie in (0, 1], got " + std::to_string(t));
  CheckReport rep;
  rep.check = "diameter_product_bound";
  const double lhs = 2.0 * k2 * eta.eval(2.0 * k1 * t) * eta.eval(1.0 / t);
  rep.values["lhs"] = lhs;
  rep.values["t"] = t;
  rep.values["k1"] = k1;
  rep.values["k2"] = k2;
  if (!tol.geq(lhs, 1.0)) rep.verdict = Verdict::Violated;
  return rep;
}

struct Exhaustive {};
struct Sampled {
  std::size_t count = 100;
  std::uint64_t seed = 0;
};
using SweepStrategy = std::variant<Exhaustive, Sampled>;

struct SweepResult {
  std::vector<DistortionReport> reports;
  std::size_t pairs_checked = 0;
  std::size_t skipped_degenerate = 0;
  std::size_t violations = 0;
};

// Quantifies the double inequality over nested subset pairs. Exhaustive mode
// walks every nonempty B and every submask A (3^n pairs, capped at n = 8);
// sampled mode draws seeded random pairs, any n. Pairs with diam A = 0, the
// singletons, constrain nothing and are only counted.
template <ModulusLike M>
SweepResult sweep_subsets(const PointMap& f, const M& eta, const SweepStrategy& strategy,
                          Tolerance tol = {}, unsigned threads = 0) {
  const std::size_t n = f.source().size();
  CheckReport qs = check_quasisymmetry(f, eta, tol, threads);
  if (qs.verdict != Verdict::Holds) {
    std::string w;
    for (std::size_t i : qs.witness) w += (w.empty() ? "" : ",") + std::to_string(i);
    throw Error(ErrorCode::NotQuasisymmetric, "modulus does not dominate the map at triple (" + w + ")");
  }
  const double k1 = relaxation_constant(f.source(), threads).coefficient;
  const double k2 = relaxation_constant(f.target(), threads).coefficient;

  SweepResult result;
  if (std::holds_alternative<Exhaustive>(strategy)) {
    if (n > 8)
      throw Error(ErrorCode::TooLargeForExhaustive,
                  "exhaustive sweep supports at most 8 points, got " + std::to_string(n));
    struct Part {
      std::vector<DistortionReport> reports;
      std::size_t skipped = 0;
    };
    auto to_indices = [](std::uint32_t mask) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; mask; ++i, mask >>= 1)
        if (mask & 1u) idx.push_back(i);
      return idx;
    };
    // Range over B masks 1..2^n-1; masks enumerate ascending, submasks A of
    // each B descending (the standard (a-1)&b walk), giving a fixed report
    // order independent of partitioning.
    const std::uint32_t total = (std::uint32_t(1) << n) - 1;
    std::vector<double> weights(total);
    for (std::uint32_t m = 1; m <= total; ++m)
      weights[m - 1] = double(std::uint32_t(1) << std::popcount(m));
    auto scan = [&](std::size_t begin, std::size_t end) {
      Part part;
      for (std::uint32_t b = std::uint32_t(begin) + 1; b <= std::uint32_t(end); ++b) {
        if (std::popcount(b) < 2) {
          // every A inside a singleton B is degenerate
          part.skipped += std::uint32_t(1) << std::popcount(b);
          --part.skipped;  // the empty submask is not a pair
          continue;
        }
        for (std::uint32_t a = b;; a = (a - 1) & b) {
          if (a == 0) break;
          if (std::popcount(a) < 2) {
            ++part.skipped;
            continue;
          }
          part.reports.push_back(detail::distortion_single(f, eta, to_indices(a), to_indices(b),
                                                           k1, k2, false, tol));
        }
      }
      return part;
    };
    Part all = parallel_ranges<Part>(total, threads, weights, scan, [](Part lhs, Part rhs) {
      lhs.reports.insert(lhs.reports.end(), std::make_move_iterator(rhs.reports.begin()),
                         std::make_move_iterator(rhs.reports.end()));
      lhs.skipped += rhs.skipped;
      return lhs;
    });
    result.reports = std::move(all.reports);
    result.skipped_degenerate = all.skipped;
  } else {
    const auto& sampled = std::get<Sampled>(strategy);
    if (n < 2)
      throw Error(ErrorCode::InvalidSpec, "sampled sweep needs at least 2 points");
    SplitMix64 rng(sampled.seed);
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> pairs;
    pairs.reserve(sampled.count);
    while (pairs.size() < sampled.count) {
      std::vector<std::size_t> b_idx;
      for (std::size_t i = 0; i < n; ++i)
        if (rng.bernoulli(0.5)) b_idx.push_back(i);
      if (b_idx.size() < 2) continue;
      std::vector<std::size_t> a_idx;
      for (std::size_t i : b_idx)
        if (rng.bernoulli(0.5)) a_idx.push_back(i);
      if (a_idx.size() < 2) continue;
      pairs.emplace_back(std::move(a_idx), std::move(b_idx));
    }
    auto scan = [&](std::size_t begin, std::size_t end) {
      std::vector<DistortionReport> reports;
      reports.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i)
        reports.push_back(detail::distortion_single(f, eta, pairs[i].first, pairs[i].second, k1,
                                                    k2, false, tol));
      return reports;
    };
    result.reports = parallel_ranges<std::vector<DistortionReport>>(
        pairs.size(), threads, {}, scan,
        [](std::vector<DistortionReport> lhs, std::vector<DistortionReport> rhs) {
          lhs.insert(lhs.end(), std::make_move_iterator(rhs.begin()),
                     std::make_move_iterator(rhs.end()));
          return lhs;
        });
  }
  result.pairs_checked = result.reports.size();
  for (const auto& r : result.reports)
    if (!r.holds) ++result.violations;
  return result;
}

}  // namespace metricforge
