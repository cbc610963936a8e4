#pragma once

// Four-point structure of finite spaces. A space is additive when for every
// quadruple {x,y,z,u} the three pairing sums
//
//     d(x,y)+d(z,u),  d(x,z)+d(y,u),  d(x,u)+d(y,z)
//
// have their two largest members equal; equivalently the matrix is a tree
// metric. Ultrametrics are a subclass.
//
// Whether a quasisymmetric image of an additive space stays additive reduces
// to a per-quadruple ratio implication. With
//
//     t1 = d(x,y)/d(x,z),  t2 = d(x,y)/d(y,u),  t3 = d(x,y)/d(x,u),
//     t4 = d(x,y)/d(y,z),  t5 = d(z,x)/d(z,u)
//
// the premise (additivity of the source, in ratio form) reads
//
//     1 + (1/t1)(1/t5)  <=  max{ 1/t1 + 1/t2,  1/t3 + 1/t4 }
//
// and the conclusion demanded of the control modulus eta reads, literally,
//
//     1 + eta(1/t1) eta(1/t5)  <=  max{ 1/eta(t1) + 1/eta(t2),
//                                       1/eta(t3) + 1/eta(t4) }.
//
// Note the asymmetry: the left side applies eta to reciprocals while the
// right side takes reciprocals of eta. That form is implemented exactly as
// stated; no symmetrized variant is substituted. For the identity modulus
// the two inequalities are the same arithmetic expression, so the conclusion
// can never fail when the premise holds.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
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

struct TupleSample {
  double t1 = 1.0, t2 = 1.0, t3 = 1.0, t4 = 1.0, t5 = 1.0;
};

struct AdditivityReport {
  bool holds = true;
  std::array<std::size_t, 4> witness{0, 0, 0, 0};  // worst quadruple
  std::array<double, 3> sums{0.0, 0.0, 0.0};       // its pairing sums, canonical order
  double slack = 0.0;                              // gap between its two largest sums
  bool has_witness = false;
  std::size_t quadruples_checked = 0;
};

namespace detail {

inline std::array<double, 3> pairing_sums(const FiniteSemimetricSpace& X, std::size_t x,
                                          std::size_t y, std::size_t z, std::size_t u) {
  return {X.dist(x, y) + X.dist(z, u), X.dist(x, z) + X.dist(y, u),
          X.dist(x, u) + X.dist(y, z)};
}

// Gap between the two largest of three, relative to the largest.
inline double four_point_gap(const std::array<double, 3>& s, double& top, double& second) {
  std::array<double, 3> t = s;
  std::sort(t.begin(), t.end());
  top = t[2];
  second = t[1];
  return (top - second) / top;
}

}  // namespace detail

// Four-point check over every unordered quadruple. The witness is the
// quadruple whose top-two gap is largest relative to its own tolerance
// margin (so the verdict at the witness decides the verdict for the whole
// space), lexicographically first on ties. Spaces with fewer than 4 points
// are vacuously additive.
inline AdditivityReport is_additive(const FiniteSemimetricSpace& X, Tolerance tol = {},
                                    unsigned threads = 0) {
  const std::size_t n = X.size();
  AdditivityReport rep;
  if (n < 4) return rep;

  struct Scan {
    double gap = -1.0;  // (top - second) / margin(top)
    std::size_t x = 0, y = 0, z = 0, u = 0;
    std::size_t count = 0;
  };
  auto scan = [&](std::size_t begin, std::size_t end) {
    Scan best;
    for (std::size_t x = begin; x < end; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        for (std::size_t z = y + 1; z < n; ++z)
          for (std::size_t u = z + 1; u < n; ++u) {
            ++best.count;
            double top, second;
            detail::four_point_gap(detail::pairing_sums(X, x, y, z, u), top, second);
            const double gap = (top - second) / tol.margin(top);
            if (gap > best.gap) best = Scan{gap, x, y, z, u, best.count};
          }
    return best;
  };
  // Quadruples starting at x number C(n-1-x, 3); weighting the x-partition
  // by that count keeps worker shares even.
  std::vector<double> weights(n);
  for (std::size_t x = 0; x < n; ++x) {
    const double m = double(n - 1 - x);
    weights[x] = m * (m - 1.0) * (m - 2.0) / 6.0;
  }
  Scan best = parallel_ranges<Scan>(n, threads, weights, scan, [](Scan lhs, Scan rhs) {
    Scan out = rhs.gap > lhs.gap ? rhs : lhs;
    out.count = lhs.count + rhs.count;
    return out;
  });

  rep.quadruples_checked = best.count;
  rep.has_witness = best.gap >= 0.0;
  if (rep.has_witness) {
    rep.witness = {best.x, best.y, best.z, best.u};
    rep.sums = detail::pairing_sums(X, best.x, best.y, best.z, best.u);
    double top, second;
    detail::four_point_gap(rep.sums, top, second);
    rep.slack = top - second;
    rep.holds = best.gap <= 1.0;
  }
  return rep;
}

namespace detail {

struct TupleEval {
  bool premise = false;
  bool conclusion = false;
  double premise_lhs = 0.0, premise_rhs = 0.0;
  double conclusion_lhs = 0.0, conclusion_rhs = 0.0;
};

// Evaluates both sides of the ratio implication. For eta(t) = t both pairs
// of sides are the same expressions, hence bitwise equal.
template <ModulusLike M>
TupleEval tuple_eval(const M& eta, const TupleSample& s, Tolerance tol) {
  TupleEval e;
  e.premise_lhs = 1.0 + (1.0 / s.t1) * (1.0 / s.t5);
  e.premise_rhs = std::max(1.0 / s.t1 + 1.0 / s.t2, 1.0 / s.t3 + 1.0 / s.t4);
  e.premise = tol.leq(e.premise_lhs, e.premise_rhs);
  e.conclusion_lhs = 1.0 + eta.eval(1.0 / s.t1) * eta.eval(1.0 / s.t5);
  e.conclusion_rhs =
      std::max(1.0 / eta.eval(s.t1) + 1.0 / eta.eval(s.t2), 1.0 / eta.eval(s.t3) + 1.0 / eta.eval(s.t4));
  e.conclusion = tol.leq(e.conclusion_lhs, e.conclusion_rhs);
  return e;
}

inline void require_valid(const TupleSample& s) {
  for (double t : {s.t1, s.t2, s.t3, s.t4, s.t5})
    if (!(t > 0.0) || !std::isfinite(t))
      throw Error(ErrorCode::InvalidSpec, "tuple entries must be positive and finite");
}

}  // namespace detail

// One implication instance: premise-false samples come back NotApplicable,
// never Violated.
template <ModulusLike M>
CheckReport check_tuple_implication(const M& eta, const TupleSample& sample, Tolerance tol = {}) {
  detail::require_valid(sample);
  CheckReport rep;
  rep.check = "tuple_implication";
  const auto e = detail::tuple_eval(eta, sample, tol);
  rep.values["t1"] = sample.t1;
  rep.values["t2"] = sample.t2;
  rep.values["t3"] = sample.t3;
  rep.values["t4"] = sample.t4;
  rep.values["t5"] = sample.t5;
  rep.values["premise_lhs"] = e.premise_lhs;
  rep.values["premise_rhs"] = e.premise_rhs;
  if (!e.premise) {
    rep.verdict = Verdict::NotApplicable;
    return rep;
  }
  rep.values["conclusion_lhs"] = e.conclusion_lhs;
  rep.values["conclusion_rhs"] = e.conclusion_rhs;
  rep.verdict = e.conclusion ? Verdict::Holds : Verdict::Violated;
  return rep;
}

// Ratio tuple of an ordered quadruple of distinct points.
inline TupleSample tuples_from_space(const FiniteSemimetricSpace& X, std::size_t x, std::size_t y,
                                     std::size_t z, std::size_t u) {
  const std::array<std::size_t, 4> q{x, y, z, u};
  for (std::size_t i = 0; i < 4; ++i) {
    if (q[i] >= X.size())
      throw Error(ErrorCode::IndexOutOfRange,
                  "index " + std::to_string(q[i]) + " not below " + std::to_string(X.size()));
    for (std::size_t j = i + 1; j < 4; ++j)
      if (q[i] == q[j])
        throw Error(ErrorCode::RepeatedIndex, "index " + std::to_string(q[i]) + " repeated");
  }
  TupleSample s;
  const double dxy = X.dist(x, y);
  s.t1 = dxy / X.dist(x, z);
  s.t2 = dxy / X.dist(y, u);
  s.t3 = dxy / X.dist(x, u);
  s.t4 = dxy / X.dist(y, z);
  s.t5 = X.dist(z, x) / X.dist(z, u);
  return s;
}

struct TupleScanResult {
  std::size_t samples = 0;
  std::size_t premise_true = 0;
  std::size_t conclusion_failed = 0;
  std::optional<TupleSample> first_failure;
};

// Seeded log-uniform sampling of the implication over [lo, hi]^5.
template <ModulusLike M>
TupleScanResult scan_tuple_implication(const M& eta, std::size_t count, std::uint64_t seed,
                                       Tolerance tol = {}, unsigned threads = 0, double lo = 1e-3,
                                       double hi = 1e3) {
  if (!(lo > 0.0) || !(hi >= lo))
    throw Error(ErrorCode::InvalidSpec, "sample range needs 0 < lo <= hi");
  SplitMix64 rng(seed);
  const double llo = std::log(lo), lhi = std::log(hi);
  std::vector<TupleSample> samples(count);
  for (auto& s : samples) {
    s.t1 = std::exp(rng.uniform(llo, lhi));
    s.t2 = std::exp(rng.uniform(llo, lhi));
    s.t3 = std::exp(rng.uniform(llo, lhi));
    s.t4 = std::exp(rng.uniform(llo, lhi));
    s.t5 = std::exp(rng.uniform(llo, lhi));
  }
  struct Scan {
    std::size_t premise_true = 0;
    bool failed = false;
    std::size_t first = 0;
  };
  auto scan = [&](std::size_t begin, std::size_t end) {
    Scan part;
    for (std::size_t i = begin; i < end; ++i) {
      const auto e = detail::tuple_eval(eta, samples[i], tol);
      if (!e.premise) continue;
      ++part.premise_true;
      if (!e.conclusion && !part.failed) {
        part.failed = true;
        part.first = i;
      }
    }
    return part;
  };
  Scan total = parallel_ranges<Scan>(count, threads, {}, scan, [](Scan lhs, Scan rhs) {
    Scan out;
    out.premise_true = lhs.premise_true + rhs.premise_true;
    out.failed = lhs.failed || rhs.failed;
    out.first = lhs.failed ? lhs.first : rhs.first;
    return out;
  });
  TupleScanResult result;
  result.samples = count;
  result.premise_true = total.premise_true;
  if (total.failed) {
    result.first_failure = samples[total.first];
    // count all failures for the summary
    std::size_t failures = 0;
    for (const auto& s : samples) {
      const auto e = detail::tuple_eval(eta, s, tol);
      if (e.premise && !e.conclusion) ++failures;
    }
    result.conclusion_failed = failures;
  }
  return result;
}

// End-to-end check on a concrete surjective quasisymmetry of an additive
// source: scans the ratio implication over ordered quadruples (exhaustive
// for n <= 12, seeded sampling above), then tests the image for additivity.
// If the implication held everywhere yet the image is not additive, the
// report carries values["consistency_alarm"] = 1: that combination means a
// bug in this code, not a property of the input.
template <ModulusLike M>
CheckReport verify_additivity_preservation(const PointMap& f, const M& eta, Tolerance tol = {},
                                           unsigned threads = 0, std::size_t sample_count = 100000,
                                           std::uint64_t seed = 0) {
  const FiniteSemimetricSpace& X = f.source();
  AdditivityReport source_add = is_additive(X, tol, threads);
  if (!source_add.holds)
    throw Error(ErrorCode::NotAdditiveSource,
                "source fails the four-point check at quadruple (" +
                    std::to_string(source_add.witness[0]) + "," +
                    std::to_string(source_add.witness[1]) + "," +
                    std::to_string(source_add.witness[2]) + "," +
                    std::to_string(source_add.witness[3]) + ")");
  if (!f.surjective())
    throw Error(ErrorCode::NotSurjective,
                "target has " + std::to_string(f.target().size()) + " points, image covers " +
                    std::to_string(f.source().size()));
  CheckReport qs = check_quasisymmetry(f, eta, tol, threads);
  if (qs.verdict != Verdict::Holds) {
    std::string w;
    for (std::size_t i : qs.witness) w += (w.empty() ? "" : ",") + std::to_string(i);
    throw Error(ErrorCode::NotQuasisymmetric,
                "modulus does not dominate the map at triple (" + w + ")");
  }

  const std::size_t n = X.size();
  std::vector<std::array<std::size_t, 4>> quads;
  if (n <= 12) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x) continue;
        for (std::size_t z = 0; z < n; ++z) {
          if (z == x || z == y) continue;
          for (std::size_t u = 0; u < n; ++u) {
            if (u == x || u == y || u == z) continue;
            quads.push_back({x, y, z, u});
          }
        }
      }
  } else {
    SplitMix64 rng(seed);
    quads.reserve(sample_count);
    while (quads.size() < sample_count) {
      std::array<std::size_t, 4> q{rng.below(n), rng.below(n), rng.below(n), rng.below(n)};
      if (q[0] == q[1] || q[0] == q[2] || q[0] == q[3] || q[1] == q[2] || q[1] == q[3] ||
          q[2] == q[3])
        continue;
      quads.push_back(q);
    }
  }

  struct Scan {
    std::size_t applicable = 0;
    bool failed = false;
    std::size_t first = 0;
  };
  auto scan = [&](std::size_t begin, std::size_t end) {
    Scan part;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& q = quads[i];
      const auto e = detail::tuple_eval(eta, tuples_from_space(X, q[0], q[1], q[2], q[3]), tol);
      if (!e.premise) continue;
      ++part.applicable;
      if (!e.conclusion && !part.failed) {
        part.failed = true;
        part.first = i;
      }
    }
    return part;
  };
  Scan total = parallel_ranges<Scan>(quads.size(), threads, {}, scan, [](Scan lhs, Scan rhs) {
    Scan out;
    out.applicable = lhs.applicable + rhs.applicable;
    out.failed = lhs.failed || rhs.failed;
    out.first = lhs.failed ? lhs.first : rhs.first;
    return out;
  });

  CheckReport tuple_part;
  tuple_part.check = "tuple_condition";
  tuple_part.values["quadruples_checked"] = double(quads.size());
  tuple_part.values["premise_applicable"] = double(total.applicable);
  if (total.failed) {
    const auto& q = quads[total.first];
    tuple_part = check_tuple_implication(eta, tuples_from_space(X, q[0], q[1], q[2], q[3]), tol);
    tuple_part.check = "tuple_condition";
    tuple_part.witness = {q[0], q[1], q[2], q[3]};
    tuple_part.values["quadruples_checked"] = double(quads.size());
    tuple_part.values["premise_applicable"] = double(total.applicable);
  }
  tuple_part.scope = n <= 12 ? "exact" : "numeric estimate";

  AdditivityReport image_add = is_additive(f.target(), tol, threads);
  CheckReport image_part;
  image_part.check = "image_additivity";
  image_part.verdict = image_add.holds ? Verdict::Holds : Verdict::Violated;
  if (image_add.has_witness) {
    image_part.witness.assign(image_add.witness.begin(), image_add.witness.end());
    image_part.values["sum_xy_zu"] = image_add.sums[0];
    image_part.values["sum_xz_yu"] = image_add.sums[1];
    image_part.values["sum_xu_yz"] = image_add.sums[2];
    image_part.values["slack"] = image_add.slack;
  }

  CheckReport rep;
  rep.check = "additivity_preservation";
  rep.scope = tuple_part.scope;
  const bool tuples_ok = tuple_part.verdict == Verdict::Holds;
  if (tuples_ok && image_add.holds) {
    rep.verdict = Verdict::Holds;
  } else if (!tuples_ok) {
    rep.verdict = Verdict::NotApplicable;
  } else {
    rep.verdict = Verdict::Violated;
    rep.values["consistency_alarm"] = 1.0;
  }
  rep.parts.push_back(std::move(tuple_part));
  rep.parts.push_back(std::move(image_part));
  return rep;
}

}  // namespace metricforge
