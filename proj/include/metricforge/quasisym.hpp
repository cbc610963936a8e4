#pragma once

// Quasisymmetry of point maps between finite semimetric spaces. A map f is
// eta-quasisymmetric when for every triple (x,a,b) of distinct points
//
//     d(x,a) <= t d(x,b)   implies   rho(fx,fa) <= eta(t) rho(fx,fb)
//
// for all t > 0. On a finite space the quantifier over t collapses: with
// t_i = d(x,a)/d(x,b) and s_i = rho(fx,fa)/rho(fx,fb), the implication for
// the triple holds for every t iff s_i <= eta(t_i), because the premise is
// tightest at t = t_i and eta is increasing (any t >= t_i only weakens the
// conclusion bound, any t < t_i falsifies the premise). So checking the
// finite ratio set {(t_i, s_i)} is exact, not a sampling of the definition.
//
// Triples with repeated points are excluded: b = x forces a = x by the
// semimetric axioms and both sides vanish, so they constrain nothing and
// would divide by zero.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "metricforge/errors.hpp"
#include "metricforge/modulus.hpp"
#include "metricforge/parallel.hpp"
#include "metricforge/report.hpp"
#include "metricforge/space.hpp"
#include "metricforge/tolerance.hpp"

namespace metricforge {

// Injective correspondence from source points into target points.
class PointMap {
 public:
  PointMap(FiniteSemimetricSpace source, FiniteSemimetricSpace target,
           std::vector<std::size_t> assignment)
      : source_(std::move(source)), target_(std::move(target)), assignment_(std::move(assignment)) {
    if (assignment_.size() != source_.size())
      throw Error(ErrorCode::InvalidAssignment,
                  "assignment has " + std::to_string(assignment_.size()) + " entries for " +
                      std::to_string(source_.size()) + " source points");
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < assignment_.size(); ++i) {
      const std::size_t j = assignment_[i];
      if (j >= target_.size())
        throw Error(ErrorCode::InvalidAssignment,
                    "source point " + std::to_string(i) + " maps to " + std::to_string(j) +
                        ", not below " + std::to_string(target_.size()));
      if (!seen.insert(j).second)
        throw Error(ErrorCode::InvalidAssignment,
                    "target point " + std::to_string(j) + " has two preimages");
    }
  }

  const FiniteSemimetricSpace& source() const { return source_; }
  const FiniteSemimetricSpace& target() const { return target_; }
  const std::vector<std::size_t>& assignment() const { return assignment_; }

  std::size_t apply(std::size_t i) const { return assignment_[i]; }
  bool surjective() const { return source_.size() == target_.size(); }

  // Image distance of two source points.
  double rho(std::size_t i, std::size_t j) const {
    return target_.dist(assignment_[i], assignment_[j]);
  }

 private:
  FiniteSemimetricSpace source_;
  FiniteSemimetricSpace target_;
  std::vector<std::size_t> assignment_;
};

inline PointMap identity_map(const FiniteSemimetricSpace& X) {
  std::vector<std::size_t> assignment(X.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) assignment[i] = i;
  return PointMap(X, X, std::move(assignment));
}

// One ordered triple's ratio data: t on the source side, s on the image side.
struct ControlPair {
  std::size_t x = 0, a = 0, b = 0;
  double t = 0.0;
  double s = 0.0;
};

// The exact control data of a map: all n(n-1)(n-2) ratio pairs plus the
// nondecreasing step envelope H(t) = max{ s_i : t_i <= t }. A modulus
// dominates the map iff it dominates H at the breakpoints.
class ControlFunction {
 public:
  explicit ControlFunction(std::vector<ControlPair> pairs) : pairs_(std::move(pairs)) {
    std::vector<std::size_t> order(pairs_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [this](std::size_t i, std::size_t j) {
      return pairs_[i].t < pairs_[j].t;
    });
    double running = 0.0;
    for (std::size_t k : order) {
      running = std::max(running, pairs_[k].s);
      if (!steps_.empty() && steps_.back()[0] == pairs_[k].t)
        steps_.back()[1] = running;
      else
        steps_.push_back({pairs_[k].t, running});
    }
  }

  const std::vector<ControlPair>& pairs() const { return pairs_; }

  // Distinct breakpoints (t, H(t)), ascending in both coordinates.
  const std::vector<std::array<double, 2>>& breakpoints() const { return steps_; }

  // H(t); zero below the first breakpoint.
  double envelope(double t) const {
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                               [](double v, const std::array<double, 2>& p) { return v < p[0]; });
    return it == steps_.begin() ? 0.0 : (*(it - 1))[1];
  }

 private:
  std::vector<ControlPair> pairs_;
  std::vector<std::array<double, 2>> steps_;
};

// Gathers every ordered-triple ratio pair in lexicographic (x,a,b) order.
inline ControlFunction control_function(const PointMap& f, unsigned threads = 0) {
  const std::size_t n = f.source().size();
  if (n < 3) return ControlFunction({});
  const std::size_t per_x = (n - 1) * (n - 2);
  std::vector<ControlPair> pairs(n * per_x);
  auto fill = [&](std::size_t begin, std::size_t end) {
    std::size_t k = begin * per_x;
    for (std::size_t x = begin; x < end; ++x)
      for (std::size_t a = 0; a < n; ++a) {
        if (a == x) continue;
        for (std::size_t b = 0; b < n; ++b) {
          if (b == x || b == a) continue;
          pairs[k++] = ControlPair{x, a, b, f.source().dist(x, a) / f.source().dist(x, b),
                                   f.rho(x, a) / f.rho(x, b)};
        }
      }
    return true;
  };
  parallel_ranges<bool>(n, threads, {}, fill, [](bool, bool) { return true; });
  return ControlFunction(std::move(pairs));
}

// Exact quasisymmetry test of f against eta over the finite breakpoint set.
// The witness is the triple with the largest raw excess s - eta(t); ties keep
// the lexicographically first triple.
template <ModulusLike M>
CheckReport check_quasisymmetry(const PointMap& f, const M& eta, Tolerance tol = {},
                                unsigned threads = 0) {
  const std::size_t n = f.source().size();
  CheckReport rep;
  rep.check = "quasisymmetry";

  struct Scan {
    bool any = false;
    double excess = -std::numeric_limits<double>::infinity();
    std::size_t x = 0, a = 0, b = 0;
    double t = 0.0, s = 0.0, bound = 0.0;
    std::size_t pairs = 0;
  };
  auto scan = [&](std::size_t begin, std::size_t end) {
    Scan best;
    for (std::size_t x = begin; x < end; ++x)
      for (std::size_t a = 0; a < n; ++a) {
        if (a == x) continue;
        for (std::size_t b = 0; b < n; ++b) {
          if (b == x || b == a) continue;
          ++best.pairs;
          const double t = f.source().dist(x, a) / f.source().dist(x, b);
          const double s = f.rho(x, a) / f.rho(x, b);
          const double bound = eta.eval(t);
          if (tol.leq(s, bound)) continue;
          const double excess = s - bound;
          if (!best.any || excess > best.excess) best = Scan{true, excess, x, a, b, t, s, bound, best.pairs};
        }
      }
    return best;
  };
  Scan best = parallel_ranges<Scan>(n, threads, {}, scan, [](Scan lhs, Scan rhs) {
    Scan out = (rhs.any && (!lhs.any || rhs.excess > lhs.excess)) ? rhs : lhs;
    out.pairs = lhs.pairs + rhs.pairs;
    return out;
  });

  rep.values["pairs_checked"] = double(best.pairs);
  if (best.any) {
    rep.verdict = Verdict::Violated;
    rep.witness = {best.x, best.a, best.b};
    rep.values["t"] = best.t;
    rep.values["s"] = best.s;
    rep.values["bound"] = best.bound;
    rep.values["excess"] = best.excess;
  }
  return rep;
}

// Least dominating power law per exponent, and the best exponent on a grid.
struct PowerFit {
  double scale = 0.0;
  double exponent = 0.0;
  std::vector<std::array<double, 2>> profile;  // (exponent, least scale)
  Modulus modulus() const { return Modulus::power(scale, exponent); }
};

// For each exponent a in the grid the least admissible scale is
// C(a) = max_i s_i / t_i^a, exact per exponent; the fit picks the exponent
// minimizing C(a), first on ties. Default grid: 200 log-spaced exponents in
// [0.05, 4].
inline PowerFit fit_dominating_power(const ControlFunction& cf,
                                     std::vector<double> alpha_grid = {}) {
  if (cf.pairs().empty())
    throw Error(ErrorCode::EmptyControl, "no control pairs; source has fewer than 3 points");
  if (alpha_grid.empty()) alpha_grid = log_grid(GridSpec{0.05, 4.0, 200});
  PowerFit fit;
  fit.profile.reserve(alpha_grid.size());
  bool first = true;
  for (double alpha : alpha_grid) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw Error(ErrorCode::InvalidSpec, "exponent grid entries must be positive");
    double c = 0.0;
    for (const auto& p : cf.pairs()) c = std::max(c, p.s / std::pow(p.t, alpha));
    fit.profile.push_back({alpha, c});
    if (first || c < fit.scale) {
      fit.scale = c;
      fit.exponent = alpha;
      first = false;
    }
  }
  return fit;
}

// Inverse assignment; requires f to cover its whole target.
inline PointMap inverse_map(const PointMap& f) {
  if (!f.surjective())
    throw Error(ErrorCode::NotSurjective,
                "target has " + std::to_string(f.target().size()) + " points, image covers " +
                    std::to_string(f.source().size()));
  std::vector<std::size_t> inverse(f.target().size());
  for (std::size_t i = 0; i < f.source().size(); ++i) inverse[f.apply(i)] = i;
  return PointMap(f.target(), f.source(), std::move(inverse));
}

// Same map viewed onto the induced subspace of its image (ascending target
// order), which makes it surjective.
inline PointMap restricted_to_image(const PointMap& f) {
  std::vector<std::size_t> image(f.assignment());
  std::sort(image.begin(), image.end());
  std::vector<std::size_t> assignment(f.source().size());
  for (std::size_t i = 0; i < f.source().size(); ++i)
    assignment[i] =
        std::size_t(std::lower_bound(image.begin(), image.end(), f.apply(i)) - image.begin());
  return PointMap(f.source(), subspace(f.target(), image), std::move(assignment));
}

// Round trip: f against eta, then f^{-1} against eta'(t) = 1/eta^{-1}(1/t).
// Both sub-verdicts are reported; the whole check holds only if both do.
inline CheckReport verify_inverse_round_trip(const PointMap& f, const Modulus& eta,
                                             Tolerance tol = {}, unsigned threads = 0) {
  CheckReport rep;
  rep.check = "inverse_round_trip";
  CheckReport forward = check_quasisymmetry(f, eta, tol, threads);
  forward.check = "forward";
  CheckReport backward = check_quasisymmetry(inverse_map(f), inverse_modulus(eta), tol, threads);
  backward.check = "inverse";
  rep.verdict = (forward.verdict == Verdict::Holds && backward.verdict == Verdict::Holds)
                    ? Verdict::Holds
                    : Verdict::Violated;
  rep.parts.push_back(std::move(forward));
  rep.parts.push_back(std::move(backward));
  return rep;
}

}  // namespace metricforge
