#pragma once

// How much of the relaxed triangle inequality survives an eta-quasisymmetric
// surjection. For an image triple the two control bounds give
//
//     rho(fx,fy) <= [ 1 / (1/eta(t1) + 1/eta(t2)) ] (rho(fx,fz) + rho(fz,fy)),
//
// with t1 = d(x,y)/d(x,z), t2 = d(x,y)/d(z,y); a source coefficient K1
// constrains the ratios by t1 t2 <= K1 (t1 + t2). So the image coefficient
// is at most
//
//     sup { eta(t1) eta(t2) / (eta(t1) + eta(t2)) : t1 t2 <= K1 (t1 + t2) }.
//
// Boundary reduction: the objective is strictly increasing in each argument
// (it is half the harmonic mean of eta(t1), eta(t2)), and from any feasible
// interior point t1 can be raised until the constraint binds, which only
// increases the objective. Hence the supremum over the region equals the
// supremum over the hyperbola t2 = K1 t1 / (t1 - K1), t1 in (K1, inf),
// together with its t1 -> inf limit, where t2 -> K1 and the objective tends
// to eta(K1). The scan below walks a log grid on the hyperbola and always
// includes that limit candidate. Results are labeled "numeric estimate":
// a grid scan bounds nothing by itself.
//
// For power laws eta(t) = C t^a the supremum is exact by hand: substituting
// u = 1/t1, v = 1/t2 turns the boundary into u + v = 1/K1 and the objective
// into C/(u^a + v^a); for a <= 1, u^a + v^a >= (u+v)^a makes the supremum
// C K1^a, attained only in the limit, so the closed form is reported. For
// a > 1 the interior symmetric point u = v dominates and no closed form is
// claimed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metricforge/errors.hpp"
#include "metricforge/modulus.hpp"
#include "metricforge/parallel.hpp"
#include "metricforge/quasisym.hpp"
#include "metricforge/report.hpp"
#include "metricforge/space.hpp"
#include "metricforge/tolerance.hpp"

namespace metricforge {

// Log grid on the constraint hyperbola, parametrized by t1/K1.
struct BoundaryGrid {
  std::size_t count = 4096;
  double offset = 1e-6;  // first point at K1 * (1 + offset)
  double span = 1e8;     // last point at K1 * span
};

struct PreservationReport {
  double k1 = 1.0;
  double k2_estimate = 0.0;
  std::optional<double> k2_closed_form;
  std::optional<double> k2_empirical;
  std::optional<double> bilipschitz;
  std::string grid_spec;
  std::string scope = "numeric estimate";
  bool holds = true;
};

namespace detail {

inline std::string boundary_grid_description(const BoundaryGrid& grid) {
  return std::to_string(grid.count) + " log points on (K1*(1+" + std::to_string(grid.offset) +
         "), K1*" + std::to_string(grid.span) + "] plus the limit candidate";
}

template <ModulusLike M>
double harmonic_objective(const M& eta, double t1, double t2) {
  const double a = eta.eval(t1);
  const double b = eta.eval(t2);
  return a * b / (a + b);
}

}  // namespace detail

// Smallest image coefficient compatible with the control bounds, as a grid
// supremum over the constraint boundary.
inline PreservationReport minimal_k2(const Modulus& eta, double k1,
                                     const BoundaryGrid& grid = {}, unsigned threads = 0) {
  if (!(k1 >= 1.0) || !std::isfinite(k1))
    throw Error(ErrorCode::InvalidSpec, "K1 must be >= 1");
  if (grid.count == 0 || !(grid.offset > 0.0) || !(grid.span > 1.0 + grid.offset))
    throw Error(ErrorCode::InvalidSpec, "boundary grid needs count >= 1 and span > 1 + offset");

  PreservationReport rep;
  rep.k1 = k1;
  rep.grid_spec = detail::boundary_grid_description(grid);

  const double lo = 1.0 + grid.offset;
  const double step = std::log(grid.span / lo) / double(grid.count);
  auto scan = [&](std::size_t begin, std::size_t end) {
    double best = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double t1 = k1 * lo * std::exp(step * double(i + 1));
      const double t2 = k1 * t1 / (t1 - k1);
      best = std::max(best, detail::harmonic_objective(eta, t1, t2));
    }
    return best;
  };
  const double grid_max = parallel_ranges<double>(
      grid.count, threads, {}, scan, [](double a, double b) { return std::max(a, b); });
  rep.k2_estimate = std::max(grid_max, eta.eval(k1));

  if (const auto* p = eta.as_power(); p && p->exponent <= 1.0)
    rep.k2_closed_form = p->scale * std::pow(k1, p->exponent);
  return rep;
}

// Same supremum restricted to ratio pairs actually realizable from ordered
// triples of a concrete source space; exact for that space, valid only for
// maps defined on it.
inline PreservationReport minimal_k2_realizable(const Modulus& eta,
                                                const FiniteSemimetricSpace& X,
                                                unsigned threads = 0) {
  PreservationReport rep;
  rep.k1 = relaxation_constant(X, threads).coefficient;
  rep.scope = "exact over realizable ratio pairs";
  const std::size_t n = X.size();
  if (n < 3) {
    rep.k2_estimate = 1.0;
    return rep;
  }
  auto scan = [&](std::size_t begin, std::size_t end) {
    double best = 0.0;
    for (std::size_t x = begin; x < end; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x) continue;
        const double dxy = X.dist(x, y);
        for (std::size_t z = 0; z < n; ++z) {
          if (z == x || z == y) continue;
          best = std::max(best, detail::harmonic_objective(eta, dxy / X.dist(x, z),
                                                           dxy / X.dist(z, y)));
        }
      }
    return best;
  };
  rep.k2_estimate = std::max(
      1.0, parallel_ranges<double>(n, threads, {}, scan,
                                   [](double a, double b) { return std::max(a, b); }));
  return rep;
}

// Conjunction of the three modulus conditions that together guarantee the
// image coefficient K2: supermultiplicativity, subadditivity, and the
// scaling bound eta(K1 t) <= K2 eta(t).
inline CheckReport check_preservation_conditions(const Modulus& eta, double k1, double k2,
                                                 const GridSpec& grid = {}, Tolerance tol = {},
                                                 unsigned threads = 0) {
  CheckReport rep;
  rep.check = "preservation_conditions";
  rep.scope = "holds on grid";
  rep.parts.push_back(check_supermultiplicative(eta, grid, tol, threads));
  rep.parts.push_back(check_subadditive(eta, grid, tol, threads));
  rep.parts.push_back(check_scaling_bound(eta, k1, k2, grid, tol, threads));
  for (const auto& part : rep.parts)
    if (part.verdict != Verdict::Holds) rep.verdict = Verdict::Violated;
  return rep;
}

// Least L with (1/L) d <= rho <= L d over all distinct pairs; 1 when no
// pair exists.
inline double bilipschitz_constant(const PointMap& f) {
  const std::size_t n = f.source().size();
  double L = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = f.source().dist(i, j);
      const double r = f.rho(i, j);
      L = std::max({L, r / d, d / r});
    }
  return L;
}

// Image coefficient of a bi-Lipschitz surjection against the bound K1 * L^2.
inline PreservationReport check_bilipschitz_bound(const PointMap& f, Tolerance tol = {},
                                                  unsigned threads = 0) {
  if (!f.surjective())
    throw Error(ErrorCode::NotSurjective,
                "target has " + std::to_string(f.target().size()) + " points, image covers " +
                    std::to_string(f.source().size()));
  PreservationReport rep;
  rep.scope = "exact";
  rep.k1 = relaxation_constant(f.source(), threads).coefficient;
  const double L = bilipschitz_constant(f);
  rep.bilipschitz = L;
  rep.k2_estimate = rep.k1 * L * L;
  rep.k2_empirical = relaxation_constant(f.target(), threads).coefficient;
  rep.holds = tol.leq(*rep.k2_empirical, rep.k2_estimate);
  return rep;
}

// Checks a concrete surjective quasisymmetry against the boundary-grid
// supremum: the actual image coefficient must not exceed the estimate.
inline PreservationReport verify_image_coefficient_bound(const PointMap& f, const Modulus& eta,
                                                         const BoundaryGrid& grid = {},
                                                         Tolerance tol = {},
                                                         unsigned threads = 0) {
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
  const double k1 = relaxation_constant(f.source(), threads).coefficient;
  PreservationReport rep = minimal_k2(eta, k1, grid, threads);
  rep.k2_empirical = relaxation_constant(f.target(), threads).coefficient;
  rep.holds = tol.leq(*rep.k2_empirical, rep.k2_estimate);
  return rep;
}

}  // namespace metricforge
