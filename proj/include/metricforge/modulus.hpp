#pragma once

// Control moduli: parametric strictly increasing homeomorphisms of [0,inf)
// with eta(0) = 0. Two families are admitted, power laws C*t^alpha and
// piecewise-linear interpolants with a positive final slope; both are
// bijections of [0,inf) onto itself by construction, so every value here may
// be inverted exactly.
//
// The inverse-map modulus of a quasisymmetry is
//
//     eta'(t) = 1 / eta^{-1}(1/t),  eta'(0) = 0,
//
// realized generically by InverseOf and in closed form for power laws:
// eta(t) = C t^alpha gives eta'(t) = C^(1/alpha) t^(1/alpha).
//
// The predicate checks at the bottom (supermultiplicative, subadditive,
// scaling bound) quantify over all positive reals in the source material; on
// a desk they run over a log-spaced grid and the report says "holds on grid",
// never "proved".

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "metricforge/errors.hpp"
#include "metricforge/parallel.hpp"
#include "metricforge/report.hpp"
#include "metricforge/tolerance.hpp"

namespace metricforge {

class Modulus {
 public:
  struct PowerLaw {
    double scale;     // C
    double exponent;  // alpha
  };
  struct PiecewiseLinear {
    std::vector<std::array<double, 2>> anchors;  // (t, y), starts at (0,0)
    double final_slope;
  };

  static Modulus power(double scale, double exponent) {
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw Error(ErrorCode::InvalidModulus, "power-law scale must be positive and finite");
    if (!(exponent > 0.0) || !std::isfinite(exponent))
      throw Error(ErrorCode::InvalidModulus, "power-law exponent must be positive and finite");
    Modulus m;
    m.family_ = PowerLaw{scale, exponent};
    return m;
  }

  static Modulus piecewise_linear(std::vector<std::array<double, 2>> anchors,
                                  double final_slope) {
    if (anchors.empty() || anchors.front()[0] != 0.0 || anchors.front()[1] != 0.0)
      throw Error(ErrorCode::InvalidModulus, "anchors must start at (0,0)");
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      if (!std::isfinite(anchors[i][0]) || !std::isfinite(anchors[i][1]))
        throw Error(ErrorCode::InvalidModulus, "anchor " + std::to_string(i) + " is not finite");
      if (i > 0 && (anchors[i][0] <= anchors[i - 1][0] || anchors[i][1] <= anchors[i - 1][1]))
        throw Error(ErrorCode::InvalidModulus,
                    "anchors must strictly increase in both coordinates at index " +
                        std::to_string(i));
    }
    if (!(final_slope > 0.0) || !std::isfinite(final_slope))
      throw Error(ErrorCode::InvalidModulus, "final slope must be positive and finite");
    Modulus m;
    m.family_ = PiecewiseLinear{std::move(anchors), final_slope};
    return m;
  }

  static Modulus identity() { return power(1.0, 1.0); }

  // The exponent-1 branches below are not an optimization: they make
  // eval(t) == t bitwise for the identity modulus, so identity-modulus
  // inequality checks reduce to the same arithmetic as their unmapped
  // counterparts.
  double eval(double t) const {
    if (const auto* p = std::get_if<PowerLaw>(&family_)) {
      if (p->exponent == 1.0) return p->scale == 1.0 ? t : p->scale * t;
      const double tp = std::pow(t, p->exponent);
      return p->scale == 1.0 ? tp : p->scale * tp;
    }
    const auto& pl = std::get<PiecewiseLinear>(family_);
    const auto& a = pl.anchors;
    const auto& last = a.back();
    if (t >= last[0]) return last[1] + pl.final_slope * (t - last[0]);
    auto it = std::upper_bound(a.begin(), a.end(), t,
                               [](double v, const std::array<double, 2>& p) { return v < p[0]; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return lo[1] + (t - lo[0]) * (hi[1] - lo[1]) / (hi[0] - lo[0]);
  }

  double invert(double s) const {
    if (const auto* p = std::get_if<PowerLaw>(&family_)) {
      const double base = p->scale == 1.0 ? s : s / p->scale;
      if (p->exponent == 1.0) return base;
      return std::pow(base, 1.0 / p->exponent);
    }
    const auto& pl = std::get<PiecewiseLinear>(family_);
    const auto& a = pl.anchors;
    const auto& last = a.back();
    if (s >= last[1]) return last[0] + (s - last[1]) / pl.final_slope;
    auto it = std::upper_bound(a.begin(), a.end(), s,
                               [](double v, const std::array<double, 2>& p) { return v < p[1]; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return lo[0] + (s - lo[1]) * (hi[0] - lo[0]) / (hi[1] - lo[1]);
  }

  const PowerLaw* as_power() const { return std::get_if<PowerLaw>(&family_); }
  const PiecewiseLinear* as_piecewise() const { return std::get_if<PiecewiseLinear>(&family_); }

 private:
  Modulus() = default;
  std::variant<PowerLaw, PiecewiseLinear> family_ = PowerLaw{1.0, 1.0};
};

// Anything that evaluates like a modulus; inequality checks only need eval.
template <typename M>
concept ModulusLike = requires(const M& m, double t) {
  { m.eval(t) } -> std::convertible_to<double>;
};

// Pointwise inverse-map modulus eta'(t) = 1/base^{-1}(1/t). Applies to any
// invertible base; applying it twice gives back the base pointwise.
template <typename Base>
class InverseOf {
 public:
  explicit InverseOf(Base base) : base_(std::move(base)) {}

  double eval(double t) const { return t == 0.0 ? 0.0 : 1.0 / base_.invert(1.0 / t); }
  double invert(double s) const { return s == 0.0 ? 0.0 : 1.0 / base_.eval(1.0 / s); }

  const Base& base() const { return base_; }

 private:
  Base base_;
};

inline InverseOf<Modulus> inverse_modulus(const Modulus& eta) { return InverseOf<Modulus>(eta); }

// Closed form for power laws only; piecewise-linear moduli stay pointwise.
inline std::optional<Modulus> inverse_modulus_closed_form(const Modulus& eta) {
  if (const auto* p = eta.as_power())
    return Modulus::power(std::pow(p->scale, 1.0 / p->exponent), 1.0 / p->exponent);
  return std::nullopt;
}

// Log-spaced evaluation grid for the universally quantified predicates.
struct GridSpec {
  double lo = 1e-4;
  double hi = 1e4;
  std::size_t count = 128;
};

inline std::vector<double> log_grid(const GridSpec& grid) {
  if (grid.count == 0 || !(grid.lo > 0.0) || !(grid.hi >= grid.lo))
    throw Error(ErrorCode::InvalidSpec, "grid needs 0 < lo <= hi and count >= 1");
  std::vector<double> pts(grid.count);
  if (grid.count == 1) {
    pts[0] = grid.lo;
    return pts;
  }
  const double ratio = grid.hi / grid.lo;
  for (std::size_t i = 0; i < grid.count; ++i)
    pts[i] = grid.lo * std::pow(ratio, double(i) / double(grid.count - 1));
  pts.back() = grid.hi;
  return pts;
}

namespace detail {

struct GridViolation {
  bool found = false;
  std::size_t i = 0, j = 0;
  double lhs = 0.0, rhs = 0.0;
};

// Scans the (u,v) product grid for the first row-major failure of
// lhs(u,v) <= rhs(u,v). Left-to-right fold over contiguous row ranges keeps
// the witness the global first regardless of worker count.
template <typename Lhs, typename Rhs>
GridViolation first_grid_violation(const std::vector<double>& pts, Lhs lhs, Rhs rhs,
                                   Tolerance tol, unsigned threads) {
  auto scan = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const double a = lhs(pts[i], pts[j]);
        const double b = rhs(pts[i], pts[j]);
        if (!tol.leq(a, b)) return GridViolation{true, i, j, a, b};
      }
    return GridViolation{};
  };
  return parallel_ranges<GridViolation>(
      pts.size(), threads, {}, scan,
      [](GridViolation a, GridViolation b) { return a.found ? a : b; });
}

}  // namespace detail

// eta(u) * eta(v) <= eta(u v) across the grid.
inline CheckReport check_supermultiplicative(const Modulus& eta, const GridSpec& grid = {},
                                             Tolerance tol = {}, unsigned threads = 0) {
  const auto pts = log_grid(grid);
  CheckReport rep;
  rep.check = "supermultiplicative";
  rep.scope = "holds on grid";
  auto v = detail::first_grid_violation(
      pts, [&](double u, double w) { return eta.eval(u) * eta.eval(w); },
      [&](double u, double w) { return eta.eval(u * w); }, tol, threads);
  if (v.found) {
    rep.verdict = Verdict::Violated;
    rep.witness = {v.i, v.j};
    rep.values["u"] = pts[v.i];
    rep.values["v"] = pts[v.j];
    rep.values["lhs"] = v.lhs;
    rep.values["rhs"] = v.rhs;
  }
  return rep;
}

// eta(u + v) <= eta(u) + eta(v) across the grid.
inline CheckReport check_subadditive(const Modulus& eta, const GridSpec& grid = {},
                                     Tolerance tol = {}, unsigned threads = 0) {
  const auto pts = log_grid(grid);
  CheckReport rep;
  rep.check = "subadditive";
  rep.scope = "holds on grid";
  auto v = detail::first_grid_violation(
      pts, [&](double u, double w) { return eta.eval(u + w); },
      [&](double u, double w) { return eta.eval(u) + eta.eval(w); }, tol, threads);
  if (v.found) {
    rep.verdict = Verdict::Violated;
    rep.witness = {v.i, v.j};
    rep.values["u"] = pts[v.i];
    rep.values["v"] = pts[v.j];
    rep.values["lhs"] = v.lhs;
    rep.values["rhs"] = v.rhs;
  }
  return rep;
}

// eta(K1 t) <= K2 eta(t) across the grid. For power laws the minimal exact K2
// is scale-independent, K1^alpha, and is reported alongside the verdict.
inline CheckReport check_scaling_bound(const Modulus& eta, double k1, double k2,
                                       const GridSpec& grid = {}, Tolerance tol = {},
                                       unsigned threads = 0) {
  if (!(k1 >= 1.0) || !std::isfinite(k1))
    throw Error(ErrorCode::InvalidSpec, "K1 must be >= 1");
  if (!(k2 >= 1.0) || !std::isfinite(k2))
    throw Error(ErrorCode::InvalidSpec, "K2 must be >= 1");
  const auto pts = log_grid(grid);
  CheckReport rep;
  rep.check = "scaling_bound";
  rep.scope = "holds on grid";
  rep.values["k1"] = k1;
  rep.values["k2"] = k2;
  if (const auto* p = eta.as_power()) rep.values["minimal_k2"] = std::pow(k1, p->exponent);

  auto scan = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double a = eta.eval(k1 * pts[i]);
      const double b = k2 * eta.eval(pts[i]);
      if (!tol.leq(a, b)) return detail::GridViolation{true, i, 0, a, b};
    }
    return detail::GridViolation{};
  };
  auto v = parallel_ranges<detail::GridViolation>(
      pts.size(), threads, {}, scan,
      [](detail::GridViolation a, detail::GridViolation b) { return a.found ? a : b; });
  if (v.found) {
    rep.verdict = Verdict::Violated;
    rep.witness = {v.i};
    rep.values["t"] = pts[v.i];
    rep.values["lhs"] = v.lhs;
    rep.values["rhs"] = v.rhs;
  }
  return rep;
}

}  // namespace metricforge
