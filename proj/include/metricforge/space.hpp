#pragma once

// Finite semimetric spaces: a labeled point set with a symmetric matrix of
// positive off-diagonal distances. No triangle inequality is assumed; the
// degree to which it fails is captured by the relaxation constant
//
//     raw_sup = max d(x,y) / (d(x,z) + d(z,y))   over ordered distinct triples,
//
// the smallest K with d(x,y) <= K (d(x,z) + d(z,y)) everywhere once clamped
// to K >= 1. Spaces are immutable after validation and all operations here
// are pure functions of the matrix.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "metricforge/errors.hpp"
#include "metricforge/parallel.hpp"
#include "metricforge/tolerance.hpp"

namespace metricforge {

class FiniteSemimetricSpace {
 public:
  std::size_t size() const { return n_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }

  double dist(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

  // Row-major flat matrix; handy for bitwise comparisons and serialization.
  const std::vector<double>& flat() const { return dist_; }

  std::vector<std::vector<double>> matrix() const {
    std::vector<std::vector<double>> m(n_, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m[i][j] = dist(i, j);
    return m;
  }

  friend FiniteSemimetricSpace validate(std::vector<std::string> labels,
                                        const std::vector<std::vector<double>>& matrix);
  friend FiniteSemimetricSpace validate_flat(std::vector<std::string> labels,
                                             std::vector<double> flat);

 private:
  FiniteSemimetricSpace(std::size_t n, std::vector<std::string> labels,
                        std::vector<double> dist)
      : n_(n), labels_(std::move(labels)), dist_(std::move(dist)) {}

  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> dist_;
};

// Checks every semimetric axiom and reports the first offending cell in
// row-major scan order.
inline FiniteSemimetricSpace validate_flat(std::vector<std::string> labels,
                                           std::vector<double> flat) {
  const std::size_t n = labels.size();
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "a space needs at least one point");
  if (flat.size() != n * n) {
    throw Error(ErrorCode::NonSquare,
                "matrix has " + std::to_string(flat.size()) + " entries, expected " +
                    std::to_string(n) + "x" + std::to_string(n));
  }
  {
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second)
        throw Error(ErrorCode::InvalidSpec, "duplicate label \"" + l + "\"");
    }
  }
  auto cell = [](std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = flat[i * n + j];
      if (i == j) {
        if (v != 0.0)
          throw Error(ErrorCode::NonzeroDiagonal, "diagonal entry " + std::to_string(i) +
                                                      " is " + std::to_string(v));
        continue;
      }
      if (!std::isfinite(v) || !std::isfinite(flat[j * n + i]))
        throw Error(ErrorCode::NonFiniteEntry, "entry " + cell(i, j) + " is not finite");
      if (v != flat[j * n + i])
        throw Error(ErrorCode::AsymmetricEntry, "entry " + cell(i, j) + " differs from " + cell(j, i));
      if (v < 0.0)
        throw Error(ErrorCode::NegativeEntry, "entry " + cell(i, j) + " is negative");
      if (v == 0.0)
        throw Error(ErrorCode::ZeroOffDiagonal,
                    "distinct points " + cell(i, j) + " are at distance zero");
    }
  }
  return FiniteSemimetricSpace(n, std::move(labels), std::move(flat));
}

inline FiniteSemimetricSpace validate(std::vector<std::string> labels,
                                      const std::vector<std::vector<double>>& matrix) {
  const std::size_t n = labels.size();
  if (matrix.size() != n)
    throw Error(ErrorCode::NonSquare, "matrix has " + std::to_string(matrix.size()) +
                                          " rows, expected " + std::to_string(n));
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n)
      throw Error(ErrorCode::NonSquare, "row " + std::to_string(i) + " has " +
                                            std::to_string(matrix[i].size()) +
                                            " entries, expected " + std::to_string(n));
    flat.insert(flat.end(), matrix[i].begin(), matrix[i].end());
  }
  return validate_flat(std::move(labels), std::move(flat));
}

// Nonempty set of point indices into a space.
struct SubsetRef {
  std::vector<std::size_t> indices;
};

namespace detail {

// Sorted unique copy, bounds-checked against the space.
inline std::vector<std::size_t> normalized_subset(const FiniteSemimetricSpace& X,
                                                  const SubsetRef& subset) {
  if (subset.indices.empty())
    throw Error(ErrorCode::InvalidSpec, "subset must be nonempty");
  std::vector<std::size_t> idx(subset.indices);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.back() >= X.size())
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + std::to_string(idx.back()) + " not below " + std::to_string(X.size()));
  return idx;
}

}  // namespace detail

// Relaxed-triangle analysis of a space.
struct CoefficientReport {
  double raw_sup = 0.0;      // sup d(x,y)/(d(x,z)+d(z,y)); 0 when n < 3
  double coefficient = 1.0;  // max(1, raw_sup)
  std::array<std::size_t, 3> witness{0, 0, 0};  // (x,y,z) attaining raw_sup
  bool has_witness = false;
};

// Exact maximum of d(x,y)/(d(x,z)+d(z,y)) over ordered triples of distinct
// points. The witness is the first attaining triple in lexicographic
// (x,y,z) order; max-reduction over contiguous x-ranges keeps both the value
// and the witness independent of the worker count.
inline CoefficientReport relaxation_constant(const FiniteSemimetricSpace& X,
                                             unsigned threads = 0) {
  const std::size_t n = X.size();
  CoefficientReport rep;
  if (n < 3) return rep;  // no triples: the constraint set is empty

  struct Best {
    double value = -1.0;
    std::size_t x = 0, y = 0, z = 0;
  };
  auto scan = [&X, n](std::size_t begin, std::size_t end) {
    Best best;
    for (std::size_t x = begin; x < end; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x) continue;
        const double dxy = X.dist(x, y);
        for (std::size_t z = 0; z < n; ++z) {
          if (z == x || z == y) continue;
          const double r = dxy / (X.dist(x, z) + X.dist(z, y));
          if (r > best.value) best = Best{r, x, y, z};
        }
      }
    }
    return best;
  };
  Best best = parallel_ranges<Best>(
      n, threads, {}, scan,
      [](Best a, Best b) { return b.value > a.value ? b : a; });

  rep.raw_sup = best.value;
  rep.coefficient = std::max(1.0, best.value);
  rep.witness = {best.x, best.y, best.z};
  rep.has_witness = true;
  return rep;
}

// diam A = max over unordered pairs in the subset; 0 for singletons.
inline double diameter(const FiniteSemimetricSpace& X, const SubsetRef& subset) {
  auto idx = detail::normalized_subset(X, subset);
  double d = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      d = std::max(d, X.dist(idx[i], idx[j]));
  return d;
}

inline SubsetRef full_subset(const FiniteSemimetricSpace& X) {
  SubsetRef s;
  s.indices.resize(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) s.indices[i] = i;
  return s;
}

inline bool is_metric(const FiniteSemimetricSpace& X, Tolerance tol = {},
                      unsigned threads = 0) {
  return relaxation_constant(X, threads).raw_sup <= 1.0 + tol.margin(1.0);
}

// Strong triangle inequality d(x,y) <= max(d(x,z), d(z,y)) on all ordered
// distinct triples.
inline bool is_ultrametric(const FiniteSemimetricSpace& X, Tolerance tol = {},
                           unsigned threads = 0) {
  const std::size_t n = X.size();
  if (n < 3) return true;
  auto scan = [&X, n, tol](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x) continue;
        const double dxy = X.dist(x, y);
        for (std::size_t z = 0; z < n; ++z) {
          if (z == x || z == y) continue;
          const double m = std::max(X.dist(x, z), X.dist(z, y));
          if (dxy > m + tol.margin(std::max(dxy, m))) return false;
        }
      }
    return true;
  };
  return parallel_ranges<bool>(n, threads, {}, scan,
                               [](bool a, bool b) { return a && b; });
}

// Entrywise d^alpha. Exponents in (0,1] turn metrics into metrics; exponents
// above 1 manufacture b-metrics with coefficient at most 2^(alpha-1) from
// metric inputs.
inline FiniteSemimetricSpace snowflake(const FiniteSemimetricSpace& X, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw Error(ErrorCode::NonPositiveAlpha, "snowflake exponent must be positive, got " +
                                                 std::to_string(alpha));
  std::vector<double> flat(X.flat());
  if (alpha != 1.0) {
    for (double& v : flat) v = std::pow(v, alpha);
  }
  return validate_flat(X.labels(), std::move(flat));
}

// Induced subspace on the given indices (order preserved, duplicates and
// out-of-range indices rejected).
inline FiniteSemimetricSpace subspace(const FiniteSemimetricSpace& X,
                                      const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw Error(ErrorCode::InvalidSpec, "subspace needs at least one index");
  std::set<std::size_t> seen;
  for (std::size_t i : indices) {
    if (i >= X.size())
      throw Error(ErrorCode::IndexOutOfRange,
                  "index " + std::to_string(i) + " not below " + std::to_string(X.size()));
    if (!seen.insert(i).second)
      throw Error(ErrorCode::RepeatedIndex, "index " + std::to_string(i) + " repeated");
  }
  const std::size_t m = indices.size();
  std::vector<std::string> labels(m);
  std::vector<double> flat(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    labels[i] = X.label(indices[i]);
    for (std::size_t j = 0; j < m; ++j) flat[i * m + j] = X.dist(indices[i], indices[j]);
  }
  return validate_flat(std::move(labels), std::move(flat));
}

}  // namespace metricforge
