#pragma once

// Seeded instance generators. Every class comes with a construction that
// guarantees its advertised property:
//
//   metric       shortest-path completion of a connected weighted graph;
//   tree         leaf-to-leaf path distances of a random unrooted binary
//                tree with positive edge weights (additive by construction);
//   ultrametric  merge heights of a random hierarchy, nondecreasing along
//                the merge sequence;
//   snowflake    entrywise d^alpha of an inner instance, paired with the
//                identity map, whose control data satisfies s = t^alpha
//                exactly (alpha > 1 is the project's b-metric source);
//   bilipschitz  entrywise symmetric multipliers on an inner instance,
//                paired with the identity map and the linear control L^2 t
//                for the realized constant L.
//
// All randomness flows through one deterministic counter stream per call, so
// equal specs (including the seed) reproduce matrices bit for bit.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "metricforge/errors.hpp"
#include "metricforge/modulus.hpp"
#include "metricforge/preservation.hpp"
#include "metricforge/quasisym.hpp"
#include "metricforge/rng.hpp"
#include "metricforge/space.hpp"

namespace metricforge {

struct GeneratorSpec;

struct RandomMetricSpec {
  std::size_t n = 8;
  double edge_density = 0.3;
  double weight_lo = 1.0;
  double weight_hi = 2.0;
};

struct RandomTreeMetricSpec {
  std::size_t leaves = 8;
  double weight_lo = 1.0;
  double weight_hi = 2.0;
};

struct RandomUltrametricSpec {
  std::size_t n = 8;
  std::size_t levels = 3;
  double height_lo = 1.0;
  double height_hi = 2.0;
};

struct SnowflakeOfSpec {
  std::shared_ptr<const GeneratorSpec> inner;
  double alpha = 0.5;
};

struct BiLipschitzImageSpec {
  std::shared_ptr<const GeneratorSpec> inner;
  double mult_lo = 0.5;
  double mult_hi = 2.0;
};

struct GeneratorSpec {
  std::variant<RandomMetricSpec, RandomTreeMetricSpec, RandomUltrametricSpec, SnowflakeOfSpec,
               BiLipschitzImageSpec>
      kind;
  std::uint64_t seed = 0;
};

// The headline space, plus the identity map and its natural control modulus
// for the image kinds (the map runs from the inner instance's space onto the
// headline space).
struct GeneratedInstance {
  FiniteSemimetricSpace space;
  std::optional<PointMap> map;
  std::optional<Modulus> control;
  std::string kind;
};

GeneratedInstance generate(const GeneratorSpec& spec);

namespace detail {

inline void require_range(double lo, double hi, const char* what) {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi))
    throw Error(ErrorCode::InvalidSpec, std::string(what) + " range needs 0 < lo <= hi");
}

inline std::vector<std::string> point_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = "p" + std::to_string(i);
  return labels;
}

inline FiniteSemimetricSpace generate_metric(const RandomMetricSpec& g, SplitMix64& rng) {
  if (g.n < 2) throw Error(ErrorCode::InvalidSpec, "metric generator needs n >= 2");
  if (!(g.edge_density >= 0.0) || !(g.edge_density <= 1.0))
    throw Error(ErrorCode::InvalidSpec, "edge density must lie in [0, 1]");
  require_range(g.weight_lo, g.weight_hi, "weight");
  const std::size_t n = g.n;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n * n, inf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  auto set_edge = [&](std::size_t i, std::size_t j, double w) {
    if (w < d[i * n + j]) d[i * n + j] = d[j * n + i] = w;
  };
  // spanning tree first, so the graph is connected for any density
  for (std::size_t k = 1; k < n; ++k)
    set_edge(k, rng.below(k), rng.uniform(g.weight_lo, g.weight_hi));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(g.edge_density)) set_edge(i, j, rng.uniform(g.weight_lo, g.weight_hi));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  for (double v : d)
    if (!std::isfinite(v)) throw Error(ErrorCode::DisconnectedGraph, "graph failed to connect");
  return validate_flat(point_labels(n), std::move(d));
}

inline FiniteSemimetricSpace generate_tree(const RandomTreeMetricSpec& g, SplitMix64& rng) {
  if (g.leaves < 2) throw Error(ErrorCode::InvalidSpec, "tree generator needs >= 2 leaves");
  require_range(g.weight_lo, g.weight_hi, "weight");
  const std::size_t leaves = g.leaves;
  struct Edge {
    std::size_t to;
    double w;
  };
  std::vector<std::vector<Edge>> adj(leaves);
  auto add_edge = [&](std::size_t a, std::size_t b, double w) {
    adj[a].push_back({b, w});
    adj[b].push_back({a, w});
  };
  std::vector<std::size_t> active(leaves);
  for (std::size_t i = 0; i < leaves; ++i) active[i] = i;
  // coalesce random pairs into fresh internal nodes; the final two survivors
  // are joined by a single edge, which keeps the tree unrooted
  while (active.size() > 2) {
    const std::size_t ia = rng.below(active.size());
    const std::size_t a = active[ia];
    active.erase(active.begin() + std::ptrdiff_t(ia));
    const std::size_t ib = rng.below(active.size());
    const std::size_t b = active[ib];
    active.erase(active.begin() + std::ptrdiff_t(ib));
    const std::size_t fresh = adj.size();
    adj.emplace_back();
    add_edge(a, fresh, rng.uniform(g.weight_lo, g.weight_hi));
    add_edge(b, fresh, rng.uniform(g.weight_lo, g.weight_hi));
    active.push_back(fresh);
  }
  add_edge(active[0], active[1], rng.uniform(g.weight_lo, g.weight_hi));

  std::vector<double> d(leaves * leaves, 0.0);
  std::vector<double> dist(adj.size());
  std::vector<std::size_t> stack;
  for (std::size_t root = 0; root < leaves; ++root) {
    std::vector<char> seen(adj.size(), 0);
    dist[root] = 0.0;
    seen[root] = 1;
    stack.assign(1, root);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const Edge& e : adj[v]) {
        if (seen[e.to]) continue;
        seen[e.to] = 1;
        dist[e.to] = dist[v] + e.w;
        stack.push_back(e.to);
      }
    }
    for (std::size_t j = 0; j < leaves; ++j) d[root * leaves + j] = dist[j];
  }
  // leaf-to-leaf path sums accumulate in traversal order, which may differ
  // between root and mirror; force exact symmetry
  for (std::size_t i = 0; i < leaves; ++i)
    for (std::size_t j = i + 1; j < leaves; ++j) d[j * leaves + i] = d[i * leaves + j];
  return validate_flat(point_labels(leaves), std::move(d));
}

inline FiniteSemimetricSpace generate_ultrametric(const RandomUltrametricSpec& g,
                                                  SplitMix64& rng) {
  if (g.n < 2) throw Error(ErrorCode::InvalidSpec, "ultrametric generator needs n >= 2");
  if (g.levels < 1) throw Error(ErrorCode::InvalidSpec, "ultrametric generator needs >= 1 level");
  require_range(g.height_lo, g.height_hi, "height");
  const std::size_t n = g.n;
  std::vector<double> heights(g.levels);
  for (double& h : heights) h = rng.uniform(g.height_lo, g.height_hi);
  std::sort(heights.begin(), heights.end());

  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
  std::vector<double> d(n * n, 0.0);
  // merge heights are nondecreasing along the sequence, which is exactly the
  // strong triangle inequality for the resulting matrix
  for (std::size_t m = 0; m + 1 < n; ++m) {
    const double h = heights[m * g.levels / (n - 1)];
    const std::size_t ia = rng.below(clusters.size());
    std::size_t ib = rng.below(clusters.size() - 1);
    if (ib >= ia) ++ib;
    for (std::size_t a : clusters[ia])
      for (std::size_t b : clusters[ib]) d[a * n + b] = d[b * n + a] = h;
    auto& ca = clusters[std::min(ia, ib)];
    auto& cb = clusters[std::max(ia, ib)];
    ca.insert(ca.end(), cb.begin(), cb.end());
    clusters.erase(clusters.begin() + std::ptrdiff_t(std::max(ia, ib)));
  }
  return validate_flat(point_labels(n), std::move(d));
}

}  // namespace detail

inline GeneratedInstance generate(const GeneratorSpec& spec) {
  SplitMix64 rng(spec.seed);
  if (const auto* g = std::get_if<RandomMetricSpec>(&spec.kind))
    return {detail::generate_metric(*g, rng), std::nullopt, std::nullopt, "metric"};
  if (const auto* g = std::get_if<RandomTreeMetricSpec>(&spec.kind))
    return {detail::generate_tree(*g, rng), std::nullopt, std::nullopt, "tree"};
  if (const auto* g = std::get_if<RandomUltrametricSpec>(&spec.kind))
    return {detail::generate_ultrametric(*g, rng), std::nullopt, std::nullopt, "ultrametric"};
  if (const auto* g = std::get_if<SnowflakeOfSpec>(&spec.kind)) {
    if (!g->inner) throw Error(ErrorCode::InvalidSpec, "snowflake generator needs an inner spec");
    GeneratedInstance inner = generate(*g->inner);
    FiniteSemimetricSpace image = snowflake(inner.space, g->alpha);
    GeneratedInstance out{image, std::nullopt, std::nullopt, "snowflake"};
    std::vector<std::size_t> assignment(inner.space.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) assignment[i] = i;
    out.map = PointMap(inner.space, std::move(image), std::move(assignment));
    out.control = Modulus::power(1.0, g->alpha);
    return out;
  }
  const auto& g = std::get<BiLipschitzImageSpec>(spec.kind);
  if (!g.inner) throw Error(ErrorCode::InvalidSpec, "bi-Lipschitz generator needs an inner spec");
  detail::require_range(g.mult_lo, g.mult_hi, "multiplier");
  GeneratedInstance inner = generate(*g.inner);
  const std::size_t n = inner.space.size();
  std::vector<double> d(inner.space.flat());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = rng.uniform(g.mult_lo, g.mult_hi);
      d[i * n + j] *= m;
      d[j * n + i] = d[i * n + j];
    }
  FiniteSemimetricSpace image = validate_flat(inner.space.labels(), std::move(d));
  GeneratedInstance out{image, std::nullopt, std::nullopt, "bilipschitz"};
  std::vector<std::size_t> assignment(n);
  for (std::size_t i = 0; i < n; ++i) assignment[i] = i;
  out.map = PointMap(inner.space, std::move(image), std::move(assignment));
  const double L = bilipschitz_constant(*out.map);
  out.control = Modulus::power(L * L, 1.0);
  return out;
}

}  // namespace metricforge
