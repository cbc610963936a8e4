// Reference implementations and shared fixtures for the test suite. The
// oracles are written as plain serial loops, independent of the library's
// range splitting, so agreement is meaningful.
#pragma once

#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "metricforge/metricforge.hpp"

namespace testsupport {

namespace mf = metricforge;

// same division expression as the library scan; max over a fixed candidate
// set is exact, so equality can be required bitwise
inline double naive_raw_sup(const mf::FiniteSemimetricSpace& X) {
  double best = 0.0;
  const std::size_t n = X.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      for (std::size_t z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        const double r = X.dist(x, y) / (X.dist(x, z) + X.dist(z, y));
        if (r > best) best = r;
      }
    }
  return best;
}

template <class M>
inline bool naive_quasisymmetric(const mf::PointMap& f, const M& eta, const mf::Tolerance& tol) {
  const mf::FiniteSemimetricSpace& X = f.source();
  const std::size_t n = X.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t a = 0; a < n; ++a) {
      if (a == x) continue;
      for (std::size_t b = 0; b < n; ++b) {
        if (b == x || b == a) continue;
        const double t = X.dist(x, a) / X.dist(x, b);
        const double s = f.rho(x, a) / f.rho(x, b);
        if (!tol.leq(s, eta.eval(t))) return false;
      }
    }
  return true;
}

struct NaiveAdditivity {
  bool holds = true;
  std::array<std::size_t, 4> witness{};
  std::array<double, 3> sums{};
};

inline NaiveAdditivity naive_additive(const mf::FiniteSemimetricSpace& X,
                                      const mf::Tolerance& tol) {
  NaiveAdditivity out;
  const std::size_t n = X.size();
  for (std::size_t x = 0; x + 3 < n; ++x)
    for (std::size_t y = x + 1; y + 2 < n; ++y)
      for (std::size_t z = y + 1; z + 1 < n; ++z)
        for (std::size_t u = z + 1; u < n; ++u) {
          std::array<double, 3> s = {X.dist(x, y) + X.dist(z, u), X.dist(x, z) + X.dist(y, u),
                                     X.dist(x, u) + X.dist(y, z)};
          std::array<double, 3> sorted = s;
          std::sort(sorted.begin(), sorted.end());
          if (sorted[2] - sorted[1] > tol.margin(sorted[2])) {
            out.holds = false;
            out.witness = {x, y, z, u};
            out.sums = s;
            return out;
          }
        }
  return out;
}

inline mf::FiniteSemimetricSpace make_space(std::vector<std::string> labels,
                                            std::vector<double> flat) {
  return mf::validate_flat(std::move(labels), std::move(flat));
}

// two pairs at distance 2, everything across at 3; additive, tree-realizable
inline mf::FiniteSemimetricSpace two_cherry() {
  return make_space({"x", "y", "z", "u"}, {0, 2, 3, 3,  //
                                           2, 0, 3, 3,  //
                                           3, 3, 0, 2,  //
                                           3, 3, 2, 0});
}

// shortest-path metric of a 4-cycle with unit sides; fails the four-point
// condition with pairing sums 2, 4, 2
inline mf::FiniteSemimetricSpace unit_four_cycle() {
  return make_space({"a", "b", "c", "d"}, {0, 1, 2, 1,  //
                                           1, 0, 1, 2,  //
                                           2, 1, 0, 1,  //
                                           1, 2, 1, 0});
}

// three collinear points: 1 + 1 = 2, triangle tight, raw sup exactly 1
inline mf::FiniteSemimetricSpace worked_three_point() {
  return make_space({"p0", "p1", "p2"}, {0, 1, 2,  //
                                         1, 0, 1,  //
                                         2, 1, 0});
}

// violates the triangle inequality: 4 > 1 + 1, raw sup 2 at (0,1,2)
inline mf::FiniteSemimetricSpace spike() {
  return make_space({"p0", "p1", "p2"}, {0, 4, 1,  //
                                         4, 0, 1,  //
                                         1, 1, 0});
}

inline mf::FiniteSemimetricSpace equilateral(std::size_t n, double side = 1.0) {
  std::vector<std::string> labels;
  std::vector<double> flat(n * n, side);
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("e" + std::to_string(i));
    flat[i * n + i] = 0.0;
  }
  return make_space(labels, flat);
}

inline mf::FiniteSemimetricSpace two_level_ultra() {
  return make_space({"a", "b", "c"}, {0, 1, 2,  //
                                      1, 0, 2,  //
                                      2, 2, 0});
}

// rotating mix of generator kinds for seeded sweeps; i also varies the size
inline mf::GeneratorSpec mixed_spec(std::size_t i, std::uint64_t salt = 0) {
  mf::GeneratorSpec spec;
  spec.seed = 0x100 + 0x9E37 * static_cast<std::uint64_t>(i) + salt;
  const std::size_t n = 3 + (i % 30);
  auto inner_of = [&](bool tree) {
    auto inner = std::make_shared<mf::GeneratorSpec>();
    inner->seed = mf::SplitMix64(spec.seed).next_u64();
    if (tree)
      inner->kind = mf::RandomTreeMetricSpec{std::max<std::size_t>(3, n / 2), 1.0, 2.0};
    else
      inner->kind = mf::RandomMetricSpec{std::max<std::size_t>(3, n / 2), 0.4, 1.0, 2.0};
    return inner;
  };
  switch (i % 5) {
    case 0:
      spec.kind = mf::RandomMetricSpec{n, 0.3, 1.0, 2.0};
      break;
    case 1:
      spec.kind = mf::RandomTreeMetricSpec{std::max<std::size_t>(3, n), 1.0, 2.0};
      break;
    case 2:
      spec.kind = mf::RandomUltrametricSpec{n, 3, 1.0, 2.0};
      break;
    case 3:
      spec.kind = mf::SnowflakeOfSpec{inner_of(false), 0.3 + 0.2 * double(i % 9)};
      break;
    default:
      spec.kind = mf::BiLipschitzImageSpec{inner_of(true), 0.5, 2.0};
      break;
  }
  return spec;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path dir_;
};

}  // namespace testsupport
