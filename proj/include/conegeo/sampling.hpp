#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "conegeo/chart.hpp"

namespace conegeo {

/// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9e3779b97f4a7c15, then two
/// xor-shift-multiply rounds. Fully specified, so seeds reproduce everywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

inline constexpr double kBoundaryMargin = 1e-2;

/// Uniform points in the chart domain, keeping `margin` away from the ends of
/// non-periodic coordinates.
inline std::vector<std::vector<double>> sample_points(const ManifoldChart& chart, std::size_t count,
                                                      SplitMix64& rng, double margin = kBoundaryMargin) {
  std::vector<std::vector<double>> pts(count, std::vector<double>(chart.dim()));
  for (auto& p : pts) {
    for (int i = 0; i < chart.dim(); ++i) {
      const auto& c = chart.coordinates()[i];
      p[i] = c.periodic ? rng.uniform(c.lo, c.hi) : rng.uniform(c.lo + margin, c.hi - margin);
    }
  }
  return pts;
}

/// Cone points (base point, r). If `radii` is empty r is uniform in
/// [r_lo, r_hi]; otherwise the listed radii are cycled.
inline std::vector<std::vector<double>> sample_cone_points(const ManifoldChart& base, std::size_t count,
                                                           SplitMix64& rng, std::span<const double> radii,
                                                           double r_lo = 0.5, double r_hi = 3.0) {
  auto pts = sample_points(base, count, rng);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i].push_back(radii.empty() ? rng.uniform(r_lo, r_hi) : radii[i % radii.size()]);
  }
  return pts;
}

/// Random direction with i.i.d. uniform(-1,1) components, normalised to unit
/// length for the metric g (supplied as its Cholesky-free matrix).
inline std::vector<double> random_unit_vector(const Eigen::MatrixXd& g, SplitMix64& rng) {
  const int d = static_cast<int>(g.rows());
  Eigen::VectorXd v(d);
  do {
    for (int i = 0; i < d; ++i) v(i) = rng.uniform(-1.0, 1.0);
  } while (v.norm() < 1e-3);
  v /= std::sqrt(v.dot(g * v));
  return {v.data(), v.data() + d};
}

}  // namespace conegeo
