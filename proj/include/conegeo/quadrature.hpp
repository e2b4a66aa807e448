#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "conegeo/chart.hpp"
#include "conegeo/errors.hpp"
#include "conegeo/report.hpp"

namespace conegeo {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi] (Newton iteration on P_n).
inline QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw UsageError("Gauss-Legendre needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute P_n' at the converged node for the weight.
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

/// Trapezoidal rule for a periodic coordinate on [lo, hi): exact for
/// trigonometric polynomials of degree < n.
inline QuadratureRule periodic_trapezoid(int n, double lo, double hi) {
  if (n < 1) throw UsageError("trapezoid rule needs at least one node");
  QuadratureRule rule;
  const double h = (hi - lo) / n;
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(lo + h * i);
    rule.weights.push_back(h);
  }
  return rule;
}

/// Tensor-product rule over a chart: trapezoid on periodic coordinates,
/// Gauss-Legendre elsewhere.
struct ProductGrid {
  std::vector<QuadratureRule> axes;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.nodes.size();
    return n;
  }

  /// Point and combined weight of flat index `flat`.
  double point(std::size_t flat, std::vector<double>& out) const {
    out.resize(axes.size());
    double w = 1.0;
    for (std::size_t k = axes.size(); k-- > 0;) {
      const std::size_t m = axes[k].nodes.size();
      const std::size_t i = flat % m;
      flat /= m;
      out[k] = axes[k].nodes[i];
      w *= axes[k].weights[i];
    }
    return w;
  }
};

inline ProductGrid product_grid(const ManifoldChart& chart, std::span<const int> nodes) {
  if (static_cast<int>(nodes.size()) != chart.dim()) throw UsageError("grid needs one node count per coordinate");
  ProductGrid grid;
  for (int i = 0; i < chart.dim(); ++i) {
    const auto& c = chart.coordinates()[i];
    grid.axes.push_back(c.periodic ? periodic_trapezoid(nodes[i], c.lo, c.hi) : gauss_legendre(nodes[i], c.lo, c.hi));
  }
  return grid;
}

/// Integral of f against the Riemannian volume of the chart (sqrt det g).
/// Contributions are reduced by pairwise summation in grid order.
inline double integrate(const ManifoldChart& chart, const ProductGrid& grid,
                        const std::function<double(const std::vector<double>&)>& f) {
  std::vector<double> terms(grid.size());
  parallel_for(terms.size(), [&](std::size_t i) {
    std::vector<double> p;
    const double w = grid.point(i, p);
    const double vol = std::sqrt(chart.metric_at(p).determinant());
    terms[i] = w * vol * f(p);
  });
  return pairwise_sum(terms);
}

}  // namespace conegeo
