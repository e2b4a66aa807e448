#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "conegeo/errors.hpp"
#include "conegeo/jet.hpp"
#include "conegeo/tensor.hpp"

namespace conegeo {

struct Coordinate {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;

  double period() const noexcept { return hi - lo; }
};

/// Metric components as a function of coordinate jets; must return a (0,2)
/// tensor whose entries are built only from jet arithmetic on the inputs.
using MetricFunction = std::function<JetTensor(std::span<const Jet>)>;

/// Any tensor field evaluated on coordinate jets.
using TensorField = std::function<JetTensor(std::span<const Jet>)>;

/// A single coordinate patch carrying a Riemannian metric.
class ManifoldChart {
 public:
  ManifoldChart() = default;

  ManifoldChart(std::string label, std::vector<Coordinate> coords, MetricFunction metric)
      : label_(std::move(label)), coords_(std::move(coords)), metric_(std::move(metric)) {
    for (const auto& c : coords_) {
      if (!(c.hi > c.lo)) throw DomainError("empty coordinate interval for " + c.name);
    }
  }

  const std::string& label() const noexcept { return label_; }
  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  const std::vector<Coordinate>& coordinates() const noexcept { return coords_; }

  JetTensor metric(std::span<const Jet> x) const { return metric_(x); }

  Eigen::MatrixXd metric_at(std::span<const double> p) const {
    std::vector<Jet> x(p.begin(), p.end());
    const JetTensor g = metric_(x);
    const int n = dim();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g[i * n + j].value();
    return m;
  }

  /// Periodic coordinates are unrestricted; the others must lie strictly
  /// inside their interval by at least `margin`.
  bool is_interior(std::span<const double> p, double margin = 0.0) const {
    if (static_cast<int>(p.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
      if (!std::isfinite(p[i])) return false;
      if (coords_[i].periodic) continue;
      if (!(p[i] > coords_[i].lo + margin && p[i] < coords_[i].hi - margin)) return false;
    }
    return true;
  }

  void require_interior(std::span<const double> p) const {
    if (!is_interior(p)) throw DomainError("point outside the domain of chart " + label_);
  }

  /// Cholesky factor of g at p; throws DegenerateMetricError when g is not SPD.
  Eigen::MatrixXd cholesky(std::span<const double> p) const {
    const Eigen::MatrixXd g = metric_at(p);
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + g.cwiseAbs().maxCoeff())) {
      throw DegenerateMetricError("metric not symmetric on chart " + label_);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) {
      throw DegenerateMetricError("metric not positive definite on chart " + label_);
    }
    return llt.matrixL();
  }

 private:
  std::string label_;
  std::vector<Coordinate> coords_;
  MetricFunction metric_;
};

/// Max deviation of the metric under translation by one period in each periodic
/// coordinate, over the given points (spot check of the chart invariant).
inline double periodicity_defect(const ManifoldChart& chart, std::span<const std::vector<double>> points) {
  double defect = 0.0;
  for (const auto& p : points) {
    const Eigen::MatrixXd g0 = chart.metric_at(p);
    for (int i = 0; i < chart.dim(); ++i) {
      if (!chart.coordinates()[i].periodic) continue;
      std::vector<double> q = p;
      q[i] += chart.coordinates()[i].period();
      defect = std::max(defect, (chart.metric_at(q) - g0).cwiseAbs().maxCoeff());
    }
  }
  return defect;
}

}  // namespace conegeo
