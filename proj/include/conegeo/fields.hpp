#pragma once

// Helpers for building tensor fields from component functions.

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "conegeo/chart.hpp"
#include "conegeo/geometry.hpp"
#include "conegeo/jet.hpp"
#include "conegeo/tensor.hpp"

namespace conegeo {

using ScalarField = std::function<Jet(std::span<const Jet>)>;

/// Vector field from its coordinate components.
inline TensorField vector_field(std::function<std::vector<Jet>(std::span<const Jet>)> comps) {
  return [comps = std::move(comps)](std::span<const Jet> x) {
    const auto v = comps(x);
    JetTensor t(static_cast<int>(x.size()), Valence{1, 0});
    for (std::size_t i = 0; i < v.size(); ++i) t[i] = v[i];
    return t;
  };
}

/// 1-form from its coordinate components.
inline TensorField one_form(std::function<std::vector<Jet>(std::span<const Jet>)> comps) {
  return [comps = std::move(comps)](std::span<const Jet> x) {
    const auto v = comps(x);
    JetTensor t(static_cast<int>(x.size()), Valence{0, 1});
    for (std::size_t i = 0; i < v.size(); ++i) t[i] = v[i];
    return t;
  };
}

/// Coordinate-constant vector field (components fixed in this chart).
inline TensorField constant_vector_field(std::vector<double> comps) {
  return [comps = std::move(comps)](std::span<const Jet> x) {
    JetTensor t(static_cast<int>(x.size()), Valence{1, 0});
    for (std::size_t i = 0; i < comps.size(); ++i) t[i] = Jet(comps[i]);
    return t;
  };
}

/// Lowers a vector field with the chart metric: eta = g(xi, .).
inline TensorField metric_dual(const ManifoldChart& chart, TensorField vec) {
  return [chart, vec = std::move(vec)](std::span<const Jet> x) {
    const JetTensor g = chart.metric(x);
    const JetTensor v = vec(x);
    const int d = static_cast<int>(x.size());
    JetTensor out(d, Valence{0, 1});
    for (int j = 0; j < d; ++j) {
      Jet acc;
      for (int i = 0; i < d; ++i) acc.add_product(g[i * d + j], v[i]);
      out[j] = std::move(acc);
    }
    return out;
  };
}

/// Exterior derivative of a 1-form field.
inline TensorField exterior_derivative(TensorField sigma) {
  return [sigma = std::move(sigma)](std::span<const Jet> x) { return exterior_derivative_1form(sigma(x)); };
}

/// d f of a scalar field.
inline TensorField gradient_form(ScalarField f) {
  return [f = std::move(f)](std::span<const Jet> x) {
    const Jet v = f(x);
    JetTensor out(static_cast<int>(x.size()), Valence{0, 1});
    for (std::size_t a = 0; a < x.size(); ++a) out[a] = v.derivative(static_cast<int>(a));
    return out;
  };
}

}  // namespace conegeo
