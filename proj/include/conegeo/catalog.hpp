#pragma once

// Closed-form test manifolds. Every metric and Reeb field is an expression over
// jets so that derivatives come out exact.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conegeo/chart.hpp"
#include "conegeo/errors.hpp"
#include "conegeo/fields.hpp"
#include "conegeo/jet.hpp"
#include "conegeo/tensor.hpp"

namespace conegeo {

/// Candidate Reeb field with the classification it is expected to receive.
struct ReebCandidate {
  std::string name;
  TensorField xi;
  bool contact_metric = false;
  bool k_contact = false;
  bool sasakian = false;
  Eigen::MatrixXd ambient;  // linear map on R^{2n+2} generating xi; empty for the torus
};

struct KnownValue {
  std::string name;
  double value = 0.0;
  std::string provenance;  // "closed form", "derived", ...
};

struct CatalogEntry {
  std::string id;
  std::string description;
  ManifoldChart chart;
  int n = 0;  // dim = 2n + 1
  std::vector<ReebCandidate> structures;
  std::optional<double> einstein_constant;
  bool flat_cone = false;
  std::vector<int> quadrature_nodes;
  std::vector<KnownValue> known_values;

  const ReebCandidate& structure(const std::string& name) const {
    for (const auto& s : structures)
      if (s.name == name) return s;
    throw UsageError("manifold " + id + " has no structure named " + name);
  }

  const ReebCandidate& primary_structure() const { return structures.front(); }

  double known(const std::string& name) const {
    for (const auto& k : known_values)
      if (k.name == name) return k.value;
    throw UsageError("manifold " + id + " has no known value " + name);
  }
};

namespace detail {

inline std::vector<Coordinate> torus_coordinates() {
  const double tau = 2.0 * std::numbers::pi;
  return {{"t", 0.0, tau, true}, {"x", 0.0, tau, true}, {"y", 0.0, tau, true}};
}

inline MetricFunction scaled_flat_metric(double c) {
  return [c](std::span<const Jet> x) {
    const int d = static_cast<int>(x.size());
    JetTensor g(d, Valence{0, 2}, Jet(0.0));
    for (int i = 0; i < d; ++i) g[i * d + i] = Jet(c);
    return g;
  };
}

// Amplitudes of z_k = a_k(theta) e^{i phi_k} on S^{2n+1}, with their theta
// partials: da[j][k] = d a_k / d theta_j.
struct Amplitudes {
  std::vector<Jet> a;
  std::vector<std::vector<Jet>> da;
};

inline Amplitudes hopf_amplitudes(int n, std::span<const Jet> theta) {
  Amplitudes out;
  if (n == 1) {
    const Jet c = cos(theta[0]), s = sin(theta[0]);
    out.a = {c, s};
    out.da = {{-s, c}};
  } else if (n == 2) {
    const Jet c1 = cos(theta[0]), s1 = sin(theta[0]);
    const Jet c2 = cos(theta[1]), s2 = sin(theta[1]);
    out.a = {c1, s1 * c2, s1 * s2};
    out.da = {{-s1, c1 * c2, c1 * s2}, {Jet(0.0), -(s1 * s2), s1 * c2}};
  } else {
    throw UsageError("Hopf chart implemented for n = 1, 2");
  }
  return out;
}

}  // namespace detail

/// Embedding x(u) in R^{2n+2} of the Hopf chart u = (theta_1..theta_n, phi_0..phi_n).
inline std::vector<Jet> sphere_embedding(int n, std::span<const Jet> u) {
  const auto amp = detail::hopf_amplitudes(n, u.first(n));
  std::vector<Jet> x(2 * n + 2);
  for (int k = 0; k <= n; ++k) {
    x[2 * k] = amp.a[k] * cos(u[n + k]);
    x[2 * k + 1] = amp.a[k] * sin(u[n + k]);
  }
  return x;
}

/// Closed-form Jacobian dx/du, row-major (2n+2) x (2n+1).
inline std::vector<Jet> sphere_jacobian(int n, std::span<const Jet> u) {
  const auto amp = detail::hopf_amplitudes(n, u.first(n));
  const int rows = 2 * n + 2, cols = 2 * n + 1;
  std::vector<Jet> jac(static_cast<std::size_t>(rows) * cols, Jet(0.0));
  for (int k = 0; k <= n; ++k) {
    const Jet c = cos(u[n + k]), s = sin(u[n + k]);
    for (int j = 0; j < n; ++j) {
      jac[(2 * k) * cols + j] = amp.da[j][k] * c;
      jac[(2 * k + 1) * cols + j] = amp.da[j][k] * s;
    }
    jac[(2 * k) * cols + n + k] = -(amp.a[k] * s);
    jac[(2 * k + 1) * cols + n + k] = amp.a[k] * c;
  }
  return jac;
}

/// Round metric in Hopf coordinates, diagonal in closed form:
/// dtheta_1^2 + sin^2 theta_1 dtheta_2^2 + ... + sum_k a_k^2 dphi_k^2.
/// Building it as Jac^T Jac would leave roundoff in entries that vanish
/// exactly, which the small diagonal entries near the chart edge amplify.
inline MetricFunction sphere_metric(int n) {
  return [n](std::span<const Jet> u) {
    const auto amp = detail::hopf_amplitudes(n, u.first(n));
    const int d = 2 * n + 1;
    JetTensor g(d, Valence{0, 2});
    Jet h(1.0);
    for (int j = 0; j < n; ++j) {
      g[j * d + j] = h;
      const Jet s = sin(u[j]);
      h = h * s * s;
    }
    for (int k = 0; k <= n; ++k) g[(n + k) * d + n + k] = amp.a[k] * amp.a[k];
    return g;
  };
}

/// Tangent field on the sphere induced by the linear vector field x -> M x of
/// R^{2n+2}: xi = (Jac^T Jac)^{-1} Jac^T (M x). Exact when M is skew.
inline TensorField ambient_vector_field(int n, Eigen::MatrixXd m) {
  return [n, m = std::move(m)](std::span<const Jet> u) {
    const int rows = 2 * n + 2, d = 2 * n + 1;
    const auto x = sphere_embedding(n, u);
    const auto jac = sphere_jacobian(n, u);
    std::vector<Jet> mx(rows);
    for (int i = 0; i < rows; ++i) {
      Jet acc;
      for (int j = 0; j < rows; ++j)
        if (m(i, j) != 0.0) acc += m(i, j) * x[j];
      mx[i] = std::move(acc);
    }
    const JetTensor ginv = inverse(sphere_metric(n)(u));
    std::vector<Jet> rhs(d);
    for (int a = 0; a < d; ++a) {
      Jet acc;
      for (int r = 0; r < rows; ++r) acc.add_product(jac[r * d + a], mx[r]);
      rhs[a] = std::move(acc);
    }
    JetTensor xi(d, Valence{1, 0});
    for (int a = 0; a < d; ++a) {
      Jet acc;
      for (int b = 0; b < d; ++b) acc.add_product(ginv[a * d + b], rhs[b]);
      xi[a] = std::move(acc);
    }
    return xi;
  };
}

/// Left multiplications by the unit quaternions i, j, k on R^4 = H.
inline Eigen::Matrix4d quaternion_left(char unit) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  switch (unit) {
    case 'i':
      m << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
      break;
    case 'j':
      m << 0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0;
      break;
    case 'k':
      m << 0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0;
      break;
    default:
      throw UsageError("quaternion unit must be i, j or k");
  }
  return m;
}

/// Standard complex structure of C^{n+1} on R^{2n+2}.
inline Eigen::MatrixXd standard_complex_structure(int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n + 2, 2 * n + 2);
  for (int k = 0; k <= n; ++k) {
    m(2 * k + 1, 2 * k) = 1.0;
    m(2 * k, 2 * k + 1) = -1.0;
  }
  return m;
}

/// Reeb field a i + b j + c k on S^3 (unit (a, b, c) gives a Sasakian structure).
inline ReebCandidate s3_quaternion_structure(double a, double b, double c, std::string name = "xi-abc") {
  const Eigen::MatrixXd m = a * quaternion_left('i') + b * quaternion_left('j') + c * quaternion_left('k');
  return {std::move(name), ambient_vector_field(1, m), true, true, true, m};
}

/// Flat T^3 = R^3 / (2 pi Z)^3 with g = 1/4 delta and Blair's contact form
/// eta = 1/2 (cos t dx + sin t dy), xi = 2 (cos t d_x + sin t d_y).
inline CatalogEntry blair_t3() {
  CatalogEntry e;
  e.id = "t3-blair";
  e.description = "flat torus, g = 1/4 delta, eta = 1/2 (cos t dx + sin t dy)";
  e.chart = ManifoldChart("t3-blair", detail::torus_coordinates(), detail::scaled_flat_metric(0.25));
  e.n = 1;
  e.structures.push_back({"xi", vector_field([](std::span<const Jet> x) {
                            return std::vector<Jet>{Jet(0.0), 2.0 * cos(x[0]), 2.0 * sin(x[0])};
                          }),
                          true, false, false, {}});
  e.einstein_constant = 0.0;
  e.quadrature_nodes = {32, 32, 32};
  const double pi = std::numbers::pi;
  e.known_values = {
      {"volume", pi * pi * pi, "closed form (2 pi)^3 / 8"},
      {"kc_residual", 0.0, "closed form"},
      {"ric_xi_xi_minus_2n", -2.0, "flat metric"},
      {"killing_residual_pi_2", 2.0, "orthonormal components of L_xi g at t = pi/2"},
      {"radial_f", 2.0, "symbolic: r^2 s* on the cone"},
      {"scalar_cone_r2", -6.0, "symbolic: r^2 s on the cone"},
      {"solved_rpp_sq_r4", 68.0, "symbolic: r^4 * 8|R''|^2 on the cone"},
  };
  return e;
}

/// The contact form as printed without Blair's normalization: g = delta,
/// eta = cos t dx + sin t dy. Unit length holds but phi^2 = -1/4 (Id - eta xi).
inline CatalogEntry flat_t3_unnormalized() {
  CatalogEntry e;
  e.id = "t3-unnormalized";
  e.description = "flat torus, g = delta, eta = cos t dx + sin t dy (fails phi^2 = -Id + eta xi)";
  e.chart = ManifoldChart("t3-unnormalized", detail::torus_coordinates(), detail::scaled_flat_metric(1.0));
  e.n = 1;
  e.structures.push_back({"xi", vector_field([](std::span<const Jet> x) {
                            return std::vector<Jet>{Jet(0.0), cos(x[0]), sin(x[0])};
                          }),
                          false, false, false, {}});
  e.einstein_constant = 0.0;
  e.quadrature_nodes = {32, 32, 32};
  const double pi = std::numbers::pi;
  e.known_values = {
      {"volume", 8.0 * pi * pi * pi, "closed form (2 pi)^3"},
      {"kc_residual", 0.75, "phi^2 = -1/4 (Id - eta xi) on ker eta"},
  };
  return e;
}

/// Unit S^{2n+1} (n = 1, 2) in Hopf coordinates (theta_1..theta_n in (0, pi/2),
/// phi_0..phi_n periodic).
inline CatalogEntry round_sphere(int n) {
  if (n != 1 && n != 2) throw UsageError("round_sphere supports n = 1, 2");
  CatalogEntry e;
  e.id = n == 1 ? "s3-round" : "s5-round";
  e.n = n;
  const double pi = std::numbers::pi;
  std::vector<Coordinate> coords;
  for (int j = 0; j < n; ++j) coords.push_back({"theta" + std::to_string(j + 1), 0.0, pi / 2, false});
  for (int k = 0; k <= n; ++k) coords.push_back({"phi" + std::to_string(k + 1), 0.0, 2 * pi, true});
  e.chart = ManifoldChart(e.id, std::move(coords), sphere_metric(n));
  if (n == 1) {
    e.description = "unit S^3 in Hopf coordinates (theta, phi1, phi2), Reeb fields from i, j, k";
    for (char u : {'i', 'j', 'k'}) {
      const Eigen::MatrixXd m = quaternion_left(u);
      e.structures.push_back({std::string("xi-") + u, ambient_vector_field(1, m), true, true, true, m});
    }
    e.quadrature_nodes = {32, 32, 32};
    e.known_values = {{"volume", 2 * pi * pi, "closed form"}, {"scalar", 6.0, "closed form"}};
  } else {
    e.description = "unit S^5 in Hopf coordinates, Reeb field from the complex structure of C^3";
    const Eigen::MatrixXd m = standard_complex_structure(2);
    e.structures.push_back({"xi-i", ambient_vector_field(2, m), true, true, true, m});
    e.quadrature_nodes = {12, 12, 12, 12, 12};
    e.known_values = {{"volume", pi * pi * pi, "closed form"}, {"scalar", 20.0, "closed form"}};
  }
  e.einstein_constant = 2.0 * n;
  e.flat_cone = true;
  return e;
}

inline std::vector<std::string> catalog_ids() { return {"t3-blair", "t3-unnormalized", "s3-round", "s5-round"}; }

inline CatalogEntry catalog_entry(const std::string& id) {
  if (id == "t3-blair") return blair_t3();
  if (id == "t3-unnormalized") return flat_t3_unnormalized();
  if (id == "s3-round") return round_sphere(1);
  if (id == "s5-round") return round_sphere(2);
  throw UsageError("unknown manifold id: " + id);
}

/// Trigonometric test functions in the chart coordinates (index 0 is the constant 1).
inline std::vector<ScalarField> trig_test_functions(int dim) {
  auto c = [dim](int i) { return i % dim; };
  return {
      [](std::span<const Jet>) { return Jet(1.0); },
      [](std::span<const Jet> x) { return sin(x[0]); },
      [c](std::span<const Jet> x) { return cos(x[0] + 2.0 * x[c(1)]); },
      [c](std::span<const Jet> x) { return sin(x[c(1)]) * cos(x[c(2)]) + 0.5; },
      [c, dim](std::span<const Jet> x) { return cos(x[0]) * sin(x[c(1)] - x[c(dim - 1)]) + sin(2.0 * x[c(2)]); },
  };
}

/// Trigonometric test 1-forms in the chart coordinates (index 0 is dx^0).
inline std::vector<TensorField> trig_test_one_forms(int dim) {
  auto c = [dim](int i) { return i % dim; };
  auto form = [dim](std::function<void(std::span<const Jet>, std::vector<Jet>&)> fill) {
    return one_form([dim, fill = std::move(fill)](std::span<const Jet> x) {
      std::vector<Jet> s(dim, Jet(0.0));
      fill(x, s);
      return s;
    });
  };
  return {
      form([](std::span<const Jet>, std::vector<Jet>& s) { s[0] = Jet(1.0); }),
      form([](std::span<const Jet> x, std::vector<Jet>& s) { s[0] = sin(x[0]); }),
      form([c](std::span<const Jet> x, std::vector<Jet>& s) {
        s[0] = cos(x[c(1)]);
        s[c(2)] += sin(x[0]);
      }),
      form([c](std::span<const Jet> x, std::vector<Jet>& s) {
        s[c(1)] = cos(x[0]) * sin(x[c(2)]);
        s[c(2)] += 0.5 * cos(2.0 * x[c(1)]);
      }),
      form([c, dim](std::span<const Jet> x, std::vector<Jet>& s) {
        s[c(dim - 1)] = sin(x[0] + x[c(1)]);
        s[0] += cos(x[c(dim - 1)]);
      }),
  };
}

}  // namespace conegeo
