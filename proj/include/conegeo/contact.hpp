#pragma once

// Contact metric structures from a candidate Reeb field, their K-contact and
// Sasakian residuals, and the cone 2-form Omega = r dr ^ eta + r^2/2 d eta.

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "conegeo/chart.hpp"
#include "conegeo/cone.hpp"
#include "conegeo/errors.hpp"
#include "conegeo/fields.hpp"
#include "conegeo/geometry.hpp"
#include "conegeo/report.hpp"
#include "conegeo/sampling.hpp"

namespace conegeo {

/// phi with g(phi X, Y) = 1/2 d eta(X, Y): phi^k_i = 1/2 g^{kl} (d eta)_{il}.
inline TensorField contact_endomorphism(const ManifoldChart& chart, TensorField eta) {
  return [chart, eta = std::move(eta)](std::span<const Jet> x) {
    const int d = static_cast<int>(x.size());
    const JetTensor ginv = inverse(chart.metric(x));
    const JetTensor de = exterior_derivative_1form(eta(x));
    JetTensor phi(d, Valence{1, 1});
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i) {
        Jet acc;
        for (int l = 0; l < d; ++l) acc.add_product(ginv[k * d + l], de[i * d + l], 0.5);
        phi[k * d + i] = std::move(acc);
      }
    return phi;
  };
}

struct ContactMetricStructure {
  ManifoldChart chart;
  TensorField xi;
  TensorField eta;
  TensorField deta;
  TensorField phi;
  int n = 0;
};

namespace detail {

inline ContactMetricStructure assemble_contact(const ManifoldChart& chart, TensorField xi) {
  ContactMetricStructure s;
  s.chart = chart;
  s.xi = xi;
  s.eta = metric_dual(chart, xi);
  s.deta = exterior_derivative(s.eta);
  s.phi = contact_endomorphism(chart, s.eta);
  s.n = (chart.dim() - 1) / 2;
  return s;
}

inline std::vector<std::vector<double>> default_probes(const ManifoldChart& chart) {
  SplitMix64 rng(0x5eedc0de);
  return sample_points(chart, 64, rng);
}

/// | |xi| - 1 | at a point.
inline double unit_defect(const ContactMetricStructure& s, const std::vector<double>& p) {
  const auto x = Jet::coordinates(p, 0);
  const Tensor xi = values(s.xi(x));
  const Eigen::MatrixXd g = s.chart.metric_at(p);
  const Eigen::Map<const Eigen::VectorXd> v(xi.components().data(), xi.dim());
  return std::abs(std::sqrt(v.dot(g * v)) - 1.0);
}

/// phi^2 + Id - eta (x) xi at a point, frame max component.
inline double kc_defect(const ContactMetricStructure& s, const std::vector<double>& p) {
  const int d = s.chart.dim();
  const auto x = Jet::coordinates(p, 1);
  const Tensor phi = values(s.phi(x));
  const Tensor xi = values(s.xi(x));
  const Tensor eta = values(s.eta(x));
  Tensor res(d, Valence{1, 1}, 0.0);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      double acc = (k == i ? 1.0 : 0.0) - xi[k] * eta[i];
      for (int j = 0; j < d; ++j) acc += phi[k * d + j] * phi[j * d + i];
      res[k * d + i] = acc;
    }
  return frame_max_abs(res, orthonormal_frame(s.chart, p));
}

}  // namespace detail

/// Residual report of phi^2 = -Id + eta (x) xi, without throwing.
inline CheckReport kc_residual(const ManifoldChart& chart, const TensorField& xi,
                               std::span<const std::vector<double>> points, double tol = 1e-8) {
  const auto s = detail::assemble_contact(chart, xi);
  return sweep("contact.kc", "phi^2 = -Id + eta (x) xi", tol, points,
               [&](const std::vector<double>& p) { return detail::kc_defect(s, p); });
}

inline CheckReport unit_length_residual(const ManifoldChart& chart, const TensorField& xi,
                                        std::span<const std::vector<double>> points, double tol = 1e-9) {
  const auto s = detail::assemble_contact(chart, xi);
  return sweep("contact.unit_length", "|xi| = 1", tol, points,
               [&](const std::vector<double>& p) { return detail::unit_defect(s, p); });
}

/// Validates unit length and phi^2 = -Id + eta (x) xi at the probe points.
inline ContactMetricStructure build_contact(const ManifoldChart& chart, TensorField xi,
                                            std::span<const std::vector<double>> probes, double tol = 1e-8) {
  const auto unit = unit_length_residual(chart, xi, probes);
  if (!unit.passed()) {
    throw NotContactMetricError("candidate Reeb field is not unit length on " + chart.label(), unit.max_residual,
                                unit.witness);
  }
  const auto kc = kc_residual(chart, xi, probes, tol);
  if (!kc.passed()) {
    throw NotContactMetricError("phi^2 = -Id + eta (x) xi fails on " + chart.label(), kc.max_residual, kc.witness);
  }
  return detail::assemble_contact(chart, std::move(xi));
}

inline ContactMetricStructure build_contact(const ManifoldChart& chart, TensorField xi, double tol = 1e-8) {
  return build_contact(chart, std::move(xi), detail::default_probes(chart), tol);
}

/// eta(xi) = 1, phi xi = 0 and xi _| d eta = 0, all in one residual.
inline CheckReport reeb_conditions(const ContactMetricStructure& s, std::span<const std::vector<double>> points,
                                   double tol = 1e-8) {
  const int d = s.chart.dim();
  return sweep("contact.reeb", "eta(xi) = 1, phi xi = 0, xi _| d eta = 0", tol, points,
               [&](const std::vector<double>& p) {
                 const auto x = Jet::coordinates(p, 1);
                 const Tensor xi = values(s.xi(x)), eta = values(s.eta(x));
                 const Tensor phi = values(s.phi(x)), de = values(s.deta(x));
                 double worst = 0.0, ex = 0.0;
                 for (int i = 0; i < d; ++i) ex += eta[i] * xi[i];
                 worst = std::abs(ex - 1.0);
                 Tensor phixi(d, Valence{1, 0}, 0.0), ixde(d, Valence{0, 1}, 0.0);
                 for (int k = 0; k < d; ++k)
                   for (int i = 0; i < d; ++i) {
                     phixi[k] += phi[k * d + i] * xi[i];
                     ixde[k] += xi[i] * de[i * d + k];
                   }
                 const auto frame = orthonormal_frame(s.chart, p);
                 worst = std::max(worst, frame_max_abs(phixi, frame));
                 return std::max(worst, frame_max_abs(ixde, frame));
               });
}

/// (L_xi g)(X, Y) = g(nabla_X xi, Y) + g(X, nabla_Y xi) in an orthonormal frame.
inline Tensor killing_tensor(const ContactMetricStructure& s, const std::vector<double>& p) {
  const int d = s.chart.dim();
  const LocalGeometry geo(s.chart, p, 1);
  const Tensor nxi = values(geo.covariant_derivative(s.xi(geo.coordinates())));  // [k][a]
  const Eigen::MatrixXd g = s.chart.metric_at(p);
  Tensor lg(d, Valence{0, 2}, 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += g(b, k) * nxi[k * d + a] + g(a, k) * nxi[k * d + b];
      lg[a * d + b] = acc;
    }
  return lg;
}

inline CheckReport killing_residual(const ContactMetricStructure& s, std::span<const std::vector<double>> points,
                                    double tol = 1e-7) {
  return sweep("contact.killing", "L_xi g = 0", tol, points, [&](const std::vector<double>& p) {
    return frame_max_abs(killing_tensor(s, p), orthonormal_frame(s.chart, p));
  });
}

inline double ric_xi_xi(const ContactMetricStructure& s, const std::vector<double>& p) {
  const int d = s.chart.dim();
  const LocalGeometry geo(s.chart, p, 2);
  const Tensor ric = values(geo.ricci(0));
  const Tensor xi = values(s.xi(geo.coordinates()));
  double acc = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) acc += ric[a * d + b] * xi[a] * xi[b];
  return acc;
}

/// Ric(xi, xi) - 2n pointwise.
inline CheckReport kcontact_via_ricci(const ContactMetricStructure& s, std::span<const std::vector<double>> points,
                                      double tol = 1e-7) {
  return sweep("contact.ric_xi_xi", "Ric(xi,xi) = 2n", tol, points,
               [&](const std::vector<double>& p) { return ric_xi_xi(s, p) - 2.0 * s.n; });
}

/// (nabla_X (nabla xi))(Y) - (g(xi,Y) X - g(X,Y) xi), orthonormal frame components.
inline double sasaki_defect(const ContactMetricStructure& s, const std::vector<double>& p) {
  const int d = s.chart.dim();
  const LocalGeometry geo(s.chart, p, 2);
  const JetTensor xi = s.xi(geo.coordinates());
  const Tensor nnxi = values(geo.covariant_derivative(geo.covariant_derivative(xi)));  // [k][Y][X]
  const Tensor xv = values(xi);
  const Tensor eta = values(s.eta(geo.coordinates()));
  const Eigen::MatrixXd g = s.chart.metric_at(p);
  Tensor res(d, Valence{1, 2}, 0.0);
  for (int k = 0; k < d; ++k)
    for (int y = 0; y < d; ++y)
      for (int x = 0; x < d; ++x) {
        const double wedge = eta[y] * (k == x) - g(x, y) * xv[k];
        res[(k * d + y) * d + x] = nnxi[(k * d + y) * d + x] - wedge;
      }
  return frame_max_abs(res, orthonormal_frame(s.chart, p));
}

inline CheckReport sasaki_residual(const ContactMetricStructure& s, std::span<const std::vector<double>> points,
                                   double tol = 1e-7) {
  return sweep("contact.sasaki", "nabla_X (nabla xi) = g(xi, .) X - g(X, .) xi", tol, points,
               [&](const std::vector<double>& p) { return sasaki_defect(s, p); });
}

/// Omega on the cone and the almost complex structure J with Omega = gbar(J., .).
struct ConeSymplecticData {
  ConeChart cone;
  ContactMetricStructure structure;
  TensorField omega;  // (0,2)
  TensorField J;      // (1,1), layout [k][i]
};

/// Omega = r dr ^ eta + r^2/2 d eta as a cone field.
inline TensorField cone_omega(const ConeChart& cone, const ContactMetricStructure& s) {
  const TensorField eta = cone.lift(s.eta);
  const TensorField deta = cone.lift(s.deta);
  return [eta, deta](std::span<const Jet> x) {
    const int d = static_cast<int>(x.size());
    const int rad = d - 1;
    const Jet& r = x[rad];
    const Jet half_r2 = 0.5 * (r * r);
    const JetTensor e = eta(x);
    JetTensor w = deta(x);
    for (auto& c : w.components()) c = half_r2 * c;
    for (int j = 0; j < rad; ++j) {
      const Jet v = r * e[j];
      w[rad * d + j] = v;
      w[j * d + rad] = -v;
    }
    return w;
  };
}

/// J^k_i = gbar^{kl} Omega_{il}.
inline TensorField cone_complex_structure(const ConeChart& cone, TensorField omega) {
  const ManifoldChart chart = cone.chart();
  return [chart, omega = std::move(omega)](std::span<const Jet> x) {
    const int d = static_cast<int>(x.size());
    const JetTensor ginv = inverse(chart.metric(x));
    const JetTensor w = omega(x);
    JetTensor j(d, Valence{1, 1});
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i) {
        Jet acc;
        for (int l = 0; l < d; ++l) acc.add_product(ginv[k * d + l], w[i * d + l]);
        j[k * d + i] = std::move(acc);
      }
    return j;
  };
}

namespace detail {

inline double j_square_defect(const Tensor& j) {
  const int d = j.dim();
  double worst = 0.0;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      double acc = k == i ? 1.0 : 0.0;
      for (int m = 0; m < d; ++m) acc += j[k * d + m] * j[m * d + i];
      worst = std::max(worst, std::abs(acc));
    }
  return worst;
}

}  // namespace detail

inline ConeSymplecticData build_cone_symplectic(const ContactMetricStructure& s, double r_lo = kDefaultConeRLo,
                                                double r_hi = kDefaultConeRHi, double tol = 1e-8) {
  ConeChart cone = build_cone(s.chart, r_lo, r_hi);
  TensorField omega = cone_omega(cone, s);
  TensorField J = cone_complex_structure(cone, omega);
  SplitMix64 rng(0xc0de);
  const double hi = std::min(r_hi, std::max(2.0 * r_lo, 3.0));
  for (const auto& p : sample_cone_points(s.chart, 32, rng, {}, r_lo, hi)) {
    const Tensor j = values(J(Jet::coordinates(p, 1)));
    const double defect = detail::j_square_defect(j);
    if (!(defect <= tol)) {
      throw IncompatibleStructureError("J^2 + Id = " + std::to_string(defect) + " on the cone over " +
                                       s.chart.label() + "; the base structure violates phi^2 = -Id + eta (x) xi");
    }
  }
  return {std::move(cone), s, std::move(omega), std::move(J)};
}

/// J^2 = -Id and gbar(J., J.) = gbar.
inline CheckReport check_almost_hermitian(const ConeSymplecticData& data, std::span<const std::vector<double>> points,
                                          double tol = 1e-9) {
  const int d = data.cone.dim();
  return sweep("cone.almost_hermitian", "J^2 = -Id, gbar(J., J.) = gbar", tol, points,
               [&](const std::vector<double>& p) {
                 const Tensor j = values(data.J(Jet::coordinates(p, 1)));
                 const Eigen::MatrixXd g = data.cone.chart().metric_at(p);
                 const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> jm(
                     j.components().data(), d, d);
                 const double orth = (jm.transpose() * g * jm - g).cwiseAbs().maxCoeff();
                 return std::max(detail::j_square_defect(j), orth);
               });
}

inline CheckReport check_omega_closed(const ConeSymplecticData& data, std::span<const std::vector<double>> points,
                                      double tol = 1e-9) {
  return sweep("cone.omega_closed", "d Omega = 0", tol, points, [&](const std::vector<double>& p) {
    const auto x = Jet::coordinates(p, 2);
    return frame_max_abs(values(exterior_derivative_2form(data.omega(x))), orthonormal_frame(data.cone.chart(), p));
  });
}

/// |Omega|^2 - (2n + 2) with the full-sum norm.
inline CheckReport check_omega_norm(const ConeSymplecticData& data, std::span<const std::vector<double>> points,
                                    double tol = 1e-9) {
  const double expect = data.cone.dim();
  return sweep("cone.omega_norm", "|Omega|^2 = 2n + 2", tol, points, [&](const std::vector<double>& p) {
    const Tensor w = values(data.omega(Jet::coordinates(p, 1)));
    return norm_squared(w, orthonormal_frame(data.cone.chart(), p)) - expect;
  });
}

/// max |nabla Omega| (frame components); zero exactly when the cone is Kaehler.
inline CheckReport parallel_omega_residual(const ConeSymplecticData& data,
                                           std::span<const std::vector<double>> points, double tol = 1e-7) {
  return sweep("cone.omega_parallel", "nabla Omega = 0 iff Sasakian", tol, points, [&](const std::vector<double>& p) {
    const LocalGeometry geo(data.cone.chart(), p, 2);
    const Tensor nw = values(geo.covariant_derivative(data.omega(geo.coordinates())));
    return frame_max_abs(nw, orthonormal_frame(data.cone.chart(), p));
  });
}

}  // namespace conegeo
