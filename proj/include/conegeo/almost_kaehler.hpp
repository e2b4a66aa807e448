#pragma once

// Weitzenboeck ingredients of the almost Kaehler cone (gbar, J, Omega).
//
//   rho*(X,Y)   = 1/2 sum_a gbar(Rbar(X,Y) E_a, J E_a)
//   s*          = kStarCalibration * <rho*, Omega>
//   Ric'        = 1/2 (Ric + Ric(J., J.)),  Ric'' = Ric - Ric',  rho(X,Y) = Ric'(JX, Y)
//   phi(X,Y)    = -<nabla_{JX} Omega, nabla_Y Omega>
//   nabla*nabla Omega = -sum_a nabla_{E_a} nabla_{E_a} Omega
//   (delta^nabla T)(X) = -sum_a (nabla_{E_a} T)(E_a, X),  (J sigma)(X) = -sigma(JX),  (JT)(X,Y) = T(JX,Y)
//
// The squared norm of the curvature component R'' is never built from a
// definition; it is solved from the pointwise identity
//   8|R''|^2 = -Delta(s* - s) - 4 delta(J delta^nabla(J Ric'')) + 8 delta<rho*, nabla. Omega>
//              + 2|Ric''|^2 - |nabla*nabla Omega|^2 - |phi|^2 + 4<rho, phi> - 4<rho, nabla*nabla Omega>.
//
// The overall sign of phi is the one for which |nabla_X Omega|^2 = -phi(X, JX)
// holds with J defined by Omega = gbar(J., .); see the README.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "conegeo/contact.hpp"
#include "conegeo/geometry.hpp"
#include "conegeo/report.hpp"
#include "conegeo/sampling.hpp"

namespace conegeo {

/// The single convention constant relating <rho*, Omega> to s*. Fixed by
/// s* - s = |nabla Omega|^2; it does not depend on the manifold or point.
inline constexpr double kStarCalibration = 1.0;

inline constexpr int kDefaultJetOrder = 6;
inline constexpr int kMinWeitzenboeckOrder = 4;

/// Named terms of the solved identity, in the order they are summed.
inline constexpr std::array<const char*, 8> kWeitzenboeckTerms = {
    "-Delta(s*-s)", "-4 delta(J delta^nabla(J Ric''))", "8 delta<rho*, nabla Omega>", "2|Ric''|^2",
    "-|nabla*nabla Omega|^2", "-|phi|^2", "4<rho, phi>", "-4<rho, nabla*nabla Omega>"};

struct WeitzenboeckPointData {
  std::vector<double> point;
  Tensor omega, J;           // (0,2), (1,1)
  Tensor nabla_omega;        // (0,3), derivative slot last
  Tensor rough_laplacian;    // (0,2)
  Tensor rho_star, rho;      // (0,2)
  Tensor ric, ric_inv, ric_anti;
  Tensor phi;                // (0,2)
  Tensor alpha_form;         // <rho*, nabla_. Omega> as a cone 1-form
  double s = 0.0;
  double s_star = 0.0;
  double nabla_omega_sq = 0.0;
  double lap_star_minus_s = 0.0;  // Delta(s* - s)
  double div_term = 0.0;          // delta <rho*, nabla. Omega>
  double ric_div_term = 0.0;      // delta(J delta^nabla(J Ric''))
  std::array<double, 8> terms{};
  double solved_rpp_sq = 0.0;     // 8 |R''|^2
};

namespace detail {

/// Full-sum inner product of two (0,q) tensors using g^{-1} contractions.
inline double full_inner(const Tensor& a, const Tensor& b, const Eigen::MatrixXd& ginv) {
  const int d = a.dim();
  Tensor raised = a;
  std::size_t stride = a.size();
  for (int s = 0; s < a.rank(); ++s) {
    stride /= d;
    Tensor next(d, a.valence());
    const std::size_t block = stride * d;
    for (std::size_t f = 0; f < raised.size(); ++f) {
      const std::size_t base = (f / block) * block + f % stride;
      const int i = static_cast<int>((f / stride) % d);
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += ginv(i, k) * raised[base + static_cast<std::size_t>(k) * stride];
      next[f] = acc;
    }
    raised = std::move(next);
  }
  double s = 0.0;
  for (std::size_t f = 0; f < b.size(); ++f) s += raised[f] * b[f];
  return s;
}

/// T^{ab} = g^{ac} g^{bd} T_cd on jets.
inline JetTensor raise_both(const JetTensor& t, const JetTensor& ginv) {
  const int d = t.dim();
  JetTensor half(d, Valence{0, 2}), out(d, Valence{2, 0});
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c) {
      Jet acc;
      for (int b = 0; b < d; ++b) acc.add_product(ginv[a * d + b], t[b * d + c]);
      half[a * d + c] = std::move(acc);
    }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Jet acc;
      for (int c = 0; c < d; ++c) acc.add_product(half[a * d + c], ginv[c * d + b]);
      out[a * d + b] = std::move(acc);
    }
  return out;
}

/// rho*_{ij} = 1/2 g^{ab} Rl_{ijac} J^c_b.
inline JetTensor star_ricci(const JetTensor& rl, const JetTensor& j, const JetTensor& ginv) {
  const int d = rl.dim();
  JetTensor jg(d, Valence{2, 0});  // [c][a] = J^c_b g^{ba}
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a) {
      Jet acc;
      for (int b = 0; b < d; ++b) acc.add_product(j[c * d + b], ginv[b * d + a]);
      jg[c * d + a] = std::move(acc);
    }
  JetTensor rho(d, Valence{0, 2});
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      Jet acc;
      for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c) acc.add_product(rl[((i * d + k) * d + a) * d + c], jg[c * d + a], 0.5);
      rho[i * d + k] = std::move(acc);
    }
  return rho;
}

/// (JT)_{ij} = T_{aj} J^a_i.
inline JetTensor j_first(const JetTensor& t, const JetTensor& j) {
  const int d = t.dim();
  JetTensor out(d, Valence{0, 2});
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      Jet acc;
      for (int a = 0; a < d; ++a) acc.add_product(t[a * d + k], j[a * d + i]);
      out[i * d + k] = std::move(acc);
    }
  return out;
}

/// T(J., J.)_{ij} = T_{ab} J^a_i J^b_j.
inline JetTensor j_both(const JetTensor& t, const JetTensor& j) {
  const int d = t.dim();
  const JetTensor tj = j_first(t, j);  // [i][b] = T_{ab} J^a_i
  JetTensor out(d, Valence{0, 2});
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      Jet acc;
      for (int b = 0; b < d; ++b) acc.add_product(tj[i * d + b], j[b * d + k]);
      out[i * d + k] = std::move(acc);
    }
  return out;
}

inline Eigen::MatrixXd as_matrix(const Tensor& t) {
  const int d = t.dim();
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) m(i, k) = t[i * d + k];
  return m;
}

}  // namespace detail

/// Quantities that need only two metric derivatives: s, s*, |nabla Omega|^2
/// and <rho*, nabla. Omega>.
struct StarPointData {
  std::vector<double> point;
  double s = 0.0;
  double s_star = 0.0;
  double nabla_omega_sq = 0.0;
  Tensor nabla_omega;
  Tensor alpha_form;
};

inline StarPointData star_point(const ConeSymplecticData& data, const std::vector<double>& p) {
  const LocalGeometry geo(data.cone.chart(), p, 2);
  const auto x = geo.coordinates();
  const JetTensor om = truncated(data.omega(x), 1);
  const JetTensor j = truncated(data.J(x), 0);
  const JetTensor ginv = truncated(geo.inverse_metric(), 0);
  const JetTensor r = geo.riemann(0);
  const JetTensor rho_star = detail::star_ricci(geo.lower_riemann(r), j, ginv);
  const JetTensor om_up = detail::raise_both(truncated(om, 0), ginv);
  StarPointData out;
  out.point = p;
  out.s = geo.trace(geo.ricci_from(r)).value();
  double raw = 0.0;
  for (std::size_t f = 0; f < om_up.size(); ++f) raw += rho_star[f].value() * om_up[f].value();
  out.s_star = kStarCalibration * raw;
  out.nabla_omega = values(geo.covariant_derivative(om));
  const Eigen::MatrixXd gi = data.cone.chart().metric_at(p).inverse();
  out.nabla_omega_sq = detail::full_inner(out.nabla_omega, out.nabla_omega, gi);
  const int d = geo.dim();
  const Tensor rs = values(detail::raise_both(rho_star, ginv));
  out.alpha_form = Tensor(d, Valence{0, 1}, 0.0);
  for (int k = 0; k < d; ++k) {
    double acc = 0.0;
    for (int ab = 0; ab < d * d; ++ab) acc += rs[ab] * out.nabla_omega[ab * d + k];
    out.alpha_form[k] = acc;
  }
  return out;
}

/// Every term of the identity at one cone point. `jet_order` is the metric
/// expansion order; four metric derivatives are needed.
inline WeitzenboeckPointData weitzenboeck_point(const ConeSymplecticData& data, const std::vector<double>& p,
                                                int jet_order = kDefaultJetOrder) {
  if (jet_order < kMinWeitzenboeckOrder) {
    throw OrderError("the Weitzenboeck identity needs jet order >= 4, got " + std::to_string(jet_order));
  }
  // Every consumed quantity is truncated to curvature order 2, so four metric
  // derivatives suffice; orders above that would be computed and discarded.
  const LocalGeometry geo(data.cone.chart(), p, kMinWeitzenboeckOrder);
  const int d = geo.dim();
  const auto x = Jet::coordinates(p, 3);
  const JetTensor om = truncated(data.omega(x), 2);
  const JetTensor j = truncated(data.J(x), 2);
  const JetTensor ginv = truncated(geo.inverse_metric(), 2);
  const JetTensor r = geo.riemann(2);
  const JetTensor rl = geo.lower_riemann(r);
  const JetTensor ric = geo.ricci_from(r);

  WeitzenboeckPointData w;
  w.point = p;
  const Eigen::MatrixXd gi = data.cone.chart().metric_at(p).inverse();

  // s and s* as order-2 jets, then Delta(s* - s).
  const Jet s = geo.trace(ric);
  const JetTensor rho_star = detail::star_ricci(rl, j, ginv);
  const JetTensor om_up = detail::raise_both(om, ginv);
  Jet raw;
  for (std::size_t f = 0; f < om_up.size(); ++f) raw.add_product(rho_star[f], om_up[f]);
  const Jet s_star = kStarCalibration * raw;
  w.s = s.value();
  w.s_star = s_star.value();
  w.lap_star_minus_s = geo.laplacian(s_star - s).value();

  // Ricci decomposition.
  const JetTensor ric_inv = 0.5 * (ric + detail::j_both(ric, j));
  const JetTensor ric_anti = ric - ric_inv;
  const JetTensor rho = detail::j_first(ric_inv, j);
  w.ric = values(ric);
  w.ric_inv = values(ric_inv);
  w.ric_anti = values(ric_anti);
  w.rho = values(rho);
  w.rho_star = values(rho_star);

  // delta(J delta^nabla(J Ric'')).
  {
    const JetTensor div = geo.divergence_2tensor(detail::j_first(ric_anti, j));
    JetTensor jdiv(d, Valence{0, 1});
    for (int i = 0; i < d; ++i) {
      Jet acc;
      for (int a = 0; a < d; ++a) acc.add_product(div[a], j[a * d + i], -1.0);
      jdiv[i] = std::move(acc);
    }
    w.ric_div_term = geo.codifferential(jdiv).value();
  }

  // nabla Omega (order 1), nabla nabla Omega (order 0).
  const JetTensor nom = geo.covariant_derivative(om);
  const Tensor nnom = values(geo.covariant_derivative(nom));
  w.omega = values(om);
  w.J = values(j);
  w.nabla_omega = values(nom);
  w.nabla_omega_sq = detail::full_inner(w.nabla_omega, w.nabla_omega, gi);

  // delta <rho*, nabla. Omega>.
  {
    const JetTensor rs_up = detail::raise_both(truncated(rho_star, 1), truncated(ginv, 1));
    JetTensor a(d, Valence{0, 1});
    for (int k = 0; k < d; ++k) {
      Jet acc;
      for (int ab = 0; ab < d * d; ++ab) acc.add_product(rs_up[ab], nom[ab * d + k]);
      a[k] = std::move(acc);
    }
    w.alpha_form = values(a);
    w.div_term = geo.codifferential(a).value();
  }

  // Rough Laplacian.
  w.rough_laplacian = Tensor(d, Valence{0, 2}, 0.0);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      double acc = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) acc -= gi(a, b) * nnom[((i * d + k) * d + a) * d + b];
      w.rough_laplacian[i * d + k] = acc;
    }

  // phi(X,Y) = -<nabla_{JX} Omega, nabla_Y Omega>.
  {
    const Tensor& n = w.nabla_omega;
    const Tensor& jv = w.J;
    w.phi = Tensor(d, Valence{0, 2}, 0.0);
    std::vector<Tensor> along(d, Tensor(d, Valence{0, 2}, 0.0));  // nabla_{d_k} Omega
    for (int k = 0; k < d; ++k)
      for (int ab = 0; ab < d * d; ++ab) along[k][ab] = n[ab * d + k];
    for (int i = 0; i < d; ++i) {
      Tensor nj(d, Valence{0, 2}, 0.0);  // nabla_{J d_i} Omega
      for (int k = 0; k < d; ++k)
        for (int ab = 0; ab < d * d; ++ab) nj[ab] += jv[k * d + i] * along[k][ab];
      for (int k = 0; k < d; ++k) w.phi[i * d + k] = -detail::full_inner(nj, along[k], gi);
    }
  }

  w.terms = {-w.lap_star_minus_s,
             -4.0 * w.ric_div_term,
             8.0 * w.div_term,
             2.0 * detail::full_inner(w.ric_anti, w.ric_anti, gi),
             -detail::full_inner(w.rough_laplacian, w.rough_laplacian, gi),
             -detail::full_inner(w.phi, w.phi, gi),
             4.0 * detail::full_inner(w.rho, w.phi, gi),
             -4.0 * detail::full_inner(w.rho, w.rough_laplacian, gi)};
  w.solved_rpp_sq = 0.0;
  for (double t : w.terms) w.solved_rpp_sq += t;
  return w;
}

/// Evaluates the full point data at every cone point in parallel.
inline std::vector<WeitzenboeckPointData> weitzenboeck_sweep(const ConeSymplecticData& data,
                                                             std::span<const std::vector<double>> points,
                                                             int jet_order = kDefaultJetOrder) {
  if (jet_order < kMinWeitzenboeckOrder) {
    throw OrderError("the Weitzenboeck identity needs jet order >= 4, got " + std::to_string(jet_order));
  }
  std::vector<WeitzenboeckPointData> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = weitzenboeck_point(data, points[i], jet_order); });
  return out;
}

/// |nabla_X Omega|^2 + phi(X, JX) for a coordinate vector X; g^{-1} supplied.
inline double phi_identity_defect(const WeitzenboeckPointData& w, const Eigen::VectorXd& x,
                                  const Eigen::MatrixXd& ginv) {
  const int d = w.phi.dim();
  Tensor nx(d, Valence{0, 2}, 0.0);
  for (int ab = 0; ab < d * d; ++ab)
    for (int k = 0; k < d; ++k) nx[ab] += w.nabla_omega[ab * d + k] * x(k);
  const Eigen::VectorXd jx = detail::as_matrix(w.J) * x;
  const double phixjx = x.dot(detail::as_matrix(w.phi) * jx);
  return detail::full_inner(nx, nx, ginv) + phixjx;
}

/// |nabla Omega|^2 + sum_a phi(E_a, J E_a).
inline double phi_trace_defect(const WeitzenboeckPointData& w, const Eigen::MatrixXd& ginv) {
  const Eigen::MatrixXd phi = detail::as_matrix(w.phi);
  const Eigen::MatrixXd j = detail::as_matrix(w.J);
  return w.nabla_omega_sq + (ginv * phi * j).trace();
}

/// Base-side radial data at radius r: f = r^2 s* and alpha = r^2 <rho*, nabla. Omega>
/// restricted to base directions.
struct RadialProfile {
  std::vector<double> base_point;
  double r = 0.0;
  double f = 0.0;
  std::vector<double> alpha;
  double alpha_radial = 0.0;  // the dr component, zero when nabla_{dr} Omega = 0
};

inline RadialProfile extract_radial_profile(const ConeSymplecticData& data, const std::vector<double>& base_point,
                                            double r) {
  const StarPointData sp = star_point(data, data.cone.point(base_point, r));
  RadialProfile out;
  out.base_point = base_point;
  out.r = r;
  out.f = r * r * sp.s_star;
  const int m = data.cone.base_dim();
  for (int i = 0; i < m; ++i) out.alpha.push_back(r * r * sp.alpha_form[i]);
  out.alpha_radial = sp.alpha_form[m];
  return out;
}

namespace detail {

inline double relative_change(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline std::vector<std::vector<double>> cone_points(const ConeSymplecticData& data,
                                                    std::span<const std::vector<double>> base_points, double r) {
  std::vector<std::vector<double>> out;
  out.reserve(base_points.size());
  for (const auto& b : base_points) out.push_back(data.cone.point(b, r));
  return out;
}

}  // namespace detail

/// s* - s = |nabla Omega|^2, relative to max(1, |nabla Omega|^2).
inline CheckReport check_star_calibration(const ConeSymplecticData& data, std::span<const std::vector<double>> points,
                                          double tol = 1e-6) {
  return sweep("weitzenboeck.star_calibration", "s* - s = |nabla Omega|^2", tol, points,
               [&](const std::vector<double>& p) {
                 const StarPointData sp = star_point(data, p);
                 return (sp.s_star - sp.s - sp.nabla_omega_sq) / std::max(1.0, sp.nabla_omega_sq);
               });
}

/// f = r^2 s* and alpha do not depend on r: every radius is compared with the first.
inline CheckReport check_radial_profile(const ConeSymplecticData& data,
                                        std::span<const std::vector<double>> base_points,
                                        std::span<const double> radii, double tol = 1e-6) {
  const auto pts = detail::cone_points(data, base_points, radii.front());
  return sweep("weitzenboeck.radial_profile", "s* = f / r^2, <rho*, nabla Omega> = alpha / r^2", tol, pts,
               [&](const std::vector<double>& p) {
                 const std::vector<double> b(p.begin(), p.end() - 1);
                 const RadialProfile ref = extract_radial_profile(data, b, radii.front());
                 double worst = 0.0;
                 for (double r : radii.subspan(1)) {
                   const RadialProfile q = extract_radial_profile(data, b, r);
                   worst = std::max(worst, detail::relative_change(q.f, ref.f));
                   for (std::size_t i = 0; i < q.alpha.size(); ++i)
                     worst = std::max(worst, detail::relative_change(q.alpha[i], ref.alpha[i]));
                   worst = std::max(worst, std::abs(q.alpha_radial));
                 }
                 return worst;
               });
}

/// f > 0. The residual is max(0, -f), and exactly zero f also fails.
inline CheckReport check_f_positive(const ConeSymplecticData& data, std::span<const std::vector<double>> base_points,
                                    double r = 1.0) {
  const auto pts = detail::cone_points(data, base_points, r);
  return sweep("weitzenboeck.f_positive", "f = r^2 s* > 0", 0.0, pts, [&](const std::vector<double>& p) {
    const double f = extract_radial_profile(data, std::vector<double>(p.begin(), p.end() - 1), r).f;
    return f > 0.0 ? 0.0 : std::max(-f, std::numeric_limits<double>::min());
  });
}

/// |nabla_X Omega|^2 = -phi(X, JX) for `directions` random unit X per point,
/// and the traced form |nabla Omega|^2 = -sum_a phi(E_a, J E_a).
inline std::vector<CheckReport> check_phi_identity(const ConeSymplecticData& data,
                                                   std::span<const WeitzenboeckPointData> ws, int directions = 20,
                                                   std::uint64_t seed = 0x9e3779b9, double tol = 1e-7) {
  std::vector<std::vector<double>> pts;
  std::vector<double> pointwise(ws.size()), traced(ws.size());
  for (const auto& w : ws) pts.push_back(w.point);
  parallel_for(ws.size(), [&](std::size_t i) {
    const Eigen::MatrixXd g = data.cone.chart().metric_at(ws[i].point);
    const Eigen::MatrixXd gi = g.inverse();
    SplitMix64 rng(seed + i);
    double worst = 0.0;
    for (int k = 0; k < directions; ++k) {
      const auto v = random_unit_vector(g, rng);
      worst = std::max(worst, std::abs(phi_identity_defect(ws[i], Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()), gi)));
    }
    pointwise[i] = worst;
    traced[i] = phi_trace_defect(ws[i], gi);
  });
  return {summarize("weitzenboeck.phi_identity", "|nabla_X Omega|^2 = -phi(X, JX)", tol, pointwise, pts),
          summarize("weitzenboeck.phi_trace", "|nabla Omega|^2 = -sum phi(E_a, J E_a)", tol, traced, pts)};
}

/// Algebraic symmetries: Ric'' J-anti-invariant, rho J-invariant and
/// antisymmetric, phi antisymmetric and J-invariant. Orthonormal-frame components.
inline CheckReport check_algebraic_symmetries(const ConeSymplecticData& data,
                                              std::span<const WeitzenboeckPointData> ws, double tol = 1e-9) {
  std::vector<std::vector<double>> pts;
  std::vector<double> res(ws.size());
  for (const auto& w : ws) pts.push_back(w.point);
  parallel_for(ws.size(), [&](std::size_t i) {
    const auto& w = ws[i];
    const OrthonormalFrame frame = orthonormal_frame(data.cone.chart(), w.point);
    const Eigen::MatrixXd j = detail::as_matrix(w.J);
    const auto defect = [&](const Eigen::MatrixXd& m) {
      const int d = static_cast<int>(m.rows());
      Tensor t(d, Valence{0, 2}, 0.0);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) t[a * d + b] = m(a, b);
      return frame_max_abs(t, frame);
    };
    const Eigen::MatrixXd rpp = detail::as_matrix(w.ric_anti);
    const Eigen::MatrixXd rho = detail::as_matrix(w.rho);
    const Eigen::MatrixXd phi = detail::as_matrix(w.phi);
    res[i] = std::max({defect(j.transpose() * rpp * j + rpp), defect(j.transpose() * rho * j - rho),
                       defect(rho + rho.transpose()), defect(phi + phi.transpose()),
                       defect(j.transpose() * phi * j - phi)});
  });
  return summarize("weitzenboeck.algebraic_symmetries",
                   "Ric''(J,J) = -Ric'', rho(J,J) = rho = -rho^T, phi = -phi^T = phi(J,J)", tol, res, pts);
}

/// nabla_{dr} Omega = 0, and for base X the components of nabla_X Omega scale
/// like r^2 on base pairs and r on (dr, base) pairs.
inline CheckReport check_nabla_omega_structure(const ConeSymplecticData& data,
                                               std::span<const std::vector<double>> base_points, double r1 = 1.0,
                                               double r2 = 2.0, double tol = 1e-8) {
  const auto pts = detail::cone_points(data, base_points, r1);
  const int d = data.cone.dim();
  const int rad = data.cone.radial();
  return sweep("weitzenboeck.nabla_omega_blocks", "nabla_dr Omega = 0, nabla_X Omega = r^2 w_X + r dr ^ tau_X", tol,
               pts, [&](const std::vector<double>& p) {
                 const std::vector<double> b(p.begin(), p.end() - 1);
                 const StarPointData a = star_point(data, data.cone.point(b, r1));
                 const StarPointData c = star_point(data, data.cone.point(b, r2));
                 const OrthonormalFrame frame = orthonormal_frame(data.cone.chart(), a.point);
                 Tensor along_r(d, Valence{0, 2}, 0.0);
                 double scale = 1.0, worst = 0.0;
                 for (int ab = 0; ab < d * d; ++ab) along_r[ab] = a.nabla_omega[ab * d + rad];
                 worst = frame_max_abs(along_r, frame);
                 for (int i = 0; i < d; ++i)
                   for (int j = 0; j < d; ++j)
                     for (int k = 0; k < d; ++k) {
                       if (k == rad) continue;
                       const int q = 2 - (i == rad) - (j == rad);
                       const std::size_t f = (static_cast<std::size_t>(i) * d + j) * d + k;
                       const double expect = a.nabla_omega[f] * std::pow(r2 / r1, q);
                       scale = std::max(scale, std::abs(expect));
                       worst = std::max(worst, std::abs(c.nabla_omega[f] - expect) / scale);
                     }
                 return worst;
               });
}

/// The solved value 8|R''|^2 is a squared norm.
inline CheckReport check_solved_nonnegative(std::span<const WeitzenboeckPointData> ws, double tol = 1e-5) {
  std::vector<std::vector<double>> pts;
  std::vector<double> res;
  for (const auto& w : ws) {
    pts.push_back(w.point);
    res.push_back(std::max(0.0, -w.solved_rpp_sq));
  }
  return summarize("weitzenboeck.rpp_nonnegative", "8|R''|^2 >= 0", tol, res, pts);
}

/// r^4 times the solved value (and, with all_terms, every term) is the same at each radius.
inline CheckReport check_weitzenboeck_scaling(const ConeSymplecticData& data,
                                              std::span<const std::vector<double>> base_points,
                                              std::span<const double> radii, bool all_terms, double tol,
                                              int jet_order = kDefaultJetOrder) {
  const auto pts = detail::cone_points(data, base_points, radii.front());
  const std::string id = all_terms ? "weitzenboeck.term_scaling" : "weitzenboeck.rpp_scaling";
  const std::string anchor = all_terms ? "r^4 * term independent of r" : "8|R''|^2 = c / r^4";
  std::vector<double> res(base_points.size());
  parallel_for(base_points.size(), [&](std::size_t i) {
    const auto scaled = [&](double r) {
      const WeitzenboeckPointData w = weitzenboeck_point(data, data.cone.point(base_points[i], r), jet_order);
      std::vector<double> v{w.solved_rpp_sq * std::pow(r, 4)};
      if (all_terms)
        for (double t : w.terms) v.push_back(t * std::pow(r, 4));
      return v;
    };
    const auto ref = scaled(radii.front());
    double worst = 0.0;
    for (double r : radii.subspan(1)) {
      const auto v = scaled(r);
      for (std::size_t k = 0; k < v.size(); ++k) worst = std::max(worst, detail::relative_change(v[k], ref[k]));
    }
    res[i] = worst;
  });
  return summarize(id, anchor, tol, res, pts);
}

/// On a Kaehler cone every term of the identity vanishes.
inline CheckReport check_terms_vanish(std::span<const WeitzenboeckPointData> ws, double tol = 1e-6) {
  std::vector<std::vector<double>> pts;
  std::vector<double> res;
  for (const auto& w : ws) {
    pts.push_back(w.point);
    double worst = std::abs(w.solved_rpp_sq);
    for (double t : w.terms) worst = std::max(worst, std::abs(t));
    res.push_back(worst);
  }
  return summarize("weitzenboeck.kaehler_terms_vanish", "nabla Omega = 0 => every term = 0", tol, res, pts);
}

}  // namespace conegeo
