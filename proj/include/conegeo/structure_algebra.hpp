#pragma once

// Algebra of two orthogonal complex structures J, J' on one cone metric:
//   Q = JJ' + J'J = lambda Id,  A = JJ' - J'J,  A^2 = (lambda^2 - 4) Id,
//   I = A / sqrt(4 - lambda^2),  K = IJ.
// The sign of I is the one carried by A; with K = IJ the triple satisfies
// IJ = -JI = K, JK = I, KI = J without a further choice.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "conegeo/contact.hpp"
#include "conegeo/geometry.hpp"
#include "conegeo/report.hpp"

namespace conegeo {

struct StructurePair {
  ConeChart cone;
  TensorField J, Jp;  // (1,1), layout [k][i]
};

inline StructurePair make_structure_pair(const ConeSymplecticData& a, const ConeSymplecticData& b) {
  if (a.cone.chart().label() != b.cone.chart().label()) {
    throw UsageError("structures live on different cones: " + a.cone.chart().label() + ", " +
                     b.cone.chart().label());
  }
  return {a.cone, a.J, b.J};
}

namespace detail {

inline JetTensor compose(const JetTensor& a, const JetTensor& b) {
  const int d = a.dim();
  JetTensor out(d, Valence{1, 1});
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      Jet acc;
      for (int m = 0; m < d; ++m) acc.add_product(a[k * d + m], b[m * d + i]);
      out[k * d + i] = std::move(acc);
    }
  return out;
}

inline Eigen::MatrixXd endo_matrix(const TensorField& f, const std::vector<double>& p) {
  const Tensor t = values(f(Jet::coordinates(p, 1)));
  const int d = t.dim();
  Eigen::MatrixXd m(d, d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) m(k, i) = t[k * d + i];
  return m;
}

inline Tensor endo_tensor(const Eigen::MatrixXd& m) {
  const int d = static_cast<int>(m.rows());
  Tensor t(d, Valence{1, 1}, 0.0);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) t[k * d + i] = m(k, i);
  return t;
}

inline double endo_frame_max(const Eigen::MatrixXd& m, const ManifoldChart& chart, const std::vector<double>& p) {
  return frame_max_abs(endo_tensor(m), orthonormal_frame(chart, p));
}

}  // namespace detail

inline TensorField anticommutator_field(const StructurePair& pair) {
  return [j = pair.J, jp = pair.Jp](std::span<const Jet> x) {
    const JetTensor a = j(x), b = jp(x);
    return detail::compose(a, b) + detail::compose(b, a);
  };
}

inline TensorField commutator_field(const StructurePair& pair) {
  return [j = pair.J, jp = pair.Jp](std::span<const Jet> x) {
    const JetTensor a = j(x), b = jp(x);
    return detail::compose(a, b) - detail::compose(b, a);
  };
}

struct LambdaEstimate {
  double lambda = 0.0;
  double residual = 0.0;   // max over samples of |Q - lambda Id| in an orthonormal frame
  double variation = 0.0;  // max - min of the pointwise trace(Q) / dim
  CheckReport report;
};

/// lambda = trace(Q)/dim averaged over the samples. Throws ImpossiblePairError
/// when |lambda| > 2 + tol.
inline LambdaEstimate anticommutator_lambda(const StructurePair& pair, std::span<const std::vector<double>> points,
                                            double tol = 1e-8) {
  const TensorField q = anticommutator_field(pair);
  const int d = pair.cone.dim();
  std::vector<double> pointwise(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    pointwise[i] = detail::endo_matrix(q, points[i]).trace() / d;
  });
  LambdaEstimate out;
  out.lambda = pairwise_sum(pointwise) / static_cast<double>(points.size());
  if (std::abs(out.lambda) > 2.0 + tol) {
    throw ImpossiblePairError("lambda = " + std::to_string(out.lambda) + " violates |lambda| <= 2");
  }
  const auto [lo, hi] = std::minmax_element(pointwise.begin(), pointwise.end());
  out.variation = *hi - *lo;
  std::vector<double> res(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Eigen::MatrixXd m = detail::endo_matrix(q, points[i]) - out.lambda * Eigen::MatrixXd::Identity(d, d);
    res[i] = detail::endo_frame_max(m, pair.cone.chart(), points[i]);
  });
  out.report = summarize("structure.anticommutator", "JJ' + J'J = lambda Id, lambda constant", tol, res, points);
  out.residual = out.report.max_residual;
  if (out.variation > out.residual) {
    out.residual = out.variation;
    out.report.max_residual = out.variation;
    if (out.variation > tol) out.report.verdict = Verdict::fail;
  }
  return out;
}

struct ThirdStructure {
  double lambda = 0.0;
  TensorField I, K;  // K = IJ
};

/// I = A / sqrt(4 - lambda^2). Throws DegeneratePairError when |lambda| >= 2 - tol.
inline ThirdStructure build_third_structure(const StructurePair& pair, double lambda, double tol = 1e-8) {
  if (std::abs(lambda) >= 2.0 - tol) {
    throw DegeneratePairError("lambda = " + std::to_string(lambda) + ": J' = +-J, no third structure");
  }
  const double scale = 1.0 / std::sqrt(4.0 - lambda * lambda);
  TensorField a = commutator_field(pair);
  TensorField i = [a, scale](std::span<const Jet> x) { return scale * a(x); };
  TensorField k = [i, j = pair.J](std::span<const Jet> x) { return detail::compose(i(x), j(x)); };
  return {lambda, std::move(i), std::move(k)};
}

/// A^2 + (4 - lambda^2) Id = 0.
inline CheckReport check_commutator_square(const StructurePair& pair, double lambda,
                                           std::span<const std::vector<double>> points, double tol = 1e-8) {
  const TensorField a = commutator_field(pair);
  const int d = pair.cone.dim();
  return sweep("structure.commutator_square", "A^2 = (lambda^2 - 4) Id", tol, points,
               [&](const std::vector<double>& p) {
                 const Eigen::MatrixXd m = detail::endo_matrix(a, p);
                 return detail::endo_frame_max(m * m + (4.0 - lambda * lambda) * Eigen::MatrixXd::Identity(d, d),
                                               pair.cone.chart(), p);
               });
}

/// Q symmetric, A skew, both with respect to gbar.
inline CheckReport check_pair_symmetries(const StructurePair& pair, std::span<const std::vector<double>> points,
                                         double tol = 1e-9) {
  const TensorField q = anticommutator_field(pair), a = commutator_field(pair);
  return sweep("structure.pair_symmetries", "gbar Q symmetric, gbar A skew", tol, points,
               [&](const std::vector<double>& p) {
                 const Eigen::MatrixXd g = pair.cone.chart().metric_at(p);
                 const Eigen::MatrixXd gq = g * detail::endo_matrix(q, p);
                 const Eigen::MatrixXd ga = g * detail::endo_matrix(a, p);
                 const double scale = g.cwiseAbs().maxCoeff();
                 return std::max((gq - gq.transpose()).cwiseAbs().maxCoeff(),
                                 (ga + ga.transpose()).cwiseAbs().maxCoeff()) / scale;
               });
}

/// I^2 = -Id, gbar(I., I.) = gbar, IJ = -JI, IJ' = -J'I.
inline CheckReport check_third_structure(const StructurePair& pair, const ThirdStructure& t,
                                         std::span<const std::vector<double>> points, double tol = 1e-8) {
  const int d = pair.cone.dim();
  return sweep("structure.third_complex", "I^2 = -Id, gbar(I., I.) = gbar, IJ = -JI, IJ' = -J'I", tol, points,
               [&](const std::vector<double>& p) {
                 const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
                 const Eigen::MatrixXd g = pair.cone.chart().metric_at(p);
                 const Eigen::MatrixXd i = detail::endo_matrix(t.I, p);
                 const Eigen::MatrixXd j = detail::endo_matrix(pair.J, p);
                 const Eigen::MatrixXd jp = detail::endo_matrix(pair.Jp, p);
                 const auto fm = [&](const Eigen::MatrixXd& m) { return detail::endo_frame_max(m, pair.cone.chart(), p); };
                 const Eigen::MatrixXd gi = i.transpose() * g * i - g;
                 return std::max({fm(i * i + id), fm(i * j + j * i), fm(i * jp + jp * i),
                                  gi.cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff()});
               });
}

/// IJ = -JI = K, JK = I, KI = J.
inline CheckReport check_quaternion_relations(const StructurePair& pair, const ThirdStructure& t,
                                              std::span<const std::vector<double>> points, double tol = 1e-8) {
  return sweep("structure.quaternion", "IJ = -JI = K, JK = I, KI = J", tol, points, [&](const std::vector<double>& p) {
    const Eigen::MatrixXd i = detail::endo_matrix(t.I, p);
    const Eigen::MatrixXd j = detail::endo_matrix(pair.J, p);
    const Eigen::MatrixXd k = detail::endo_matrix(t.K, p);
    const auto fm = [&](const Eigen::MatrixXd& m) { return detail::endo_frame_max(m, pair.cone.chart(), p); };
    return std::max({fm(i * j - k), fm(j * i + k), fm(j * k - i), fm(k * i - j)});
  });
}

/// |nabla T| in an orthonormal frame for an endomorphism field T.
inline CheckReport check_parallel_endomorphism(const ConeChart& cone, const TensorField& t, std::string identity,
                                               std::string anchor, std::span<const std::vector<double>> points,
                                               double tol = 1e-7) {
  return sweep(std::move(identity), std::move(anchor), tol, points, [&](const std::vector<double>& p) {
    const LocalGeometry geo(cone.chart(), p, 2);
    const Tensor nt = values(geo.covariant_derivative(truncated(t(geo.coordinates()), 1)));
    return frame_max_abs(nt, orthonormal_frame(cone.chart(), p));
  });
}

struct S2Coefficients {
  double a = 0.0, b = 0.0, c = 0.0;  // on (I, J, K)
};

/// Coefficients of J'' = a I + b J + c K; for quaternion units a = -tr(J'' I) / dim.
inline S2Coefficients s2_coefficients(const StructurePair& pair, const ThirdStructure& t, const TensorField& jpp,
                                      const std::vector<double>& p) {
  const int d = pair.cone.dim();
  const Eigen::MatrixXd x = detail::endo_matrix(jpp, p);
  return {-(x * detail::endo_matrix(t.I, p)).trace() / d, -(x * detail::endo_matrix(pair.J, p)).trace() / d,
          -(x * detail::endo_matrix(t.K, p)).trace() / d};
}

struct S2FamilyResult {
  S2Coefficients mean;
  CheckReport report;
};

/// Solves J'' = a I + b J + c K at every sample. The residual combines the
/// decomposition defect, |a^2 + b^2 + c^2 - 1| and the spread of (a, b, c).
inline S2FamilyResult s2_family_check(const StructurePair& pair, const ThirdStructure& t, const TensorField& jpp,
                                      std::span<const std::vector<double>> points, double tol = 1e-8) {
  std::vector<S2Coefficients> coeff(points.size());
  std::vector<double> res(points.size());
  parallel_for(points.size(), [&](std::size_t n) {
    const auto& p = points[n];
    const S2Coefficients c = s2_coefficients(pair, t, jpp, p);
    coeff[n] = c;
    const Eigen::MatrixXd fit = c.a * detail::endo_matrix(t.I, p) + c.b * detail::endo_matrix(pair.J, p) +
                                c.c * detail::endo_matrix(t.K, p);
    res[n] = std::max(detail::endo_frame_max(detail::endo_matrix(jpp, p) - fit, pair.cone.chart(), p),
                      std::abs(c.a * c.a + c.b * c.b + c.c * c.c - 1.0));
  });
  S2FamilyResult out;
  std::vector<double> as, bs, cs;
  for (const auto& c : coeff) {
    as.push_back(c.a);
    bs.push_back(c.b);
    cs.push_back(c.c);
  }
  const double count = static_cast<double>(points.size());
  out.mean = {pairwise_sum(as) / count, pairwise_sum(bs) / count, pairwise_sum(cs) / count};
  for (std::size_t n = 0; n < points.size(); ++n) {
    res[n] = std::max({res[n], std::abs(coeff[n].a - out.mean.a), std::abs(coeff[n].b - out.mean.b),
                       std::abs(coeff[n].c - out.mean.c)});
  }
  out.report = summarize("structure.s2_family", "J'' = a I + b J + c K, a^2 + b^2 + c^2 = 1, (a, b, c) constant",
                         tol, res, points);
  return out;
}

}  // namespace conegeo
