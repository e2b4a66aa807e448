#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "conegeo/catalog.hpp"
#include "conegeo/geometry.hpp"
#include "conegeo/quadrature.hpp"
#include "conegeo/sampling.hpp"
#include "fd_oracle.hpp"

namespace conegeo {
namespace {

constexpr double kPi = std::numbers::pi;

ManifoldChart round_s2() {
  return ManifoldChart("s2", {{"theta", 0.0, kPi, false}, {"phi", 0.0, 2 * kPi, true}},
                       [](std::span<const Jet> x) {
                         JetTensor g(2, Valence{0, 2}, Jet(0.0));
                         const Jet s = sin(x[0]);
                         g[0] = Jet(1.0);
                         g[3] = s * s;
                         return g;
                       });
}

ManifoldChart standard_t3() { return flat_t3_unnormalized().chart; }

std::vector<CatalogEntry> all_entries() {
  std::vector<CatalogEntry> out;
  for (const auto& id : catalog_ids()) out.push_back(catalog_entry(id));
  return out;
}

TEST(Christoffel, RoundS2ClosedForm) {
  const std::vector<double> p{kPi / 4, 1.0};
  const LocalGeometry geo(round_s2(), p, 2);
  // Gamma^theta_{phi phi} = -sin cos, Gamma^phi_{theta phi} = cot
  EXPECT_NEAR(geo.gamma(0, 1, 1).value(), -0.5, 1e-14);
  EXPECT_NEAR(geo.gamma(1, 0, 1).value(), 1.0, 1e-14);
  EXPECT_NEAR(geo.gamma(1, 1, 0).value(), 1.0, 1e-14);
  const auto fdgam = fd::christoffel(round_s2(), p);
  EXPECT_NEAR(fdgam[(0 * 2 + 1) * 2 + 1], -0.5, 1e-8);
}

TEST(Christoffel, FlatTorusVanishes) {
  const CatalogEntry e = blair_t3();
  const LocalGeometry geo(e.chart, std::vector<double>{0.3, 1.2, 4.0}, 3);
  EXPECT_EQ(max_abs(values(geo.christoffel())), 0.0);
  EXPECT_EQ(max_abs(values(geo.riemann(0))), 0.0);
}

// Every first and second metric derivative against Richardson-extrapolated
// central differences on all catalog charts.
TEST(JetVsFiniteDifference, MetricDerivatives) {
  SplitMix64 rng(101);
  for (const auto& e : all_entries()) {
    const auto pts = sample_points(e.chart, 5, rng, 0.1);
    const int d = e.chart.dim();
    for (const auto& p : pts) {
      const LocalGeometry geo(e.chart, p, 2);
      const auto gfn = fd::metric_fn(e.chart);
      for (int a = 0; a < d; ++a) {
        const auto fd1 = fd::derivative(gfn, p, a);
        fd::VecFn dfn = [&](const std::vector<double>& q) { return fd::derivative(gfn, q, a, 5e-3); };
        for (int b = a; b < d; ++b) {
          const auto fd2 = fd::derivative(dfn, p, b, 2e-2);
          for (int ij = 0; ij < d * d; ++ij) {
            const Jet& gij = geo.metric()[ij];
            const double j1 = gij.derivative(a).value();
            const double j2 = gij.derivative(a).derivative(b).value();
            EXPECT_NEAR(j1, fd1[ij], 1e-6 * (1.0 + std::abs(j1))) << e.id;
            EXPECT_NEAR(j2, fd2[ij], 1e-6 * (1.0 + std::abs(j2))) << e.id;
          }
        }
      }
    }
  }
}

TEST(JetVsFiniteDifference, ChristoffelAndCurvature) {
  SplitMix64 rng(5);
  for (const auto& id : {"s3-round", "s5-round"}) {
    const CatalogEntry e = catalog_entry(id);
    const int d = e.chart.dim();
    for (const auto& p : sample_points(e.chart, 3, rng, 0.15)) {
      const LocalGeometry geo(e.chart, p, 3);
      const auto gam = values(geo.christoffel());
      const auto fdgam = fd::christoffel(e.chart, p);
      for (std::size_t f = 0; f < gam.size(); ++f) EXPECT_NEAR(gam[f], fdgam[f], 1e-7);
      const auto r = values(geo.riemann(0));
      const auto fdr = fd::riemann(e.chart, p);
      for (std::size_t f = 0; f < r.size(); ++f) EXPECT_NEAR(r[f], fdr[f], 1e-5) << id << " " << f;
      (void)d;
    }
  }
}

// The closed-form Hopf metric is the pullback of the Euclidean metric.
TEST(Chart, HopfMetricIsEmbeddingPullback) {
  for (int n : {1, 2}) {
    const CatalogEntry e = round_sphere(n);
    const int d = e.chart.dim(), rows = 2 * n + 2;
    SplitMix64 rng(40 + n);
    for (const auto& p : sample_points(e.chart, 20, rng)) {
      const auto u = Jet::coordinates(p, 3);
      const JetTensor g = sphere_metric(n)(u);
      const auto jac = sphere_jacobian(n, u);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          Jet acc;
          for (int r = 0; r < rows; ++r) acc.add_product(jac[r * d + i], jac[r * d + j]);
          const Jet diff = acc - g[i * d + j];
          for (double c : diff.coefficients()) EXPECT_NEAR(c, 0.0, 1e-12) << n << " " << i << j;
        }
    }
  }
}

TEST(Curvature, UnitS3IsConstantCurvatureOne) {
  const CatalogEntry e = round_sphere(1);
  SplitMix64 rng(9);
  for (const auto& p : sample_points(e.chart, 20, rng)) {
    const LocalGeometry geo(e.chart, p, 2);
    const Tensor r = values(geo.riemann(0));
    const Eigen::MatrixXd g = e.chart.metric_at(p);
    const int d = 3;
    double worst = 0.0;
    // R^l_ijk = g_jk delta^l_i - g_ik delta^l_j
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) {
            const double expect = g(j, k) * (l == i) - g(i, k) * (l == j);
            worst = std::max(worst, std::abs(r[((l * d + i) * d + j) * d + k] - expect));
          }
    EXPECT_LT(worst, 1e-12);
    const Tensor ric = values(geo.ricci_from(geo.riemann(0)));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) EXPECT_NEAR(ric[i * d + j], 2.0 * g(i, j), 1e-12);
    EXPECT_NEAR(geo.scalar_curvature(0).value(), 6.0, 1e-12);
  }
}

TEST(Curvature, UnitS5IsEinsteinFour) {
  const CatalogEntry e = round_sphere(2);
  SplitMix64 rng(13);
  for (const auto& p : sample_points(e.chart, 10, rng)) {
    const LocalGeometry geo(e.chart, p, 2);
    const Tensor ric = values(geo.ricci(0));
    const Eigen::MatrixXd g = e.chart.metric_at(p);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) EXPECT_NEAR(ric[i * 5 + j], 4.0 * g(i, j), 1e-11);
    EXPECT_NEAR(geo.scalar_curvature(0).value(), 20.0, 1e-10);
  }
}

TEST(Curvature, SymmetriesAndFirstBianchi) {
  SplitMix64 rng(17);
  for (const auto& e : all_entries()) {
    const int d = e.chart.dim();
    for (const auto& p : sample_points(e.chart, 25, rng)) {
      const LocalGeometry geo(e.chart, p, 2);
      const Tensor rl = values(geo.riemann_lowered(0));
      auto R = [&](int i, int j, int k, int l) { return rl[((i * d + j) * d + k) * d + l]; };
      double worst = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
              worst = std::max(worst, std::abs(R(i, j, k, l) + R(j, i, k, l)));
              worst = std::max(worst, std::abs(R(i, j, k, l) + R(i, j, l, k)));
              worst = std::max(worst, std::abs(R(i, j, k, l) - R(k, l, i, j)));
              worst = std::max(worst, std::abs(R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l)));
            }
      EXPECT_LT(worst, 1e-8) << e.id;
    }
  }
}

TEST(CovariantDerivative, MetricIsParallel) {
  SplitMix64 rng(23);
  for (const auto& e : all_entries()) {
    for (const auto& p : sample_points(e.chart, 50, rng)) {
      const LocalGeometry geo(e.chart, p, 2);
      const Tensor ng = values(geo.covariant_derivative(geo.metric()));
      EXPECT_LT(max_abs(ng), 1e-9) << e.id;
    }
  }
}

TEST(CovariantDerivative, LeibnizOnVectorTimesForm) {
  // nabla(sigma(X)) = (nabla sigma)(X) + sigma(nabla X)
  const CatalogEntry e = round_sphere(1);
  const std::vector<double> p{0.6, 1.0, -2.0};
  const LocalGeometry geo(e.chart, p, 3);
  const TensorField xf = e.structure("xi-j").xi;
  const JetTensor x = xf(geo.coordinates());
  const JetTensor sigma = trig_test_one_forms(3)[3](geo.coordinates());
  Jet pairing;
  for (int a = 0; a < 3; ++a) pairing.add_product(sigma[a], x[a]);
  const JetTensor nx = geo.covariant_derivative(x);
  const JetTensor ns = geo.covariant_derivative(sigma);
  for (int k = 0; k < 3; ++k) {
    double rhs = 0.0;
    for (int a = 0; a < 3; ++a) rhs += ns[a * 3 + k].value() * x[a].value() + sigma[a].value() * nx[a * 3 + k].value();
    EXPECT_NEAR(pairing.derivative(k).value(), rhs, 1e-12);
  }
}

TEST(CovariantDerivative, InsufficientOrderThrows) {
  const CatalogEntry e = round_sphere(1);
  const LocalGeometry geo(e.chart, std::vector<double>{0.6, 1.0, 2.0}, 0);
  EXPECT_THROW(geo.covariant_derivative(geo.metric()), OrderError);
  EXPECT_THROW(geo.riemann(0), OrderError);
  const LocalGeometry geo2(e.chart, std::vector<double>{0.6, 1.0, 2.0}, 2);
  EXPECT_THROW(geo2.riemann(1), OrderError);
}

TEST(Operators, CodifferentialOnStandardTorus) {
  const ManifoldChart t3 = standard_t3();
  for (double t : {0.0, 0.7, 2.5, 5.0}) {
    const LocalGeometry geo(t3, std::vector<double>{t, 1.0, 2.0}, 2);
    JetTensor dt(3, Valence{0, 1}, Jet(0.0));
    dt[0] = Jet(1.0);
    EXPECT_EQ(geo.codifferential(dt).value(), 0.0);
    JetTensor s(3, Valence{0, 1}, Jet(0.0));
    s[0] = sin(geo.coordinates()[0]);
    EXPECT_NEAR(geo.codifferential(s).value(), -std::cos(t), 1e-14);
    EXPECT_NEAR(geo.laplacian(sin(geo.coordinates()[0])).value(), std::sin(t), 1e-14);
    EXPECT_EQ(geo.laplacian(Jet(3.0) + 0.0 * geo.coordinates()[1]).value(), 0.0);
  }
}

TEST(Operators, LaplacianIsCodifferentialOfDifferential) {
  SplitMix64 rng(29);
  for (const auto& e : all_entries()) {
    const auto fs = trig_test_functions(e.chart.dim());
    for (const auto& p : sample_points(e.chart, 10, rng)) {
      const LocalGeometry geo(e.chart, p, 3);
      for (const auto& f : fs) {
        const Jet fj = f(geo.coordinates()) + 0.0 * geo.coordinates()[0];
        const JetTensor df = gradient_form(f)(geo.coordinates());
        EXPECT_NEAR(geo.laplacian(fj).value(), geo.codifferential(df).value(), 1e-8) << e.id;
      }
    }
  }
}

// Laplacian on the unit S^3 against the ambient formula: for a linear function
// x_0 restricted to S^3, Delta x_0 = 3 x_0.
TEST(Operators, SphereEigenfunction) {
  const CatalogEntry e = round_sphere(1);
  SplitMix64 rng(31);
  for (const auto& p : sample_points(e.chart, 10, rng)) {
    const LocalGeometry geo(e.chart, p, 3);
    const Jet x0 = sphere_embedding(1, geo.coordinates())[0];
    EXPECT_NEAR(geo.laplacian(x0).value(), 3.0 * x0.value(), 1e-12);
  }
}

TEST(Frame, FlatQuarterMetric) {
  const CatalogEntry e = blair_t3();
  const auto f = orthonormal_frame(e.chart, std::vector<double>{1.0, 2.0, 3.0});
  EXPECT_TRUE(f.vectors.isApprox(2.0 * Eigen::MatrixXd::Identity(3, 3), 1e-15));
}

TEST(Frame, OrthonormalPositivelyOriented) {
  SplitMix64 rng(37);
  for (const auto& e : all_entries()) {
    for (const auto& p : sample_points(e.chart, 20, rng)) {
      const auto f = orthonormal_frame(e.chart, p);
      const Eigen::MatrixXd g = e.chart.metric_at(p);
      const Eigen::MatrixXd gram = f.vectors.transpose() * g * f.vectors;
      EXPECT_LT((gram - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_GT(f.vectors.determinant(), 0.0);
    }
  }
}

TEST(Frame, ScalarInvariantsAreFrameIndependent) {
  const CatalogEntry e = round_sphere(2);
  SplitMix64 rng(41);
  // Fixed orthogonal matrix from a QR factorization of a seeded random matrix.
  Eigen::MatrixXd a(5, 5);
  for (int i = 0; i < 25; ++i) a(i / 5, i % 5) = rng.uniform(-1, 1);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
  for (const auto& p : sample_points(e.chart, 10, rng)) {
    const LocalGeometry geo(e.chart, p, 2);
    const Tensor ric = values(geo.ricci(0));
    const auto f = orthonormal_frame(e.chart, p);
    const double n1 = norm_squared(ric, f);
    const double n2 = norm_squared(ric, rotated(f, q));
    const double n3 = norm_squared_coordinate(ric, e.chart.metric_at(p).inverse());
    EXPECT_NEAR(n1, 80.0, 1e-9);  // |4 g|^2 = 16 * 5
    EXPECT_NEAR(n1, n2, 1e-9);
    EXPECT_NEAR(n1, n3, 1e-9);
  }
}

TEST(Chart, PeriodicityAndErrors) {
  SplitMix64 rng(43);
  for (const auto& e : all_entries()) {
    const auto pts = sample_points(e.chart, 20, rng);
    EXPECT_LT(periodicity_defect(e.chart, pts), 1e-12) << e.id;
  }
  const CatalogEntry s3 = round_sphere(1);
  EXPECT_THROW(LocalGeometry(s3.chart, std::vector<double>{2.0, 0.0, 0.0}, 2), DomainError);
  const ManifoldChart bad("bad", {{"x", 0.0, 1.0, false}, {"y", 0.0, 1.0, false}}, [](std::span<const Jet> x) {
    JetTensor g(2, Valence{0, 2}, Jet(1.0));  // rank one
    (void)x;
    return g;
  });
  EXPECT_THROW(LocalGeometry(bad, std::vector<double>{0.5, 0.5}, 2), DegenerateMetricError);
  EXPECT_THROW(ManifoldChart("empty", {{"x", 1.0, 1.0, false}}, nullptr), DomainError);
}

TEST(Quadrature, TrapezoidExactForTrigPolynomials) {
  const auto rule = periodic_trapezoid(32, 0.0, 2 * kPi);
  for (int deg = 0; deg < 32; ++deg) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::cos(deg * rule.nodes[i]);
    EXPECT_NEAR(s, deg == 0 ? 2 * kPi : 0.0, 1e-12) << deg;
  }
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
  const auto rule = gauss_legendre(8, -1.0, 2.0);
  for (int deg = 0; deg < 16; ++deg) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], deg);
    const double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
    EXPECT_NEAR(s, exact, 1e-12 * std::max(1.0, std::abs(exact))) << deg;
  }
}

TEST(Quadrature, CatalogVolumes) {
  for (const auto& e : all_entries()) {
    const auto grid = product_grid(e.chart, e.quadrature_nodes);
    const double vol = integrate(e.chart, grid, [](const std::vector<double>&) { return 1.0; });
    EXPECT_NEAR(vol / e.known("volume"), 1.0, 1e-9) << e.id;
  }
}

TEST(Quadrature, SphereVolumeElementClosedForm) {
  const CatalogEntry s3 = round_sphere(1), s5 = round_sphere(2);
  const std::vector<double> p{0.4, 1.0, 2.0};
  EXPECT_NEAR(std::sqrt(s3.chart.metric_at(p).determinant()), std::cos(0.4) * std::sin(0.4), 1e-14);
  const std::vector<double> q{0.4, 0.9, 1.0, 2.0, 3.0};
  const double expect = std::pow(std::sin(0.4), 3) * std::cos(0.4) * std::sin(0.9) * std::cos(0.9);
  EXPECT_NEAR(std::sqrt(s5.chart.metric_at(q).determinant()), expect, 1e-14);
}

}  // namespace
}  // namespace conegeo
