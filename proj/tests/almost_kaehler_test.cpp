#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "conegeo/almost_kaehler.hpp"
#include "conegeo/catalog.hpp"
#include "fd_oracle.hpp"

namespace conegeo {
namespace {

ConeSymplecticData cone_data(const std::string& id) {
  const CatalogEntry e = catalog_entry(id);
  return build_cone_symplectic(build_contact(e.chart, e.primary_structure().xi));
}

std::vector<std::vector<double>> base_samples(const std::string& id, std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return sample_points(catalog_entry(id).chart, n, rng);
}

std::vector<std::vector<double>> cone_samples(const std::string& id, std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return sample_cone_points(catalog_entry(id).chart, n, rng, {}, 0.5, 3.0);
}

TEST(Weitzenboeck, RejectsLowJetOrder) {
  const auto data = cone_data("t3-blair");
  const std::vector<double> p{0.3, 1.0, 2.0, 1.0};
  EXPECT_THROW(weitzenboeck_point(data, p, 3), OrderError);
  EXPECT_NO_THROW(weitzenboeck_point(data, p, 4));
}

// Closed-form values on the cone over the flat torus with xi = 2(cos t, sin t).
TEST(Weitzenboeck, BlairConeValues) {
  const auto data = cone_data("t3-blair");
  const std::array<double, 8> expect = {0, 0, 0, 4, -16, -32, 64, 48};
  for (const auto& p : cone_samples("t3-blair", 12, 1)) {
    const double r = p.back();
    const auto w = weitzenboeck_point(data, p);
    EXPECT_NEAR(w.s, -6.0 / (r * r), 1e-11);
    EXPECT_NEAR(w.s_star, 2.0 / (r * r), 1e-11);
    EXPECT_NEAR(w.nabla_omega_sq, 8.0 / (r * r), 1e-11);
    for (int k = 0; k < 8; ++k) EXPECT_NEAR(w.terms[k] * std::pow(r, 4), expect[k], 1e-8) << kWeitzenboeckTerms[k];
    EXPECT_NEAR(w.solved_rpp_sq * std::pow(r, 4), 68.0, 1e-8);
  }
}

TEST(Weitzenboeck, JetOrderBeyondFourChangesNothing) {
  const auto data = cone_data("t3-blair");
  const std::vector<double> p{1.1, 0.4, 2.2, 1.3};
  const auto a = weitzenboeck_point(data, p, 4);
  const auto b = weitzenboeck_point(data, p, 7);
  EXPECT_NEAR(a.solved_rpp_sq, b.solved_rpp_sq, 1e-12);
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(a.terms[k], b.terms[k], 1e-12);
}

// s* and |nabla Omega|^2 from differenced metric components.
TEST(Weitzenboeck, StarScalarMatchesFiniteDifferences) {
  for (const auto& id : {"t3-blair", "s3-round"}) {
    const auto data = cone_data(id);
    const auto& chart = data.cone.chart();
    const std::vector<double> p = cone_samples(id, 1, 2).front();
    const int d = chart.dim();
    const Eigen::MatrixXd g = chart.metric_at(p);
    const Eigen::MatrixXd gi = g.inverse();
    const Tensor om = values(data.omega(Jet::coordinates(p, 1)));
    const Tensor j = values(data.J(Jet::coordinates(p, 1)));
    const auto rup = fd::riemann(chart, p);
    double s_star = 0.0;
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        double rho = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
              for (int m = 0; m < d; ++m)
                rho += 0.5 * gi(a, b) * g(c, m) * rup[((m * d + i) * d + k) * d + a] * j[c * d + b];
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) s_star += gi(i, a) * gi(k, b) * rho * om[a * d + b];
      }
    const fd::VecFn omega_fn = [&](const std::vector<double>& q) {
      const Tensor t = values(data.omega(Jet::coordinates(q, 1)));
      return std::vector<double>(t.components().begin(), t.components().end());
    };
    const auto gam = fd::christoffel(chart, p);
    Tensor nab(d, Valence{0, 3}, 0.0);
    for (int k = 0; k < d; ++k) {
      const auto dk = fd::derivative(omega_fn, p, k);
      for (int i = 0; i < d; ++i)
        for (int l = 0; l < d; ++l) {
          double v = dk[i * d + l];
          for (int m = 0; m < d; ++m)
            v -= gam[(m * d + k) * d + i] * om[m * d + l] + gam[(m * d + k) * d + l] * om[i * d + m];
          nab[(i * d + l) * d + k] = v;
        }
    }
    const auto w = weitzenboeck_point(data, p);
    EXPECT_NEAR(w.s_star, s_star, 1e-5) << id;
    EXPECT_NEAR(w.nabla_omega_sq, detail::full_inner(nab, nab, gi), 1e-7) << id;
  }
}

TEST(Weitzenboeck, StarCalibrationAndRadialProfile) {
  for (const auto& id : {"t3-blair", "s3-round", "s5-round"}) {
    const auto data = cone_data(id);
    const auto cal = check_star_calibration(data, cone_samples(id, 100, 3));
    EXPECT_TRUE(cal.passed()) << id << " " << cal.max_residual;
    const std::vector<double> radii{1.0, 2.0, 3.0};
    const auto prof = check_radial_profile(data, base_samples(id, 50, 4), radii);
    EXPECT_TRUE(prof.passed()) << id << " " << prof.max_residual;
    const auto blocks = check_nabla_omega_structure(data, base_samples(id, 50, 5));
    EXPECT_TRUE(blocks.passed()) << id << " " << blocks.max_residual;
  }
  const auto data = cone_data("t3-blair");
  EXPECT_NEAR(extract_radial_profile(data, {0.2, 1.0, 1.0}, 1.7).f, 2.0, 1e-12);
  EXPECT_TRUE(check_f_positive(data, base_samples("t3-blair", 50, 6)).passed());
  // A Kaehler cone has f = 0, which is not positive.
  EXPECT_FALSE(check_f_positive(cone_data("s3-round"), base_samples("s3-round", 5, 6)).passed());
}

TEST(Weitzenboeck, PhiIdentitiesAndSymmetries) {
  for (const auto& id : {"t3-blair", "s3-round"}) {
    const auto data = cone_data(id);
    const auto ws = weitzenboeck_sweep(data, cone_samples(id, 40, 7));
    for (const auto& rep : check_phi_identity(data, ws)) EXPECT_TRUE(rep.passed()) << id << rep.identity << " " << rep.max_residual;
    const auto sym = check_algebraic_symmetries(data, ws);
    EXPECT_TRUE(sym.passed()) << id << " " << sym.max_residual;
  }
}

// With the opposite sign of phi the pointwise identity fails by 2|nabla_X Omega|^2.
TEST(Weitzenboeck, PhiSignIsDetected) {
  const auto data = cone_data("t3-blair");
  auto w = weitzenboeck_point(data, {0.7, 1.0, 2.0, 1.5});
  const Eigen::MatrixXd gi = data.cone.chart().metric_at(w.point).inverse();
  w.phi = -1.0 * w.phi;
  EXPECT_GT(std::abs(phi_trace_defect(w, gi)), 1.0);
}

TEST(Weitzenboeck, SolvedNormNonnegativeAndScales) {
  const auto data = cone_data("t3-blair");
  const auto ws = weitzenboeck_sweep(data, cone_samples("t3-blair", 60, 8));
  EXPECT_TRUE(check_solved_nonnegative(ws).passed());
  const auto base = base_samples("t3-blair", 20, 9);
  const std::vector<double> r12{1.0, 2.0}, r123{1.0, 2.0, 3.0};
  const auto a = check_weitzenboeck_scaling(data, base, r12, false, 1e-4);
  EXPECT_TRUE(a.passed()) << a.max_residual;
  const auto b = check_weitzenboeck_scaling(data, base, r123, true, 1e-6);
  EXPECT_TRUE(b.passed()) << b.max_residual;
}

// The terms carrying four metric derivatives lose accuracy like (sin theta)^-6
// toward the Hopf chart edges, so the pointwise check samples the interior.
TEST(Weitzenboeck, AllTermsVanishOnKaehlerCones) {
  for (const auto& id : {"s3-round", "s5-round"}) {
    const auto data = cone_data(id);
    SplitMix64 rng(10);
    auto pts = sample_points(catalog_entry(id).chart, 20, rng, 0.2);
    for (auto& p : pts) p.push_back(rng.uniform(0.5, 3.0));
    const auto rep = check_terms_vanish(weitzenboeck_sweep(data, pts));
    EXPECT_TRUE(rep.passed()) << id << " " << rep.max_residual;
  }
  const auto blair = check_terms_vanish(weitzenboeck_sweep(cone_data("t3-blair"), cone_samples("t3-blair", 3, 10)));
  EXPECT_FALSE(blair.passed());
}

TEST(Weitzenboeck, ChartEdgeConditioning) {
  const auto data = cone_data("s3-round");
  const auto at = [&](double theta) {
    const auto w = weitzenboeck_point(data, {theta, 0.3, 0.3, 1.0});
    double m = 0.0;
    for (double t : w.terms) m = std::max(m, std::abs(t));
    return m;
  };
  EXPECT_LT(at(0.8), 1e-12);
  EXPECT_GT(at(0.002), at(0.02));
}

}  // namespace
}  // namespace conegeo
