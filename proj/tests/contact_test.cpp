#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "conegeo/catalog.hpp"
#include "conegeo/contact.hpp"
#include "conegeo/sampling.hpp"

namespace conegeo {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::vector<double>> samples(const ManifoldChart& c, std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return sample_points(c, n, rng);
}

TEST(Contact, BlairClosedFormPhi) {
  const CatalogEntry e = blair_t3();
  const auto s = build_contact(e.chart, e.primary_structure().xi);
  for (double t : {0.0, 0.4, 1.3, 3.0, 5.5}) {
    const Tensor phi = values(s.phi(Jet::coordinates(std::vector<double>{t, 1.0, 2.0}, 1)));
    // columns: phi d_t = -sin t d_x + cos t d_y, phi d_x = sin t d_t, phi d_y = -cos t d_t
    const double expect[9] = {0, std::sin(t), -std::cos(t), -std::sin(t), 0, 0, std::cos(t), 0, 0};
    for (int f = 0; f < 9; ++f) EXPECT_NEAR(phi[f], expect[f], 1e-15) << f;
  }
  const auto kc = kc_residual(e.chart, e.primary_structure().xi, samples(e.chart, 100, 1), 1e-10);
  EXPECT_TRUE(kc.passed()) << kc.max_residual;
  EXPECT_LT(kc.max_residual, 1e-12);
}

TEST(Contact, UnnormalizedTorusFailsWithThreeQuarters) {
  const CatalogEntry e = flat_t3_unnormalized();
  const auto pts = samples(e.chart, 50, 2);
  EXPECT_TRUE(unit_length_residual(e.chart, e.primary_structure().xi, pts).passed());
  const auto kc = kc_residual(e.chart, e.primary_structure().xi, pts);
  EXPECT_FALSE(kc.passed());
  EXPECT_NEAR(kc.max_residual, 0.75, 1e-12);
  try {
    build_contact(e.chart, e.primary_structure().xi);
    FAIL() << "expected NotContactMetricError";
  } catch (const NotContactMetricError& err) {
    EXPECT_NEAR(err.max_residual(), 0.75, 1e-12);
    EXPECT_EQ(err.witness().size(), 3u);
  }
}

TEST(Contact, NonUnitFieldRejected) {
  const CatalogEntry e = flat_t3_unnormalized();
  const TensorField twice = vector_field([](std::span<const Jet> x) {
    return std::vector<Jet>{Jet(0.0), 2.0 * cos(x[0]), 2.0 * sin(x[0])};
  });
  EXPECT_THROW(build_contact(e.chart, twice), NotContactMetricError);
}

TEST(Contact, SphereStructuresAreSasakian) {
  for (const auto& id : {"s3-round", "s5-round"}) {
    const CatalogEntry e = catalog_entry(id);
    const auto pts = samples(e.chart, 40, 3);
    for (const auto& cand : e.structures) {
      const auto s = build_contact(e.chart, cand.xi);
      EXPECT_TRUE(kc_residual(e.chart, cand.xi, pts).passed()) << id << cand.name;
      EXPECT_TRUE(reeb_conditions(s, pts).passed()) << id << cand.name;
      const auto kill = killing_residual(s, pts, 1e-8);
      EXPECT_TRUE(kill.passed()) << id << cand.name << " " << kill.max_residual;
      const auto ric = kcontact_via_ricci(s, pts);
      EXPECT_TRUE(ric.passed()) << id << cand.name << " " << ric.max_residual;
      const auto sas = sasaki_residual(s, pts);
      EXPECT_TRUE(sas.passed()) << id << cand.name << " " << sas.max_residual;
    }
  }
}

TEST(Contact, HopfFieldIsCoordinateField) {
  // i p = d_phi1 + d_phi2 in Hopf coordinates.
  const CatalogEntry e = round_sphere(1);
  const Tensor xi = values(e.structure("xi-i").xi(Jet::coordinates(std::vector<double>{0.7, 1.0, 2.0}, 0)));
  EXPECT_NEAR(xi[0], 0.0, 1e-15);
  EXPECT_NEAR(xi[1], 1.0, 1e-14);
  EXPECT_NEAR(xi[2], 1.0, 1e-14);
}

TEST(Contact, BlairIsEinsteinButNotKContact) {
  const CatalogEntry e = blair_t3();
  const auto s = build_contact(e.chart, e.primary_structure().xi);
  const auto pts = samples(e.chart, 50, 4);
  EXPECT_TRUE(reeb_conditions(s, pts).passed());
  for (const auto& p : pts) EXPECT_NEAR(ric_xi_xi(s, p) - 2.0, -2.0, 1e-12);
  // At t = pi/2: (L_xi g)(d_t, d_x) = -1/2 in coordinates, 2 in an orthonormal frame.
  const std::vector<double> w{kPi / 2, 1.0, 1.0};
  const Tensor lg = killing_tensor(s, w);
  EXPECT_NEAR(lg[0 * 3 + 1], -0.5, 1e-14);
  const auto kill = killing_residual(s, std::vector<std::vector<double>>{w});
  EXPECT_NEAR(kill.max_residual, 2.0, 1e-12);
  EXPECT_GE(kill.max_residual, 0.4);
  // -xi gives the same residual.
  const TensorField minus = vector_field([](std::span<const Jet> x) {
    return std::vector<Jet>{Jet(0.0), -2.0 * cos(x[0]), -2.0 * sin(x[0])};
  });
  const auto s2 = build_contact(e.chart, minus);
  EXPECT_NEAR(killing_residual(s2, std::vector<std::vector<double>>{w}).max_residual, kill.max_residual, 1e-15);
  const auto sas = sasaki_residual(s, pts);
  EXPECT_FALSE(sas.passed());
  EXPECT_GE(sas.max_residual, 0.4);
}

TEST(Contact, ClassificationEquivalences) {
  for (const auto& id : {"t3-blair", "s3-round", "s5-round"}) {
    const CatalogEntry e = catalog_entry(id);
    const auto pts = samples(e.chart, 20, 5);
    const auto s = build_contact(e.chart, e.primary_structure().xi);
    const bool killing = killing_residual(s, pts, 1e-6).passed();
    const bool ricci = kcontact_via_ricci(s, pts, 1e-6).passed();
    const bool sasaki = sasaki_residual(s, pts, 1e-6).passed();
    EXPECT_EQ(killing, ricci) << id;
    EXPECT_EQ(killing, e.primary_structure().k_contact) << id;
    EXPECT_EQ(sasaki, e.primary_structure().sasakian) << id;
    if (sasaki) EXPECT_TRUE(killing);
    const auto data = build_cone_symplectic(s);
    SplitMix64 rng(6);
    const auto cpts = sample_cone_points(e.chart, 20, rng, {}, 0.5, 3.0);
    EXPECT_EQ(parallel_omega_residual(data, cpts, 1e-6).passed(), sasaki) << id;
  }
}

TEST(ConeSymplectic, CompatibleClosedAndNormalized) {
  for (const auto& id : {"t3-blair", "s3-round", "s5-round"}) {
    const CatalogEntry e = catalog_entry(id);
    const auto data = build_cone_symplectic(build_contact(e.chart, e.primary_structure().xi));
    SplitMix64 rng(7);
    const auto pts = sample_cone_points(e.chart, 50, rng, {}, 0.5, 3.0);
    EXPECT_TRUE(check_almost_hermitian(data, pts).passed()) << id;
    const auto closed = check_omega_closed(data, pts);
    EXPECT_TRUE(closed.passed()) << id << " " << closed.max_residual;
    const auto norm = check_omega_norm(data, pts);
    EXPECT_TRUE(norm.passed()) << id << " " << norm.max_residual;
  }
}

TEST(ConeSymplectic, KaehlerOverSpheresNotOverBlair) {
  for (const auto& id : {"s3-round", "s5-round"}) {
    const CatalogEntry e = catalog_entry(id);
    const auto data = build_cone_symplectic(build_contact(e.chart, e.primary_structure().xi));
    SplitMix64 rng(8);
    const auto rep = parallel_omega_residual(data, sample_cone_points(e.chart, 30, rng, {}, 0.5, 3.0));
    EXPECT_TRUE(rep.passed()) << id << " " << rep.max_residual;
  }
  const CatalogEntry b = blair_t3();
  const auto data = build_cone_symplectic(build_contact(b.chart, b.primary_structure().xi));
  SplitMix64 rng(9);
  const auto rep = parallel_omega_residual(data, sample_cone_points(b.chart, 30, rng, {}, 0.5, 3.0));
  EXPECT_GT(rep.max_residual, 0.1);
}

TEST(ConeSymplectic, RejectsIncompatibleBase) {
  const CatalogEntry e = flat_t3_unnormalized();
  ContactMetricStructure raw;
  raw.chart = e.chart;
  raw.xi = e.primary_structure().xi;
  raw.eta = metric_dual(e.chart, raw.xi);
  raw.deta = exterior_derivative(raw.eta);
  raw.phi = contact_endomorphism(e.chart, raw.eta);
  raw.n = 1;
  EXPECT_THROW(build_cone_symplectic(raw), IncompatibleStructureError);
}

// On the cone over S^3, realized as R^4 \ 0 via X = r x(u), J pushed forward to
// R^4 is left multiplication by the quaternion generating xi.
TEST(ConeSymplectic, AmbientComplexStructureOnS3Cone) {
  const CatalogEntry e = round_sphere(1);
  for (char u : {'i', 'j', 'k'}) {
    const auto& cand = e.structure(std::string("xi-") + u);
    const auto data = build_cone_symplectic(build_contact(e.chart, cand.xi));
    SplitMix64 rng(10);
    for (const auto& p : sample_cone_points(e.chart, 10, rng, {}, 0.5, 3.0)) {
      const auto uj = Jet::coordinates(std::vector<double>(p.begin(), p.end() - 1), 0);
      const auto x = sphere_embedding(1, uj);
      const auto jac = sphere_jacobian(1, uj);
      const double r = p.back();
      Eigen::Matrix4d jc;
      for (int row = 0; row < 4; ++row) {
        for (int c = 0; c < 3; ++c) jc(row, c) = r * jac[row * 3 + c].value();
        jc(row, 3) = x[row].value();
      }
      const Tensor j = values(data.J(Jet::coordinates(p, 1)));
      Eigen::Matrix4d jm;
      for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i) jm(k, i) = j[k * 4 + i];
      const Eigen::Matrix4d ambient = jc * jm * jc.inverse();
      EXPECT_LT((ambient - cand.ambient).cwiseAbs().maxCoeff(), 1e-12) << u;
    }
  }
}

}  // namespace
}  // namespace conegeo
