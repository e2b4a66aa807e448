#pragma once

// Suite runner: resolves a SuiteConfig against the catalog, runs the checks of
// one suite and serializes the reports. Output depends only on the config.

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conegeo/almost_kaehler.hpp"
#include "conegeo/catalog.hpp"
#include "conegeo/cone.hpp"
#include "conegeo/contact.hpp"
#include "conegeo/quadrature.hpp"
#include "conegeo/report.hpp"
#include "conegeo/sampling.hpp"
#include "conegeo/structure_algebra.hpp"

namespace conegeo {

inline constexpr const char* kEngineVersion = "conegeo 0.1.0";

inline const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{"cone-identities", "contact-axioms", "kcontact",   "sasaki",
                                            "weitzenboeck",    "hypersasaki",    "integration"};
  return ids;
}

struct SuiteConfig {
  std::string manifold = "t3-blair";
  std::string suite = "cone-identities";
  std::optional<int> grid;     // nodes per coordinate; catalog default when absent
  std::vector<double> radii;   // suite default when empty
  int jet_order = kDefaultJetOrder;
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 0x5eedULL;
  int samples = 200;           // random points per pointwise identity
};

/// Config with every default filled in; this is what the report echoes.
struct ResolvedConfig {
  SuiteConfig config;
  CatalogEntry entry;
  std::vector<int> nodes;
};

inline std::vector<double> default_radii(const std::string& suite) {
  if (suite == "weitzenboeck") return {1.0, 2.0, 3.0};
  if (suite == "integration") return {1.0};
  return {};
}

inline ResolvedConfig resolve(SuiteConfig c) {
  if (std::find(suite_ids().begin(), suite_ids().end(), c.suite) == suite_ids().end()) {
    throw UsageError("unknown suite '" + c.suite + "'");
  }
  ResolvedConfig out{c, catalog_entry(c.manifold), {}};
  if (c.samples < 1) throw UsageError("samples must be positive");
  if (c.jet_order < 1) throw UsageError("jet order must be positive");
  if (c.grid && *c.grid < 1) throw UsageError("grid must be positive");
  for (double r : c.radii)
    if (!(r > 0.0)) throw UsageError("radii must be positive");
  if (out.config.radii.empty()) out.config.radii = default_radii(c.suite);
  out.nodes = c.grid ? std::vector<int>(out.entry.chart.dim(), *c.grid) : out.entry.quadrature_nodes;
  out.config.grid = out.nodes.front();
  return out;
}

// ---------------------------------------------------------------------------
// Fixtures

struct ConeFixtures {
  std::vector<TensorField> vectors;
  std::vector<FormField> forms;
  std::vector<TensorField> one_forms;
  std::vector<ScalarField> functions;
};

/// Test fields over a catalog base: the Reeb field, a trigonometric field and
/// a constant field; eta, d eta and the trigonometric 1-forms with their d.
inline ConeFixtures cone_fixtures(const CatalogEntry& e) {
  const int m = e.chart.dim();
  ConeFixtures f;
  f.vectors.push_back(e.primary_structure().xi);
  f.vectors.push_back(vector_field([m](std::span<const Jet> x) {
    std::vector<Jet> v(m, Jet(0.0));
    v[0] = sin(x[m - 1]) + 2.0;
    v[m - 1] = cos(x[0] + x[1]);
    return v;
  }));
  std::vector<double> c(m, 0.0);
  c[1] = 1.0;
  f.vectors.push_back(constant_vector_field(c));
  const TensorField eta = metric_dual(e.chart, e.primary_structure().xi);
  f.forms = {{eta, 1}, {exterior_derivative(eta), 2}};
  f.one_forms = trig_test_one_forms(m);
  for (const auto& s : f.one_forms) {
    f.forms.push_back({s, 1});
    f.forms.push_back({exterior_derivative(s), 2});
  }
  f.functions = trig_test_functions(m);
  return f;
}

inline const std::vector<int>& lemma_powers() {
  static const std::vector<int> k{-2, 0, 1, 2, 3};
  return k;
}

// ---------------------------------------------------------------------------
// Level-set integration

/// Integrands over M_r, all evaluated from the same Weitzenboeck point data.
/// Values are the pointwise functions on M_r; integrate_level_set applies the
/// r^{2n+1} volume scaling.
inline const std::vector<std::string>& integrand_ids() {
  static const std::vector<std::string> ids{"one",       "divergence_terms", "laplacian_divergence", "f_term",
                                            "rpp_sq",    "rough_sq",         "phi_sq",               "solved_rpp_sq"};
  return ids;
}

namespace detail {

/// The r^4-weighted divergence parts of the solved identity and the remaining
/// integrand. With F = r^2 (s* - s), the reduction of the cone Laplacian gives
/// -r^4 Delta(s* - s) = -Delta_M F - 2(2n-2) F, so Delta_M F is the divergence
/// part of the Laplacian term.
struct LevelSetValues {
  double divergence = 0.0;            // r^4 (-4 delta(J delta^nabla(J Ric'')) + 8 delta<rho*, nabla Omega>)
  double laplacian_divergence = 0.0;  // -Delta_M F = r^4 (-Delta(s* - s)) + 2(2n-2) F
  double f_term = 0.0;                // 2(2n-2) f / r^4
  double rpp_sq = 0.0;                // 8|R''|^2 with every divergence part removed
  double rough_sq = 0.0;
  double phi_sq = 0.0;
  double solved = 0.0;
};

inline LevelSetValues level_set_values(const ConeSymplecticData& data, const WeitzenboeckPointData& w) {
  const double r = w.point.back();
  const double r2 = r * r, r4 = r2 * r2;
  const int n = data.cone.n();
  const double coeff = 2.0 * (2 * n - 2);
  const double big_f = r2 * (w.s_star - w.s);
  LevelSetValues v;
  v.divergence = r4 * (w.terms[1] + w.terms[2]);
  v.laplacian_divergence = r4 * w.terms[0] + coeff * big_f;
  v.f_term = coeff * r2 * w.s_star / r4;
  v.rpp_sq = w.solved_rpp_sq - (v.divergence + v.laplacian_divergence) / r4;
  v.rough_sq = -w.terms[4];
  v.phi_sq = -w.terms[5];
  v.solved = w.solved_rpp_sq;
  return v;
}

inline double pick(const LevelSetValues& v, const std::string& id) {
  if (id == "divergence_terms") return v.divergence;
  if (id == "laplacian_divergence") return v.laplacian_divergence;
  if (id == "f_term") return v.f_term;
  if (id == "rpp_sq") return v.rpp_sq;
  if (id == "rough_sq") return v.rough_sq;
  if (id == "phi_sq") return v.phi_sq;
  if (id == "solved_rpp_sq") return v.solved;
  throw UsageError("unknown integrand '" + id + "'");
}

inline ConeSymplecticData primary_cone(const CatalogEntry& e) {
  return build_cone_symplectic(build_contact(e.chart, e.primary_structure().xi));
}

}  // namespace detail

/// Integrals over M_r of every integrand id, with dvol of (M, r^2 g).
inline std::map<std::string, double> integrate_level_set_all(const CatalogEntry& e, double r,
                                                            std::span<const int> nodes,
                                                            int jet_order = kDefaultJetOrder) {
  const ProductGrid grid = product_grid(e.chart, nodes);
  const double scale = std::pow(r, 2 * e.n + 1);
  std::map<std::string, double> out;
  out["one"] = scale * integrate(e.chart, grid, [](const std::vector<double>&) { return 1.0; });
  const ConeSymplecticData data = detail::primary_cone(e);
  std::vector<detail::LevelSetValues> vals(grid.size());
  std::vector<double> weights(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    std::vector<double> b(e.chart.dim());
    weights[i] = grid.point(i, b) * std::sqrt(e.chart.metric_at(b).determinant());
    vals[i] = detail::level_set_values(data, weitzenboeck_point(data, data.cone.point(b, r), jet_order));
  });
  for (const auto& id : integrand_ids()) {
    if (id == "one") continue;
    std::vector<double> terms(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) terms[i] = weights[i] * detail::pick(vals[i], id);
    out[id] = scale * pairwise_sum(terms);
  }
  return out;
}

inline double integrate_level_set(const CatalogEntry& e, double r, const std::string& integrand,
                                  std::span<const int> nodes, int jet_order = kDefaultJetOrder) {
  if (std::find(integrand_ids().begin(), integrand_ids().end(), integrand) == integrand_ids().end()) {
    throw UsageError("unknown integrand '" + integrand + "'");
  }
  if (integrand == "one") {
    return std::pow(r, 2 * e.n + 1) *
           integrate(e.chart, product_grid(e.chart, nodes), [](const std::vector<double>&) { return 1.0; });
  }
  return integrate_level_set_all(e, r, nodes, jet_order).at(integrand);
}

// ---------------------------------------------------------------------------
// Suites

namespace detail {

/// A report carrying a single scalar residual.
inline CheckReport scalar_report(std::string id, std::string anchor, double tol, double residual,
                                 std::vector<double> witness = {}) {
  const std::vector<double> r{residual};
  const std::vector<std::vector<double>> w{std::move(witness)};
  return summarize(std::move(id), std::move(anchor), tol, r, w);
}

/// Ric = c g on the base, c the catalog Einstein constant. Orthonormal frame.
inline CheckReport einstein_residual(const CatalogEntry& e, std::span<const std::vector<double>> points,
                                     double tol = 1e-7) {
  if (!e.einstein_constant) return error_report("contact.einstein", "Ric = c g", tol, "no Einstein constant");
  const double c = *e.einstein_constant;
  return sweep("contact.einstein", "Ric = c g", tol, points, [&](const std::vector<double>& p) {
    const LocalGeometry geo(e.chart, p, 2);
    const Tensor ric = values(geo.ricci(0));
    const Eigen::MatrixXd g = e.chart.metric_at(p);
    Tensor diff = ric;
    const int d = e.chart.dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) diff[i * d + j] -= c * g(i, j);
    return frame_max_abs(diff, orthonormal_frame(e.chart, p));
  });
}

/// max |Rbar| in an orthonormal frame.
inline CheckReport flat_cone_residual(const ConeChart& cone, std::span<const std::vector<double>> points,
                                      double tol = 1e-7) {
  return sweep("cone.flat", "Rbar = 0", tol, points, [&](const std::vector<double>& p) {
    const LocalGeometry geo(cone.chart(), p, 2);
    return frame_max_abs(values(geo.riemann_lowered(0)), orthonormal_frame(cone.chart(), p));
  });
}

class SuiteRunner {
 public:
  explicit SuiteRunner(const ResolvedConfig& rc) : rc_(rc), e_(rc.entry), rng_(rc.config.seed) {}

  std::vector<CheckReport> run() {
    const std::string& s = rc_.config.suite;
    if (s == "cone-identities") cone_identities();
    if (s == "contact-axioms") contact_axioms();
    if (s == "kcontact") kcontact();
    if (s == "sasaki") sasaki();
    if (s == "weitzenboeck") weitzenboeck();
    if (s == "hypersasaki") hypersasaki();
    if (s == "integration") integration();
    return std::move(out_);
  }

 private:
  std::size_t count() const { return static_cast<std::size_t>(rc_.config.samples); }

  std::vector<std::vector<double>> base_points() { return sample_points(e_.chart, count(), rng_); }

  std::vector<std::vector<double>> cone_points() {
    return sample_cone_points(e_.chart, count(), rng_, {}, 0.5, 3.0);
  }

  /// Runs `body`; an engine error becomes an error report under `id`.
  void guarded(const std::string& id, const std::string& anchor, double tol, const std::function<void()>& body) {
    try {
      body();
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& ex) {
      out_.push_back(error_report(id, anchor, tol, ex.what()));
    }
  }

  void add(CheckReport r) { out_.push_back(std::move(r)); }
  void add(std::vector<CheckReport> rs) {
    for (auto& r : rs) out_.push_back(std::move(r));
  }

  ContactMetricStructure contact() { return build_contact(e_.chart, e_.primary_structure().xi); }

  void cone_identities() {
    const ConeChart cone = build_cone(e_.chart);
    const ConeFixtures fx = cone_fixtures(e_);
    const auto pts = cone_points();
    guarded("cone.connection", "nabla of the cone metric", 1e-7,
            [&] { add(check_connection_relations(cone, pts, fx.vectors, fx.forms)); });
    guarded("cone.curvature", "Rbar(X,Y)Z = R(X,Y)Z - (g(Y,Z)X - g(X,Z)Y)", 1e-7,
            [&] { add(check_curvature_relation(cone, pts)); });
    guarded("cone.codifferential_scaling", "delta(r^k sigma) scaling", 1e-6,
            [&] { add(check_lemma_codiff(cone, fx.one_forms, lemma_powers(), pts)); });
    guarded("cone.laplacian_scaling", "Delta(r^k f) scaling", 1e-6,
            [&] { add(check_lemma_laplacian(cone, fx.functions, lemma_powers(), pts)); });
    guarded("cone.form_derivative_r_scaling", "r-weights of lifted forms", 1e-7, [&] { add(check_form_scaling(cone, fx.forms, pts)); });
    guarded("cone.laplacian_r2", "Delta(r^2) = -2(2n+2)", 1e-9, [&] {
      add(sweep("cone.laplacian_r2", "Delta(r^2) = -2(2n+2)", 1e-9, pts, [&](const std::vector<double>& p) {
        const LocalGeometry geo(cone.chart(), p, 2);
        const Jet& r = geo.coordinates()[cone.radial()];
        return geo.laplacian(r * r).value() + 2.0 * (2 * cone.n() + 2);
      }));
    });
  }

  void contact_axioms() {
    const auto pts = base_points();
    const TensorField& xi = e_.primary_structure().xi;
    add(unit_length_residual(e_.chart, xi, pts));
    add(kc_residual(e_.chart, xi, pts, 1e-10));
    guarded("contact.reeb", "eta(xi) = 1, phi xi = 0, xi _| d eta = 0", 1e-8,
            [&] { add(reeb_conditions(contact(), pts)); });
  }

  void kcontact() {
    const auto pts = base_points();
    guarded("contact.killing", "L_xi g = 0", 1e-7, [&] {
      const auto s = contact();
      add(killing_residual(s, pts));
      add(kcontact_via_ricci(s, pts));
    });
    add(einstein_residual(e_, pts));
  }

  void sasaki() {
    const auto pts = base_points();
    const auto cpts = cone_points();
    guarded("contact.sasaki", "nabla_X (nabla xi) = g(xi, .) X - g(X, .) xi", 1e-7, [&] {
      const auto s = contact();
      add(sasaki_residual(s, pts));
      add(parallel_omega_residual(build_cone_symplectic(s), cpts));
    });
  }

  void weitzenboeck() {
    const auto& radii = rc_.config.radii;
    const int k = rc_.config.jet_order;
    const auto cpts = cone_points();
    const auto bpts = base_points();
    guarded("weitzenboeck.setup", "cone almost Kaehler structure", 0.0, [&] {
      const ConeSymplecticData data = primary_cone(e_);
      add(check_almost_hermitian(data, cpts));
      add(check_omega_closed(data, cpts));
      add(check_omega_norm(data, cpts));
      add(check_star_calibration(data, cpts));
      if (radii.size() > 1) add(check_radial_profile(data, bpts, radii));
      add(check_nabla_omega_structure(data, bpts));
      const auto ws = weitzenboeck_sweep(data, cpts, k);
      add(check_phi_identity(data, ws, 20, rc_.config.seed));
      add(check_algebraic_symmetries(data, ws));
      add(check_solved_nonnegative(ws));
      if (e_.primary_structure().sasakian) {
        add(check_terms_vanish(ws));
      } else {
        add(check_f_positive(data, bpts, radii.front()));
      }
      if (radii.size() > 1) {
        const std::vector<double> pair{radii[0], radii[1]};
        add(check_weitzenboeck_scaling(data, bpts, pair, false, 1e-4, k));
        add(check_weitzenboeck_scaling(data, bpts, radii, true, 1e-6, k));
      }
    });
  }

  void hypersasaki() {
    if (e_.structures.size() < 2) {
      throw UsageError("manifold '" + e_.id + "' carries fewer than two Reeb structures");
    }
    const auto cpts = cone_points();
    guarded("structure.anticommutator", "JJ' + J'J = lambda Id", 1e-8, [&] {
      const auto first = build_cone_symplectic(build_contact(e_.chart, e_.structures[0].xi));
      const auto second = build_cone_symplectic(build_contact(e_.chart, e_.structures[1].xi));
      const StructurePair pair = make_structure_pair(first, second);
      const auto lam = anticommutator_lambda(pair, cpts);
      add(lam.report);
      add(check_pair_symmetries(pair, cpts));
      add(check_commutator_square(pair, lam.lambda, cpts));
      const ThirdStructure third = build_third_structure(pair, lam.lambda);
      add(check_third_structure(pair, third, cpts));
      add(check_quaternion_relations(pair, third, cpts));
      add(check_parallel_endomorphism(pair.cone, third.I, "structure.parallel_I", "nabla I = 0", cpts));
      add(check_parallel_endomorphism(pair.cone, anticommutator_field(pair), "structure.parallel_Q", "nabla Q = 0",
                                      cpts));
      add(check_parallel_endomorphism(pair.cone, commutator_field(pair), "structure.parallel_A", "nabla A = 0",
                                      cpts));
      auto own = s2_family_check(pair, third, pair.Jp, cpts);
      add(own.report);
      // Random unit combinations of the ambient generators, when the catalog
      // supplies them, must be Sasakian and fall in the same family.
      if (e_.structures.size() >= 3 && e_.structures[0].ambient.size() > 0) {
        std::vector<double> sas, fam;
        std::vector<std::vector<double>> wit;
        for (int trial = 0; trial < 5; ++trial) {
          Eigen::Vector3d v(rng_.uniform(-1, 1), rng_.uniform(-1, 1), rng_.uniform(-1, 1));
          v.normalize();
          const Eigen::MatrixXd m = v(0) * e_.structures[0].ambient + v(1) * e_.structures[1].ambient +
                                    v(2) * e_.structures[2].ambient;
          const TensorField xi = ambient_vector_field(e_.n, m);
          const auto s = build_contact(e_.chart, xi);
          const auto bp = base_points();
          const auto rep = sasaki_residual(s, bp, 1e-6);
          sas.push_back(rep.max_residual);
          fam.push_back(s2_family_check(pair, third, build_cone_symplectic(s).J, cpts).report.max_residual);
          wit.push_back({v(0), v(1), v(2)});
        }
        add(summarize("structure.s2_random_sasaki", "a i + b j + c k Sasakian for a^2 + b^2 + c^2 = 1", 1e-6, sas,
                      wit));
        add(summarize("structure.s2_random_family", "J'' = a I + b J + c K", 1e-8, fam, wit));
      }
      add(flat_cone_residual(pair.cone, cpts));
    });
  }

  void integration() {
    const int k = rc_.config.jet_order;
    for (double r : rc_.config.radii) {
      const std::vector<double> witness{r};
      guarded("integration.volume", "vol(M_r) = r^{2n+1} vol(M)", 1e-9, [&] {
        const auto ints = integrate_level_set_all(e_, r, rc_.nodes, k);
        const auto vol = std::find_if(e_.known_values.begin(), e_.known_values.end(),
                                      [](const KnownValue& kv) { return kv.name == "volume"; });
        if (vol != e_.known_values.end()) {
          const double expect = std::pow(r, 2 * e_.n + 1) * vol->value;
          add(scalar_report("integration.volume", "vol(M_r) = r^{2n+1} vol(M)", 1e-9,
                            (ints.at("one") - expect) / expect, witness));
        }
        add(scalar_report("integration.divergence_terms", "int_{M_r} r^4 delta(...) = 0", 1e-6,
                          ints.at("divergence_terms"), witness));
        add(scalar_report("integration.laplacian_divergence", "int_{M_r} Delta_M F = 0", 1e-6,
                          ints.at("laplacian_divergence"), witness));
        if (e_.primary_structure().sasakian) {
          for (const char* id : {"f_term", "rpp_sq", "rough_sq", "phi_sq"}) {
            add(scalar_report(std::string("integration.") + id, "nonnegative term integrates to 0", 1e-8,
                              ints.at(id), witness));
          }
        } else {
          // Integrated identity: every term positive, no cancellation needed.
          const double v = ints.at("rpp_sq");
          add(scalar_report("integration.rpp_sq_positive", "int_{M_r} 8|R''|^2 > 0", 0.0,
                            v > 0.0 ? 0.0 : std::max(-v, std::numeric_limits<double>::min()), witness));
        }
      });
    }
  }

  const ResolvedConfig& rc_;
  const CatalogEntry& e_;
  SplitMix64 rng_;
  std::vector<CheckReport> out_;
};

}  // namespace detail

/// Applies tolerance overrides by identity. An override that names no report
/// in the suite is a usage error.
inline void apply_tolerances(std::vector<CheckReport>& reports, const std::map<std::string, double>& tols) {
  for (const auto& [id, tol] : tols) {
    bool found = false;
    for (auto& r : reports) {
      if (r.identity != id) continue;
      found = true;
      r.tolerance = tol;
      if (r.verdict != Verdict::error) {
        r.verdict = (std::isfinite(r.max_residual) && r.max_residual <= tol) ? Verdict::pass : Verdict::fail;
      }
    }
    if (!found) throw UsageError("tolerance override for unknown identity '" + id + "'");
  }
}

inline std::vector<CheckReport> run_suite(const ResolvedConfig& rc) {
  auto reports = detail::SuiteRunner(rc).run();
  apply_tolerances(reports, rc.config.tolerances);
  return reports;
}

inline std::vector<CheckReport> run_suite(const SuiteConfig& config) { return run_suite(resolve(config)); }

inline bool all_passed(std::span<const CheckReport> reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed(); });
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::ordered_json to_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["identity"] = r.identity;
  j["anchor"] = r.anchor;
  j["samples"] = r.samples;
  j["max_residual"] = r.max_residual;
  j["rms_residual"] = r.rms_residual;
  j["tolerance"] = r.tolerance;
  j["verdict"] = to_string(r.verdict);
  j["witness"] = r.witness;
  return j;
}

inline nlohmann::ordered_json config_json(const ResolvedConfig& rc) {
  const SuiteConfig& c = rc.config;
  nlohmann::ordered_json j;
  j["manifold"] = c.manifold;
  j["suite"] = c.suite;
  j["grid"] = rc.nodes;
  j["radii"] = c.radii;
  j["jet_order"] = c.jet_order;
  nlohmann::ordered_json tols = nlohmann::ordered_json::object();
  for (const auto& [id, v] : c.tolerances) tols[id] = v;
  j["tolerances"] = tols;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  return j;
}

inline std::string report_document(const ResolvedConfig& rc, std::span<const CheckReport> reports) {
  nlohmann::ordered_json doc;
  doc["config"] = config_json(rc);
  doc["engine_version"] = kEngineVersion;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  doc["reports"] = arr;
  return doc.dump(2) + "\n";
}

}  // namespace conegeo
