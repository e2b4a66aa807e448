#pragma once

// The metric cone dr^2 + r^2 g over a base chart, realized as an ordinary chart
// with coordinates (base..., r). The checks below compare quantities computed
// directly on that chart against base-chart quantities with explicit r-factors.

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "conegeo/chart.hpp"
#include "conegeo/errors.hpp"
#include "conegeo/fields.hpp"
#include "conegeo/geometry.hpp"
#include "conegeo/report.hpp"

namespace conegeo {

/// A differential form on the base together with its degree.
struct FormField {
  TensorField field;
  int degree = 1;
};

class ConeChart {
 public:
  ConeChart(ManifoldChart base, double r_lo, double r_hi) : base_(std::move(base)), r_lo_(r_lo), r_hi_(r_hi) {
    if (!(r_lo > 0.0) || !std::isfinite(r_lo)) {
      throw CompletionError("cone radial interval must lie in (0, inf); r = 0 is never included");
    }
    if (!(r_hi > r_lo)) throw DomainError("empty cone radial interval");
    if (base_.dim() % 2 == 0) throw UsageError("cone base must have odd dimension 2n+1");
    auto coords = base_.coordinates();
    coords.push_back({"r", r_lo, r_hi, false});
    const ManifoldChart b = base_;
    chart_ = ManifoldChart(base_.label() + "-cone", std::move(coords), [b](std::span<const Jet> x) {
      const int m = static_cast<int>(x.size()) - 1;
      const int d = m + 1;
      const Jet& r = x[m];
      const Jet r2 = r * r;
      const JetTensor g = b.metric(x.first(m));
      JetTensor out(d, Valence{0, 2}, Jet(0.0));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out[i * d + j] = r2 * g[i * m + j];
      out[m * d + m] = Jet(1.0);
      return out;
    });
  }

  const ManifoldChart& base() const noexcept { return base_; }
  const ManifoldChart& chart() const noexcept { return chart_; }
  int base_dim() const noexcept { return base_.dim(); }
  int dim() const noexcept { return base_.dim() + 1; }
  int n() const noexcept { return (base_.dim() - 1) / 2; }
  /// Index of the r coordinate.
  int radial() const noexcept { return base_.dim(); }
  double r_lo() const noexcept { return r_lo_; }
  double r_hi() const noexcept { return r_hi_; }

  std::vector<double> point(std::span<const double> base_point, double r) const {
    std::vector<double> p(base_point.begin(), base_point.end());
    p.push_back(r);
    return p;
  }

  /// Pull-back of a base tensor field, multiplied by r^k: r-independent base
  /// components, zero whenever any slot is radial.
  TensorField lift(TensorField field, double k = 0.0) const {
    return [field = std::move(field), k](std::span<const Jet> x) {
      const int d = static_cast<int>(x.size());
      const int m = d - 1;
      const JetTensor bt = field(x.first(m));
      JetTensor out(d, bt.valence(), Jet(0.0));
      const int rank = bt.rank();
      const Jet scale = k == 0.0 ? Jet(1.0) : pow(x[m], k);
      for (std::size_t f = 0; f < bt.size(); ++f) {
        std::size_t rem = f, flat = 0, mult = 1;
        for (int s = 0; s < rank; ++s) {
          flat += (rem % m) * mult;
          rem /= m;
          mult *= d;
        }
        out[flat] = k == 0.0 ? bt[f] : scale * bt[f];
      }
      return out;
    };
  }

  ScalarField lift(ScalarField f, double k) const {
    return [f = std::move(f), k](std::span<const Jet> x) {
      const int m = static_cast<int>(x.size()) - 1;
      return pow(x[m], k) * f(x.first(m));
    };
  }

 private:
  ManifoldChart base_;
  ManifoldChart chart_;
  double r_lo_;
  double r_hi_;
};

inline constexpr double kDefaultConeRLo = 0.1;
inline constexpr double kDefaultConeRHi = 10.0;

inline ConeChart build_cone(const ManifoldChart& base, double r_lo = kDefaultConeRLo,
                            double r_hi = kDefaultConeRHi) {
  return ConeChart(base, r_lo, r_hi);
}

namespace detail {

inline std::vector<double> base_part(std::span<const double> p) { return {p.begin(), p.end() - 1}; }

/// Copies a base tensor into cone dimension (radial slots zero).
inline Tensor embed(const Tensor& bt, int d) {
  const int m = bt.dim();
  Tensor out(d, bt.valence(), 0.0);
  for (std::size_t f = 0; f < bt.size(); ++f) {
    std::size_t rem = f, flat = 0, mult = 1;
    for (int s = 0; s < bt.rank(); ++s) {
      flat += (rem % m) * mult;
      rem /= m;
      mult *= d;
    }
    out[flat] = bt[f];
  }
  return out;
}

/// Number of slots of flat index f (rank slots over dimension d) equal to `idx`.
inline int count_slot(std::size_t f, int rank, int d, int idx) {
  int c = 0;
  for (int s = 0; s < rank; ++s) {
    if (static_cast<int>(f % d) == idx) ++c;
    f /= d;
  }
  return c;
}

/// Max frame component of t over the flat indices whose LAST slot is (or is not) radial.
inline double max_by_last_slot(const Tensor& t, const OrthonormalFrame& frame, int radial, bool last_radial) {
  const Tensor c = in_frame(t, frame);
  const int d = t.dim();
  double m = 0.0;
  for (std::size_t f = 0; f < c.size(); ++f) {
    if ((static_cast<int>(f % d) == radial) == last_radial) m = std::max(m, std::abs(c[f]));
  }
  return m;
}

}  // namespace detail

/// Residuals of the cone connection relations:
///   nabla_dr dr = 0,  nabla_X dr = nabla_dr X = X / r,
///   nabla_X Y = nabla^M_X Y - r g(X,Y) d_r   (tangential and radial parts),
///   nabla_dr w = -(p/r) w,  nabla_X w = nabla^M_X w - (1/r) dr ^ (X _| w),
///   nabla_dr (dr) = 0,  nabla_X (dr) = r X^flat.
/// Every component of the difference tensor is checked in a gbar-orthonormal frame.
inline std::vector<CheckReport> check_connection_relations(const ConeChart& cone,
                                                           std::span<const std::vector<double>> points,
                                                           std::span<const TensorField> vectors,
                                                           std::span<const FormField> forms, double tol = 1e-7) {
  const int d = cone.dim(), m = cone.base_dim(), rad = cone.radial();
  enum Id { drdr, xdr, drx, xy_tan, xy_rad, drw, xw, drdrf, xdrf, kCount };
  const char* names[kCount] = {"cone.nabla_dr_dr",       "cone.nabla_X_dr",         "cone.nabla_dr_X",
                               "cone.nabla_X_Y.tangential", "cone.nabla_X_Y.radial", "cone.nabla_dr_form",
                               "cone.nabla_X_form",      "cone.nabla_dr_of_dr",     "cone.nabla_X_of_dr"};
  const char* anchors[kCount] = {"nabla_{d_r} d_r = 0",
                                 "nabla_X d_r = X / r",
                                 "nabla_{d_r} X = X / r",
                                 "nabla_X Y = nabla^M_X Y - r g(X,Y) d_r",
                                 "nabla_X Y = nabla^M_X Y - r g(X,Y) d_r",
                                 "nabla_{d_r} w = -(p/r) w",
                                 "nabla_X w = nabla^M_X w - (1/r) dr ^ (X _| w)",
                                 "nabla_{d_r} dr = 0",
                                 "nabla_X dr = r X^flat"};
  std::vector<std::vector<double>> res(kCount, std::vector<double>(points.size(), 0.0));

  std::vector<TensorField> lifted_vectors, lifted_forms;
  for (const auto& v : vectors) lifted_vectors.push_back(cone.lift(v));
  for (const auto& w : forms) lifted_forms.push_back(cone.lift(w.field));

  parallel_for(points.size(), [&](std::size_t s) {
    const auto& p = points[s];
    const double r = p[rad];
    const auto bp = detail::base_part(p);
    // Order 2 so that 2-forms given as exterior derivatives can still be differentiated.
    const LocalGeometry cg(cone.chart(), p, 2);
    const LocalGeometry bg(cone.base(), bp, 2);
    const auto frame = orthonormal_frame(cone.chart(), p);
    const Eigen::MatrixXd gb = cone.base().metric_at(bp);

    // d_r as a vector field and dr as a 1-form.
    JetTensor dr_vec(d, Valence{1, 0}, Jet(0.0)), dr_form(d, Valence{0, 1}, Jet(0.0));
    dr_vec[rad] = Jet(1.0);
    dr_form[rad] = Jet(1.0);
    {
      const Tensor nd = values(cg.covariant_derivative(dr_vec));  // [k][a]
      Tensor expect(d, nd.valence(), 0.0);
      for (int a = 0; a < m; ++a) expect[a * d + a] = 1.0 / r;
      const Tensor diff = nd - expect;
      res[drdr][s] = detail::max_by_last_slot(diff, frame, rad, true);
      res[xdr][s] = detail::max_by_last_slot(diff, frame, rad, false);
    }
    {
      const Tensor nd = values(cg.covariant_derivative(dr_form));  // [b][a]
      Tensor expect(d, nd.valence(), 0.0);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) expect[b * d + a] = r * gb(a, b);
      const Tensor diff = nd - expect;
      res[drdrf][s] = detail::max_by_last_slot(diff, frame, rad, true);
      res[xdrf][s] = detail::max_by_last_slot(diff, frame, rad, false);
    }
    for (std::size_t v = 0; v < vectors.size(); ++v) {
      const Tensor ny = values(cg.covariant_derivative(lifted_vectors[v](cg.coordinates())));
      const Tensor by = values(vectors[v](bg.coordinates()));
      const Tensor nby = values(bg.covariant_derivative(vectors[v](bg.coordinates())));
      Tensor expect = detail::embed(nby, d);
      for (int k = 0; k < m; ++k) expect[k * d + rad] = by[k] / r;  // nabla_{d_r} Y
      for (int a = 0; a < m; ++a) {
        double gxy = 0.0;
        for (int b = 0; b < m; ++b) gxy += gb(a, b) * by[b];
        expect[rad * d + a] = -r * gxy;
      }
      const Tensor c = in_frame(ny - expect, frame);
      for (std::size_t f = 0; f < c.size(); ++f) {
        const int k = static_cast<int>(f / d), a = static_cast<int>(f % d);
        const double e = std::abs(c[f]);
        if (a == rad) {
          res[drx][s] = std::max(res[drx][s], e);
        } else if (k == rad) {
          res[xy_rad][s] = std::max(res[xy_rad][s], e);
        } else {
          res[xy_tan][s] = std::max(res[xy_tan][s], e);
        }
      }
    }
    for (std::size_t w = 0; w < forms.size(); ++w) {
      const int p_deg = forms[w].degree;
      const Tensor nw = values(cg.covariant_derivative(lifted_forms[w](cg.coordinates())));
      const Tensor bw = values(forms[w].field(bg.coordinates()));
      const Tensor nbw = values(bg.covariant_derivative(forms[w].field(bg.coordinates())));
      Tensor expect = detail::embed(nbw, d);
      // nabla_{d_r} w = -(p/r) w: derivative slot radial, form slots from the base.
      const Tensor bw_cone = detail::embed(bw, d);
      for (std::size_t f = 0; f < bw_cone.size(); ++f) expect[f * d + rad] = -p_deg / r * bw_cone[f];
      // -(1/r) dr ^ (X _| w) for derivative direction X = d_a.
      for (int a = 0; a < m; ++a) {
        if (p_deg == 1) {
          expect[rad * d + a] = -bw[a] / r;
        } else if (p_deg == 2) {
          for (int z = 0; z < m; ++z) {
            expect[(rad * d + z) * d + a] += -bw[a * m + z] / r;
            expect[(z * d + rad) * d + a] += bw[a * m + z] / r;
          }
        } else {
          throw UsageError("connection check supports 1- and 2-forms");
        }
      }
      const Tensor diff = nw - expect;
      res[drw][s] = std::max(res[drw][s], detail::max_by_last_slot(diff, frame, rad, true));
      res[xw][s] = std::max(res[xw][s], detail::max_by_last_slot(diff, frame, rad, false));
    }
  });

  std::vector<CheckReport> out;
  for (int i = 0; i < kCount; ++i) out.push_back(summarize(names[i], anchors[i], tol, res[i], points));
  return out;
}

/// Cone curvature against the base: Rbar(d_r, .) = 0 and
/// Rbar(X,Y)Z = R(X,Y)Z + g(X,Z)Y - g(Y,Z)X.
inline std::vector<CheckReport> check_curvature_relation(const ConeChart& cone,
                                                         std::span<const std::vector<double>> points,
                                                         double tol = 1e-7) {
  const int d = cone.dim(), m = cone.base_dim(), rad = cone.radial();
  std::vector<double> radial(points.size()), tangential(points.size());
  parallel_for(points.size(), [&](std::size_t s) {
    const auto& p = points[s];
    const auto bp = detail::base_part(p);
    const LocalGeometry cg(cone.chart(), p, 2);
    const LocalGeometry bg(cone.base(), bp, 2);
    const Tensor rc = values(cg.riemann(0));
    const Tensor rb = values(bg.riemann(0));
    const Eigen::MatrixXd gb = cone.base().metric_at(bp);
    Tensor expect = detail::embed(rb, d);
    for (int l = 0; l < m; ++l)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) {
            expect[((l * d + i) * d + j) * d + k] += gb(i, k) * (l == j) - gb(j, k) * (l == i);
          }
    const auto frame = orthonormal_frame(cone.chart(), p);
    const Tensor c = in_frame(rc - expect, frame);
    for (std::size_t f = 0; f < c.size(); ++f) {
      const double e = std::abs(c[f]);
      if (detail::count_slot(f, 4, d, rad) > 0) {
        radial[s] = std::max(radial[s], e);
      } else {
        tangential[s] = std::max(tangential[s], e);
      }
    }
  });
  return {summarize("cone.curvature_radial", "Rbar(d_r, .) = 0", tol, radial, points),
          summarize("cone.curvature_base", "Rbar(X,Y)Z = R(X,Y)Z + g(X,Z)Y - g(Y,Z)X", tol, tangential, points)};
}

/// delta^cone (r^k sigma) = r^(k-2) delta^M sigma, for every listed k and form.
inline CheckReport check_lemma_codiff(const ConeChart& cone, std::span<const TensorField> forms,
                                      std::span<const int> powers, std::span<const std::vector<double>> points,
                                      double tol = 1e-6) {
  std::vector<std::vector<TensorField>> lifted(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (int k : powers) lifted[i].push_back(cone.lift(forms[i], k));
  return sweep("cone.codifferential_scaling", "delta(r^k sigma) = r^(k-2) delta^M sigma", tol, points,
               [&](const std::vector<double>& p) {
                 const double r = p[cone.radial()];
                 const LocalGeometry cg(cone.chart(), p, 1);
                 const LocalGeometry bg(cone.base(), detail::base_part(p), 1);
                 double worst = 0.0;
                 for (std::size_t i = 0; i < forms.size(); ++i) {
                   const double base = bg.codifferential(forms[i](bg.coordinates())).value();
                   for (std::size_t kk = 0; kk < powers.size(); ++kk) {
                     const double lhs = cg.codifferential(lifted[i][kk](cg.coordinates())).value();
                     const double rhs = std::pow(r, powers[kk] - 2) * base;
                     worst = std::max(worst, std::abs(lhs - rhs));
                   }
                 }
                 return worst;
               });
}

/// Delta^cone (r^k f) = r^(k-2) (Delta^M f - k (2n + k) f), for every listed k and f.
inline CheckReport check_lemma_laplacian(const ConeChart& cone, std::span<const ScalarField> functions,
                                         std::span<const int> powers, std::span<const std::vector<double>> points,
                                         double tol = 1e-6) {
  const int two_n = 2 * cone.n();
  std::vector<std::vector<ScalarField>> lifted(functions.size());
  for (std::size_t i = 0; i < functions.size(); ++i)
    for (int k : powers) lifted[i].push_back(cone.lift(functions[i], k));
  return sweep("cone.laplacian_scaling", "Delta(r^k f) = r^(k-2) (Delta^M f - k(2n+k) f)", tol, points,
               [&](const std::vector<double>& p) {
                 const double r = p[cone.radial()];
                 const LocalGeometry cg(cone.chart(), p, 2);
                 const LocalGeometry bg(cone.base(), detail::base_part(p), 2);
                 // Constant functions come back as exact jets; add a zero jet to give them order.
                 const Jet zero_b = 0.0 * bg.coordinates()[0];
                 const Jet zero_c = 0.0 * cg.coordinates()[0];
                 double worst = 0.0;
                 for (std::size_t i = 0; i < functions.size(); ++i) {
                   const Jet f = functions[i](bg.coordinates()) + zero_b;
                   const double lap = bg.laplacian(f).value();
                   for (std::size_t kk = 0; kk < powers.size(); ++kk) {
                     const int k = powers[kk];
                     const double lhs = cg.laplacian(lifted[i][kk](cg.coordinates()) + zero_c).value();
                     const double rhs = std::pow(r, k - 2) * (lap - k * (two_n + k) * f.value());
                     worst = std::max(worst, std::abs(lhs - rhs));
                   }
                 }
                 return worst;
               });
}

/// Coordinate components of nabla(lifted form) with q radial slots scale as
/// r^-q: compares r^q * component at (p, r) and (p, 2r).
inline CheckReport check_form_scaling(const ConeChart& cone, std::span<const FormField> forms,
                                      std::span<const std::vector<double>> points, double tol = 1e-7) {
  const int d = cone.dim(), rad = cone.radial();
  std::vector<TensorField> lifted;
  for (const auto& w : forms) lifted.push_back(cone.lift(w.field));
  return sweep("cone.form_derivative_r_scaling", "nabla_{d_r} w = -(p/r) w and nabla_X w r-weights", tol, points,
               [&](const std::vector<double>& p) {
                 std::vector<double> p2 = p;
                 p2[rad] *= 2.0;
                 const LocalGeometry g1(cone.chart(), p, 2), g2(cone.chart(), p2, 2);
                 double worst = 0.0;
                 for (const auto& w : lifted) {
                   const Tensor a = values(g1.covariant_derivative(w(g1.coordinates())));
                   const Tensor b = values(g2.covariant_derivative(w(g2.coordinates())));
                   for (std::size_t f = 0; f < a.size(); ++f) {
                     const int q = detail::count_slot(f, a.rank(), d, rad);
                     const double sa = std::pow(p[rad], q) * a[f];
                     const double sb = std::pow(p2[rad], q) * b[f];
                     worst = std::max(worst, std::abs(sa - sb));
                   }
                 }
                 return worst;
               });
}

}  // namespace conegeo
