#pragma once

// Pointwise Riemannian geometry on one chart, computed with jets.
//
// Conventions:
//   Gamma^k_ij               = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
//   R(X,Y)Z                  = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   riemann  [l][i][j][k]    = dx^l(R(d_i, d_j) d_k)
//   lowered  [i][j][k][l]    = g(R(d_i, d_j) d_k, d_l)
//   Ric(Y,Z)                 = tr(X -> R(X,Y)Z)
//   delta sigma              = -sum_a (nabla_{e_a} sigma)(e_a)
//   Delta f                  = delta d f = -tr Hess f
// Covariant derivatives append the derivative slot as the LAST lower index.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "conegeo/chart.hpp"
#include "conegeo/errors.hpp"
#include "conegeo/jet.hpp"
#include "conegeo/tensor.hpp"

namespace conegeo {

class LocalGeometry {
 public:
  /// Expands the metric of `chart` about `point` to jet order `order`.
  LocalGeometry(const ManifoldChart& chart, std::span<const double> point, int order)
      : dim_(chart.dim()), order_(order), point_(point.begin(), point.end()) {
    if (static_cast<int>(point.size()) != dim_) throw DomainError("point has wrong dimension");
    if (order < 0 || order > kMaxJetOrder) throw OrderError("geometry jet order out of range");
    chart.require_interior(point);
    chart.cholesky(point);
    coords_ = Jet::coordinates(point, order);
    metric_ = chart.metric(coords_);
    if (metric_.dim() != dim_ || metric_.valence() != Valence{0, 2}) {
      throw DegenerateMetricError("metric function returned a tensor of the wrong shape");
    }
    for (auto& c : metric_.components()) {
      if (c.is_constant()) c = Jet::constant(dim_, order, c.value());
    }
    inverse_ = inverse(metric_);
    if (order >= 1) christoffel_ = compute_christoffel();
  }

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  const std::vector<double>& point() const noexcept { return point_; }
  std::span<const Jet> coordinates() const noexcept { return coords_; }

  const JetTensor& metric() const noexcept { return metric_; }
  const JetTensor& inverse_metric() const noexcept { return inverse_; }

  const Jet& g(int i, int j) const { return metric_[i * dim_ + j]; }
  const Jet& ginv(int i, int j) const { return inverse_[i * dim_ + j]; }

  /// Gamma^k_ij with layout [k][i][j], at jet order order()-1.
  const JetTensor& christoffel() const {
    require(1, "Christoffel symbols");
    return christoffel_;
  }

  const Jet& gamma(int k, int i, int j) const { return christoffel_[(k * dim_ + i) * dim_ + j]; }

  /// R^l_ijk at the requested jet order (<= order()-2).
  JetTensor riemann(int order) const {
    require(order + 2, "curvature");
    const int d = dim_;
    JetTensor gam = truncated(christoffel_, order + 1);
    std::vector<JetTensor> dgam;
    dgam.reserve(d);
    for (int a = 0; a < d; ++a) {
      JetTensor da(d, Valence{1, 2});
      for (std::size_t f = 0; f < gam.size(); ++f) da[f] = gam[f].derivative(a);
      dgam.push_back(std::move(da));
    }
    JetTensor r(d, Valence{1, 3});
    auto G = [&](int k, int i, int j) -> const Jet& { return gam[(k * d + i) * d + j]; };
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          if (j < i) {
            for (int k = 0; k < d; ++k) {
              r[((l * d + i) * d + j) * d + k] = -r[((l * d + j) * d + i) * d + k];
            }
            continue;
          }
          for (int k = 0; k < d; ++k) {
            Jet acc = dgam[i][(l * d + j) * d + k] - dgam[j][(l * d + i) * d + k];
            for (int m = 0; m < d; ++m) {
              acc.add_product(G(l, i, m), G(m, j, k));
              acc.add_product(G(l, j, m), G(m, i, k), -1.0);
            }
            r[((l * d + i) * d + j) * d + k] = std::move(acc);
          }
        }
    return r;
  }

  JetTensor riemann_lowered(int order) const { return lower_riemann(riemann(order)); }

  JetTensor lower_riemann(const JetTensor& r) const {
    const int d = dim_;
    JetTensor out(d, Valence{0, 4});
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            Jet acc;
            for (int p = 0; p < d; ++p) acc.add_product(g(l, p), r[((p * d + i) * d + j) * d + k]);
            out[((i * d + j) * d + k) * d + l] = std::move(acc);
          }
    return out;
  }

  JetTensor ricci(int order) const { return ricci_from(riemann(order)); }

  JetTensor ricci_from(const JetTensor& r) const {
    const int d = dim_;
    JetTensor ric(d, Valence{0, 2});
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        Jet acc;
        for (int i = 0; i < d; ++i) acc += r[((i * d + i) * d + j) * d + k];
        ric[j * d + k] = std::move(acc);
      }
    return ric;
  }

  Jet trace(const JetTensor& bilinear) const {
    Jet acc;
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b) acc.add_product(ginv(a, b), bilinear[a * dim_ + b]);
    return acc;
  }

  Jet scalar_curvature(int order) const { return trace(ricci(order)); }

  /// nabla T with the derivative slot appended last. Order drops by one.
  JetTensor covariant_derivative(const JetTensor& t) const {
    require(1, "covariant derivative");
    const int d = dim_;
    const Valence v = t.valence();
    const int rank = v.rank();
    std::vector<std::size_t> stride(rank, 1);
    for (int s = rank - 2; s >= 0; --s) stride[s] = stride[s + 1] * d;
    JetTensor out(d, Valence{v.upper, v.lower + 1});
    std::vector<int> idx(rank);
    for (std::size_t f = 0; f < t.size(); ++f) {
      std::size_t rem = f;
      for (int s = rank - 1; s >= 0; --s) {
        idx[s] = static_cast<int>(rem % d);
        rem /= d;
      }
      for (int k = 0; k < d; ++k) {
        Jet acc = t[f].derivative(k);
        for (int s = 0; s < rank; ++s) {
          const bool upper = s < v.upper;
          for (int m = 0; m < d; ++m) {
            const auto shift = static_cast<std::ptrdiff_t>(m - idx[s]) * static_cast<std::ptrdiff_t>(stride[s]);
            const auto f2 = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(f) + shift);
            const Jet& t2 = t[f2];
            if (t2.is_constant() && t2.value() == 0.0) continue;
            if (upper) {
              acc.add_product(gamma(idx[s], k, m), t2);
            } else {
              acc.add_product(gamma(m, k, idx[s]), t2, -1.0);
            }
          }
        }
        out[f * d + k] = std::move(acc);
      }
    }
    return out;
  }

  /// delta sigma = -g^ab (nabla_a sigma)_b for a 1-form (valence (0,1)).
  Jet codifferential(const JetTensor& one_form) const {
    const JetTensor ds = covariant_derivative(one_form);
    Jet acc;
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b) acc.add_product(ginv(a, b), ds[b * dim_ + a], -1.0);
    return acc;
  }

  /// (delta^nabla T)(X) = -sum_a (nabla_{e_a} T)(e_a, X) for a (0,2) tensor.
  JetTensor divergence_2tensor(const JetTensor& t) const {
    const JetTensor dt = covariant_derivative(t);
    const int d = dim_;
    JetTensor out(d, Valence{0, 1});
    for (int x = 0; x < d; ++x) {
      Jet acc;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) acc.add_product(ginv(a, b), dt[(b * d + x) * d + a], -1.0);
      out[x] = std::move(acc);
    }
    return out;
  }

  /// d f as a 1-form.
  JetTensor differential(const Jet& f) const {
    JetTensor df(dim_, Valence{0, 1});
    for (int a = 0; a < dim_; ++a) df[a] = f.derivative(a);
    return df;
  }

  /// Geometer's Laplacian Delta f = -tr Hess f.
  Jet laplacian(const Jet& f) const { return codifferential(differential(f)); }

  /// Raise the last lower slot of a (0,q) tensor into a (1,q-1) endomorphism-like
  /// tensor whose upper slot comes first: out^k_{..} = g^{kl} t_{..l}.
  JetTensor raise_last(const JetTensor& t) const {
    const int d = dim_;
    const Valence v = t.valence();
    const std::size_t head = t.size() / d;
    JetTensor out(d, Valence{v.upper + 1, v.lower - 1});
    for (int k = 0; k < d; ++k)
      for (std::size_t h = 0; h < head; ++h) {
        Jet acc;
        for (int l = 0; l < d; ++l) acc.add_product(ginv(k, l), t[h * d + l]);
        out[k * head + h] = std::move(acc);
      }
    return out;
  }

 private:
  void require(int needed, const char* what) const {
    if (order_ < needed) {
      throw OrderError(std::string(what) + " needs jet order " + std::to_string(needed) + ", have " +
                       std::to_string(order_));
    }
  }

  JetTensor compute_christoffel() const {
    const int d = dim_;
    std::vector<JetTensor> dg;
    dg.reserve(d);
    for (int a = 0; a < d; ++a) {
      JetTensor da(d, Valence{0, 2});
      for (std::size_t f = 0; f < metric_.size(); ++f) da[f] = metric_[f].derivative(a);
      dg.push_back(std::move(da));
    }
    // First kind: Gamma_{l,ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    JetTensor first(d, Valence{0, 3});
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
          Jet v = 0.5 * (dg[i][j * d + l] + dg[j][i * d + l] - dg[l][i * d + j]);
          first[(l * d + j) * d + i] = v;
          first[(l * d + i) * d + j] = std::move(v);
        }
    JetTensor gam(d, Valence{1, 2});
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
          Jet acc;
          for (int l = 0; l < d; ++l) acc.add_product(ginv(k, l), first[(l * d + i) * d + j]);
          gam[(k * d + j) * d + i] = acc;
          gam[(k * d + i) * d + j] = std::move(acc);
        }
    return gam;
  }

  int dim_;
  int order_;
  std::vector<double> point_;
  std::vector<Jet> coords_;
  JetTensor metric_;
  JetTensor inverse_;
  JetTensor christoffel_;
};

/// Exterior derivative of a 1-form: (d sigma)_ij = d_i sigma_j - d_j sigma_i.
inline JetTensor exterior_derivative_1form(const JetTensor& sigma) {
  const int d = sigma.dim();
  JetTensor out(d, Valence{0, 2});
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Jet v = sigma[j].derivative(i) - sigma[i].derivative(j);
      out[j * d + i] = -v;
      out[i * d + j] = std::move(v);
    }
  return out;
}

/// Exterior derivative of a 2-form: (d w)_ijk = d_i w_jk + d_j w_ki + d_k w_ij.
inline JetTensor exterior_derivative_2form(const JetTensor& w) {
  const int d = w.dim();
  JetTensor out(d, Valence{0, 3});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        out[(i * d + j) * d + k] =
            w[j * d + k].derivative(i) + w[k * d + i].derivative(j) + w[i * d + j].derivative(k);
      }
  return out;
}

/// Orthonormal frame at a point: column a of `vectors` holds e_a in coordinates.
struct OrthonormalFrame {
  std::vector<double> point;
  Eigen::MatrixXd vectors;
  Eigen::MatrixXd coframe;  // inverse of `vectors`; row a is theta^a
};

/// Gram-Schmidt on the coordinate frame (e_1 parallel to d_1, and so on).
inline OrthonormalFrame orthonormal_frame(const ManifoldChart& chart, std::span<const double> point) {
  chart.require_interior(point);
  const Eigen::MatrixXd l = chart.cholesky(point);
  OrthonormalFrame f;
  f.point.assign(point.begin(), point.end());
  f.coframe = l.transpose();
  f.vectors = f.coframe.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(chart.dim(), chart.dim()));
  return f;
}

/// The same frame rotated by an orthogonal matrix: e'_a = sum_b e_b Q_ba.
inline OrthonormalFrame rotated(const OrthonormalFrame& f, const Eigen::MatrixXd& q) {
  OrthonormalFrame out;
  out.point = f.point;
  out.vectors = f.vectors * q;
  out.coframe = q.transpose() * f.coframe;
  return out;
}

/// Components of a tensor in an orthonormal frame.
inline Tensor in_frame(const Tensor& t, const OrthonormalFrame& frame) {
  const int d = t.dim();
  const int rank = t.rank();
  Tensor cur = t;
  std::size_t stride = Tensor::flat_size(d, rank);
  for (int s = 0; s < rank; ++s) {
    stride /= d;
    const bool upper = s < t.valence().upper;
    Tensor next(d, t.valence());
    const std::size_t block = stride * d;
    for (std::size_t f = 0; f < cur.size(); ++f) {
      const std::size_t base = (f / block) * block + f % stride;
      const int a = static_cast<int>((f / stride) % d);
      double acc = 0.0;
      for (int i = 0; i < d; ++i) {
        const double m = upper ? frame.coframe(a, i) : frame.vectors(i, a);
        acc += m * cur[base + static_cast<std::size_t>(i) * stride];
      }
      next[f] = acc;
    }
    cur = std::move(next);
  }
  return cur;
}

/// |T|^2 as the full sum over all index tuples in an orthonormal frame.
inline double norm_squared(const Tensor& t, const OrthonormalFrame& frame) {
  const Tensor c = in_frame(t, frame);
  double s = 0.0;
  for (double v : c.components()) s += v * v;
  return s;
}

/// Full-sum inner product <A,B> of two tensors of equal valence.
inline double inner(const Tensor& a, const Tensor& b, const OrthonormalFrame& frame) {
  const Tensor ca = in_frame(a, frame);
  const Tensor cb = in_frame(b, frame);
  double s = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) s += ca[i] * cb[i];
  return s;
}

/// Max absolute orthonormal-frame component: the residual measure used for
/// tensor identities.
inline double frame_max_abs(const Tensor& t, const OrthonormalFrame& frame) {
  return max_abs(in_frame(t, frame));
}

/// Full-sum |T|^2 for a covariant (0,q) tensor using g^{-1} contractions in
/// the coordinate frame (second, independent route to norm_squared).
inline double norm_squared_coordinate(const Tensor& t, const Eigen::MatrixXd& ginv) {
  const int d = t.dim();
  const int q = t.rank();
  // Raise every slot, then pair with the original.
  Tensor raised = t;
  std::size_t stride = Tensor::flat_size(d, q);
  for (int s = 0; s < q; ++s) {
    stride /= d;
    Tensor next(d, t.valence());
    const std::size_t block = stride * d;
    for (std::size_t f = 0; f < raised.size(); ++f) {
      const std::size_t base = (f / block) * block + f % stride;
      const int a = static_cast<int>((f / stride) % d);
      double acc = 0.0;
      for (int i = 0; i < d; ++i) acc += ginv(a, i) * raised[base + static_cast<std::size_t>(i) * stride];
      next[f] = acc;
    }
    raised = std::move(next);
  }
  double s = 0.0;
  for (std::size_t f = 0; f < t.size(); ++f) s += raised[f] * t[f];
  return s;
}

}  // namespace conegeo
