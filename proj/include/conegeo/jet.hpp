#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Jet of order K in d variables stores the Taylor coefficients
// c_alpha = (d^alpha f)(x0) / alpha! for all multi-indices |alpha| <= K.
// Monomials are numbered by total degree first, so the coefficients of a
// lower-order truncation are always a prefix of the higher-order ones.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "conegeo/errors.hpp"

namespace conegeo {

inline constexpr int kMaxJetOrder = 8;
inline constexpr int kMaxJetDim = 8;

class JetSpace {
 public:
  struct Product {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  static constexpr std::uint32_t kNone = 0xffffffffu;

  static const JetSpace& get(int dim) {
    if (dim < 1 || dim > kMaxJetDim) {
      throw OrderError("jet dimension " + std::to_string(dim) + " unsupported");
    }
    static std::array<std::once_flag, kMaxJetDim + 1> flags;
    static std::array<std::unique_ptr<JetSpace>, kMaxJetDim + 1> spaces;
    std::call_once(flags[dim], [dim] { spaces[dim].reset(new JetSpace(dim)); });
    return *spaces[dim];
  }

  int dim() const noexcept { return dim_; }

  /// Number of monomials of total degree <= order.
  std::size_t size(int order) const noexcept { return size_by_order_[order]; }

  int degree(std::size_t idx) const noexcept { return degree_[idx]; }

  std::span<const std::uint8_t> exponent(std::size_t idx) const noexcept {
    return {exponents_.data() + idx * dim_, static_cast<std::size_t>(dim_)};
  }

  std::size_t index_of(std::span<const int> alpha) const {
    std::uint64_t key = 0;
    int deg = 0;
    for (int i = 0; i < dim_; ++i) {
      if (alpha[i] < 0) throw OrderError("negative multi-index entry");
      key += static_cast<std::uint64_t>(alpha[i]) * radix_[i];
      deg += alpha[i];
    }
    if (deg > kMaxJetOrder) throw OrderError("multi-index degree exceeds maximum jet order");
    return lookup_.at(key);
  }

  /// Index of (monomial idx) * x_var, or kNone when that exceeds kMaxJetOrder.
  std::uint32_t shifted(std::size_t idx, int var) const noexcept { return shift_[idx * dim_ + var]; }

  /// All coefficient products whose output monomial has degree <= order.
  std::span<const Product> products(int order) const noexcept {
    return {products_.data(), product_count_[order]};
  }

 private:
  explicit JetSpace(int dim) : dim_(dim) {
    std::uint64_t base = 1;
    for (int i = 0; i < dim_; ++i) {
      radix_[i] = base;
      base *= kMaxJetOrder + 1;
    }
    std::vector<int> alpha(dim_, 0);
    for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
      enumerate(alpha, 0, deg, deg);
      size_by_order_[deg] = degree_.size();
    }
    const std::size_t n = degree_.size();
    shift_.assign(n * dim_, kNone);
    for (std::size_t idx = 0; idx < n; ++idx) {
      if (degree_[idx] == kMaxJetOrder) continue;
      for (int v = 0; v < dim_; ++v) shift_[idx * dim_ + v] = lookup_.at(keys_[idx] + radix_[v]);
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n && degree_[a] + degree_[b] <= kMaxJetOrder; ++b) {
        products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                             lookup_.at(keys_[a] + keys_[b])});
      }
    }
    std::stable_sort(products_.begin(), products_.end(), [this](const Product& x, const Product& y) {
      return degree_[x.out] < degree_[y.out];
    });
    std::size_t k = 0;
    for (int order = 0; order <= kMaxJetOrder; ++order) {
      while (k < products_.size() && degree_[products_[k].out] <= order) ++k;
      product_count_[order] = k;
    }
  }

  // Exponent vectors of total degree `deg`, first variable's exponent descending.
  void enumerate(std::vector<int>& alpha, int var, int remaining, int deg) {
    if (var == dim_ - 1) {
      alpha[var] = remaining;
      std::uint64_t key = 0;
      for (int i = 0; i < dim_; ++i) {
        key += static_cast<std::uint64_t>(alpha[i]) * radix_[i];
        exponents_.push_back(static_cast<std::uint8_t>(alpha[i]));
      }
      lookup_.emplace(key, static_cast<std::uint32_t>(degree_.size()));
      keys_.push_back(key);
      degree_.push_back(deg);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      alpha[var] = e;
      enumerate(alpha, var + 1, remaining - e, deg);
    }
    alpha[var] = 0;
  }

  int dim_;
  std::array<std::uint64_t, kMaxJetDim> radix_{};
  std::array<std::size_t, kMaxJetOrder + 1> size_by_order_{};
  std::array<std::size_t, kMaxJetOrder + 1> product_count_{};
  std::vector<int> degree_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint8_t> exponents_;
  std::vector<std::uint32_t> shift_;
  std::vector<Product> products_;
  std::unordered_map<std::uint64_t, std::uint32_t> lookup_;
};

/// Scalar carried as a truncated Taylor expansion. A jet without a space is an
/// exact constant and behaves as if it had infinite order.
class Jet {
 public:
  Jet() : c_(1, 0.0) {}
  Jet(double value) : c_(1, value) {}  // NOLINT(google-explicit-constructor)

  static Jet zero(int dim, int order) {
    check_order(order);
    Jet j;
    j.space_ = &JetSpace::get(dim);
    j.order_ = order;
    j.c_.assign(j.space_->size(order), 0.0);
    return j;
  }

  static Jet constant(int dim, int order, double value) {
    Jet j = zero(dim, order);
    j.c_[0] = value;
    return j;
  }

  /// The coordinate function x_var expanded about `at`.
  static Jet variable(int dim, int order, int var, double at) {
    Jet j = constant(dim, order, at);
    if (order >= 1) j.c_[1 + var] = 1.0;
    return j;
  }

  static std::vector<Jet> coordinates(std::span<const double> point, int order) {
    const int d = static_cast<int>(point.size());
    std::vector<Jet> xs;
    xs.reserve(d);
    for (int i = 0; i < d; ++i) xs.push_back(variable(d, order, i, point[i]));
    return xs;
  }

  bool is_constant() const noexcept { return space_ == nullptr; }
  int dim() const noexcept { return space_ ? space_->dim() : 0; }
  int order() const noexcept { return order_; }
  const JetSpace* space() const noexcept { return space_; }
  double value() const noexcept { return c_[0]; }
  std::span<const double> coefficients() const noexcept { return c_; }

  /// Taylor coefficient of x^alpha (zero for constants beyond degree 0).
  double coefficient(std::span<const int> alpha) const {
    int deg = 0;
    for (int a : alpha) deg += a;
    if (deg > order_) throw OrderError("coefficient beyond jet order");
    if (is_constant()) return deg == 0 ? c_[0] : 0.0;
    return c_[space_->index_of(alpha)];
  }

  /// Exact partial derivative d^alpha f at the base point.
  double partial(std::span<const int> alpha) const {
    double fact = 1.0;
    for (int a : alpha)
      for (int k = 2; k <= a; ++k) fact *= k;
    return fact * coefficient(alpha);
  }

  /// d/dx_var as a jet of one order lower.
  Jet derivative(int var) const {
    if (is_constant()) return Jet(0.0);
    if (order_ < 1) throw OrderError("derivative requested from an order-0 jet");
    if (var < 0 || var >= space_->dim()) throw OrderError("derivative variable out of range");
    Jet out = zero(space_->dim(), order_ - 1);
    for (std::size_t idx = 0; idx < out.c_.size(); ++idx) {
      const std::uint32_t up = space_->shifted(idx, var);
      out.c_[idx] = (space_->exponent(idx)[var] + 1) * c_[up];
    }
    return out;
  }

  Jet truncated(int order) const {
    if (is_constant() || order >= order_) return *this;
    check_order(order);
    Jet out;
    out.space_ = space_;
    out.order_ = order;
    out.c_.assign(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(space_->size(order)));
    return out;
  }

  Jet operator-() const {
    Jet out = *this;
    for (double& v : out.c_) v = -v;
    return out;
  }

  Jet& operator+=(const Jet& rhs) { return accumulate(rhs, 1.0); }
  Jet& operator-=(const Jet& rhs) { return accumulate(rhs, -1.0); }
  Jet& operator+=(double rhs) {
    c_[0] += rhs;
    return *this;
  }
  Jet& operator-=(double rhs) {
    c_[0] -= rhs;
    return *this;
  }
  Jet& operator*=(double rhs) {
    for (double& v : c_) v *= rhs;
    return *this;
  }
  Jet& operator*=(const Jet& rhs) {
    *this = *this * rhs;
    return *this;
  }
  Jet& operator/=(double rhs) { return *this *= 1.0 / rhs; }

  /// *this += scale * a * b without materialising the product.
  Jet& add_product(const Jet& a, const Jet& b, double scale = 1.0) {
    if (a.is_constant() || b.is_constant()) {
      if (a.is_constant() && b.is_constant()) {
        return *this += scale * a.c_[0] * b.c_[0];
      }
      const Jet& jet = a.is_constant() ? b : a;
      const double s = scale * (a.is_constant() ? a.c_[0] : b.c_[0]);
      return accumulate(jet, s);
    }
    const JetSpace* sp = a.space_;
    require_same_space(sp, b.space_);
    int order = std::min(a.order_, b.order_);
    if (is_constant()) {
      const double v = c_[0];
      *this = zero(sp->dim(), order);
      c_[0] = v;
    } else {
      require_same_space(space_, sp);
      if (order_ < order) {
        order = order_;
      } else if (order_ > order) {
        *this = truncated(order);
      }
    }
    const double* pa = a.c_.data();
    const double* pb = b.c_.data();
    double* po = c_.data();
    if (scale == 1.0) {
      for (const auto& p : sp->products(order)) po[p.out] += pa[p.lhs] * pb[p.rhs];
    } else {
      for (const auto& p : sp->products(order)) po[p.out] += scale * pa[p.lhs] * pb[p.rhs];
    }
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b) { return -b + a; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a /= b; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    if (a.is_constant()) return b * a.c_[0];
    if (b.is_constant()) return a * b.c_[0];
    Jet out = zero(a.space_->dim(), std::min(a.order_, b.order_));
    out.add_product(a, b);
    return out;
  }

  /// f(a) for an analytic f given its derivatives f^(k)(a0), k = 0..order.
  static Jet compose(const Jet& a, std::span<const double> derivs) {
    if (a.is_constant()) return Jet(derivs[0]);
    const int order = a.order_;
    Jet h = a;
    h.c_[0] = 0.0;
    std::vector<double> taylor(order + 1);
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
      if (k > 0) fact *= k;
      taylor[k] = derivs[k] / fact;
    }
    Jet acc = constant(a.dim(), order, taylor[order]);
    for (int k = order - 1; k >= 0; --k) {
      acc = acc * h;
      acc.c_[0] += taylor[k];
    }
    return acc;
  }

 private:
  static void check_order(int order) {
    if (order < 0 || order > kMaxJetOrder) {
      throw OrderError("jet order " + std::to_string(order) + " outside [0, " +
                       std::to_string(kMaxJetOrder) + "]");
    }
  }

  static void require_same_space(const JetSpace* a, const JetSpace* b) {
    if (a != b) throw OrderError("jets over different variable counts cannot be combined");
  }

  Jet& accumulate(const Jet& rhs, double sign) {
    if (rhs.is_constant()) {
      c_[0] += sign * rhs.c_[0];
      return *this;
    }
    if (is_constant()) {
      const double v = c_[0];
      *this = rhs;
      if (sign != 1.0) *this *= sign;
      c_[0] += v;
      return *this;
    }
    require_same_space(space_, rhs.space_);
    if (rhs.order_ < order_) *this = truncated(rhs.order_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += sign * rhs.c_[i];
    return *this;
  }

  const JetSpace* space_ = nullptr;
  int order_ = kMaxJetOrder;
  std::vector<double> c_;
};

inline Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const std::array<double, 4> cycle{s, c, -s, -c};
  std::array<double, kMaxJetOrder + 1> d{};
  for (int k = 0; k <= kMaxJetOrder; ++k) d[k] = cycle[k % 4];
  return Jet::compose(a, d);
}

inline Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const std::array<double, 4> cycle{c, -s, -c, s};
  std::array<double, kMaxJetOrder + 1> d{};
  for (int k = 0; k <= kMaxJetOrder; ++k) d[k] = cycle[k % 4];
  return Jet::compose(a, d);
}

inline Jet exp(const Jet& a) {
  std::array<double, kMaxJetOrder + 1> d{};
  d.fill(std::exp(a.value()));
  return Jet::compose(a, d);
}

inline Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("log of non-positive jet");
  std::array<double, kMaxJetOrder + 1> d{};
  d[0] = std::log(x);
  double fact = 1.0;  // (k-1)!
  for (int k = 1; k <= kMaxJetOrder; ++k) {
    if (k > 1) fact *= (k - 1);
    d[k] = ((k % 2 == 1) ? 1.0 : -1.0) * fact / std::pow(x, k);
  }
  return Jet::compose(a, d);
}

/// a^p for real p; a must be positive unless p is a non-negative integer.
inline Jet pow(const Jet& a, double p) {
  const double x = a.value();
  const bool integral = p == std::floor(p);
  if (!(x > 0.0) && !(integral && (p >= 0.0 || x != 0.0))) {
    throw DomainError("pow of non-positive jet with non-integral exponent");
  }
  std::array<double, kMaxJetOrder + 1> d{};
  double falling = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    d[k] = (falling == 0.0) ? 0.0 : falling * std::pow(x, p - k);
    falling *= (p - k);
  }
  return Jet::compose(a, d);
}

inline Jet sqrt(const Jet& a) { return pow(a, 0.5); }

inline Jet reciprocal(const Jet& a) {
  if (a.value() == 0.0) throw DomainError("reciprocal of a jet with zero value");
  return pow(a, -1.0);
}

inline Jet operator/(const Jet& a, const Jet& b) {
  if (b.is_constant()) return a / b.value();
  return a * reciprocal(b);
}

inline Jet operator/(double a, const Jet& b) { return a * reciprocal(b); }

}  // namespace conegeo
