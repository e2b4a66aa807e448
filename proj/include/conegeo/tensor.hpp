#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "conegeo/errors.hpp"
#include "conegeo/jet.hpp"

namespace conegeo {

/// Number of contravariant (upper) and covariant (lower) slots.
struct Valence {
  int upper = 0;
  int lower = 0;

  int rank() const noexcept { return upper + lower; }
  friend bool operator==(Valence, Valence) = default;
};

/// Dense coordinate components. Upper slots come first, then lower slots;
/// the flat layout is row-major over that index tuple.
template <class T>
class BasicTensor {
 public:
  BasicTensor() = default;

  BasicTensor(int dim, Valence valence, const T& fill = T{})
      : dim_(dim), valence_(valence), comp_(flat_size(dim, valence.rank()), fill) {}

  int dim() const noexcept { return dim_; }
  Valence valence() const noexcept { return valence_; }
  int rank() const noexcept { return valence_.rank(); }
  std::size_t size() const noexcept { return comp_.size(); }

  T& operator[](std::size_t flat) { return comp_[flat]; }
  const T& operator[](std::size_t flat) const { return comp_[flat]; }

  T& operator()(std::initializer_list<int> idx) { return comp_[flat_index(idx)]; }
  const T& operator()(std::initializer_list<int> idx) const { return comp_[flat_index(idx)]; }

  T& at(std::span<const int> idx) { return comp_[flat_index(idx)]; }
  const T& at(std::span<const int> idx) const { return comp_[flat_index(idx)]; }

  std::span<T> components() noexcept { return comp_; }
  std::span<const T> components() const noexcept { return comp_; }

  BasicTensor& operator+=(const BasicTensor& rhs) {
    for (std::size_t i = 0; i < comp_.size(); ++i) comp_[i] += rhs.comp_[i];
    return *this;
  }
  BasicTensor& operator-=(const BasicTensor& rhs) {
    for (std::size_t i = 0; i < comp_.size(); ++i) comp_[i] -= rhs.comp_[i];
    return *this;
  }
  BasicTensor& operator*=(double s) {
    for (auto& c : comp_) c *= s;
    return *this;
  }
  friend BasicTensor operator+(BasicTensor a, const BasicTensor& b) { return a += b; }
  friend BasicTensor operator-(BasicTensor a, const BasicTensor& b) { return a -= b; }
  friend BasicTensor operator*(BasicTensor a, double s) { return a *= s; }
  friend BasicTensor operator*(double s, BasicTensor a) { return a *= s; }

  static std::size_t flat_size(int dim, int rank) {
    std::size_t n = 1;
    for (int i = 0; i < rank; ++i) n *= static_cast<std::size_t>(dim);
    return n;
  }

 private:
  template <class Range>
  std::size_t flat_index(const Range& idx) const {
    std::size_t flat = 0;
    for (int i : idx) flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    return flat;
  }

  int dim_ = 0;
  Valence valence_{};
  std::vector<T> comp_;
};

using Tensor = BasicTensor<double>;
using JetTensor = BasicTensor<Jet>;

/// Pointwise values (constant Taylor coefficients).
inline Tensor values(const JetTensor& t) {
  Tensor out(t.dim(), t.valence());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i].value();
  return out;
}

inline JetTensor truncated(const JetTensor& t, int order) {
  JetTensor out(t.dim(), t.valence());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i].truncated(order);
  return out;
}

/// Smallest order among the components (exact constants count as max order).
inline int min_order(const JetTensor& t) {
  int order = kMaxJetOrder;
  for (const auto& c : t.components()) order = std::min(order, c.order());
  return order;
}

inline double max_abs(const Tensor& t) {
  double m = 0.0;
  for (double v : t.components()) m = std::max(m, std::abs(v));
  return m;
}

/// Inverse of a square (0,2) or (2,0) jet matrix by Gauss-Jordan elimination on
/// jets. Pivots are chosen on constant parts; the result has the raised/lowered
/// valence of the input.
inline JetTensor inverse(const JetTensor& m) {
  const int n = m.dim();
  std::vector<Jet> a(m.components().begin(), m.components().end());
  std::vector<Jet> inv(static_cast<std::size_t>(n) * n, Jet(0.0));
  for (int i = 0; i < n; ++i) inv[i * n + i] = Jet(1.0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col].value()) > std::abs(a[pivot * n + col].value())) pivot = r;
    }
    if (std::abs(a[pivot * n + col].value()) < 1e-300) {
      throw DegenerateMetricError("singular matrix in jet inverse");
    }
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a[col * n + c], a[pivot * n + c]);
        std::swap(inv[col * n + c], inv[pivot * n + c]);
      }
    }
    const Jet rp = reciprocal(a[col * n + col]);
    for (int c = 0; c < n; ++c) {
      a[col * n + c] = a[col * n + c] * rp;
      inv[col * n + c] = inv[col * n + c] * rp;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = a[r * n + col];
      if (f.is_constant() && f.value() == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a[r * n + c].add_product(f, a[col * n + c], -1.0);
        inv[r * n + c].add_product(f, inv[col * n + c], -1.0);
      }
    }
  }
  JetTensor out(n, Valence{m.valence().lower, m.valence().upper});
  for (std::size_t i = 0; i < inv.size(); ++i) out[i] = std::move(inv[i]);
  return out;
}

}  // namespace conegeo
