#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "conegeo/jet.hpp"
#include "conegeo/sampling.hpp"

namespace conegeo {
namespace {

Jet random_jet(int dim, int order, SplitMix64& rng) {
  Jet j = Jet::zero(dim, order);
  const auto& sp = JetSpace::get(dim);
  std::vector<int> alpha(dim);
  Jet out = j;
  for (std::size_t idx = 0; idx < sp.size(order); ++idx) {
    Jet mono = Jet::constant(dim, order, rng.uniform(-1.0, 1.0));
    const auto e = sp.exponent(idx);
    for (int v = 0; v < dim; ++v)
      for (int p = 0; p < e[v]; ++p) mono = mono * Jet::variable(dim, order, v, 0.0);
    out += mono;
  }
  return out;
}

double max_coeff_diff(const Jet& a, const Jet& b) {
  double m = 0.0;
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
  return m;
}

TEST(JetSpace, GradedPrefixLayout) {
  const auto& sp = JetSpace::get(3);
  EXPECT_EQ(sp.size(0), 1u);
  EXPECT_EQ(sp.size(1), 4u);
  EXPECT_EQ(sp.size(2), 10u);
  EXPECT_EQ(sp.size(6), 84u);  // C(9,3)
  for (std::size_t i = 1; i < sp.size(kMaxJetOrder); ++i) EXPECT_LE(sp.degree(i - 1), sp.degree(i));
  const std::vector<int> alpha{1, 0, 2};
  const auto idx = sp.index_of(alpha);
  EXPECT_EQ(sp.degree(idx), 3);
}

TEST(Jet, ProductIsTruncatedConvolution) {
  SplitMix64 rng(7);
  const int dim = 3, order = 4;
  const Jet a = random_jet(dim, order, rng);
  const Jet b = random_jet(dim, order, rng);
  const Jet c = a * b;
  const auto& sp = JetSpace::get(dim);
  // Brute-force convolution over all multi-index pairs.
  for (std::size_t k = 0; k < sp.size(order); ++k) {
    double expect = 0.0;
    for (std::size_t i = 0; i < sp.size(order); ++i)
      for (std::size_t j = 0; j < sp.size(order); ++j) {
        bool match = true;
        for (int v = 0; v < dim; ++v)
          match &= sp.exponent(i)[v] + sp.exponent(j)[v] == sp.exponent(k)[v];
        if (match) expect += a.coefficients()[i] * b.coefficients()[j];
      }
    EXPECT_NEAR(c.coefficients()[k], expect, 1e-14);
  }
}

TEST(Jet, RingAxiomsOnRandomJets) {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + trial % 4;
    const int order = 2 + trial % 5;
    const Jet a = random_jet(dim, order, rng);
    const Jet b = random_jet(dim, order, rng);
    const Jet c = random_jet(dim, order, rng);
    EXPECT_LT(max_coeff_diff((a * b) * c, a * (b * c)), 1e-13);
    EXPECT_LT(max_coeff_diff(a * (b + c), a * b + a * c), 1e-13);
    EXPECT_LT(max_coeff_diff(a * b, b * a), 1e-14);
  }
}

TEST(Jet, AnalyticIdentities) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + trial % 3;
    Jet a = random_jet(dim, 6, rng);
    const Jet one = sin(a) * sin(a) + cos(a) * cos(a);
    EXPECT_NEAR(one.value(), 1.0, 1e-14);
    for (std::size_t i = 1; i < one.coefficients().size(); ++i) EXPECT_NEAR(one.coefficients()[i], 0.0, 1e-12);
    Jet pos = a * a + 1.5;
    EXPECT_LT(max_coeff_diff(exp(log(pos)), pos), 1e-12);
    EXPECT_LT(max_coeff_diff(sqrt(pos) * sqrt(pos), pos), 1e-12);
    EXPECT_LT(max_coeff_diff(pos * reciprocal(pos), Jet::constant(dim, 6, 1.0)), 1e-12);
    EXPECT_LT(max_coeff_diff(pow(pos, 3.0), pos * pos * pos), 1e-12);
  }
}

// f(x, y) = sin(x y) exp(y): closed-form derivatives as oracle.
TEST(Jet, PartialsMatchClosedForm) {
  const double x0 = 0.7, y0 = -0.4;
  const Jet x = Jet::variable(2, 4, 0, x0);
  const Jet y = Jet::variable(2, 4, 1, y0);
  const Jet f = sin(x * y) * exp(y);
  const double s = std::sin(x0 * y0), c = std::cos(x0 * y0), e = std::exp(y0);
  EXPECT_NEAR(f.value(), s * e, 1e-15);
  EXPECT_NEAR(f.partial(std::vector<int>{1, 0}), y0 * c * e, 1e-14);
  EXPECT_NEAR(f.partial(std::vector<int>{0, 1}), (x0 * c + s) * e, 1e-14);
  EXPECT_NEAR(f.partial(std::vector<int>{2, 0}), -y0 * y0 * s * e, 1e-14);
  // d^2/dx dy [sin(xy) e^y] = (c - xy s + y c) e^y
  EXPECT_NEAR(f.partial(std::vector<int>{1, 1}), (c - x0 * y0 * s + y0 * c) * e, 1e-14);
}

TEST(Jet, DerivativeLowersOrderAndRejectsOverreach) {
  const Jet x = Jet::variable(2, 2, 0, 1.0);
  const Jet f = x * x * x;
  const Jet df = f.derivative(0);
  EXPECT_EQ(df.order(), 1);
  EXPECT_NEAR(df.value(), 3.0, 1e-15);
  EXPECT_NEAR(df.derivative(0).value(), 6.0, 1e-15);
  EXPECT_THROW(df.derivative(0).derivative(0), OrderError);
  EXPECT_THROW(f.partial(std::vector<int>{3, 0}), OrderError);
}

TEST(Jet, MixedOrderArithmeticTruncates) {
  const Jet x4 = Jet::variable(1, 4, 0, 0.5);
  const Jet x2 = Jet::variable(1, 2, 0, 0.5);
  const Jet s = x4 * x4 + x2;
  EXPECT_EQ(s.order(), 2);
  EXPECT_NEAR(s.value(), 0.75, 1e-15);
  // Exact constants never lower the order.
  const Jet t = x4 * Jet(3.0) + 1.0;
  EXPECT_EQ(t.order(), 4);
}

TEST(Jet, DomainErrors) {
  const Jet x = Jet::variable(1, 3, 0, -1.0);
  EXPECT_THROW(log(x), DomainError);
  EXPECT_THROW(sqrt(x), DomainError);
  EXPECT_NO_THROW(pow(x, 2.0));
  EXPECT_THROW(reciprocal(Jet::variable(1, 3, 0, 0.0)), DomainError);
}

}  // namespace
}  // namespace conegeo
