#include <gtest/gtest.h>

#include <cmath>

#include "hyperpf/hamiltonian.hpp"
#include "hyperpf/random.hpp"

using namespace hyperpf;

namespace {
ExactPoly x_poly(std::initializer_list<int> c) {
  std::vector<Exact> v;
  for (int x : c) v.emplace_back(x);
  return ExactPoly(v, 'x');
}
}  // namespace

TEST(CriticalData, EllipticExample) {
  const HyperellipticHamiltonian H(2, x_poly({0, 1}));  // y^2 - x^3 + x
  const auto crit = critical_data<double>(H);
  ASSERT_EQ(crit.points.size(), 2u);
  const double xs = 1 / std::sqrt(3.0);
  const double ts = 2 / (3 * std::sqrt(3.0));
  EXPECT_NEAR(crit.points[0].real(), -xs, 1e-14);
  EXPECT_NEAR(crit.points[1].real(), xs, 1e-14);
  // -V(-1/sqrt3) = -(-1/(3 sqrt3) + 1/sqrt3) = -2/(3 sqrt3)
  EXPECT_NEAR(crit.values[0].real(), -ts, 1e-14);
  EXPECT_NEAR(crit.values[1].real(), ts, 1e-14);
  EXPECT_NEAR(std::abs(crit.values[0]), 0.3849002, 1e-7);
  EXPECT_TRUE(crit.morse);
}

TEST(CriticalData, DegenerateCases) {
  const HyperellipticHamiltonian cusp(2, ExactPoly(std::vector<Exact>{}, 'x'));
  const auto c1 = critical_data<double>(cusp);
  EXPECT_FALSE(c1.squarefree);
  EXPECT_FALSE(c1.morse);

  const HyperellipticHamiltonian sym(3, x_poly({0, 0, 1}));  // y^2 - x^4 + x^2
  const auto c2 = critical_data<double>(sym);
  EXPECT_TRUE(c2.squarefree);
  EXPECT_FALSE(c2.distinct_values);
  EXPECT_FALSE(c2.morse);
  std::vector<double> vals;
  for (auto v : c2.values) vals.push_back(v.real());
  std::sort(vals.begin(), vals.end());
  EXPECT_NEAR(vals[0], 0, 1e-14);
  EXPECT_NEAR(vals[1], 0.25, 1e-14);
  EXPECT_NEAR(vals[2], 0.25, 1e-14);
}

TEST(CriticalData, RejectsHighDegreeHbar) {
  EXPECT_THROW(HyperellipticHamiltonian(2, x_poly({0, 0, 1})), std::invalid_argument);
  EXPECT_THROW(HyperellipticHamiltonian(1, x_poly({1})), std::invalid_argument);
  EXPECT_NO_THROW(HyperellipticHamiltonian(4, x_poly({1, 2})));  // deg hbar < n-1 allowed
}

TEST(CriticalData, SumOfValuesMatchesNewtonIdentity) {
  // With V' = (n+1) prod (x - x_k), the power sums of the critical points come
  // from Newton's identities; sum_k V(x_k) is then a fixed linear combination.
  Rng rng(77);
  for (int n = 2; n <= 6; ++n)
    for (int trial = 0; trial < 5; ++trial) {
      const auto H = random_morse_hamiltonian(rng, n);
      const auto crit = critical_data<double>(H);
      // Power sums of roots of the monic dV/(n+1) by Newton's identities.
      std::vector<std::complex<double>> e;  // monic coefficients, ascending
      const Exact lead = H.dV().leading();
      for (int k = 0; k <= n; ++k) e.push_back((H.dV().coeff(k) / lead).to_complex<double>());
      std::vector<std::complex<double>> s(static_cast<std::size_t>(n) + 2, 0.0);
      s[0] = double(n);
      for (int k = 1; k <= n + 1; ++k) {
        std::complex<double> acc = 0;
        for (int j = 1; j < k && j <= n; ++j) acc += e[static_cast<std::size_t>(n - j)] * s[static_cast<std::size_t>(k - j)];
        if (k <= n) acc += double(k) * e[static_cast<std::size_t>(n - k)];
        s[static_cast<std::size_t>(k)] = -acc;
      }
      std::complex<double> predicted = 0;
      for (int k = 0; k <= n + 1; ++k) predicted -= H.V().coeff(k).to_complex<double>() * s[static_cast<std::size_t>(k)];
      std::complex<double> direct = 0;
      for (auto v : crit.values) direct += v;
      EXPECT_LT(std::abs(predicted - direct), 1e-9 * std::max(1.0, std::abs(direct))) << "n=" << n;
    }
}

TEST(Genus, Formula) {
  EXPECT_EQ(genus_formula(2), 1);
  EXPECT_EQ(genus_formula(3), 1);
  EXPECT_EQ(genus_formula(6), 3);
}

TEST(WedgeDH, Examples) {
  const HyperellipticHamiltonian H(2, x_poly({0, 1}));
  EXPECT_TRUE(wedge_dH(H, OneForm{}).is_zero());
  EXPECT_EQ(wedge_dH(H, OneForm::dx_part(BiPoly::monomial(1, 0, 1))).F, BiPoly::monomial(-2, 0, 2));
  BiPoly expect = BiPoly::monomial(-3, 2, 0) + BiPoly::constant(1);
  EXPECT_EQ(wedge_dH(H, OneForm::dy_part(BiPoly::constant(1))).F, expect);
}

TEST(WedgeDH, Linear) {
  Rng rng(9);
  const auto H = random_morse_hamiltonian(rng, 3);
  for (int k = 0; k < 20; ++k) {
    const OneForm a = random_form(rng, 3, 16), b = random_form(rng, 3, 16);
    const Exact al = random_rational(rng), be = random_rational(rng);
    EXPECT_EQ(wedge_dH(H, al * a + be * b), al * wedge_dH(H, a) + be * wedge_dH(H, b));
  }
}
