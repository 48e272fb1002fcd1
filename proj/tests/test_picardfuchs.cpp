#include <gtest/gtest.h>

#include <cmath>

#include "hyperpf/picardfuchs.hpp"
#include "hyperpf/random.hpp"

using namespace hyperpf;

namespace {
const HyperellipticHamiltonian& elliptic() {
  static const HyperellipticHamiltonian H(2, ExactPoly(std::vector<Exact>{0, 1}, 'x'));
  return H;
}
Exact fr(long p, long q) { return Exact::fraction(p, q); }
}  // namespace

TEST(GelfandLeray, EllipticRows) {
  const auto r1 = gelfand_leray(elliptic(), 1);
  EXPECT_EQ(r1.quotient, ExactPoly(std::vector<Exact>{0, fr(1, 3)}, 'x'));
  EXPECT_EQ(r1.remainder, ExactPoly(std::vector<Exact>{0, fr(-2, 3)}, 'x'));
  EXPECT_EQ(r1.a_row, (std::vector<Exact>{0, fr(2, 3)}));
  EXPECT_EQ(r1.b_row, (std::vector<Exact>{fr(5, 6), 0}));

  const auto r2 = gelfand_leray(elliptic(), 2);
  EXPECT_EQ(r2.quotient, ExactPoly(std::vector<Exact>{fr(-2, 9), 0, fr(1, 3)}, 'x'));
  EXPECT_EQ(r2.remainder, ExactPoly(std::vector<Exact>{fr(-2, 9)}, 'x'));
  EXPECT_EQ(r2.a_row, (std::vector<Exact>{fr(2, 9), 0}));
  EXPECT_EQ(r2.b_row, (std::vector<Exact>{0, fr(7, 6)}));
}

TEST(GelfandLeray, IdentityExactForRandomH) {
  Rng rng(10);
  for (int n = 2; n <= 6; ++n)
    for (int k = 0; k < 3; ++k) {
      const auto H = random_morse_hamiltonian(rng, n);
      for (int i = 1; i <= n; ++i) EXPECT_TRUE(gelfand_leray_defect(H, i, gelfand_leray(H, i)).is_zero());
    }
}

TEST(GelfandLeray, EigenvectorAtCriticalPoints) {
  Rng rng(11);
  for (int n = 2; n <= 6; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    const auto crit = critical_data<double>(H);
    for (int i = 1; i <= n; ++i) {
      const auto row = gelfand_leray(H, i);
      for (std::size_t k = 0; k < crit.points.size(); ++k) {
        std::complex<double> lhs = 0, p = 1;
        for (int j = 0; j < n; ++j, p *= crit.points[k]) lhs += row.a_row[j].to_complex<double>() * p;
        const auto rhs = crit.values[k] * std::pow(crit.points[k], i - 1);
        EXPECT_LT(std::abs(lhs - rhs), 1e-9 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST(BuildSystem, EllipticGolden) {
  const auto sys = build_system(elliptic());
  EXPECT_EQ(sys.A, (ExactMatrix{{0, fr(2, 3)}, {fr(2, 9), 0}}));
  EXPECT_EQ(sys.B, (ExactMatrix{{fr(5, 6), 0}, {0, fr(7, 6)}}));
  EXPECT_EQ(sys.P, ExactPoly(std::vector<Exact>{fr(-4, 27), 0, 1}));
  EXPECT_EQ(sys.C(0, 0), ExactPoly(std::vector<Exact>{0, fr(5, 6)}));
  EXPECT_EQ(sys.C(0, 1), ExactPoly(std::vector<Exact>{fr(7, 9)}));
  EXPECT_EQ(sys.C(1, 0), ExactPoly(std::vector<Exact>{fr(5, 27)}));
  EXPECT_EQ(sys.C(1, 1), ExactPoly(std::vector<Exact>{0, fr(7, 6)}));
  EXPECT_TRUE(sys.morse);
  EXPECT_TRUE(sys.degrees_ok);
  EXPECT_TRUE(sys.charpoly_routes_agree);
  const auto rep = eigencheck(sys, critical_data<double>(elliptic()), 1e-12);
  EXPECT_LT(rep.max_mismatch, 1e-12);
  EXPECT_TRUE(rep.ok);
}

TEST(BuildSystem, NonMorseFlagged) {
  const HyperellipticHamiltonian cusp(2, ExactPoly(std::vector<Exact>{}, 'x'));
  const auto sys = build_system(cusp);
  EXPECT_FALSE(sys.morse);
  EXPECT_EQ(sys.P, ExactPoly(std::vector<Exact>{0, 0, 1}));
}

TEST(BuildSystem, DegreesAndEigenvaluesForRandomH) {
  Rng rng(12);
  for (int n = 3; n <= 6; ++n)
    for (int k = 0; k < 3; ++k) {
      const auto H = random_morse_hamiltonian(rng, n);
      const auto sys = build_system(H);
      EXPECT_TRUE(sys.degrees_ok);
      EXPECT_TRUE(sys.charpoly_routes_agree);
      const auto rep = eigencheck(sys, critical_data<double>(H), 1e-8);
      EXPECT_TRUE(rep.ok) << rep.rel_mismatch;
      EXPECT_LT(rep.max_charpoly_residual, 1e-10);
      EXPECT_LT(rep.max_eigenvector_residual, 1e-9);
    }
}
