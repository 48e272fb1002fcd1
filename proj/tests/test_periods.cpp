#include <gtest/gtest.h>

#include <cmath>

#include "hyperpf/periods/cauchy.hpp"
#include "hyperpf/petrov.hpp"
#include "hyperpf/picardfuchs.hpp"
#include "hyperpf/random.hpp"

using namespace hyperpf;
using namespace hyperpf::periods;
using cd = std::complex<double>;

namespace {
const HyperellipticHamiltonian& elliptic() {
  static const HyperellipticHamiltonian H(2, ExactPoly(std::vector<Exact>{0, 1}, 'x'));
  return H;
}

// Independent route for 2 * int_0^1 sqrt(x - x^3) dx: composite Simpson after
// x = sin^2(phi), which removes both endpoint roots.
double oracle_cycle_integral() {
  // x = sin^2(phi): sqrt(x - x^3) dx = sin(phi) sqrt(1 - sin^4 phi) * 2 sin(phi) cos(phi) dphi
  const int N = 20000;
  const double a = 0, b = std::acos(-1.0) / 2, h = (b - a) / N;
  double s = 0;
  for (int k = 0; k <= N; ++k) {
    const double p = a + k * h;
    const double sp = std::sin(p), cp = std::cos(p);
    const double f = sp * std::sqrt(1 - sp * sp * sp * sp) * 2 * sp * cp;
    s += f * ((k == 0 || k == N) ? 1 : (k % 2 ? 4 : 2));
  }
  return 2 * s * h / 3;
}

std::vector<cd> to_cd(const std::vector<Exact>& v) {
  std::vector<cd> out;
  for (const auto& e : v) out.push_back(e.to_complex<double>());
  return out;
}
}  // namespace

TEST(BranchPoints, EllipticAtZero) {
  const Curve<double> curve(elliptic());
  const auto bs = branch_points(curve, cd(0));
  ASSERT_EQ(bs.roots.size(), 3u);
  EXPECT_NEAR(bs.roots[0].real(), -1, 1e-14);
  EXPECT_NEAR(std::abs(bs.roots[1]), 0, 1e-14);
  EXPECT_NEAR(bs.roots[2].real(), 1, 1e-14);
  EXPECT_FALSE(bs.near_critical);
  EXPECT_LE(bs.max_residual, 1e-12);
}

TEST(BranchPoints, NearCriticalFlag) {
  const Curve<double> curve(elliptic());
  const double tc = 2 / (3 * std::sqrt(3.0));
  const auto bs = branch_points(curve, cd(tc - 1e-10));
  EXPECT_TRUE(bs.near_critical);
  EXPECT_THROW(cycle_basis(curve, cd(tc - 1e-10)), NearCriticalError);
}

TEST(BranchPoints, ResidualContract) {
  Rng rng(31);
  for (int n = 2; n <= 6; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    const Curve<double> curve(H);
    const auto bs = branch_points(curve, random_regular_t(rng, curve.critical_values));
    EXPECT_LE(bs.max_residual, 1e-12);
    EXPECT_EQ(bs.roots.size(), static_cast<std::size_t>(n + 1));
  }
}

TEST(CycleBasis, ConsecutivePairs) {
  const Curve<double> curve(elliptic());
  const auto b = cycle_basis(curve, cd(0));
  ASSERT_EQ(b.cycles.size(), 2u);
  EXPECT_EQ(b.cycles[0].a, 0u);
  EXPECT_EQ(b.cycles[0].b, 1u);
  EXPECT_EQ(b.cycles[1].a, 1u);
  EXPECT_EQ(b.cycles[1].b, 2u);
  const HyperellipticHamiltonian H3(3, ExactPoly(std::vector<Exact>{1, 0, 1}, 'x'));
  EXPECT_EQ(cycle_basis(Curve<double>(H3), cd(0.3, 0.2)).cycles.size(), 3u);
}

TEST(Integrate, EllipticHalfPeriodAgainstIndependentRoute) {
  const Curve<double> curve(elliptic());
  const auto b = cycle_basis(curve, cd(0));
  const auto forms = CompiledForms<double>::basis(2);
  const auto col = integrate_cycle(curve, b, b.cycles[1], forms);
  // y is imaginary on (0,1): |period| = 2 * int sqrt(x - x^3).
  EXPECT_NEAR(std::abs(col[0]), oracle_cycle_integral(), 1e-9);
  EXPECT_NEAR(col[0].real(), 0, 1e-12);
}

TEST(Integrate, SegmentAndEllipseAgree) {
  Rng rng(32);
  for (int n = 2; n <= 5; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    const Curve<double> curve(H);
    const auto b = cycle_basis(curve, random_regular_t(rng, curve.critical_values));
    std::vector<OneForm> ws;
    for (int i = 1; i <= n; ++i) ws.push_back(petrov_basis_form(i));
    ws.push_back(random_form(rng, n, 3 * (n + 1)));
    const auto forms = CompiledForms<double>::compile(ws);
    for (const auto& cyc : b.cycles) {
      const auto s = integrate_cycle(curve, b, cyc, forms);
      const auto e = integrate_cycle(curve, b, cyc, forms, {}, nullptr, true);
      double scale = 0;
      for (auto v : s) scale = std::max(scale, std::abs(v));
      for (std::size_t k = 0; k < s.size(); ++k) EXPECT_LT(std::abs(s[k] - e[k]), 1e-8 * scale) << "n=" << n;
    }
  }
}

TEST(Integrate, ExactFormsVanish) {
  Rng rng(33);
  for (int n = 2; n <= 5; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    const Curve<double> curve(H);
    const auto b = cycle_basis(curve, random_regular_t(rng, curve.critical_values));
    const OneForm dF = exact_differential(random_bipoly(rng, n, 3 * (n + 1)));
    const OneForm dHm = random_bipoly(rng, n, n + 1) * exact_differential(H.as_bipoly());
    const auto forms = CompiledForms<double>::compile({dF, dHm});
    const auto ref = CompiledForms<double>::basis(n);
    for (const auto& cyc : b.cycles) {
      const auto v = integrate_cycle(curve, b, cyc, forms);
      const auto s = integrate_cycle(curve, b, cyc, ref);
      double scale = 1;
      for (auto x : s) scale = std::max(scale, std::abs(x));
      EXPECT_LT(std::abs(v[0]), 1e-9 * scale);
      // dH multiples vanish on level curves as well.
      EXPECT_LT(std::abs(v[1]), 1e-9 * scale);
    }
  }
}

TEST(Integrate, OrientationReversalNegates) {
  const Curve<double> curve(elliptic());
  auto b = cycle_basis(curve, cd(0.1, 0.05));
  const auto forms = CompiledForms<double>::basis(2);
  const auto v = integrate_cycle(curve, b, b.cycles[0], forms);
  auto rev = b.cycles[0];
  std::swap(rev.chain[0].u, rev.chain[0].v);
  // Same sheet at the (unchanged) midpoint, opposite direction.
  const auto w = integrate_cycle(curve, b, rev, forms);
  for (int k = 0; k < 2; ++k) EXPECT_LT(std::abs(v[k] + w[k]), 1e-12 * std::abs(v[k]));
}

TEST(Petrov, NumericOracle) {
  const Curve<double> curve(elliptic());
  const std::vector<OneForm> ws{OneForm::dx_part(BiPoly::monomial(1, 2, 1)), OneForm::dx_part(BiPoly::monomial(1, 0, 3))};
  const auto forms = CompiledForms<double>::compile(ws);
  const auto basis_forms = CompiledForms<double>::basis(2);
  for (cd t : {cd(1.0), cd(-0.7, 0.4), cd(0.2, -1.1)}) {
    const auto b = cycle_basis(curve, t);
    for (const auto& cyc : b.cycles) {
      const auto v = integrate_cycle(curve, b, cyc, forms);
      const auto w = integrate_cycle(curve, b, cyc, basis_forms);
      EXPECT_LT(std::abs(v[0] - w[0] / 3.0), 1e-10 * std::abs(v[0]));
      EXPECT_LT(std::abs(v[1] - (9.0 * t / 11.0 * w[0] - 6.0 / 11.0 * w[1])), 1e-10 * std::abs(v[1]));
    }
  }
}

TEST(Transport, RoundTripAroundCircleIsTrivial) {
  Rng rng(34);
  for (int n = 2; n <= 5; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    const Curve<double> curve(H);
    const cd t0 = random_regular_t(rng, curve.critical_values);
    const auto b = cycle_basis(curve, t0);
    const auto cs = sample_circle(curve, b, CompiledForms<double>::basis(n), 1);
    EXPECT_LT(cs.closure_error, 1e-6) << "n=" << n;
  }
}

TEST(PeriodMatrix, DeterminantOverProductIsConstant) {
  Rng rng(35);
  for (int n = 2; n <= 4; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    const Curve<double> curve(H);
    const auto forms = CompiledForms<double>::basis(n);
    const cd tref = random_regular_t(rng, curve.critical_values);
    const auto bref = cycle_basis(curve, tref);
    std::vector<cd> ratios;
    for (int k = 0; k < 5; ++k) {
      const cd t = random_regular_t(rng, curve.critical_values);
      const auto bt = transport(curve, bref, t);
      const auto pm = period_matrix(curve, bt, forms);
      cd prod = 1;
      for (auto v : curve.critical_values) prod *= t - v;
      ratios.push_back(pm.det / prod);
    }
    EXPECT_GT(std::abs(ratios[0]), 1e-12);
    for (auto r : ratios) EXPECT_LT(std::abs(r - ratios[0]), 1e-6 * std::abs(ratios[0])) << "n=" << n;
  }
}

TEST(PeriodMatrix, SatisfiesPicardFuchsSystem) {
  Rng rng(36);
  for (int n = 2; n <= 4; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    const auto sys = build_system(H);
    const Curve<double> curve(H);
    const cd t0 = random_regular_t(rng, curve.critical_values);
    const auto b = cycle_basis(curve, t0);
    const auto forms = CompiledForms<double>::basis(n);
    const auto der = cauchy_derivatives(curve, b, forms, 1);
    for (std::size_t c = 0; c < b.cycles.size(); ++c) {
      double scale = 0, worst = 0;
      for (int i = 0; i < n; ++i) {
        cd lhs = t0 * der.d[1][i][c], rhs = 0;
        for (int j = 0; j < n; ++j) {
          lhs -= sys.A(i, j).to_complex<double>() * der.d[1][j][c];
          rhs += sys.B(i, j).to_complex<double>() * der.d[0][j][c];
        }
        worst = std::max(worst, std::abs(lhs - rhs));
        scale = std::max(scale, std::abs(rhs));
      }
      EXPECT_LT(worst, 1e-6 * scale) << "n=" << n;
    }
  }
}

TEST(Cauchy, FirstDerivativeMatchesFiniteDifference) {
  const Curve<double> curve(elliptic());
  const cd t0(1.0, 0.0);
  const auto b = cycle_basis(curve, t0);
  const auto forms = CompiledForms<double>::basis(2);
  const auto der = cauchy_derivatives(curve, b, forms, 2);
  const double h = 1e-5;
  const auto bp = transport(curve, b, t0 + h), bm = transport(curve, b, t0 - h);
  const auto pp = period_matrix(curve, bp, forms), pmm = period_matrix(curve, bm, forms);
  for (int i = 0; i < 2; ++i)
    for (int c = 0; c < 2; ++c) {
      const cd fd = (pp.entries[i][c] - pmm.entries[i][c]) / (2 * h);
      EXPECT_LT(std::abs(fd - der.d[1][i][c]), 1e-6 * std::abs(der.d[1][i][c]));
    }
}

TEST(Cauchy, NodeDoublingConverges) {
  const Curve<double> curve(elliptic());
  const auto b = cycle_basis(curve, cd(1.0, 0.5));
  const auto forms = CompiledForms<double>::basis(2);
  CauchyParams p64, p128;
  p64.min_nodes = 64;
  p128.min_nodes = 128;
  const auto d1 = cauchy_derivatives(curve, b, forms, 3, p64);
  const auto d2 = cauchy_derivatives(curve, b, forms, 3, p128);
  for (int k = 0; k <= 3; ++k)
    for (int i = 0; i < 2; ++i)
      for (int c = 0; c < 2; ++c)
        EXPECT_LT(std::abs(d1.d[k][i][c] - d2.d[k][i][c]), 1e-10 * std::abs(d2.d[k][i][c]) + 1e-12);
}

TEST(Cauchy, ExactFormHasZeroDerivatives) {
  const Curve<double> curve(elliptic());
  const auto b = cycle_basis(curve, cd(0.8, 0.3));
  const auto forms = CompiledForms<double>::compile({exact_differential(BiPoly::monomial(1, 3, 2))});
  const auto der = cauchy_derivatives(curve, b, forms, 3);
  for (int k = 0; k <= 3; ++k)
    for (int c = 0; c < 2; ++c) EXPECT_LT(std::abs(der.d[k][0][c]), 1e-9);
}

TEST(Multiplicity, GenericAndConstructedOrders) {
  Rng rng(37);
  int hits = 0, trials = 0;
  for (int n = 2; n <= 4; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    const Curve<double> curve(H);
    const cd t0 = random_regular_t(rng, curve.critical_values);
    const auto b = cycle_basis(curve, t0);
    const auto generic = multiplicity_estimate(curve, b, to_cd(random_constant_row(rng, n)), 0, 1e-6);
    EXPECT_EQ(generic.order, 0);
    for (int m = 1; m <= n - 1; ++m) {
      const auto c = vanishing_combination(curve, b, 0, m);
      CauchyParams cp;
      cp.radius_factor = 0.4;
      const auto r = multiplicity_estimate(curve, b, c, 0, 1e-6, cp);
      ++trials;
      if (r.order == m) ++hits;
      EXPECT_LE(r.order, r.bound);
    }
  }
  EXPECT_EQ(hits, trials);
}

TEST(Scaling, QuasiHomogeneousGrowth) {
  for (int n = 2; n <= 3; ++n) {
    const HyperellipticHamiltonian H(n, ExactPoly(std::vector<Exact>{Exact::fraction(1, 10), Exact::fraction(1, 5)}, 'x'));
    const Curve<double> curve(H);
    const auto forms = CompiledForms<double>::basis(n);
    std::vector<double> lt, ln0;
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
    for (double a : {1e3, 1e4, 1e5}) {
      const cd t = std::polar(a, 0.3);
      const auto pm = period_matrix(curve, cycle_basis(curve, t), forms);
      lt.push_back(std::log(a));
      for (int i = 0; i < n; ++i) {
        double s = 0;
        for (auto v : pm.entries[i]) s += std::norm(v);
        rows[i].push_back(0.5 * std::log(s));
      }
    }
    for (int i = 0; i < n; ++i) {
      const double slope = (rows[i][2] - rows[i][0]) / (lt[2] - lt[0]);
      const double expect = double(2 * i + n + 3) / double(2 * (n + 1));
      EXPECT_NEAR(slope, expect, 1e-2) << "n=" << n << " i=" << i + 1;
    }
  }
}
