#include <gtest/gtest.h>

#include "hyperpf/flatness/verify.hpp"
#include "hyperpf/random.hpp"

using namespace hyperpf;
using namespace hyperpf::flatness;

namespace {
const HyperellipticHamiltonian& elliptic() {
  static const HyperellipticHamiltonian H(2, ExactPoly(std::vector<Exact>{0, 1}, 'x'));
  return H;
}

ExactPoly tpoly(std::vector<Exact> c) { return ExactPoly(std::move(c), 't'); }

std::vector<Exact> combine(const std::vector<std::vector<Exact>>& basis, Rng& rng) {
  std::vector<Exact> q(basis.front().size(), Exact(0));
  for (const auto& b : basis) {
    const Exact s = random_rational(rng, 7, 3);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = q[i] + s * b[i];
  }
  return q;
}
}  // namespace

TEST(Recursion, EllipticFirstStep) {
  const auto sys = build_system(elliptic());
  const auto rows = qk_rows(sys, constant_row({1, 0}), 2);
  EXPECT_EQ(rows[1][0], tpoly({0, Exact::fraction(5, 6)}));
  EXPECT_EQ(rows[1][1], tpoly({Exact::fraction(7, 9)}));
}

TEST(Recursion, ZeroSeedStaysZero) {
  const auto sys = build_system(elliptic());
  for (const auto& r : qk_rows(sys, constant_row({0, 0}), 4))
    for (const auto& e : r) EXPECT_TRUE(e.is_zero());
  EXPECT_TRUE(sigma_delta(sys, std::vector<Exact>{0, 0}).delta_identically_zero);
}

TEST(Recursion, DegreeGrowth) {
  Rng rng(41);
  for (int n = 2; n <= 5; ++n) {
    const auto sys = build_system(random_morse_hamiltonian(rng, n));
    const auto rows = qk_rows(sys, constant_row(random_constant_row(rng, n)), n);
    for (int k = 0; k < n; ++k) EXPECT_LE(row_degree(rows[static_cast<std::size_t>(k)]), k * (n - 1)) << n << " " << k;
  }
}

TEST(Sigma, EllipticDelta) {
  const auto cert = sigma_delta(build_system(elliptic()), std::vector<Exact>{1, 0});
  EXPECT_EQ(cert.delta, tpoly({Exact::fraction(7, 9)}));
  EXPECT_EQ(cert.deg_bound, 1);
  EXPECT_TRUE(cert.recursion_verified);
  EXPECT_TRUE(cert.q_degrees_ok);
}

TEST(Sigma, DegreeBoundAndHomogeneity) {
  Rng rng(42);
  for (int n = 2; n <= 6; ++n) {
    const auto sys = build_system(random_morse_hamiltonian(rng, n));
    const auto q0 = random_constant_row(rng, n);
    const auto cert = sigma_delta(sys, q0);
    EXPECT_LE(cert.delta.degree(), delta_degree_bound(n));
    const Exact lam = Exact::fraction(-3, 2);
    std::vector<Exact> q1;
    for (const auto& e : q0) q1.push_back(lam * e);
    Exact lamn(1);
    for (int k = 0; k < n; ++k) lamn = lamn * lam;
    EXPECT_EQ(sigma_delta(sys, q1).delta, cert.delta * lamn);
  }
}

TEST(ScalarOde, EllipticCramer) {
  const auto sys = build_system(elliptic());
  const auto ode = scalar_ode_coefficients(sys, constant_row({1, 0}));
  EXPECT_EQ(ode.order, 2);
  EXPECT_TRUE(ode.verified);
  EXPECT_EQ(ode.leading, tpoly({Exact::fraction(7, 9)}));
}

TEST(ScalarOde, RankOneRelation) {
  // A hand-made system whose recursion keeps q proportional to q0.
  PicardFuchsSystem sys;
  sys.n = 2;
  sys.P = tpoly({-1, 0, 1});
  sys.C = PolyMatrix(2, 2);
  sys.C(0, 0) = tpoly({0, 1});
  sys.C(1, 1) = tpoly({0, 2});
  const auto ode = scalar_ode_coefficients(sys, constant_row({1, 0}));
  EXPECT_EQ(ode.order, 1);
  EXPECT_TRUE(ode.verified);
  ASSERT_EQ(ode.coeffs.size(), 1u);
  EXPECT_EQ(ode.coeffs[0], tpoly({0, 1}));
}

TEST(ScalarOde, RandomSystemsVerify) {
  Rng rng(43);
  for (int n = 2; n <= 5; ++n) {
    const auto sys = build_system(random_morse_hamiltonian(rng, n));
    const auto ode = scalar_ode_coefficients(sys, constant_row(random_constant_row(rng, n)));
    EXPECT_TRUE(ode.verified);
    EXPECT_LE(ode.order, n);
  }
}

TEST(Residues, DegenerateCubicExample) {
  const HyperellipticHamiltonian H(3, ExactPoly::zero('x'));
  const auto prof = residues_at_infinity(H);
  ASSERT_TRUE(prof.applicable);
  EXPECT_TRUE(prof.rho[0].is_zero());
  EXPECT_EQ(prof.rho[1], tpoly({0, Exact::fraction(-1, 2)}));
  EXPECT_TRUE(prof.rho[2].is_zero());
  EXPECT_EQ(prof.span_dim, 1);
}

TEST(Residues, EvenDegreeIsTrivial) {
  const auto prof = residues_at_infinity(elliptic());
  EXPECT_FALSE(prof.applicable);
  EXPECT_EQ(prof.span_dim, 0);
  EXPECT_TRUE(prof.S_basis.empty());
}

TEST(Residues, GenericOddProfiles) {
  Rng rng(44);
  for (int n : {3, 5, 7}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto H = random_morse_hamiltonian(rng, n);
      const auto prof = residues_at_infinity(H);
      for (int i = 1; i <= n; ++i) {
        if (i < (n + 1) / 2)
          EXPECT_LE(prof.rho[static_cast<std::size_t>(i - 1)].degree(), 0);
        else
          EXPECT_LE(prof.rho[static_cast<std::size_t>(i - 1)].degree(), 1);
      }
      EXPECT_EQ(prof.span_dim, 2);
      EXPECT_EQ(static_cast<int>(prof.S_basis.size()), n - 2);
    }
  }
}

// The residue vector is a solution of the system, like any period vector.
TEST(Residues, SatisfyPicardFuchsExactly) {
  Rng rng(45);
  for (int n : {3, 5, 7}) {
    const auto H = random_morse_hamiltonian(rng, n);
    const auto sys = build_system(H);
    const auto prof = residues_at_infinity(H);
    for (int i = 0; i < n; ++i) {
      ExactPoly lhs = prof.rho[static_cast<std::size_t>(i)].derivative() * tpoly({0, 1});
      for (int j = 0; j < n; ++j) {
        const auto& r = prof.rho[static_cast<std::size_t>(j)];
        lhs = lhs - r.derivative() * sys.A(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) -
              r * sys.B(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
      EXPECT_TRUE(lhs.is_zero()) << "n=" << n << " row " << i;
    }
  }
}

TEST(Residues, KernelFormsGiveVanishingDelta) {
  Rng rng(46);
  for (int n : {3, 5}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto H = random_morse_hamiltonian(rng, n);
      const auto sys = build_system(H);
      const auto prof = residues_at_infinity(H);
      for (const auto& s : prof.S_basis) EXPECT_TRUE(sigma_delta(sys, s).delta_identically_zero);
      EXPECT_TRUE(sigma_delta(sys, combine(prof.S_basis, rng)).delta_identically_zero);
      EXPECT_FALSE(sigma_delta(sys, random_constant_row(rng, n)).delta_identically_zero);
    }
  }
}

TEST(Bounds, ConstantCoefficientValues) {
  EXPECT_EQ(multiplicity_bound(2), 2);
  EXPECT_EQ(multiplicity_bound(3), 5);
  EXPECT_EQ(multiplicity_bound(5), 14);
}

TEST(Bounds, GeneralBoundIsAffineInDegree) {
  std::vector<int> b;
  for (int d : {4, 8, 12, 16}) b.push_back(general_bound_report(3, d).bound);
  for (std::size_t k = 2; k < b.size(); ++k) EXPECT_EQ(b[k] - b[k - 1], b[1] - b[0]);
  const auto r = general_bound_report(3, 8);
  EXPECT_EQ(r.e, 2);
  EXPECT_EQ(r.A, Rational(5));
  EXPECT_EQ(r.B, Rational(3, 4));
  EXPECT_EQ(general_bound_report(3, 0).bound, multiplicity_bound(3));
}

TEST(Identity6, EllipticAtOne) {
  const auto sys = build_system(elliptic());
  const auto rep = verify_identity6<double>(elliptic(), sys, {1, 0}, {cd(1, 0)}, 1e-6);
  EXPECT_TRUE(rep.pass) << rep.max_rel_err;
  ASSERT_TRUE(rep.c_const.has_value());
  EXPECT_GT(std::abs(*rep.c_const), 1e-3);
}

TEST(Identity6, AgreesWithIdentity3) {
  Rng rng(47);
  const auto H = random_morse_hamiltonian(rng, 3);
  const auto sys = build_system(H);
  const periods::Curve<double> curve(H);
  std::vector<cd> ts{random_regular_t(rng, curve.critical_values), random_regular_t(rng, curve.critical_values)};
  const auto q0 = random_constant_row(rng, 3);
  const auto r3 = verify_identity3<double>(H, sys, q0, ts, 1e-6);
  const auto r6 = verify_identity6<double>(H, sys, q0, ts, 1e-6);
  EXPECT_TRUE(r3.pass) << r3.max_rel_err;
  EXPECT_TRUE(r6.pass) << r6.max_rel_err;
  // The two bases agree up to a unimodular change, so W agrees up to sign.
  for (std::size_t k = 0; k < ts.size(); ++k)
    EXPECT_NEAR(std::abs(r3.samples[k].rhs), std::abs(r6.samples[k].rhs), 1e-6 * std::abs(r3.samples[k].rhs));
}

TEST(Identity6, HomogeneousInSeed) {
  const auto sys = build_system(elliptic());
  const auto a = verify_identity6<double>(elliptic(), sys, {1, 2}, {cd(0.3, 0.4)}, 1e-6);
  const auto b = verify_identity6<double>(elliptic(), sys, {3, 6}, {cd(0.3, 0.4)}, 1e-6);
  EXPECT_NEAR(std::abs(b.samples[0].lhs / a.samples[0].lhs - 9.0), 0, 1e-9);
  EXPECT_NEAR(std::abs(b.samples[0].rhs / a.samples[0].rhs - 9.0), 0, 1e-6);
  EXPECT_NEAR(a.samples[0].rel_err, b.samples[0].rel_err, 1e-8);
}

TEST(Identity6, KernelSeedIsDegenerate) {
  Rng rng(48);
  const auto H = random_morse_hamiltonian(rng, 3);
  const auto sys = build_system(H);
  const auto prof = residues_at_infinity(H);
  const periods::Curve<double> curve(H);
  const auto rep = verify_identity6<double>(H, sys, prof.S_basis[0], {random_regular_t(rng, curve.critical_values)}, 1e-6);
  EXPECT_TRUE(rep.degenerate);
  EXPECT_TRUE(rep.pass) << rep.max_rel_err;
}

TEST(Identity6, RejectsNearCriticalSample) {
  const auto sys = build_system(elliptic());
  const double tc = 2 / (3 * std::sqrt(3.0));
  EXPECT_THROW(verify_identity6<double>(elliptic(), sys, {1, 0}, {cd(tc + 1e-9, 0)}, 1e-6), periods::NearCriticalError);
}

TEST(Numeric, RecursionSoundness) {
  Rng rng(49);
  for (int n = 2; n <= 4; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    const auto sys = build_system(H);
    const periods::Curve<double> curve(H);
    const auto rep = recursion_check<double>(H, sys, random_constant_row(rng, n), random_regular_t(rng, curve.critical_values), 1e-6);
    EXPECT_TRUE(rep.pass) << "n=" << n << " " << rep.max_rel_err;
  }
}

TEST(Numeric, ScalarOdeResidual) {
  Rng rng(50);
  for (int n = 2; n <= 3; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    const auto sys = build_system(H);
    const periods::Curve<double> curve(H);
    const auto q0 = random_constant_row(rng, n);
    const auto ode = scalar_ode_coefficients(sys, constant_row(q0));
    for (int k = 0; k < 3; ++k) {
      const auto rep = scalar_ode_residual<double>(H, sys, ode, q0, random_regular_t(rng, curve.critical_values), 1e-6);
      EXPECT_TRUE(rep.pass) << "n=" << n << " " << rep.rel_err;
    }
  }
}

TEST(Numeric, PeriodSpanDropsByOneOnKernel) {
  Rng rng(51);
  const auto H = random_morse_hamiltonian(rng, 3);
  const auto prof = residues_at_infinity(H);
  const periods::Curve<double> curve(H);
  const cd t = random_regular_t(rng, curve.critical_values);
  EXPECT_EQ(period_span_rank<double>(H, to_complex_row<double>(prof.S_basis[0]), t).rank, 2);
  EXPECT_EQ(period_span_rank<double>(H, to_complex_row<double>(random_constant_row(rng, 3)), t).rank, 3);
}

TEST(Reduced, RejectsEvenDegree) {
  const auto sys = build_system(elliptic());
  EXPECT_THROW(reduced_system<double>(elliptic(), sys, residues_at_infinity(elliptic())), std::invalid_argument);
}

// What the adapted frame does satisfy: the first n-2 forms have zero residue,
// the last column of B' vanishes above the corner, and the (n-1)-th column is
// tied to the last column of A' through the residues.
TEST(Reduced, AdaptedFrameRelations) {
  Rng rng(52);
  for (int n : {3, 5}) {
    const auto H = random_morse_hamiltonian(rng, n);
    const auto sys = build_system(H);
    const auto rs = reduced_system<double>(H, sys, residues_at_infinity(H));
    ASSERT_TRUE(rs.residues_independent);
    EXPECT_LE(rs.residue_zero_error, 1e-10);
    EXPECT_GT(std::abs(rs.res_slope[static_cast<std::size_t>(n - 1)]), 0);
    EXPECT_LE(std::abs(rs.res_slope[static_cast<std::size_t>(n - 2)]), 1e-12);
    EXPECT_EQ(rs.Cbar.size(), static_cast<std::size_t>(n - 2));
    const double bmax = rs.B1.cwiseAbs().maxCoeff();
    for (int i = 0; i < n - 1; ++i) {
      EXPECT_LE(std::abs(rs.B1(i, n - 1)), 1e-10 * bmax);
      const cd lhs = rs.B1(i, n - 2) * rs.res_const[static_cast<std::size_t>(n - 2)];
      const cd rhs = -rs.A1(i, n - 1) * rs.res_slope[static_cast<std::size_t>(n - 1)];
      EXPECT_LE(std::abs(lhs - rhs), 1e-9 * (1 + std::abs(rhs)));
    }
  }
}

TEST(Orders, EllipticBudget) {
  const auto sys = build_system(elliptic());
  const auto rep = orders_report<double>(elliptic(), sys, {1, 0});
  EXPECT_EQ(rep.ord_inf_delta, 0);
  EXPECT_EQ(rep.ord_inf_w, 0);  // 0 - 2 + 2
  EXPECT_EQ(rep.ord_inf_w_bound, -1);
  EXPECT_EQ(rep.budget_bound, 1);
  EXPECT_TRUE(rep.pass);
  for (const auto& p : rep.poles) EXPECT_TRUE(p.well_conditioned);
}

TEST(Orders, QuarticAtInfinity) {
  Rng rng(53);
  const auto H = random_morse_hamiltonian(rng, 4);
  const auto sys = build_system(H);
  const auto rep = orders_report<double>(H, sys, random_constant_row(rng, 4));
  EXPECT_GE(rep.ord_inf_w, 2);
  EXPECT_EQ(rep.pole_sum_bound, -8);
  for (const auto& p : rep.poles) EXPECT_EQ(static_cast<long>(std::lround(p.slope)), p.order_from_delta);
}
