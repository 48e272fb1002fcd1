#include <gtest/gtest.h>

#include "hyperpf/petrov.hpp"
#include "hyperpf/random.hpp"

using namespace hyperpf;

namespace {
const HyperellipticHamiltonian& elliptic() {
  static const HyperellipticHamiltonian H(2, ExactPoly(std::vector<Exact>{0, 1}, 'x'));
  return H;
}
ExactPoly tp(std::vector<Exact> c) { return ExactPoly(std::move(c), 't'); }
}  // namespace

TEST(Reduce, ExactFormVanishes) {
  const auto dec = reduce(exact_differential(BiPoly::monomial(1, 3, 2)), elliptic());
  EXPECT_TRUE(dec.is_zero());
}

TEST(Reduce, EllipticGoldens) {
  const auto d1 = reduce(OneForm::dx_part(BiPoly::monomial(1, 2, 1)), elliptic());
  EXPECT_EQ(d1.coeffs[0], tp({Exact::fraction(1, 3)}));
  EXPECT_TRUE(d1.coeffs[1].is_zero());

  const auto d2 = reduce(OneForm::dx_part(BiPoly::monomial(1, 0, 3)), elliptic());
  EXPECT_EQ(d2.coeffs[0], tp({0, Exact::fraction(9, 11)}));
  EXPECT_EQ(d2.coeffs[1], tp({Exact::fraction(-6, 11)}));
  EXPECT_EQ(d2.source_degree, 11);

  const auto d3 = reduce(OneForm::dx_part(BiPoly::monomial(1, 3, 1)), elliptic());
  EXPECT_EQ(d3.coeffs[0], tp({0, Exact::fraction(-2, 11)}));
  EXPECT_EQ(d3.coeffs[1], tp({Exact::fraction(5, 11)}));
}

TEST(Reduce, BasisFormsAreUnitVectors) {
  Rng rng(1);
  for (int n = 2; n <= 6; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    for (int i = 1; i <= n; ++i) {
      const auto dec = reduce(petrov_basis_form(i), H);
      for (int j = 1; j <= n; ++j)
        EXPECT_EQ(dec.coeffs[static_cast<std::size_t>(j - 1)], i == j ? tp({1}) : ExactPoly());
    }
  }
}

TEST(Reduce, Linear) {
  Rng rng(2);
  for (int n = 2; n <= 5; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    for (int k = 0; k < 10; ++k) {
      const OneForm a = random_form(rng, n, 4 * (n + 1)), b = random_form(rng, n, 4 * (n + 1));
      const Exact al = random_rational(rng), be = random_rational(rng);
      const auto dab = reduce(al * a + be * b, H), da = reduce(a, H), db = reduce(b, H);
      for (int i = 0; i < n; ++i) EXPECT_EQ(dab.coeffs[i], da.coeffs[i] * al + db.coeffs[i] * be);
    }
  }
}

TEST(Reduce, ExactFormsAndDHMultiplesVanish) {
  Rng rng(3);
  for (int n = 2; n <= 5; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    const OneForm dH = exact_differential(H.as_bipoly());
    for (int k = 0; k < 10; ++k) {
      EXPECT_TRUE(reduce(exact_differential(random_bipoly(rng, n, 3 * (n + 1))), H).is_zero());
      EXPECT_TRUE(reduce(random_bipoly(rng, n, 2 * (n + 1)) * dH, H).is_zero());
    }
  }
}

TEST(Reduce, ModuleActionIsMultiplicationByT) {
  // [H w] = t [w]
  Rng rng(4);
  for (int n = 2; n <= 5; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    for (int k = 0; k < 5; ++k) {
      const OneForm w = random_form(rng, n, 3 * (n + 1));
      const auto a = reduce(H.as_bipoly() * w, H), b = reduce(w, H);
      for (int i = 0; i < n; ++i) EXPECT_EQ(a.coeffs[i], b.coeffs[i] * ExactPoly::variable('t'));
    }
  }
}

TEST(Reduce, NoConstantCombinationVanishes) {
  Rng rng(5);
  for (int n = 2; n <= 6; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    auto c = random_constant_row(rng, n);
    c[0] += 1;  // keep it nonzero
    EXPECT_FALSE(reduce(petrov_combination(c), H).is_zero());
  }
}

TEST(DegreeCertificate, Examples) {
  const auto d = reduce(OneForm::dx_part(BiPoly::monomial(1, 0, 3)), elliptic());
  const auto c = degree_certificate(d, elliptic());
  EXPECT_TRUE(c.ok);
  ASSERT_TRUE(c.slack[0].has_value());
  EXPECT_EQ(*c.slack[0], 0);  // deg p_1 = 1 = (11/2 - 5/2)/3

  const auto b = degree_certificate(reduce(petrov_basis_form(2), elliptic()), elliptic());
  EXPECT_TRUE(b.ok);
  EXPECT_EQ(*b.slack[1], 0);

  // A nonzero decomposition claiming a source degree below deg omega_1.
  PetrovDecomposition fake;
  fake.coeffs = {tp({1}), ExactPoly()};
  fake.source_degree = 4;
  EXPECT_FALSE(degree_certificate(fake, elliptic()).ok);
}

TEST(DegreeCertificate, RandomFormsSatisfyBound) {
  Rng rng(6);
  for (int n = 2; n <= 6; ++n) {
    const auto H = random_morse_hamiltonian(rng, n);
    for (int k = 0; k < 10; ++k)
      EXPECT_TRUE(degree_certificate(reduce(random_form(rng, n, 5 * (n + 1)), H), H).ok);
  }
}
