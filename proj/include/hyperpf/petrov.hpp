#pragma once

// Normal form of polynomial 1-forms in the Petrov module: every form is
// congruent, modulo exact forms and multiples of dH, to sum p_i(t) x^{i-1} y dx.

#include <optional>
#include <string>
#include <vector>

#include "hyperpf/algebra/bipoly.hpp"
#include "hyperpf/algebra/unipoly.hpp"
#include "hyperpf/hamiltonian.hpp"

namespace hyperpf {

struct PetrovDecomposition {
  std::vector<ExactPoly> coeffs;  // p_1 .. p_n, polynomials in t
  int source_degree = kMinusInfinity;

  bool is_zero() const {
    for (const auto& p : coeffs)
      if (!p.is_zero()) return false;
    return true;
  }
};

namespace detail {

// Polynomial in x whose coefficients are polynomials in t, indexed by x-degree.
using XTPoly = std::vector<ExactPoly>;

inline void xt_trim(XTPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline XTPoly xt_mul(const XTPoly& a, const XTPoly& b) {
  if (a.empty() || b.empty()) return {};
  XTPoly out(a.size() + b.size() - 1, ExactPoly());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  xt_trim(out);
  return out;
}

// t + V(x).
inline XTPoly t_plus_V(const HyperellipticHamiltonian& H) {
  XTPoly out(static_cast<std::size_t>(H.V().degree()) + 1, ExactPoly());
  for (int i = 0; i <= H.V().degree(); ++i) out[static_cast<std::size_t>(i)] = ExactPoly::constant(H.V().coeff(i));
  out[0] += ExactPoly::variable('t');
  return out;
}

inline void xt_add_at(XTPoly& p, std::size_t deg, const ExactPoly& c) {
  if (p.size() <= deg) p.resize(deg + 1, ExactPoly());
  p[deg] += c;
}

}  // namespace detail

/// Petrov coefficients of omega.
inline PetrovDecomposition reduce(const OneForm& omega, const HyperellipticHamiltonian& H) {
  const int n = H.n();
  PetrovDecomposition dec;
  dec.source_degree = weighted_degree(omega, n);

  // Q dy = dG - G_x dx with G_y = Q.
  const BiPoly f = omega.P - omega.Q.integrate_y().dx();

  // Even powers of y give exact classes; y^{2k+1} = y (t+V)^k.
  const detail::XTPoly tv = detail::t_plus_V(H);
  std::vector<detail::XTPoly> tv_pow{detail::XTPoly{ExactPoly::constant(Exact(1))}};
  detail::XTPoly work;  // coefficient of x^a y dx
  for (const auto& [key, c] : f.terms()) {
    const auto [a, j] = key;
    if (j % 2 == 0) continue;
    const std::size_t k = static_cast<std::size_t>(j / 2);
    while (tv_pow.size() <= k) tv_pow.push_back(detail::xt_mul(tv_pow.back(), tv));
    const auto& pk = tv_pow[k];
    for (std::size_t m = 0; m < pk.size(); ++m)
      detail::xt_add_at(work, static_cast<std::size_t>(a) + m, pk[m] * c);
  }
  detail::xt_trim(work);

  // x^{a+n} y dx with a >= 0 rewritten through the relation
  // (2a/3)(t+V) x^{a-1} y dx + x^a V' y dx = 0; the top x-degree drops each step.
  const ExactPoly& hb = H.hbar();
  const ExactPoly dhb = hb.derivative();
  const ExactPoly t = ExactPoly::variable('t');
  while (static_cast<int>(work.size()) - 1 >= n) {
    const int top = static_cast<int>(work.size()) - 1;
    const int a = top - n;
    const ExactPoly lead = work.back();
    work.pop_back();
    const Exact scale = Exact::fraction(-3, 3 * n + 3 + 2 * a);
    if (a > 0) {
      const Exact two_a_3 = Exact::fraction(2 * a, 3);
      // (2a/3) t x^{a-1}
      detail::xt_add_at(work, static_cast<std::size_t>(a - 1), lead * t * (scale * two_a_3));
      // -(2a/3) hbar(x) x^{a-1}
      for (int m = 0; m <= hb.degree(); ++m)
        detail::xt_add_at(work, static_cast<std::size_t>(a - 1 + m), lead * (scale * -two_a_3 * hb.coeff(m)));
    }
    // -x^a hbar'(x)
    for (int m = 0; m <= dhb.degree(); ++m)
      detail::xt_add_at(work, static_cast<std::size_t>(a + m), lead * (scale * -dhb.coeff(m)));
    detail::xt_trim(work);
  }

  dec.coeffs.assign(static_cast<std::size_t>(n), ExactPoly());
  for (std::size_t i = 0; i < work.size(); ++i) dec.coeffs[i] = work[i].with_var('t');
  return dec;
}

/// Doubled weighted degree of x^{i-1} y dx.
inline int basis_form_degree(int i, int n) { return 2 * (i - 1) + (n + 1) + 2; }

struct DegreeCertificate {
  bool ok = true;
  // Per index: (deg omega - deg omega_i) - deg H * deg p_i in doubled units,
  // empty when p_i = 0.
  std::vector<std::optional<int>> slack;
};

/// Checks deg p_i <= (deg omega - deg omega_i) / deg H for every nonzero p_i.
inline DegreeCertificate degree_certificate(const PetrovDecomposition& dec, const HyperellipticHamiltonian& H) {
  const int n = H.n();
  DegreeCertificate cert;
  for (std::size_t i = 0; i < dec.coeffs.size(); ++i) {
    const auto& p = dec.coeffs[i];
    if (p.is_zero()) {
      cert.slack.emplace_back();
      continue;
    }
    if (dec.source_degree == kMinusInfinity) {
      cert.ok = false;
      cert.slack.emplace_back(kMinusInfinity);
      continue;
    }
    const int s = dec.source_degree - basis_form_degree(static_cast<int>(i) + 1, n) - 2 * (n + 1) * p.degree();
    cert.slack.emplace_back(s);
    if (s < 0) cert.ok = false;
  }
  return cert;
}

/// sum_i c_i(t) x^{i-1} y dx for constant coefficients.
inline OneForm petrov_combination(const std::vector<Exact>& c) {
  BiPoly p;
  for (std::size_t i = 0; i < c.size(); ++i) p.add(static_cast<int>(i), 1, c[i]);
  return OneForm::dx_part(p);
}

}  // namespace hyperpf
