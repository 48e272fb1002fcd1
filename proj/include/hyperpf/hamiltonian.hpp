#pragma once

// H = y^2 - x^{n+1} + hbar(x), its potential V = x^{n+1} - hbar and critical
// data. Level curves are y^2 = V(x) + t.

#include <algorithm>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hyperpf/algebra/bipoly.hpp"
#include "hyperpf/algebra/unipoly.hpp"
#include "hyperpf/numeric/roots.hpp"

namespace hyperpf {

class HyperellipticHamiltonian {
 public:
  HyperellipticHamiltonian(int n, ExactPoly hbar) : n_(n), hbar_(hbar.with_var('x')) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (hbar_.degree() > n - 1)
      throw std::invalid_argument("deg hbar = " + std::to_string(hbar_.degree()) + " exceeds n-1 = " +
                                  std::to_string(n - 1));
    V_ = ExactPoly::monomial(Exact(1), n + 1, 'x') - hbar_;
    dV_ = V_.derivative();
  }

  int n() const { return n_; }
  const ExactPoly& hbar() const { return hbar_; }
  int hbar_degree() const { return hbar_.degree(); }
  const ExactPoly& V() const { return V_; }
  const ExactPoly& dV() const { return dV_; }

  /// H as a polynomial in x, y.
  BiPoly as_bipoly() const { return BiPoly::monomial(Exact(1), 0, 2) - BiPoly::from_x(V_); }
  BiPoly H_x() const { return -BiPoly::from_x(dV_); }
  BiPoly H_y() const { return BiPoly::monomial(Exact(2), 0, 1); }

  template <class Real>
  std::vector<std::complex<Real>> V_coeffs() const {
    std::vector<std::complex<Real>> c;
    for (const auto& e : V_.coeffs()) c.push_back(e.to_complex<Real>());
    return c;
  }

 private:
  int n_;
  ExactPoly hbar_;
  ExactPoly V_;
  ExactPoly dV_;
};

template <class Real>
struct CriticalData {
  std::vector<std::complex<Real>> points;  // roots of V'
  std::vector<std::complex<Real>> values;  // -V at the points
  bool squarefree = false;                  // exact: gcd(V', V'') constant
  bool distinct_values = false;             // numeric, relative tolerance
  bool morse = false;
  Real separation = 0;                      // min pairwise distance of values
  Real tol = 0;
};

/// Critical points and values; the Morse flag combines the exact
/// squarefree test with a relative distinctness test on the values.
template <class Real = double>
CriticalData<Real> critical_data(const HyperellipticHamiltonian& H, Real tol = Real(1e-9)) {
  CriticalData<Real> out;
  out.tol = tol;
  std::vector<std::complex<Real>> dv;
  for (const auto& e : H.dV().coeffs()) dv.push_back(e.to_complex<Real>());
  out.points = numeric::polynomial_roots<Real>(dv, Real(1e-13));
  numeric::sort_lex(out.points);
  const auto vc = H.V_coeffs<Real>();
  for (const auto& x : out.points) out.values.push_back(-numeric::horner(vc, x));

  out.squarefree = poly_gcd(H.dV(), H.dV().derivative()).degree() == 0;

  Real maxabs = 0;
  for (const auto& v : out.values) maxabs = std::max(maxabs, std::abs(v));
  out.separation = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < out.values.size(); ++i)
    for (std::size_t j = i + 1; j < out.values.size(); ++j)
      out.separation = std::min(out.separation, std::abs(out.values[i] - out.values[j]));
  out.distinct_values = out.separation > tol * maxabs;
  out.morse = out.squarefree && out.distinct_values;
  return out;
}

inline int genus_formula(int n) {
  if (n < 2) throw std::invalid_argument("genus formula needs n >= 2");
  return n / 2;
}

/// dH ^ eta = (H_x Q - H_y P) dx^dy.
inline TwoForm wedge_dH(const HyperellipticHamiltonian& H, const OneForm& eta) {
  return {H.H_x() * eta.Q - H.H_y() * eta.P};
}

/// The basis form x^{i-1} y dx (i is 1-based).
inline OneForm petrov_basis_form(int i) {
  if (i < 1) throw std::invalid_argument("basis index is 1-based");
  return OneForm::dx_part(BiPoly::monomial(Exact(1), i - 1, 1));
}

}  // namespace hyperpf
