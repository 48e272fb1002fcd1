#pragma once

// Simultaneous polynomial root finding (Aberth-Ehrlich) with a Newton polish.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hyperpf::numeric {

template <class Real>
using Complex = std::complex<Real>;

/// Horner evaluation of p and p' (ascending coefficients).
template <class Real>
void eval_with_derivative(const std::vector<Complex<Real>>& c, const Complex<Real>& z, Complex<Real>& p,
                          Complex<Real>& dp) {
  p = Complex<Real>(0);
  dp = Complex<Real>(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
}

template <class Real>
Complex<Real> horner(const std::vector<Complex<Real>>& c, const Complex<Real>& z) {
  Complex<Real> p(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * z + *it;
  return p;
}

/// Sum of |c_k| |z|^k, the natural scale for residuals of p(z).
template <class Real>
Real horner_scale(const std::vector<Complex<Real>>& c, const Complex<Real>& z) {
  Real s = 0;
  const Real r = std::abs(z);
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * r + std::abs(*it);
  return s;
}

/// Newton steps until the residual stops improving or drops below tol*scale.
template <class Real>
Complex<Real> newton_polish(const std::vector<Complex<Real>>& c, Complex<Real> z, Real tol, int max_iter = 60) {
  Complex<Real> p, dp;
  eval_with_derivative(c, z, p, dp);
  Real best = std::abs(p);
  for (int it = 0; it < max_iter; ++it) {
    if (best <= tol * horner_scale(c, z)) break;
    if (dp == Complex<Real>(0)) break;
    const Complex<Real> cand = z - p / dp;
    Complex<Real> pc, dpc;
    eval_with_derivative(c, cand, pc, dpc);
    if (!(std::abs(pc) < best)) break;
    z = cand;
    p = pc;
    dp = dpc;
    best = std::abs(pc);
  }
  return z;
}

/// All roots of the polynomial with ascending coefficients c (leading
/// coefficient nonzero), with multiplicity.
template <class Real>
std::vector<Complex<Real>> polynomial_roots(std::vector<Complex<Real>> c, Real tol = Real(1e-13)) {
  while (!c.empty() && c.back() == Complex<Real>(0)) c.pop_back();
  if (c.size() <= 1) return {};
  const std::size_t n = c.size() - 1;
  const Complex<Real> lead = c.back();
  for (auto& v : c) v /= lead;

  // Cauchy-type bound for the initial circle.
  Real radius = 0;
  for (std::size_t k = 0; k < n; ++k) radius = std::max(radius, std::pow(std::abs(c[k]), Real(1) / Real(n - k)));
  radius = std::max(radius, Real(1e-3));

  std::vector<Complex<Real>> z(n);
  const Real pi = std::acos(Real(-1));
  for (std::size_t k = 0; k < n; ++k) {
    const Real ang = 2 * pi * Real(k) / Real(n) + Real(0.4);
    z[k] = std::polar(radius, ang);
  }

  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int iter = 0; iter < 500; ++iter) {
    Real max_step = 0;
    for (std::size_t k = 0; k < n; ++k) {
      Complex<Real> p, dp;
      eval_with_derivative(c, z[k], p, dp);
      if (std::abs(p) <= eps * horner_scale(c, z[k])) continue;
      const Complex<Real> ratio = p / dp;
      Complex<Real> sum(0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) sum += Real(1) / (z[k] - z[j]);
      const Complex<Real> step = ratio / (Real(1) - ratio * sum);
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(Real(1), std::abs(z[k])));
    }
    if (max_step < 8 * eps) break;
  }
  for (auto& r : z) r = newton_polish(c, r, tol);
  return z;
}

/// Sorts by (real, imag). Real parts closer than tie_tol*scale count as
/// equal, so conjugate pairs keep a stable order despite rounding.
template <class Real>
void sort_lex(std::vector<Complex<Real>>& v, Real tie_tol = Real(1e-9)) {
  Real scale = 1;
  for (const auto& z : v) scale = std::max(scale, std::abs(z));
  const Real tie = tie_tol * scale;
  std::sort(v.begin(), v.end(), [tie](const Complex<Real>& a, const Complex<Real>& b) {
    if (std::abs(a.real() - b.real()) > tie) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

}  // namespace hyperpf::numeric
