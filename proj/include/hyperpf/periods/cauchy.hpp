#pragma once

// Derivatives of periods in t from their values on a circle, and the order of
// vanishing of a single period.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "hyperpf/numeric/parallel.hpp"
#include "hyperpf/periods/integrate.hpp"

namespace hyperpf::periods {

/// values[node][form][cycle] at t_j = t0 + rho exp(i 2 pi j / M), for the
/// cycle basis continued from t0.
template <class Real>
struct CircleSamples {
  Complex<Real> t0;
  Real rho = 0;
  int nodes = 0;
  std::vector<std::vector<std::vector<Complex<Real>>>> values;
  Real closure_error = 0;  // basis mismatch after the full turn (should be 0)
  int radius_shrinks = 0;
};

struct CauchyParams {
  double radius_factor = 0.5;  // rho = factor * min(dist to critical values, 1 + |t0|)
  int min_nodes = 64;
  int max_shrinks = 10;
  QuadParams quad;
};

template <class Real>
Real default_radius(const Curve<Real>& curve, const Complex<Real>& t0, double factor) {
  return Real(factor) * std::min(curve.distance_to_critical(t0), Real(1) + std::abs(t0));
}

namespace detail {

template <class Real>
Real basis_mismatch(const CycleBasis<Real>& a, const CycleBasis<Real>& b) {
  Real worst = 0;
  for (std::size_t k = 0; k < a.roots.size(); ++k) worst = std::max(worst, std::abs(a.roots[k] - b.roots[k]));
  for (std::size_t c = 0; c < a.cycles.size(); ++c) {
    if (a.cycles[c].chain.size() != b.cycles[c].chain.size()) return std::numeric_limits<Real>::infinity();
    for (std::size_t s = 0; s < a.cycles[c].chain.size(); ++s) {
      const auto& sa = a.cycles[c].chain[s];
      const auto& sb = b.cycles[c].chain[s];
      if (sa.u != sb.u || sa.v != sb.v) return std::numeric_limits<Real>::infinity();
      worst = std::max(worst, std::abs(sa.y_mid - sb.y_mid) / std::abs(sa.y_mid));
    }
  }
  return worst;
}

}  // namespace detail

/// Integrals on M circle nodes. Bases are carried radially from t0 to the
/// first node and then around the circle, so every node sees the
/// continuation of the cycles at t0. The radius is halved on failure.
template <class Real>
CircleSamples<Real> sample_circle(const Curve<Real>& curve, const CycleBasis<Real>& basis0,
                                  const CompiledForms<Real>& forms, int order, const CauchyParams& cp = {},
                                  Real rho = Real(0)) {
  CircleSamples<Real> cs;
  cs.t0 = basis0.t;
  cs.nodes = std::max(cp.min_nodes, 8 * order);
  if (rho <= 0) rho = default_radius(curve, cs.t0, cp.radius_factor);
  if (curve.distance_to_critical(cs.t0) < Real(1e-9) * curve.value_scale())
    throw NearCriticalError("Cauchy centre is at a critical value", static_cast<double>(curve.distance_to_critical(cs.t0)));
  const Real pi = std::acos(Real(-1));
  for (int shrink = 0; shrink <= cp.max_shrinks; ++shrink, rho /= 2) {
    try {
      std::vector<CycleBasis<Real>> bases;
      bases.reserve(static_cast<std::size_t>(cs.nodes));
      CycleBasis<Real> b = transport(curve, basis0, cs.t0 + rho, 4);
      for (int j = 0; j < cs.nodes; ++j) {
        const Complex<Real> tj = cs.t0 + std::polar(rho, 2 * pi * Real(j) / Real(cs.nodes));
        if (j > 0) b = transport(curve, std::move(b), tj, 1);
        bases.push_back(b);
      }
      const CycleBasis<Real> closing = transport(curve, b, cs.t0 + rho, 1);
      cs.closure_error = detail::basis_mismatch(bases.front(), closing);
      cs.values.assign(static_cast<std::size_t>(cs.nodes), {});
      numeric::parallel_for(bases.size(), [&](std::size_t j) {
        const auto pm = period_matrix(curve, bases[j], forms, cp.quad);
        cs.values[j] = pm.entries;
      });
      cs.rho = rho;
      cs.radius_shrinks = shrink;
      return cs;
    } catch (const TransportError&) {
      if (shrink == cp.max_shrinks) throw;
    }
  }
  throw TransportError("Cauchy circle radius underflow");
}

/// Normalized Taylor coefficients a_k = I^{(k)}(t0) rho^k / k! of the
/// combination sum_i c_i (form i) on cycle `cycle`, k = 0..order.
template <class Real>
std::vector<Complex<Real>> taylor_coefficients(const CircleSamples<Real>& cs, const std::vector<Complex<Real>>& c,
                                               std::size_t cycle, int order) {
  const Real pi = std::acos(Real(-1));
  std::vector<Complex<Real>> a(static_cast<std::size_t>(order) + 1, Complex<Real>(0));
  for (int j = 0; j < cs.nodes; ++j) {
    Complex<Real> v(0);
    for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * cs.values[static_cast<std::size_t>(j)][i][cycle];
    for (int k = 0; k <= order; ++k)
      a[static_cast<std::size_t>(k)] += v * std::polar(Real(1), -2 * pi * Real(k) * Real(j) / Real(cs.nodes));
  }
  for (auto& x : a) x /= Real(cs.nodes);
  return a;
}

/// I^{(k)}(t0) for k = 0..order.
template <class Real>
std::vector<Complex<Real>> derivatives_from_taylor(const std::vector<Complex<Real>>& a, Real rho) {
  std::vector<Complex<Real>> d(a.size());
  Real fact = 1, rk = 1;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k > 0) {
      fact *= Real(k);
      rk *= rho;
    }
    d[k] = a[k] * fact / rk;
  }
  return d;
}

/// derivs[k][form][cycle].
template <class Real>
struct Derivatives {
  std::vector<std::vector<std::vector<Complex<Real>>>> d;
  Real rho = 0;
  int nodes = 0;
  Real closure_error = 0;
};

template <class Real>
Derivatives<Real> cauchy_derivatives(const Curve<Real>& curve, const CycleBasis<Real>& basis0,
                                     const CompiledForms<Real>& forms, int order, const CauchyParams& cp = {},
                                     Real rho = Real(0)) {
  const auto cs = sample_circle(curve, basis0, forms, order, cp, rho);
  Derivatives<Real> out;
  out.rho = cs.rho;
  out.nodes = cs.nodes;
  out.closure_error = cs.closure_error;
  const std::size_t nf = forms.size(), nc = basis0.cycles.size();
  out.d.assign(static_cast<std::size_t>(order) + 1,
               std::vector<std::vector<Complex<Real>>>(nf, std::vector<Complex<Real>>(nc)));
  for (std::size_t f = 0; f < nf; ++f) {
    std::vector<Complex<Real>> unit(nf, Complex<Real>(0));
    unit[f] = 1;
    for (std::size_t c = 0; c < nc; ++c) {
      const auto der = derivatives_from_taylor(taylor_coefficients(cs, unit, c, order), cs.rho);
      for (int k = 0; k <= order; ++k) out.d[static_cast<std::size_t>(k)][f][c] = der[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

template <class Real>
Real circle_max(const CircleSamples<Real>& cs, const std::vector<Complex<Real>>& c, std::size_t cycle) {
  Real m = 0;
  for (const auto& node : cs.values) {
    Complex<Real> v(0);
    for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * node[i][cycle];
    m = std::max(m, std::abs(v));
  }
  return m;
}

struct MultiplicityResult {
  int order = -1;                // -1: numerically flat up to max_order
  bool flat = false;
  std::vector<double> taylor_magnitudes;  // |a_k| / max |I| on the circle
  int bound = 0;                 // n-1+n(n-1)/2
  double rho = 0;
  int nodes = 0;
  double tol = 0;
};

/// Smallest k whose normalized Taylor coefficient exceeds tol relative to the
/// size of the period on the circle.
template <class Real>
MultiplicityResult multiplicity_from_samples(const CircleSamples<Real>& cs, const std::vector<Complex<Real>>& c,
                                             std::size_t cycle, int max_order, double tol, int bound) {
  MultiplicityResult r;
  r.bound = bound;
  r.rho = static_cast<double>(cs.rho);
  r.nodes = cs.nodes;
  r.tol = tol;
  const auto a = taylor_coefficients(cs, c, cycle, max_order);
  const Real scale = std::max(circle_max(cs, c, cycle), std::numeric_limits<Real>::min());
  for (int k = 0; k <= max_order; ++k) {
    const double mag = static_cast<double>(std::abs(a[static_cast<std::size_t>(k)]) / scale);
    r.taylor_magnitudes.push_back(mag);
    if (r.order < 0 && mag > tol) r.order = k;
  }
  r.flat = r.order < 0;
  return r;
}

template <class Real>
MultiplicityResult multiplicity_estimate(const Curve<Real>& curve, const CycleBasis<Real>& basis0,
                                         const std::vector<Complex<Real>>& c, std::size_t cycle, double tol,
                                         const CauchyParams& cp = {}) {
  const int n = curve.n;
  const int bound = n - 1 + n * (n - 1) / 2;
  const int max_order = bound + 1;
  const auto forms = CompiledForms<Real>::basis(n);
  const auto cs = sample_circle(curve, basis0, forms, max_order, cp);
  return multiplicity_from_samples(cs, c, cycle, max_order, tol, bound);
}

/// Coefficients c (unit norm) with I^{(k)}(t0) = 0 for k < m for the
/// combination sum_i c_i omega_i on the given cycle: the right singular vector
/// of the m x n matrix of normalized Taylor coefficients.
template <class Real>
std::vector<Complex<Real>> vanishing_combination(const Curve<Real>& curve, const CycleBasis<Real>& basis0,
                                                 std::size_t cycle, int m, const CauchyParams& cp = {}) {
  const int n = curve.n;
  if (m >= n) throw std::invalid_argument("at most n-1 vanishing conditions can be imposed");
  const auto forms = CompiledForms<Real>::basis(n);
  const auto cs = sample_circle(curve, basis0, forms, std::max(m, 1), cp);
  using Mat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  Mat M(m, n);
  for (int i = 0; i < n; ++i) {
    std::vector<Complex<Real>> unit(static_cast<std::size_t>(n), Complex<Real>(0));
    unit[static_cast<std::size_t>(i)] = 1;
    const auto a = taylor_coefficients(cs, unit, cycle, std::max(m - 1, 0));
    for (int k = 0; k < m; ++k) M(k, i) = a[static_cast<std::size_t>(k)];
  }
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto v = svd.matrixV().col(n - 1);
  std::vector<Complex<Real>> c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = v(i);
  return c;
}

}  // namespace hyperpf::periods
