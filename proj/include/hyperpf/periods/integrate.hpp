#pragma once

// Integrals of polynomial 1-forms over cycles of a level curve.

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "hyperpf/algebra/bipoly.hpp"
#include "hyperpf/numeric/quadrature.hpp"
#include "hyperpf/periods/curve.hpp"

namespace hyperpf::periods {

/// Monomials of a batch of forms in floating point. Only the y-odd part of
/// the dx component and the y-even part of the dy component survive on a
/// doubled path; the ellipse route uses all terms.
template <class Real>
struct CompiledForms {
  struct Term {
    int i, j;
    Complex<Real> c;
  };
  struct Form {
    std::vector<Term> dx, dy;
  };
  std::vector<Form> forms;
  int max_x = 0, max_y = 0;

  std::size_t size() const { return forms.size(); }

  static CompiledForms compile(const std::vector<OneForm>& ws) {
    CompiledForms out;
    for (const auto& w : ws) {
      Form f;
      for (const auto& [k, c] : w.P.terms()) f.dx.push_back({k.first, k.second, c.template to_complex<Real>()});
      for (const auto& [k, c] : w.Q.terms()) f.dy.push_back({k.first, k.second, c.template to_complex<Real>()});
      for (const auto& t : f.dx) out.max_x = std::max(out.max_x, t.i), out.max_y = std::max(out.max_y, t.j);
      for (const auto& t : f.dy) out.max_x = std::max(out.max_x, t.i), out.max_y = std::max(out.max_y, t.j);
      out.forms.push_back(std::move(f));
    }
    return out;
  }

  /// The Petrov basis x^{i-1} y dx, i = 1..n.
  static CompiledForms basis(int n) {
    CompiledForms out;
    for (int i = 0; i < n; ++i) {
      Form f;
      f.dx.push_back({i, 1, Complex<Real>(1)});
      out.forms.push_back(std::move(f));
    }
    out.max_x = n - 1;
    out.max_y = 1;
    return out;
  }
};

struct QuadParams {
  double tol = 1e-10;
  int max_depth = 30;
  int ellipse_max_nodes = 1 << 15;
};

struct IntegrationInfo {
  int panels = 0;
  int evaluations = 0;
  double est_error = 0;
  bool converged = true;
  PathMode mode = PathMode::SegmentDoubling;
  std::size_t chain_length = 1;
};

namespace detail {

template <class Real>
void powers(const Complex<Real>& z, int m, std::vector<Complex<Real>>& out) {
  out.resize(static_cast<std::size_t>(m) + 1);
  out[0] = Complex<Real>(1);
  for (int k = 1; k <= m; ++k) out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k) - 1] * z;
}

}  // namespace detail

/// 2 * integral over one sheeted segment of the surviving parts, in the
/// variable theta in [0, pi] (x = u + (v-u) sin^2(theta/2)).
template <class Real>
std::vector<Complex<Real>> integrate_segment(const Curve<Real>& curve, const std::vector<Complex<Real>>& roots,
                                             const Segment<Real>& seg, const CompiledForms<Real>& forms,
                                             const QuadParams& qp, IntegrationInfo& info) {
  const Complex<Real> u = roots[seg.u], v = roots[seg.v];
  const Complex<Real> m = (u + v) / Real(2);
  const Complex<Real> h = (v - u) / Real(2);
  std::vector<Complex<Real>> others;
  for (std::size_t c = 0; c < roots.size(); ++c)
    if (c != seg.u && c != seg.v) others.push_back(roots[c]);
  std::vector<Complex<Real>> inv_mc;
  for (const auto& c : others) inv_mc.push_back(Real(1) / (m - c));

  const std::size_t dim = forms.size();
  std::vector<Complex<Real>> xp, yp;
  // mag, when given, receives the sum of term magnitudes per form.
  auto eval = [&](Real theta, std::vector<Complex<Real>>& out, std::vector<Real>* mag) {
    const Real s2 = std::sin(theta / 2);
    const Complex<Real> x = u + (v - u) * (s2 * s2);
    Complex<Real> ys = seg.y_mid;  // y = ys * sin(theta)
    for (std::size_t k = 0; k < others.size(); ++k) ys *= std::sqrt((x - others[k]) * inv_mc[k]);
    const Real st = std::sin(theta);
    const Complex<Real> y = ys * st;
    const Complex<Real> dxdth = h * st;
    detail::powers(x, forms.max_x, xp);
    detail::powers(y, forms.max_y, yp);
    const Complex<Real> dv = numeric::horner(curve.dV, x);
    // g dy = g V'/(2y) dx, and dx/(2y) = h/(2 ys) dtheta.
    const Complex<Real> dy_factor = dv * h / (Real(2) * ys);
    for (std::size_t k = 0; k < dim; ++k) {
      Complex<Real> acc(0);
      Real am = 0;
      for (const auto& t : forms.forms[k].dx)
        if (t.j % 2 == 1) {
          const Complex<Real> term = t.c * xp[static_cast<std::size_t>(t.i)] * yp[static_cast<std::size_t>(t.j)] * dxdth;
          acc += term;
          am += std::abs(term);
        }
      for (const auto& t : forms.forms[k].dy)
        if (t.j % 2 == 0) {
          const Complex<Real> term = t.c * xp[static_cast<std::size_t>(t.i)] * yp[static_cast<std::size_t>(t.j)] * dy_factor;
          acc += term;
          am += std::abs(term);
        }
      out[k] = Real(2) * acc;
      if (mag) (*mag)[k] = Real(2) * am;
    }
  };
  auto f = [&](Real theta, std::vector<Complex<Real>>& out) { eval(theta, out, nullptr); };
  const Real pi = std::acos(Real(-1));
  // Rounding floor: a few hundred ulps of the integrated term magnitudes.
  std::vector<Real> floor(dim, Real(0)), mag(dim);
  {
    std::vector<Complex<Real>> tmp(dim);
    const int samples = 33;
    for (int j = 0; j < samples; ++j) {
      eval(pi * (Real(j) + Real(0.5)) / samples, tmp, &mag);
      for (std::size_t k = 0; k < dim; ++k) floor[k] += mag[k] * pi / samples;
    }
    for (auto& x : floor) x *= 256 * std::numeric_limits<Real>::epsilon();
  }
  numeric::AdaptiveQuad<Real> quad(Real(qp.tol), qp.max_depth);
  numeric::QuadStats st;
  auto res = quad.integrate(f, dim, Real(0), pi, &st, floor);
  info.panels += st.panels;
  info.evaluations += st.evaluations;
  info.est_error = std::max(info.est_error, st.est_error);
  info.converged = info.converged && st.converged;
  return res;
}

/// Integral over the confocal ellipse around the segment u -> v (foci at the
/// two branch points), started below the midpoint on the sheet of y_mid and
/// traversed toward v first. Trapezoidal rule with node doubling.
template <class Real>
std::vector<Complex<Real>> integrate_ellipse(const Curve<Real>& curve, const std::vector<Complex<Real>>& roots,
                                             const Segment<Real>& seg, const CompiledForms<Real>& forms,
                                             const QuadParams& qp, IntegrationInfo& info) {
  const Complex<Real> u = roots[seg.u], v = roots[seg.v];
  const Complex<Real> m = (u + v) / Real(2);
  const Complex<Real> h = (v - u) / Real(2);
  // Elliptic radius of the nearest other root in w = (x - m)/h coordinates.
  Real mu_min = Real(2);
  for (std::size_t c = 0; c < roots.size(); ++c) {
    if (c == seg.u || c == seg.v) continue;
    const Complex<Real> w = (roots[c] - m) / h;
    Complex<Real> r = w + std::sqrt(w - Real(1)) * std::sqrt(w + Real(1));
    mu_min = std::min(mu_min, std::log(std::abs(r)));
  }
  if (mu_min < Real(1e-4)) throw TransportError("ellipse path blocked by a third branch point");
  const Real mu = mu_min / 2;
  const Real ca = std::cosh(mu), sb = std::sinh(mu);
  auto xat = [&](Real phi) { return m + h * Complex<Real>(ca * std::cos(phi), sb * std::sin(phi)); };
  auto dxat = [&](Real phi) { return h * Complex<Real>(-ca * std::sin(phi), sb * std::cos(phi)); };
  const Real pi = std::acos(Real(-1));
  const Real phi0 = Real(1.5) * pi;

  // Sheet at the start point: continue y from the midpoint straight down.
  auto ysq = [&](const Complex<Real>& x) {
    Complex<Real> p(1);
    for (const auto& r : roots) p *= x - r;
    return p;
  };
  Complex<Real> y = seg.y_mid;
  {
    const Complex<Real> x_end = xat(phi0);
    const int steps = 64;
    for (int k = 1; k <= steps; ++k) {
      const Complex<Real> x = m + (x_end - m) * (Real(k) / steps);
      const Complex<Real> r = std::sqrt(ysq(x));
      y = std::abs(r - y) <= std::abs(r + y) ? r : -r;
    }
  }
  const Complex<Real> y_start = y;

  const std::size_t dim = forms.size();
  std::vector<Complex<Real>> prev(dim, Complex<Real>(0));
  std::vector<Complex<Real>> xp, yp;
  int nodes = 64;
  std::vector<Complex<Real>> result;
  for (; nodes <= qp.ellipse_max_nodes; nodes *= 2) {
    std::vector<Complex<Real>> sum(dim, Complex<Real>(0));
    // Continuation needs fine steps, more of them when the foci are close.
    Complex<Real> yc = y_start;
    const int sub = std::max(8, static_cast<int>(std::ceil(Real(4) / mu)));
    for (int k = 0; k < nodes; ++k) {
      const Real phi = phi0 + 2 * pi * Real(k) / Real(nodes);
      if (k > 0) {
        for (int s = 1; s <= sub; ++s) {
          const Real ph = phi0 + 2 * pi * (Real(k - 1) + Real(s) / sub) / Real(nodes);
          const Complex<Real> r = std::sqrt(ysq(xat(ph)));
          yc = std::abs(r - yc) <= std::abs(r + yc) ? r : -r;
        }
      }
      const Complex<Real> x = xat(phi);
      const Complex<Real> dx = dxat(phi);
      detail::powers(x, forms.max_x, xp);
      detail::powers(yc, forms.max_y, yp);
      const Complex<Real> dyfac = numeric::horner(curve.dV, x) / (Real(2) * yc);
      for (std::size_t f = 0; f < dim; ++f) {
        Complex<Real> acc(0);
        for (const auto& t : forms.forms[f].dx) acc += t.c * xp[static_cast<std::size_t>(t.i)] * yp[static_cast<std::size_t>(t.j)];
        for (const auto& t : forms.forms[f].dy)
          acc += t.c * xp[static_cast<std::size_t>(t.i)] * yp[static_cast<std::size_t>(t.j)] * dyfac;
        sum[f] += acc * dx;
      }
      ++info.evaluations;
    }
    for (auto& s : sum) s *= 2 * pi / Real(nodes);
    if (nodes > 64) {
      Real worst = 0, scale = 0;
      for (std::size_t f = 0; f < dim; ++f) scale = std::max(scale, std::abs(sum[f]));
      for (std::size_t f = 0; f < dim; ++f) worst = std::max(worst, std::abs(sum[f] - prev[f]));
      if (worst <= Real(qp.tol) * std::max(scale, Real(1e-300))) {
        info.est_error = std::max(info.est_error, static_cast<double>(worst / std::max(scale, Real(1e-300))));
        info.panels = nodes;
        return sum;
      }
    }
    prev = sum;
    result = sum;
  }
  info.converged = false;
  info.panels = qp.ellipse_max_nodes;
  return result;
}

/// Integrals of every compiled form over one cycle.
template <class Real>
std::vector<Complex<Real>> integrate_cycle(const Curve<Real>& curve, const CycleBasis<Real>& basis,
                                           const Cycle<Real>& cyc, const CompiledForms<Real>& forms,
                                           const QuadParams& qp = {}, IntegrationInfo* info_out = nullptr,
                                           bool force_ellipse = false) {
  IntegrationInfo info;
  info.chain_length = cyc.chain.size();
  std::vector<Complex<Real>> total(forms.size(), Complex<Real>(0));
  const bool ellipse = cyc.chain.size() == 1 && (force_ellipse || cyc.mode == PathMode::Ellipse);
  info.mode = ellipse ? PathMode::Ellipse : PathMode::SegmentDoubling;
  for (const auto& seg : cyc.chain) {
    const auto part = ellipse ? integrate_ellipse(curve, basis.roots, seg, forms, qp, info)
                              : integrate_segment(curve, basis.roots, seg, forms, qp, info);
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += part[k];
  }
  if (info_out) *info_out = info;
  return total;
}

/// entries[i][j] = integral of form i over cycle j.
template <class Real>
struct PeriodMatrix {
  Complex<Real> t;
  std::vector<std::vector<Complex<Real>>> entries;
  Complex<Real> det;
  std::vector<IntegrationInfo> info;  // per cycle
};

template <class Real>
Complex<Real> complex_det(std::vector<std::vector<Complex<Real>>> m) {
  const std::size_t n = m.size();
  Complex<Real> det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    if (m[p][c] == Complex<Real>(0)) return Complex<Real>(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Complex<Real> f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

template <class Real>
PeriodMatrix<Real> period_matrix(const Curve<Real>& curve, const CycleBasis<Real>& basis,
                                 const CompiledForms<Real>& forms, const QuadParams& qp = {}) {
  PeriodMatrix<Real> pm;
  pm.t = basis.t;
  pm.entries.assign(forms.size(), std::vector<Complex<Real>>(basis.cycles.size()));
  for (std::size_t j = 0; j < basis.cycles.size(); ++j) {
    IntegrationInfo info;
    const auto col = integrate_cycle(curve, basis, basis.cycles[j], forms, qp, &info);
    for (std::size_t i = 0; i < forms.size(); ++i) pm.entries[i][j] = col[i];
    pm.info.push_back(info);
  }
  if (forms.size() == basis.cycles.size()) pm.det = complex_det(pm.entries);
  return pm;
}

}  // namespace hyperpf::periods
