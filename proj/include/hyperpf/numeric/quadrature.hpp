#pragma once

// Gauss-Legendre rules and adaptive vector-valued quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hyperpf::numeric {

template <class Real>
struct GaussRule {
  std::vector<Real> nodes;    // on [-1, 1]
  std::vector<Real> weights;
};

/// Nodes and weights by Newton iteration on P_m.
template <class Real>
GaussRule<Real> gauss_legendre(int m) {
  GaussRule<Real> rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  const Real pi = std::acos(Real(-1));
  for (int i = 0; i < (m + 1) / 2; ++i) {
    Real x = std::cos(pi * (Real(i) + Real(0.75)) / (Real(m) + Real(0.5)));
    Real dp = 0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 4 * std::numeric_limits<Real>::epsilon()) break;
    }
    {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1);
    }
    const Real w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(m - 1 - i)] = w;
  }
  return rule;
}

template <class Real>
const GaussRule<Real>& gauss16() {
  static const GaussRule<Real> rule = gauss_legendre<Real>(16);
  return rule;
}

struct QuadStats {
  int panels = 0;
  int evaluations = 0;
  double est_error = 0;  // largest accepted |whole - halves| relative to scale
  bool converged = true;
};

/// Integrates a vector-valued f over [lo, hi]. A panel is accepted when the
/// 16-point value and the sum over its two halves agree to tol times the L1
/// scale of each component, or to the caller's absolute noise floor (the
/// rounding level of an integrand that cancels internally). Refinement also
/// stops, unconverged, once max_evaluations is spent.
template <class Real>
class AdaptiveQuad {
 public:
  using Complex = std::complex<Real>;
  using Fn = std::function<void(Real, std::vector<Complex>&)>;

  AdaptiveQuad(Real tol = Real(1e-10), int max_depth = 30, int max_evaluations = 400000)
      : tol_(tol), max_depth_(max_depth), max_evaluations_(max_evaluations) {}

  std::vector<Complex> integrate(const Fn& f, std::size_t dim, Real lo, Real hi, QuadStats* stats = nullptr,
                                 const std::vector<Real>& noise_floor = {}) const {
    QuadStats local;
    QuadStats& st = stats ? *stats : local;
    std::vector<Real> l1(dim, Real(0));
    std::vector<Complex> whole = panel(f, dim, lo, hi, st, &l1);
    // Coarse L1 scale from a uniform 4-panel pass.
    std::vector<Real> scale(dim, Real(0));
    {
      std::vector<Real> acc(dim, Real(0));
      const Real w = (hi - lo) / 4;
      for (int k = 0; k < 4; ++k) panel(f, dim, lo + k * w, lo + (k + 1) * w, st, &acc);
      for (std::size_t c = 0; c < dim; ++c) scale[c] = std::max(acc[c], l1[c]);
    }
    Real smax = 0;
    for (auto s : scale) smax = std::max(smax, s);
    for (auto& s : scale) s = std::max(s, smax * std::numeric_limits<Real>::epsilon() * 16);
    if (!noise_floor.empty())
      for (std::size_t c = 0; c < dim; ++c) scale[c] = std::max(scale[c], noise_floor[c] / tol_);
    std::vector<Complex> out(dim, Complex(0));
    recurse(f, dim, lo, hi, whole, scale, 0, st, out);
    return out;
  }

 private:
  std::vector<Complex> panel(const Fn& f, std::size_t dim, Real lo, Real hi, QuadStats& st,
                             std::vector<Real>* l1 = nullptr) const {
    const auto& rule = gauss16<Real>();
    const Real half = (hi - lo) / 2, mid = (hi + lo) / 2;
    std::vector<Complex> sum(dim, Complex(0)), val(dim);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      f(mid + half * rule.nodes[k], val);
      ++st.evaluations;
      for (std::size_t c = 0; c < dim; ++c) {
        sum[c] += rule.weights[k] * val[c];
        if (l1) (*l1)[c] += std::abs(half) * rule.weights[k] * std::abs(val[c]);
      }
    }
    for (auto& s : sum) s *= half;
    return sum;
  }

  void recurse(const Fn& f, std::size_t dim, Real lo, Real hi, const std::vector<Complex>& whole,
               const std::vector<Real>& scale, int depth, QuadStats& st, std::vector<Complex>& out) const {
    const Real mid = (lo + hi) / 2;
    const auto left = panel(f, dim, lo, mid, st);
    const auto right = panel(f, dim, mid, hi, st);
    Real worst = 0;
    for (std::size_t c = 0; c < dim; ++c) worst = std::max(worst, std::abs(left[c] + right[c] - whole[c]) / scale[c]);
    if (worst <= tol_ || depth >= max_depth_ || st.evaluations >= max_evaluations_) {
      if (worst > tol_) st.converged = false;
      st.panels += 2;
      st.est_error = std::max(st.est_error, static_cast<double>(worst));
      for (std::size_t c = 0; c < dim; ++c) out[c] += left[c] + right[c];
      return;
    }
    recurse(f, dim, lo, mid, left, scale, depth + 1, st, out);
    recurse(f, dim, mid, hi, right, scale, depth + 1, st, out);
  }

  Real tol_;
  int max_depth_;
  int max_evaluations_;
};

}  // namespace hyperpf::numeric
