#pragma once

// Level curves y^2 = V(x) + t: branch points, vanishing-cycle bases and their
// continuation in t.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperpf/hamiltonian.hpp"
#include "hyperpf/numeric/roots.hpp"

namespace hyperpf::periods {

template <class Real>
using Complex = std::complex<Real>;

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NearCriticalError : public std::runtime_error {
 public:
  NearCriticalError(const std::string& msg, double distance) : std::runtime_error(msg), distance_(distance) {}
  double distance() const { return distance_; }

 private:
  double distance_;
};

/// Numeric view of H used by the period code.
template <class Real>
struct Curve {
  int n = 0;
  std::vector<Complex<Real>> V;   // ascending coefficients of V
  std::vector<Complex<Real>> dV;  // of V'
  std::vector<Complex<Real>> critical_values;

  explicit Curve(const HyperellipticHamiltonian& H) : n(H.n()) {
    V = H.V_coeffs<Real>();
    for (const auto& e : H.dV().coeffs()) dV.push_back(e.to_complex<Real>());
    for (const auto& v : critical_data<Real>(H).values) critical_values.push_back(v);
  }

  std::vector<Complex<Real>> shifted(const Complex<Real>& t) const {
    auto c = V;
    c[0] += t;
    return c;
  }

  Real distance_to_critical(const Complex<Real>& t) const {
    Real d = std::numeric_limits<Real>::infinity();
    for (const auto& v : critical_values) d = std::min(d, std::abs(t - v));
    return d;
  }

  Real value_scale() const {
    Real s = 1;
    for (const auto& v : critical_values) s = std::max(s, std::abs(v));
    return s;
  }
};

template <class Real>
struct BranchSet {
  Complex<Real> t;
  std::vector<Complex<Real>> roots;
  Real max_residual = 0;  // max |V(r)+t| / scale
  Real min_gap = 0;       // smallest |r_a - r_b|
  bool near_critical = false;
};

template <class Real>
Real root_scale(const std::vector<Complex<Real>>& roots) {
  Real s = 1;
  for (const auto& r : roots) s = std::max(s, std::abs(r));
  return s;
}

template <class Real>
Real min_pairwise_gap(const std::vector<Complex<Real>>& roots) {
  Real g = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j) g = std::min(g, std::abs(roots[i] - roots[j]));
  return g;
}

/// The n+1 roots of V + t, refined and sorted by (real, imag).
template <class Real>
BranchSet<Real> branch_points(const Curve<Real>& curve, const Complex<Real>& t) {
  BranchSet<Real> bs;
  bs.t = t;
  const auto c = curve.shifted(t);
  bs.roots = numeric::polynomial_roots<Real>(c, Real(1e-15));
  numeric::sort_lex(bs.roots);
  for (const auto& r : bs.roots)
    bs.max_residual = std::max(bs.max_residual, std::abs(numeric::horner(c, r)) / numeric::horner_scale(c, r));
  bs.min_gap = min_pairwise_gap(bs.roots);
  // Colliding roots separate like the square root of |t - t_crit|, so the
  // gap test alone misses levels that are close in t.
  bs.near_critical = bs.min_gap < Real(1e-8) * root_scale(bs.roots) ||
                     curve.distance_to_critical(t) < Real(1e-8) * curve.value_scale();
  return bs;
}

/// Straight segment between two branch points on a chosen sheet. The sheet is
/// fixed by y at the midpoint; along the segment
///   y(x) = y_mid sin(theta) prod_c sqrt((x - r_c)/(m - r_c)),
/// x = u + (v - u) sin^2(theta/2), which is continuous as long as no other
/// root lies on the segment.
template <class Real>
struct Segment {
  std::size_t u = 0, v = 0;  // indices into the root list
  Complex<Real> y_mid;
};

enum class PathMode { SegmentDoubling, Ellipse };

inline const char* path_mode_name(PathMode m) { return m == PathMode::Ellipse ? "ellipse" : "segment"; }

/// A cycle is twice the sum over a chain of sheeted segments (the lift of the
/// chain minus its image on the other sheet).
template <class Real>
struct Cycle {
  std::size_t a = 0, b = 0;  // root indices of the original pair
  std::vector<Segment<Real>> chain;
  PathMode mode = PathMode::SegmentDoubling;
  Real clearance = 0;        // min distance of other roots to the chain, relative to its length
};

template <class Real>
struct CycleBasis {
  Complex<Real> t;
  std::vector<Complex<Real>> roots;  // labels follow the roots under continuation
  std::vector<Cycle<Real>> cycles;
};

/// Distance from p to the segment [a, b] and the parameter of the nearest point.
template <class Real>
Real segment_distance(const Complex<Real>& p, const Complex<Real>& a, const Complex<Real>& b, Real* s_out = nullptr) {
  const Complex<Real> d = b - a;
  Real s = std::real((p - a) * std::conj(d)) / std::norm(d);
  s = std::clamp(s, Real(0), Real(1));
  if (s_out) *s_out = s;
  return std::abs(p - (a + s * d));
}

/// y at the point of parameter s in [0,1] on a segment (s = sin^2(theta/2)).
template <class Real>
Complex<Real> segment_y(const std::vector<Complex<Real>>& roots, const Segment<Real>& seg, Real s) {
  const Complex<Real> u = roots[seg.u], v = roots[seg.v];
  const Complex<Real> m = (u + v) / Real(2);
  const Complex<Real> x = u + s * (v - u);
  Complex<Real> prod = seg.y_mid * (Real(2) * std::sqrt(s * (1 - s)));
  for (std::size_t c = 0; c < roots.size(); ++c) {
    if (c == seg.u || c == seg.v) continue;
    prod *= std::sqrt((x - roots[c]) / (m - roots[c]));
  }
  return prod;
}

/// y_mid on the principal branch: i h sqrt(prod_c (m - r_c)), h = (v-u)/2.
template <class Real>
Complex<Real> principal_y_mid(const std::vector<Complex<Real>>& roots, std::size_t u, std::size_t v) {
  const Complex<Real> m = (roots[u] + roots[v]) / Real(2);
  const Complex<Real> h = (roots[v] - roots[u]) / Real(2);
  Complex<Real> g2(1);
  for (std::size_t c = 0; c < roots.size(); ++c)
    if (c != u && c != v) g2 *= m - roots[c];
  return Complex<Real>(0, 1) * h * std::sqrt(g2);
}

template <class Real>
Real chain_clearance(const std::vector<Complex<Real>>& roots, const std::vector<Segment<Real>>& chain) {
  Real best = std::numeric_limits<Real>::infinity();
  for (const auto& seg : chain) {
    const Real len = std::abs(roots[seg.v] - roots[seg.u]);
    for (std::size_t c = 0; c < roots.size(); ++c) {
      if (c == seg.u || c == seg.v) continue;
      best = std::min(best, segment_distance(roots[c], roots[seg.u], roots[seg.v]) / len);
    }
  }
  return best;
}

/// Below this relative clearance a single-segment cycle is integrated on a
/// confocal ellipse instead of the doubled segment.
template <class Real>
constexpr Real kEllipseClearance = Real(0.05);

template <class Real>
void classify_path(const std::vector<Complex<Real>>& roots, Cycle<Real>& cyc) {
  cyc.clearance = chain_clearance(roots, cyc.chain);
  cyc.mode = (cyc.chain.size() == 1 && cyc.clearance < kEllipseClearance<Real>) ? PathMode::Ellipse
                                                                                 : PathMode::SegmentDoubling;
}

/// n cycles around consecutive pairs of the sorted branch points.
template <class Real>
CycleBasis<Real> cycle_basis(const Curve<Real>& curve, const Complex<Real>& t) {
  const auto bs = branch_points(curve, t);
  if (bs.near_critical)
    throw NearCriticalError("level is near-critical: branch points collide", static_cast<double>(curve.distance_to_critical(t)));
  CycleBasis<Real> basis;
  basis.t = t;
  basis.roots = bs.roots;
  for (std::size_t k = 0; k + 1 < bs.roots.size(); ++k) {
    Cycle<Real> cyc;
    cyc.a = k;
    cyc.b = k + 1;
    cyc.chain.push_back({k, k + 1, principal_y_mid(bs.roots, k, k + 1)});
    classify_path(basis.roots, cyc);
    if (cyc.clearance < Real(1e-6)) throw TransportError("cycle path blocked by a third branch point");
    basis.cycles.push_back(std::move(cyc));
  }
  return basis;
}

namespace detail {

// Newton-continues the labelled roots to level t. Returns false when the
// labels cannot be followed unambiguously.
template <class Real>
bool continue_roots(const Curve<Real>& curve, const std::vector<Complex<Real>>& old_roots, const Complex<Real>& t,
                    std::vector<Complex<Real>>& out) {
  const auto c = curve.shifted(t);
  out.resize(old_roots.size());
  const Real gap = min_pairwise_gap(old_roots);
  for (std::size_t k = 0; k < old_roots.size(); ++k) {
    Complex<Real> z = old_roots[k];
    bool done = false;
    for (int it = 0; it < 50; ++it) {
      Complex<Real> p, dp;
      numeric::eval_with_derivative(c, z, p, dp);
      if (dp == Complex<Real>(0)) return false;
      const Complex<Real> step = p / dp;
      z -= step;
      if (std::abs(z - old_roots[k]) > Real(0.3) * gap) return false;
      if (std::abs(step) <= 8 * std::numeric_limits<Real>::epsilon() * std::max(Real(1), std::abs(z))) {
        done = true;
        break;
      }
    }
    if (!done) {
      Complex<Real> p, dp;
      numeric::eval_with_derivative(c, z, p, dp);
      if (std::abs(p) > Real(1e-12) * numeric::horner_scale(c, z)) return false;
    }
    out[k] = numeric::newton_polish(c, z, Real(1e-15));
  }
  // Distinct and each still nearest to its own predecessor.
  for (std::size_t k = 0; k < out.size(); ++k)
    for (std::size_t j = 0; j < out.size(); ++j)
      if (j != k && std::abs(out[k] - old_roots[j]) <= std::abs(out[k] - old_roots[k])) return false;
  return min_pairwise_gap(out) > Real(0.5) * gap;
}

// Relative position of p w.r.t. the segment u -> v: (p-u)/(v-u).
template <class Real>
Complex<Real> rel(const Complex<Real>& p, const Complex<Real>& u, const Complex<Real>& v) {
  return (p - u) / (v - u);
}

template <class Real>
bool crosses(const Complex<Real>& w0, const Complex<Real>& w1) {
  if ((w0.imag() > 0) == (w1.imag() > 0)) return false;
  const Real lam = w0.imag() / (w0.imag() - w1.imag());
  const Real re = w0.real() + lam * (w1.real() - w0.real());
  return re > 0 && re < 1;
}

// New y_mid on the segment u -> v at the new roots, sign chosen closest to
// the old sheet value.
template <class Real>
bool follow_sheet(const std::vector<Complex<Real>>& roots, Segment<Real>& seg, const Complex<Real>& old_y) {
  const Complex<Real> cand = principal_y_mid(roots, seg.u, seg.v);
  const Complex<Real> pick = std::abs(cand - old_y) <= std::abs(cand + old_y) ? cand : -cand;
  if (std::abs(pick - old_y) > Real(0.5) * std::abs(pick)) return false;
  seg.y_mid = pick;
  return true;
}

}  // namespace detail

/// Continues the basis along the straight path from basis.t to t1. Roots keep
/// their labels; when a root passes through a segment of a chain, the segment
/// is split at that root with sheets matched to the old segment.
template <class Real>
CycleBasis<Real> transport(const Curve<Real>& curve, CycleBasis<Real> basis, const Complex<Real>& t1,
                           int min_steps = 4) {
  const Complex<Real> t0 = basis.t;
  if (t0 == t1) return basis;
  Real done = 0;
  Real step = Real(1) / Real(std::max(1, min_steps));
  int halvings = 0;
  while (done < 1) {
    const Real next = std::min(Real(1), done + step);
    const Complex<Real> tn = t0 + next * (t1 - t0);
    std::vector<Complex<Real>> roots;
    bool ok = detail::continue_roots(curve, basis.roots, tn, roots);

    CycleBasis<Real> cand = basis;
    cand.t = tn;
    cand.roots = roots;
    bool crossing = false;
    if (ok) {
      for (auto& cyc : cand.cycles) {
        std::vector<Segment<Real>> chain;
        for (const auto& seg : cyc.chain) {
          // Crossing detection against every other root.
          std::size_t crosser = roots.size();
          for (std::size_t c = 0; c < roots.size() && crosser == roots.size(); ++c) {
            if (c == seg.u || c == seg.v) continue;
            const auto w0 = detail::rel(basis.roots[c], basis.roots[seg.u], basis.roots[seg.v]);
            const auto w1 = detail::rel(roots[c], roots[seg.u], roots[seg.v]);
            if (detail::crosses(w0, w1)) crosser = c;
          }
          if (crosser == roots.size()) {
            Segment<Real> s2 = seg;
            if (!detail::follow_sheet(roots, s2, seg.y_mid)) ok = false;
            chain.push_back(s2);
            continue;
          }
          // Split only once the root sits very close to the old segment.
          const Real len = std::abs(basis.roots[seg.v] - basis.roots[seg.u]);
          const Real dist = segment_distance(basis.roots[crosser], basis.roots[seg.u], basis.roots[seg.v]);
          if (dist > Real(1e-3) * len) {
            crossing = true;
            ok = false;
            break;
          }
          // Pieces u -> c and c -> v, sheets matched at their midpoints
          // against the old segment's continuous y.
          for (auto [p, q] : {std::pair{seg.u, crosser}, std::pair{crosser, seg.v}}) {
            Segment<Real> piece{p, q, Complex<Real>(0)};
            Real s = 0;
            const Complex<Real> mid_old = (basis.roots[p] + basis.roots[q]) / Real(2);
            segment_distance(mid_old, basis.roots[seg.u], basis.roots[seg.v], &s);
            const Complex<Real> y_ref = segment_y(basis.roots, seg, s);
            piece.y_mid = y_ref;
            // y_ref lives at the old roots; carry it to the new ones.
            if (!detail::follow_sheet(basis.roots, piece, y_ref) || !detail::follow_sheet(roots, piece, piece.y_mid))
              ok = false;
            chain.push_back(piece);
          }
        }
        if (!ok) break;
        cyc.chain = std::move(chain);
      }
    }
    if (ok) {
      for (auto& cyc : cand.cycles) {
        classify_path(cand.roots, cyc);
        if (cyc.clearance < Real(1e-9)) ok = false;
      }
    }
    if (!ok) {
      if (++halvings > 40 || (!crossing && halvings > 20))
        throw TransportError("cycle continuation failed after repeated step halving");
      step /= 2;
      continue;
    }
    basis = std::move(cand);
    done = next;
    halvings = 0;
    step = std::min(step * Real(1.5), Real(1) / Real(std::max(1, min_steps)));
  }
  basis.t = t1;
  return basis;
}

}  // namespace hyperpf::periods
