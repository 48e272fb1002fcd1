#pragma once

// Numeric checks of the Wronskian identities. Periods come from contour
// integration and derivatives from Cauchy integrals, never from the
// Picard-Fuchs system itself.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hyperpf/flatness/certificate.hpp"
#include "hyperpf/periods/cauchy.hpp"
#include "hyperpf/picardfuchs.hpp"

namespace hyperpf::flatness {

template <class Real>
using Cx = std::complex<Real>;
using cd = std::complex<double>;

template <class Real>
Cx<Real> eval_at(const ExactPoly& p, const Cx<Real>& t) {
  return p.eval<Cx<Real>>(t);
}

template <class Real>
Cx<Real> eval_at(const UniPoly<Cx<Real>>& p, const Cx<Real>& t) {
  return p.eval(t);
}

template <class Real>
Cx<Real> ipow(Cx<Real> z, int k) {
  Cx<Real> r(1);
  for (; k > 0; --k) r *= z;
  return r;
}

struct Comparison {
  double rel_err = 0;
  bool log_scale = false;
};

/// |lhs - rhs| / max(|lhs|, |rhs|); when the magnitudes leave [1e-12, 1e12]
/// the complex logarithm of the ratio (log-modulus plus phase) is used.
template <class Real>
Comparison compare_values(const Cx<Real>& lhs, const Cx<Real>& rhs) {
  const Real big = std::max(std::abs(lhs), std::abs(rhs));
  if (big == 0) return {};
  const bool logs = big > Real(1e12) || big < Real(1e-12);
  if (logs && std::abs(lhs) > 0 && std::abs(rhs) > 0)
    return {static_cast<double>(std::abs(std::log(lhs / rhs))), true};
  return {static_cast<double>(std::abs(lhs - rhs) / big), false};
}

template <class Real>
std::vector<Cx<Real>> to_complex_row(const std::vector<Exact>& q) {
  std::vector<Cx<Real>> out;
  for (const auto& e : q) out.push_back(e.template to_complex<Real>());
  return out;
}

/// Wronskian det[y_j^{(k)}], k < cycles.size(), of y_j = sum_i coeff_i * (form i on cycle j).
template <class Real>
struct WronskianValue {
  Cx<Real> value;
  Real hadamard = 0;  // product of column norms
};

template <class Real>
WronskianValue<Real> wronskian(const periods::Derivatives<Real>& der, const std::vector<Cx<Real>>& coeff,
                               const std::vector<std::size_t>& cycles) {
  const std::size_t m = cycles.size();
  std::vector<std::vector<Cx<Real>>> w(m, std::vector<Cx<Real>>(m));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j) {
      Cx<Real> v(0);
      for (std::size_t i = 0; i < coeff.size(); ++i) v += coeff[i] * der.d[k][i][cycles[j]];
      w[k][j] = v;
    }
  WronskianValue<Real> out;
  out.hadamard = 1;
  for (std::size_t j = 0; j < m; ++j) {
    Real s = 0;
    for (std::size_t k = 0; k < m; ++k) s += std::norm(w[k][j]);
    out.hadamard *= std::sqrt(s);
  }
  out.value = periods::complex_det(w);
  return out;
}

inline std::vector<std::size_t> all_cycles(int n) {
  std::vector<std::size_t> c(static_cast<std::size_t>(n));
  std::iota(c.begin(), c.end(), std::size_t(0));
  return c;
}

/// A level far from every critical value: the best of eight points on a
/// circle of radius (1 + max|t_i|)/2.
template <class Real>
Cx<Real> reference_level(const periods::Curve<Real>& curve) {
  const Real pi = std::acos(Real(-1));
  const Real R = curve.value_scale() / 2;
  Cx<Real> best(0);
  Real bestd = -1;
  for (int k = 0; k < 8; ++k) {
    const Cx<Real> t = std::polar(R, pi * (Real(k) + Real(0.5)) / 4);
    const Real d = curve.distance_to_critical(t);
    if (d > bestd) bestd = d, best = t;
  }
  return best;
}

/// Transport along the straight line, falling back to dog-legs through
/// points off the line when the direct path runs too close to a critical value.
template <class Real>
periods::CycleBasis<Real> transport_to(const periods::Curve<Real>& curve, const periods::CycleBasis<Real>& basis,
                                       const Cx<Real>& t1) {
  try {
    return periods::transport(curve, basis, t1);
  } catch (const periods::TransportError&) {
  }
  const Cx<Real> mid = (basis.t + t1) / Real(2);
  const Real len = std::max(std::abs(t1 - basis.t), Real(1e-3));
  for (int k = 1; k <= 6; ++k) {
    const Cx<Real> off = Cx<Real>(0, (k % 2 ? 1 : -1) * Real((k + 1) / 2) * len / 2) * (t1 - basis.t) / len;
    try {
      return periods::transport(curve, periods::transport(curve, basis, mid + off), t1);
    } catch (const periods::TransportError&) {
    }
  }
  throw periods::TransportError("no admissible transport path between levels");
}

template <class Real>
void reject_near_critical(const periods::Curve<Real>& curve, const Cx<Real>& t, double rel = 1e-6) {
  const Real d = curve.distance_to_critical(t);
  if (d < Real(rel) * curve.value_scale())
    throw periods::NearCriticalError("sample is too close to a critical value", static_cast<double>(d));
}

struct IdentitySample {
  cd t;
  cd lhs, rhs;
  double rel_err = 0;
  bool log_scale = false;
  double rho = 0;  // Cauchy radius
  int nodes = 0;
  double closure_error = 0;
  double wronskian_over_hadamard = 0;
};

struct IdentityReport {
  int identity = 0;
  int n = 0;
  std::vector<IdentitySample> samples;
  int deg_delta = -1;
  int deg_bound = 0;
  int exponent = 0;         // power of P on the right-hand side
  bool degenerate = false;  // Delta == 0: both sides checked against 0
  double tol = 0;
  double max_rel_err = 0;
  bool pass = false;
  std::optional<cd> c_const;  // identity 6: det P / prod (t - t_i) at t_ref
  std::optional<cd> t_ref;
  std::string derivative_method = "cauchy-circle";
};

template <class Real>
void finish(IdentityReport& rep) {
  rep.max_rel_err = 0;
  for (const auto& s : rep.samples) rep.max_rel_err = std::max(rep.max_rel_err, s.rel_err);
  rep.pass = !rep.samples.empty() && rep.max_rel_err <= rep.tol;
}

template <class Real>
IdentitySample identity_sample(const periods::Curve<Real>& curve, const periods::CycleBasis<Real>& basis,
                               const FlatnessCertificate& cert, const PicardFuchsSystem& sys,
                               const std::vector<Cx<Real>>& q0, const std::optional<Cx<Real>>& c_const,
                               const periods::CauchyParams& cp) {
  const int n = sys.n;
  const auto forms = periods::CompiledForms<Real>::basis(n);
  const Cx<Real> t = basis.t;
  const auto der = periods::cauchy_derivatives(curve, basis, forms, n - 1, cp);
  const auto W = wronskian(der, q0, all_cycles(n));
  const Cx<Real> Pt = eval_at<Real>(sys.P, t);
  const Cx<Real> rhs = ipow(Pt, n * (n - 1) / 2) * W.value;
  Cx<Real> det;
  if (c_const)
    det = *c_const * Pt;
  else
    det = periods::period_matrix(curve, basis, forms, cp.quad).det;
  const Cx<Real> lhs = eval_at<Real>(cert.delta, t) * det;
  IdentitySample s;
  s.t = cd(static_cast<double>(t.real()), static_cast<double>(t.imag()));
  s.lhs = cd(static_cast<double>(lhs.real()), static_cast<double>(lhs.imag()));
  s.rhs = cd(static_cast<double>(rhs.real()), static_cast<double>(rhs.imag()));
  s.rho = static_cast<double>(der.rho);
  s.nodes = der.nodes;
  s.closure_error = static_cast<double>(der.closure_error);
  s.wronskian_over_hadamard = W.hadamard > 0 ? static_cast<double>(std::abs(W.value) / W.hadamard) : 0.0;
  if (cert.delta_identically_zero) {
    // Both sides must vanish; the Wronskian is measured against its Hadamard bound.
    s.rel_err = s.wronskian_over_hadamard;
  } else {
    const auto cmp = compare_values(lhs, rhs);
    s.rel_err = cmp.rel_err;
    s.log_scale = cmp.log_scale;
  }
  return s;
}

/// Delta(t) det(period matrix)(t) against P(t)^{n(n-1)/2} W(t), each sample
/// with its own cycle basis.
template <class Real>
IdentityReport verify_identity3(const HyperellipticHamiltonian& H, const PicardFuchsSystem& sys,
                                const std::vector<Exact>& q0, const std::vector<Cx<Real>>& samples, double tol,
                                const periods::CauchyParams& cp = {}) {
  const periods::Curve<Real> curve(H);
  const auto cert = sigma_delta(sys, q0);
  IdentityReport rep;
  rep.identity = 3;
  rep.n = sys.n;
  rep.deg_delta = cert.delta.degree();
  rep.deg_bound = cert.deg_bound;
  rep.exponent = sys.n * (sys.n - 1) / 2;
  rep.degenerate = cert.delta_identically_zero;
  rep.tol = tol;
  const auto qc = to_complex_row<Real>(q0);
  for (const auto& t : samples) {
    reject_near_critical(curve, t);
    rep.samples.push_back(identity_sample<Real>(curve, periods::cycle_basis(curve, t), cert, sys, qc, std::nullopt, cp));
  }
  finish<Real>(rep);
  return rep;
}

/// Delta(t) c prod(t - t_i) against P(t)^{n(n-1)/2} W(t). The constant c is
/// read off once at a reference level, and every sample uses the basis
/// transported from there.
template <class Real>
IdentityReport verify_identity6(const HyperellipticHamiltonian& H, const PicardFuchsSystem& sys,
                                const std::vector<Exact>& q0, const std::vector<Cx<Real>>& samples, double tol,
                                const periods::CauchyParams& cp = {}) {
  const periods::Curve<Real> curve(H);
  const auto cert = sigma_delta(sys, q0);
  IdentityReport rep;
  rep.identity = 6;
  rep.n = sys.n;
  rep.deg_delta = cert.delta.degree();
  rep.deg_bound = cert.deg_bound;
  rep.exponent = sys.n * (sys.n - 1) / 2;
  rep.degenerate = cert.delta_identically_zero;
  rep.tol = tol;
  const Cx<Real> tref = reference_level(curve);
  const auto bref = periods::cycle_basis(curve, tref);
  const auto pm = periods::period_matrix(curve, bref, periods::CompiledForms<Real>::basis(sys.n), cp.quad);
  const Cx<Real> c = pm.det / eval_at<Real>(sys.P, tref);
  rep.c_const = cd(static_cast<double>(c.real()), static_cast<double>(c.imag()));
  rep.t_ref = cd(static_cast<double>(tref.real()), static_cast<double>(tref.imag()));
  const auto qc = to_complex_row<Real>(q0);
  for (const auto& t : samples) {
    reject_near_critical(curve, t);
    rep.samples.push_back(identity_sample<Real>(curve, transport_to(curve, bref, t), cert, sys, qc, c, cp));
  }
  finish<Real>(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// The reduced system for odd n.

template <class Real>
using CxMatrix = Eigen::Matrix<Cx<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CxPoly = UniPoly<Cx<Real>>;

template <class Real>
struct ReducedSystem {
  int n = 0;
  int nu = 0;                     // (n-3)(n-2)/2
  CxMatrix<Real> T;               // row i: the i-th adapted form in the Petrov basis
  std::vector<Cx<Real>> eigenvalues;  // of A, in the order used for the rows
  CxMatrix<Real> A1, B1;          // T A T^{-1}, T B T^{-1}
  std::vector<std::vector<CxPoly<Real>>> C1;    // T C T^{-1}
  std::vector<std::vector<CxPoly<Real>>> Cbar;  // (n-2) x (n-2) corner
  std::vector<Cx<Real>> res_const, res_slope;   // residues of the adapted forms
  double residue_independence = 0;  // normalized 2x2 determinant of the chosen pair
  bool residues_independent = false;
  double residue_zero_error = 0;    // max |residue| over the first n-2 forms
  double a_structure = 0;           // max |a'_{i,n-1}| (i != n-1), |a'_{i,n}| (i != n), relative
  double b_structure = 0;           // max |b'_{i,n-1}|, |b'_{i,n}| for i <= n-1, relative
  double c_structure = 0;           // max coefficient of C'_{i,j}, i <= n-2, j >= n-1, relative
  double tol = 1e-10;
  bool structure_ok = false;
};

/// Sum_{k,l} L_{ik} M_{kl}(t) R_{lj} for an exact polynomial matrix M.
template <class Real>
std::vector<std::vector<CxPoly<Real>>> conjugate(const CxMatrix<Real>& L, const PolyMatrix& M, const CxMatrix<Real>& R) {
  const auto n = static_cast<std::size_t>(L.rows());
  std::vector<std::vector<CxPoly<Real>>> out(n, std::vector<CxPoly<Real>>(n, CxPoly<Real>::zero('t')));
  std::vector<std::vector<CxPoly<Real>>> Mc(n, std::vector<CxPoly<Real>>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) Mc[k][l] = poly_cast<Cx<Real>>(M(k, l));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          const Cx<Real> s = L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) *
                             R(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j));
          if (s != Cx<Real>(0) && !Mc[k][l].is_zero()) out[i][j] = out[i][j] + Mc[k][l] * s;
        }
  return out;
}

template <class Real>
Real max_coeff(const CxPoly<Real>& p) {
  Real m = 0;
  for (const auto& c : p.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

/// Eigenbasis of A, the two forms with independent residues moved last and
/// normalized (constant residue, then affine), and the first n-2 forms
/// corrected to zero residue. The claimed zero pattern of A', B' and C' is
/// measured and reported.
template <class Real>
ReducedSystem<Real> reduced_system(const HyperellipticHamiltonian& H, const PicardFuchsSystem& sys,
                                   const ResidueProfile& profile, double tol = 1e-10) {
  const int n = sys.n;
  if (n % 2 == 0 || !profile.applicable) throw std::invalid_argument("the reduced system needs odd n");
  if (n < 3) throw std::invalid_argument("the reduced system needs n >= 3");
  (void)H;
  ReducedSystem<Real> rs;
  rs.n = n;
  rs.nu = (n - 3) * (n - 2) / 2;
  rs.tol = tol;
  const auto N = static_cast<Eigen::Index>(n);
  const CxMatrix<Real> A = to_eigen<Real>(sys.A), B = to_eigen<Real>(sys.B);

  // Left eigenvectors of A are right eigenvectors of A^T.
  Eigen::ComplexEigenSolver<CxMatrix<Real>> es(A.transpose());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const auto la = es.eigenvalues()(a), lb = es.eigenvalues()(b);
    return la.real() != lb.real() ? la.real() < lb.real() : la.imag() < lb.imag();
  });
  CxMatrix<Real> T(N, N);
  std::vector<Cx<Real>> lam;
  for (Eigen::Index r = 0; r < N; ++r) {
    auto v = es.eigenvectors().col(order[static_cast<std::size_t>(r)]);
    Eigen::Index big = 0;
    for (Eigen::Index k = 1; k < N; ++k)
      if (std::abs(v(k)) > std::abs(v(big))) big = k;
    T.row(r) = (v / v(big)).transpose();
    lam.push_back(es.eigenvalues()(order[static_cast<std::size_t>(r)]));
  }

  Eigen::Matrix<Cx<Real>, Eigen::Dynamic, 1> alpha(N), beta(N);
  for (int i = 0; i < n; ++i) {
    alpha(i) = profile.rho[static_cast<std::size_t>(i)].coeff(0).template to_complex<Real>();
    beta(i) = profile.rho[static_cast<std::size_t>(i)].coeff(1).template to_complex<Real>();
  }
  auto residues = [&](const CxMatrix<Real>& M) { return std::make_pair(CxMatrix<Real>(M * alpha), CxMatrix<Real>(M * beta)); };

  // Pick the best-conditioned pair of eigenforms with independent residues.
  auto [al, be] = residues(T);
  Eigen::Index p = 0, q = 1;
  Real best = -1;
  for (Eigen::Index a = 0; a < N; ++a)
    for (Eigen::Index b = a + 1; b < N; ++b) {
      const Real na = std::hypot(std::abs(al(a)), std::abs(be(a))), nb = std::hypot(std::abs(al(b)), std::abs(be(b)));
      if (na == 0 || nb == 0) continue;
      const Real d = std::abs(al(a) * be(b) - al(b) * be(a)) / (na * nb);
      if (d > best) best = d, p = a, q = b;
    }
  rs.residue_independence = static_cast<double>(std::max(best, Real(0)));
  rs.residues_independent = best > Real(1e-8);
  if (std::abs(be(p)) > std::abs(be(q))) std::swap(p, q);  // the last form carries the larger slope
  std::vector<Eigen::Index> perm;
  for (Eigen::Index r = 0; r < N; ++r)
    if (r != p && r != q) perm.push_back(r);
  perm.push_back(p);
  perm.push_back(q);
  CxMatrix<Real> Tp(N, N);
  std::vector<Cx<Real>> lamp;
  for (Eigen::Index r = 0; r < N; ++r) {
    Tp.row(r) = T.row(perm[static_cast<std::size_t>(r)]);
    lamp.push_back(lam[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])]);
  }
  T = Tp;
  rs.eigenvalues = lamp;

  const Eigen::Index last = N - 1, prev = N - 2;
  std::tie(al, be) = residues(T);
  if (std::abs(be(last)) > 0) T.row(prev) -= (be(prev) / be(last)) * T.row(last);
  std::tie(al, be) = residues(T);
  for (Eigen::Index i = 0; i < prev; ++i) {
    if (std::abs(be(last)) > 0) T.row(i) -= (be(i) / be(last)) * T.row(last);
    std::tie(al, be) = residues(T);
    if (std::abs(al(prev)) > 0) T.row(i) -= (al(i) / al(prev)) * T.row(prev);
    std::tie(al, be) = residues(T);
  }
  rs.T = T;
  for (Eigen::Index i = 0; i < N; ++i) {
    rs.res_const.push_back(al(i));
    rs.res_slope.push_back(be(i));
  }
  Real rscale = 0;
  for (Eigen::Index i = 0; i < N; ++i) rscale = std::max({rscale, std::abs(al(i)), std::abs(be(i))});
  for (Eigen::Index i = 0; i < prev; ++i)
    rs.residue_zero_error = std::max(rs.residue_zero_error,
                                     static_cast<double>(std::max(std::abs(al(i)), std::abs(be(i))) / std::max(rscale, Real(1e-300))));

  const CxMatrix<Real> Tinv = T.inverse();
  rs.A1 = T * A * Tinv;
  rs.B1 = T * B * Tinv;
  const Real amax = rs.A1.cwiseAbs().maxCoeff(), bmax = rs.B1.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < N; ++i) {
    if (i != prev) rs.a_structure = std::max(rs.a_structure, static_cast<double>(std::abs(rs.A1(i, prev)) / amax));
    if (i != last) rs.a_structure = std::max(rs.a_structure, static_cast<double>(std::abs(rs.A1(i, last)) / amax));
  }
  for (Eigen::Index i = 0; i < last; ++i)
    rs.b_structure = std::max({rs.b_structure, static_cast<double>(std::abs(rs.B1(i, prev)) / bmax),
                               static_cast<double>(std::abs(rs.B1(i, last)) / bmax)});

  // C' = Adj(tE - A') B' = T Adj(tE - A) B T^{-1} = T C T^{-1}.
  rs.C1 = conjugate<Real>(T, sys.C, Tinv);
  Real cmax = 0;
  for (const auto& row : rs.C1)
    for (const auto& e : row) cmax = std::max(cmax, max_coeff(e));
  for (Eigen::Index i = 0; i < prev; ++i)
    for (Eigen::Index j : {prev, last})
      rs.c_structure = std::max(rs.c_structure, static_cast<double>(max_coeff(rs.C1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) / cmax));
  const auto m = static_cast<std::size_t>(n - 2);
  rs.Cbar.assign(m, std::vector<CxPoly<Real>>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) rs.Cbar[i][j] = rs.C1[i][j];
  rs.structure_ok = rs.residues_independent && rs.a_structure <= tol && rs.b_structure <= tol && rs.c_structure <= tol;
  return rs;
}

/// Rows q_0..q_{count-1} of q_{k+1} = P q_k' + q_k Cbar.
template <class Real>
std::vector<std::vector<CxPoly<Real>>> reduced_rows(const ReducedSystem<Real>& rs, const ExactPoly& P,
                                                    const std::vector<Cx<Real>>& c, int count) {
  const std::size_t m = rs.Cbar.size();
  const CxPoly<Real> Pc = poly_cast<Cx<Real>>(P);
  std::vector<std::vector<CxPoly<Real>>> rows;
  std::vector<CxPoly<Real>> q(m);
  for (std::size_t i = 0; i < m; ++i) q[i] = CxPoly<Real>::constant(c[i], 't');
  for (int k = 0; k < count; ++k) {
    rows.push_back(q);
    std::vector<CxPoly<Real>> nq(m, CxPoly<Real>::zero('t'));
    for (std::size_t j = 0; j < m; ++j) {
      nq[j] = Pc * q[j].derivative();
      for (std::size_t i = 0; i < m; ++i) nq[j] = nq[j] + q[i] * rs.Cbar[i][j];
    }
    q = std::move(nq);
  }
  return rows;
}

/// Coefficients of a polynomial of degree < count from values at count
/// points t0 + r e^{2 pi i j / count}, in powers of (t - t0).
template <class Real>
std::vector<Cx<Real>> circle_coefficients(const std::vector<Cx<Real>>& values, Real r) {
  const std::size_t M = values.size();
  const Real pi = std::acos(Real(-1));
  std::vector<Cx<Real>> a(M, Cx<Real>(0));
  for (std::size_t k = 0; k < M; ++k) {
    for (std::size_t j = 0; j < M; ++j) a[k] += values[j] * std::polar(Real(1), -2 * pi * Real(k * j) / Real(M));
    a[k] /= Real(M);
    a[k] /= std::pow(r, Real(k));
  }
  return a;
}

/// Highest k with |a_k| r^k above rel times the largest such term.
template <class Real>
int numeric_degree(const std::vector<Cx<Real>>& a, Real r, double rel) {
  Real big = 0;
  for (std::size_t k = 0; k < a.size(); ++k) big = std::max(big, std::abs(a[k]) * std::pow(r, Real(k)));
  int d = -1;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k]) * std::pow(r, Real(k)) > Real(rel) * big) d = static_cast<int>(k);
  return d;
}

struct DegreeProbe {
  int nodes = 0;
  double radius = 0;
  cd centre;
  int numeric_degree = -1;
  double top_ratio = 0;  // |a_{nodes-1}| r^{nodes-1} / max_k |a_k| r^k
  int bound = 0;
  bool ok = false;
};

/// Polynomial test for det(rows of T applied to the period matrix, restricted
/// to `cycles`) on `nodes` points of a circle, the basis carried around it.
template <class Real>
DegreeProbe determinant_degree_probe(const periods::Curve<Real>& curve, const periods::CycleBasis<Real>& basis0,
                                     const CxMatrix<Real>& rowsT, const std::vector<std::size_t>& cycles, int nodes,
                                     int bound, double rel = 1e-6, periods::CauchyParams cp = {}) {
  cp.min_nodes = nodes;
  const auto forms = periods::CompiledForms<Real>::basis(curve.n);
  const auto cs = periods::sample_circle(curve, basis0, forms, 0, cp);
  std::vector<Cx<Real>> dets;
  const auto m = static_cast<std::size_t>(rowsT.rows());
  for (const auto& node : cs.values) {
    std::vector<std::vector<Cx<Real>>> M(m, std::vector<Cx<Real>>(cycles.size()));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < cycles.size(); ++j) {
        Cx<Real> v(0);
        for (int k = 0; k < curve.n; ++k)
          v += rowsT(static_cast<Eigen::Index>(i), k) * node[static_cast<std::size_t>(k)][cycles[j]];
        M[i][j] = v;
      }
    dets.push_back(periods::complex_det(M));
  }
  const auto a = circle_coefficients(dets, cs.rho);
  DegreeProbe pr;
  pr.nodes = cs.nodes;
  pr.radius = static_cast<double>(cs.rho);
  pr.centre = cd(static_cast<double>(cs.t0.real()), static_cast<double>(cs.t0.imag()));
  pr.bound = bound;
  pr.numeric_degree = numeric_degree(a, cs.rho, rel);
  Real big = 0;
  for (std::size_t k = 0; k < a.size(); ++k) big = std::max(big, std::abs(a[k]) * std::pow(cs.rho, Real(k)));
  pr.top_ratio = big > 0 ? static_cast<double>(std::abs(a.back()) * std::pow(cs.rho, Real(a.size() - 1)) / big) : 0.0;
  pr.ok = pr.numeric_degree <= bound;
  return pr;
}

struct Identity8Report {
  IdentityReport base;
  int nu = 0;
  double b_structure = 0, c_structure = 0, a_structure = 0;
  bool structure_ok = false;
  bool residues_independent = false;
  std::vector<std::vector<std::size_t>> cycles_used;  // per sample
  int deg_delta_bar = -1;
  int deg_delta_bar_bound = 0;
  bool deg_delta_bar_ok = false;
  DegreeProbe det_tilde;
  bool adapted_basis_found = true;
  bool pass = false;
};

/// Delta-bar(t) det P-tilde(t) against P(t)^nu W-bar(t) for omega = sum c_i
/// (adapted form i), i <= n-2, over the (n-2)-subset of cycles with the best
/// conditioned Wronskian.
template <class Real>
Identity8Report verify_identity8(const HyperellipticHamiltonian& H, const PicardFuchsSystem& sys,
                                 const ReducedSystem<Real>& rs, const std::vector<Cx<Real>>& c,
                                 const std::vector<Cx<Real>>& samples, double tol, const periods::CauchyParams& cp = {}) {
  const int n = sys.n;
  const auto m = static_cast<std::size_t>(n - 2);
  if (c.size() != m) throw std::invalid_argument("identity 8 needs n-2 coordinates");
  const periods::Curve<Real> curve(H);
  Identity8Report rep;
  rep.base.identity = 8;
  rep.base.n = n;
  rep.base.tol = tol;
  rep.base.exponent = rs.nu;
  rep.nu = rs.nu;
  rep.a_structure = rs.a_structure;
  rep.b_structure = rs.b_structure;
  rep.c_structure = rs.c_structure;
  rep.structure_ok = rs.structure_ok;
  rep.residues_independent = rs.residues_independent;

  const auto rows = reduced_rows(rs, sys.P, c, static_cast<int>(m));
  int dmax = 0;
  for (const auto& r : rows) {
    int d = -1;
    for (const auto& e : r) d = std::max(d, e.degree());
    dmax += std::max(d, 0);
  }
  auto delta_bar = [&](const Cx<Real>& t) {
    std::vector<std::vector<Cx<Real>>> M(m, std::vector<Cx<Real>>(m));
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < m; ++j) M[k][j] = rows[k][j].eval(t);
    return periods::complex_det(M);
  };
  {
    // Exact interpolation of Delta-bar on dmax+1 points of the unit circle.
    const int cnt = dmax + 1;
    std::vector<Cx<Real>> vals;
    const Real pi = std::acos(Real(-1));
    for (int j = 0; j < cnt; ++j) vals.push_back(delta_bar(std::polar(Real(1), 2 * pi * Real(j) / Real(cnt))));
    rep.deg_delta_bar = numeric_degree(circle_coefficients(vals, Real(1)), Real(1), 1e-9);
    rep.deg_delta_bar_bound = (n - 1) * (n - 2) * (n - 3) / 2;
    rep.deg_delta_bar_ok = rep.deg_delta_bar <= rep.deg_delta_bar_bound;
    rep.base.deg_delta = rep.deg_delta_bar;
    rep.base.deg_bound = rep.deg_delta_bar_bound;
  }

  // omega in the Petrov basis, and the first n-2 adapted rows.
  std::vector<Cx<Real>> w(static_cast<std::size_t>(n), Cx<Real>(0));
  for (std::size_t i = 0; i < m; ++i)
    for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(k)] += c[i] * rs.T(static_cast<Eigen::Index>(i), k);
  const CxMatrix<Real> Tm = rs.T.topRows(static_cast<Eigen::Index>(m));
  const auto forms = periods::CompiledForms<Real>::basis(n);

  std::vector<std::vector<std::size_t>> subsets;
  {
    std::vector<bool> pick(static_cast<std::size_t>(n), false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(m), true);
    do {
      std::vector<std::size_t> s;
      for (int k = 0; k < n; ++k)
        if (pick[static_cast<std::size_t>(k)]) s.push_back(static_cast<std::size_t>(k));
      subsets.push_back(s);
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }

  for (const auto& t : samples) {
    reject_near_critical(curve, t);
    const auto basis = periods::cycle_basis(curve, t);
    const auto der = periods::cauchy_derivatives(curve, basis, forms, static_cast<int>(m) - 1 + 1, cp);
    const auto pm = periods::period_matrix(curve, basis, forms, cp.quad);
    std::size_t bi = 0;
    Real bratio = -1;
    WronskianValue<Real> bw;
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      const auto W = wronskian(der, w, subsets[s]);
      const Real ratio = W.hadamard > 0 ? std::abs(W.value) / W.hadamard : Real(0);
      if (ratio > bratio) bratio = ratio, bi = s, bw = W;
    }
    if (bratio < Real(1e-10)) rep.adapted_basis_found = false;
    const auto& cyc = subsets[bi];
    std::vector<std::vector<Cx<Real>>> Pt(m, std::vector<Cx<Real>>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        Cx<Real> v(0);
        for (int k = 0; k < n; ++k) v += Tm(static_cast<Eigen::Index>(i), k) * pm.entries[static_cast<std::size_t>(k)][cyc[j]];
        Pt[i][j] = v;
      }
    const Cx<Real> lhs = delta_bar(t) * periods::complex_det(Pt);
    const Cx<Real> rhs = ipow(eval_at<Real>(sys.P, t), rs.nu) * bw.value;
    IdentitySample smp;
    smp.t = cd(static_cast<double>(t.real()), static_cast<double>(t.imag()));
    smp.lhs = cd(static_cast<double>(lhs.real()), static_cast<double>(lhs.imag()));
    smp.rhs = cd(static_cast<double>(rhs.real()), static_cast<double>(rhs.imag()));
    const auto cmp = compare_values(lhs, rhs);
    smp.rel_err = cmp.rel_err;
    smp.log_scale = cmp.log_scale;
    smp.rho = static_cast<double>(der.rho);
    smp.nodes = der.nodes;
    smp.closure_error = static_cast<double>(der.closure_error);
    smp.wronskian_over_hadamard = static_cast<double>(bratio);
    rep.base.samples.push_back(smp);
    rep.cycles_used.push_back(cyc);
  }
  finish<Real>(rep.base);

  // deg det P-tilde <= n, probed on n+2 points around a reference level with
  // the first cycle subset that is used at the first sample.
  const Cx<Real> tref = reference_level(curve);
  const auto bref = periods::cycle_basis(curve, tref);
  const auto cyc = rep.cycles_used.empty() ? subsets.front() : rep.cycles_used.front();
  rep.det_tilde = determinant_degree_probe(curve, bref, Tm, cyc, n + 2, n, 1e-6, cp);
  rep.pass = rep.base.pass && rep.det_tilde.ok && rep.structure_ok && rep.deg_delta_bar_ok && rep.adapted_basis_found;
  return rep;
}

// ---------------------------------------------------------------------------
// Other numeric checks.

/// D^k = sum_m c_{k,m}(t) d^m/dt^m for D = P d/dt, k = 0..kmax.
inline std::vector<std::vector<ExactPoly>> iterated_operator(const ExactPoly& P, int kmax) {
  std::vector<std::vector<ExactPoly>> c(static_cast<std::size_t>(kmax) + 1);
  c[0] = {ExactPoly::constant(Exact(1), 't')};
  for (int k = 0; k < kmax; ++k) {
    const auto& cur = c[static_cast<std::size_t>(k)];
    std::vector<ExactPoly> nxt(cur.size() + 1, ExactPoly::zero('t'));
    for (std::size_t m = 0; m < cur.size(); ++m) {
      nxt[m] = nxt[m] + P * cur[m].derivative();
      nxt[m + 1] = nxt[m + 1] + P * cur[m];
    }
    c[static_cast<std::size_t>(k) + 1] = std::move(nxt);
  }
  return c;
}

struct RecursionReport {
  cd t;
  std::vector<double> rel_err;  // per k
  double max_rel_err = 0;
  double tol = 0;
  bool pass = false;
};

/// D^k(q0 . gamma) by Cauchy differentiation against q_k . gamma from direct
/// integration, k = 0..n-1, on every basis cycle.
template <class Real>
RecursionReport recursion_check(const HyperellipticHamiltonian& H, const PicardFuchsSystem& sys,
                                const std::vector<Exact>& q0, const Cx<Real>& t, double tol,
                                const periods::CauchyParams& cp = {}) {
  const int n = sys.n;
  const periods::Curve<Real> curve(H);
  reject_near_critical(curve, t);
  const auto basis = periods::cycle_basis(curve, t);
  const auto forms = periods::CompiledForms<Real>::basis(n);
  const auto der = periods::cauchy_derivatives(curve, basis, forms, n - 1, cp);
  const auto pm = periods::period_matrix(curve, basis, forms, cp.quad);
  const auto rows = qk_rows(sys, constant_row(q0), n);
  const auto ops = iterated_operator(sys.P, n - 1);
  const auto qc = to_complex_row<Real>(q0);
  RecursionReport rep;
  rep.t = cd(static_cast<double>(t.real()), static_cast<double>(t.imag()));
  rep.tol = tol;
  for (int k = 0; k < n; ++k) {
    Real worst = 0, scale = 0;
    for (int j = 0; j < n; ++j) {
      Cx<Real> lhs(0), rhs(0);
      const auto& op = ops[static_cast<std::size_t>(k)];
      for (std::size_t mm = 0; mm < op.size(); ++mm) {
        Cx<Real> dm(0);
        for (int i = 0; i < n; ++i) dm += qc[static_cast<std::size_t>(i)] * der.d[mm][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        lhs += eval_at<Real>(op[mm], t) * dm;
      }
      for (int i = 0; i < n; ++i)
        rhs += eval_at<Real>(rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)], t) *
               pm.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      worst = std::max(worst, std::abs(lhs - rhs));
      scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
    }
    rep.rel_err.push_back(scale > 0 ? static_cast<double>(worst / scale) : 0.0);
  }
  rep.max_rel_err = *std::max_element(rep.rel_err.begin(), rep.rel_err.end());
  rep.pass = rep.max_rel_err <= tol;
  return rep;
}

struct OdeResidualReport {
  cd t;
  int order = 0;
  double rel_err = 0;
  double tol = 0;
  bool pass = false;
};

/// Leading(t) D^l y - sum_i p_i(t) D^i y for y = q0 . (periods over each
/// basis cycle), with D^i y from Cauchy differentiation.
template <class Real>
OdeResidualReport scalar_ode_residual(const HyperellipticHamiltonian& H, const PicardFuchsSystem& sys,
                                      const ScalarOde& ode, const std::vector<Exact>& q0, const Cx<Real>& t,
                                      double tol, const periods::CauchyParams& cp = {}) {
  const int n = sys.n;
  const int l = ode.order;
  const periods::Curve<Real> curve(H);
  reject_near_critical(curve, t);
  const auto basis = periods::cycle_basis(curve, t);
  const auto forms = periods::CompiledForms<Real>::basis(n);
  const auto der = periods::cauchy_derivatives(curve, basis, forms, l, cp);
  const auto ops = iterated_operator(sys.P, l);
  const auto qc = to_complex_row<Real>(q0);
  OdeResidualReport rep;
  rep.t = cd(static_cast<double>(t.real()), static_cast<double>(t.imag()));
  rep.order = l;
  rep.tol = tol;
  Real worst = 0;
  for (int j = 0; j < n; ++j) {
    std::vector<Cx<Real>> Dy(static_cast<std::size_t>(l) + 1, Cx<Real>(0));
    for (int k = 0; k <= l; ++k) {
      const auto& op = ops[static_cast<std::size_t>(k)];
      for (std::size_t mm = 0; mm < op.size(); ++mm) {
        Cx<Real> dm(0);
        for (int i = 0; i < n; ++i) dm += qc[static_cast<std::size_t>(i)] * der.d[mm][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        Dy[static_cast<std::size_t>(k)] += eval_at<Real>(op[mm], t) * dm;
      }
    }
    Cx<Real> res = eval_at<Real>(ode.leading, t) * Dy[static_cast<std::size_t>(l)];
    Real scale = std::abs(res);
    for (int i = 0; i < l; ++i) {
      const Cx<Real> term = eval_at<Real>(ode.coeffs[static_cast<std::size_t>(i)], t) * Dy[static_cast<std::size_t>(i)];
      res -= term;
      scale += std::abs(term);
    }
    if (scale > 0) worst = std::max(worst, std::abs(res) / scale);
  }
  rep.rel_err = static_cast<double>(worst);
  rep.pass = rep.rel_err <= tol;
  return rep;
}

struct RankReport {
  int rows = 0, cols = 0;
  std::vector<double> singular_values;
  int rank = 0;
  double threshold = 1e-8;
};

/// Numeric dimension of the span of the n period functions of omega: rank of
/// the 2n x n matrix of normalized Taylor coefficients at t (one column per cycle).
template <class Real>
RankReport period_span_rank(const HyperellipticHamiltonian& H, const std::vector<Cx<Real>>& omega, const Cx<Real>& t,
                            double threshold = 1e-8, const periods::CauchyParams& cp = {}) {
  const int n = H.n();
  const periods::Curve<Real> curve(H);
  reject_near_critical(curve, t);
  const auto basis = periods::cycle_basis(curve, t);
  const auto forms = periods::CompiledForms<Real>::basis(n);
  const int rows = 2 * n;
  const auto cs = periods::sample_circle(curve, basis, forms, rows, cp);
  CxMatrix<Real> M(rows, n);
  for (int j = 0; j < n; ++j) {
    const auto a = periods::taylor_coefficients(cs, omega, static_cast<std::size_t>(j), rows - 1);
    for (int k = 0; k < rows; ++k) M(k, j) = a[static_cast<std::size_t>(k)];
  }
  Eigen::JacobiSVD<CxMatrix<Real>> svd(M);
  RankReport rep;
  rep.rows = rows;
  rep.cols = n;
  rep.threshold = threshold;
  const auto& sv = svd.singularValues();
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    rep.singular_values.push_back(static_cast<double>(sv(k)));
    if (sv(k) > Real(threshold) * sv(0)) ++rep.rank;
  }
  return rep;
}

struct PoleFit {
  cd t_crit;
  std::vector<double> radii;
  std::vector<double> log_abs_w;
  double slope = 0;
  double ci95 = 0;            // half-width
  bool well_conditioned = false;
  int delta_order = 0;        // order of vanishing of Delta at t_crit (exact-polynomial route)
  int order_from_delta = 0;   // delta_order - (n(n-1)/2 - 1)
  bool meets_bound = false;   // slope + max(ci, 0.05) >= 2 - n
};

struct OrdersReport {
  int n = 0;
  int deg_delta = 0;
  int ord_inf_delta = 0;  // -deg Delta
  int ord_inf_w = 0;
  int ord_inf_w_bound = 0;  // (n^2 - 3n)/2
  bool ord_inf_ok = false;
  std::vector<PoleFit> poles;
  int pole_sum_fitted = 0;
  int pole_sum_bound = 0;  // n(2 - n)
  bool pole_sum_ok = false;
  int budget = 0;          // -ord_inf W - sum of pole orders
  int budget_bound = 0;    // n(n-1)/2
  bool budget_ok = false;
  bool pass = false;
};

/// Order bookkeeping for W = Wronskian of q0 . gamma (even n). Orders at the
/// critical values come from log-log fits of |W| at 6 radii in
/// [1e-4, 1e-2] times the distance to the nearest other critical value.
template <class Real>
OrdersReport orders_report(const HyperellipticHamiltonian& H, const PicardFuchsSystem& sys,
                           const std::vector<Exact>& q0, const periods::CauchyParams& cp = {}) {
  const int n = sys.n;
  if (n % 2 != 0) throw std::invalid_argument("the orders report applies to even n");
  const auto cert = sigma_delta(sys, q0);
  if (cert.delta_identically_zero) throw std::invalid_argument("Delta vanishes identically");
  const periods::Curve<Real> curve(H);
  OrdersReport rep;
  rep.n = n;
  rep.deg_delta = cert.delta.degree();
  rep.ord_inf_delta = -rep.deg_delta;
  rep.ord_inf_w = rep.ord_inf_delta - n + n * n * (n - 1) / 2;
  rep.ord_inf_w_bound = (n * n - 3 * n) / 2;
  rep.ord_inf_ok = rep.ord_inf_w >= rep.ord_inf_w_bound;
  rep.pole_sum_bound = n * (2 - n);
  rep.budget_bound = n * (n - 1) / 2;
  const auto forms = periods::CompiledForms<Real>::basis(n);
  const auto qc = to_complex_row<Real>(q0);
  const int expo = n * (n - 1) / 2;
  for (std::size_t i = 0; i < curve.critical_values.size(); ++i) {
    const Cx<Real> tc = curve.critical_values[i];
    Real sep = std::numeric_limits<Real>::infinity();
    for (std::size_t j = 0; j < curve.critical_values.size(); ++j)
      if (j != i) sep = std::min(sep, std::abs(tc - curve.critical_values[j]));
    if (!std::isfinite(static_cast<double>(sep))) sep = 1;
    PoleFit pf;
    pf.t_crit = cd(static_cast<double>(tc.real()), static_cast<double>(tc.imag()));
    const Cx<Real> dir = std::polar(Real(1), Real(0.7));
    std::vector<Real> xs, ys;
    for (int k = 0; k < 6; ++k) {
      const Real r = sep * Real(1e-4) * std::pow(Real(100), Real(k) / 5);
      const Cx<Real> t = tc + r * dir;
      const auto basis = periods::cycle_basis(curve, t);
      const auto der = periods::cauchy_derivatives(curve, basis, forms, n - 1, cp);
      const auto W = wronskian(der, qc, all_cycles(n));
      xs.push_back(std::log(r));
      ys.push_back(std::log(std::abs(W.value)));
      pf.radii.push_back(static_cast<double>(r));
      pf.log_abs_w.push_back(static_cast<double>(ys.back()));
    }
    const Real xm = std::accumulate(xs.begin(), xs.end(), Real(0)) / Real(xs.size());
    const Real ym = std::accumulate(ys.begin(), ys.end(), Real(0)) / Real(ys.size());
    Real sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) sxx += (xs[k] - xm) * (xs[k] - xm), sxy += (xs[k] - xm) * (ys[k] - ym);
    const Real slope = sxy / sxx;
    Real ssr = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const Real e = ys[k] - ym - slope * (xs[k] - xm);
      ssr += e * e;
    }
    const Real se = std::sqrt(ssr / Real(xs.size() - 2) / sxx);
    pf.slope = static_cast<double>(slope);
    pf.ci95 = 2.776 * static_cast<double>(se);  // Student t, 4 degrees of freedom
    pf.well_conditioned = pf.ci95 < 0.1;
    pf.meets_bound = pf.slope + std::max(pf.ci95, 0.05) >= 2 - n;
    // Exact route: order of the zero of Delta at t_crit from its Taylor coefficients.
    {
      ExactPoly d = cert.delta;
      Real dscale = 0;
      std::vector<Real> mags;
      Real fact = 1;
      for (int k = 0; k <= cert.delta.degree(); ++k) {
        if (k > 0) fact *= Real(k);
        mags.push_back(std::abs(eval_at<Real>(d, tc)) / fact * std::pow(sep, Real(k)));
        dscale = std::max(dscale, mags.back());
        d = d.derivative();
      }
      pf.delta_order = 0;
      while (pf.delta_order < static_cast<int>(mags.size()) && mags[static_cast<std::size_t>(pf.delta_order)] <= Real(1e-9) * dscale)
        ++pf.delta_order;
      pf.order_from_delta = pf.delta_order - (expo - 1);
    }
    rep.pole_sum_fitted += static_cast<int>(std::lround(pf.slope));
    rep.poles.push_back(pf);
  }
  rep.pole_sum_ok = rep.pole_sum_fitted >= rep.pole_sum_bound;
  rep.budget = -rep.ord_inf_w - rep.pole_sum_fitted;
  rep.budget_ok = rep.budget <= rep.budget_bound;
  bool poles_ok = true;
  for (const auto& p : rep.poles) poles_ok = poles_ok && p.meets_bound;
  rep.pass = rep.ord_inf_ok && rep.pole_sum_ok && rep.budget_ok && poles_ok;
  return rep;
}

}  // namespace hyperpf::flatness
