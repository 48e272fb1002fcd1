#pragma once

// Exact side of the Wronskian machinery: the rows q_k, Sigma and Delta, the
// scalar equation they induce, residues at infinity, and the bound formulas.

#include <optional>
#include <stdexcept>
#include <vector>

#include "hyperpf/algebra/matrix.hpp"
#include "hyperpf/algebra/unipoly.hpp"
#include "hyperpf/hamiltonian.hpp"
#include "hyperpf/petrov.hpp"
#include "hyperpf/picardfuchs.hpp"

namespace hyperpf {

using PolyRow = std::vector<ExactPoly>;

inline PolyRow constant_row(const std::vector<Exact>& c) {
  PolyRow r;
  for (const auto& e : c) r.push_back(ExactPoly::constant(e));
  return r;
}

/// q_{k+1} = P q_k' + q_k C, so that D^k(q_0 . gamma) = q_k . gamma for
/// D = P d/dt and any solution gamma of P gamma' = C gamma.
inline PolyRow next_q(const PolyRow& q, const ExactPoly& P, const PolyMatrix& C) {
  PolyRow out = row_times(q, C);
  for (std::size_t j = 0; j < q.size(); ++j) out[j] += P * q[j].derivative();
  return out;
}

inline std::vector<PolyRow> qk_rows(const ExactPoly& P, const PolyMatrix& C, const PolyRow& q0, int count) {
  if (q0.size() != C.rows()) throw std::invalid_argument("q0 length does not match the system size");
  std::vector<PolyRow> rows;
  if (count <= 0) return rows;
  rows.push_back(q0);
  for (int k = 1; k < count; ++k) rows.push_back(next_q(rows.back(), P, C));
  return rows;
}

inline std::vector<PolyRow> qk_rows(const PicardFuchsSystem& sys, const PolyRow& q0, int count) {
  return qk_rows(sys.P, sys.C, q0, count);
}

inline int row_degree(const PolyRow& r) {
  int d = -1;
  for (const auto& p : r) d = std::max(d, p.degree());
  return d;
}

inline PolyMatrix rows_to_matrix(const std::vector<PolyRow>& rows) {
  if (rows.empty()) return PolyMatrix();
  PolyMatrix m(rows.size(), rows.front().size(), ExactPoly());
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

struct FlatnessCertificate {
  std::vector<PolyRow> q_rows;  // q_0 .. q_{n-1}
  PolyMatrix sigma;
  ExactPoly delta;
  int deg_bound = 0;            // n(n-1)^2/2 for constant q_0
  bool delta_identically_zero = false;
  bool q_degrees_ok = false;    // deg q_k <= deg q_0 + k(n-1)
  bool recursion_verified = false;
};

inline int delta_degree_bound(int n) { return n * (n - 1) * (n - 1) / 2; }

inline FlatnessCertificate sigma_delta(const PicardFuchsSystem& sys, const PolyRow& q0) {
  const int n = sys.n;
  FlatnessCertificate cert;
  cert.q_rows = qk_rows(sys, q0, n);
  cert.sigma = rows_to_matrix(cert.q_rows);
  cert.delta = fraction_free_det(cert.sigma).with_var('t');
  const int d0 = std::max(0, row_degree(q0));
  cert.deg_bound = delta_degree_bound(n) + n * d0;
  cert.delta_identically_zero = cert.delta.is_zero();
  cert.q_degrees_ok = true;
  for (int k = 0; k < n; ++k)
    if (row_degree(cert.q_rows[static_cast<std::size_t>(k)]) > d0 + k * (n - 1)) cert.q_degrees_ok = false;
  // Recompute each row independently from its predecessor.
  cert.recursion_verified = true;
  for (int k = 0; k + 1 < n; ++k)
    if (next_q(cert.q_rows[static_cast<std::size_t>(k)], sys.P, sys.C) != cert.q_rows[static_cast<std::size_t>(k) + 1])
      cert.recursion_verified = false;
  return cert;
}

inline FlatnessCertificate sigma_delta(const PicardFuchsSystem& sys, const std::vector<Exact>& q0) {
  return sigma_delta(sys, constant_row(q0));
}

/// Delta_l q_l = sum_{i<l} p_i q_i, with l the rank of the q-rows over Q(t)
/// and Delta_l a nonzero l x l minor of q_0..q_{l-1}.
struct ScalarOde {
  int order = 0;                // l
  std::vector<std::size_t> minor_cols;
  ExactPoly leading;            // Delta_l
  std::vector<ExactPoly> coeffs;  // p_0 .. p_{l-1}
  bool verified = false;        // exact re-substitution
};

inline ScalarOde scalar_ode_coefficients(const PicardFuchsSystem& sys, const PolyRow& q0) {
  const int n = sys.n;
  ScalarOde ode;
  auto rows = qk_rows(sys, q0, n + 1);
  int l = 0;
  for (; l < n; ++l) {
    const PolyMatrix m = rows_to_matrix(std::vector<PolyRow>(rows.begin(), rows.begin() + l + 1));
    if (exact_rank(m) == static_cast<std::size_t>(l)) break;
  }
  ode.order = l;
  if (l == 0) {
    ode.leading = ExactPoly::constant(Exact(1));
    ode.verified = row_degree(rows[0]) < 0;
    return ode;
  }
  const auto ul = static_cast<std::size_t>(l);
  const PolyMatrix basis = rows_to_matrix(std::vector<PolyRow>(rows.begin(), rows.begin() + l));
  // Independent columns of the l x n block, read off the transpose.
  const auto prof = bareiss_profile(basis.transpose());
  ode.minor_cols = prof.pivot_rows;
  std::sort(ode.minor_cols.begin(), ode.minor_cols.end());

  PolyMatrix minor(ul, ul, ExactPoly());
  for (std::size_t i = 0; i < ul; ++i)
    for (std::size_t j = 0; j < ul; ++j) minor(i, j) = basis(i, ode.minor_cols[j]);
  ode.leading = fraction_free_det(minor);
  // Cramer: coefficients of the row combination equal to Delta_l q_l.
  for (std::size_t i = 0; i < ul; ++i) {
    PolyMatrix mi = minor;
    for (std::size_t j = 0; j < ul; ++j) mi(i, j) = rows[ul][ode.minor_cols[j]];
    ode.coeffs.push_back(fraction_free_det(mi));
  }
  PolyRow residual(static_cast<std::size_t>(n), ExactPoly());
  for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
    residual[j] = ode.leading * rows[ul][j];
    for (std::size_t i = 0; i < ul; ++i) residual[j] -= ode.coeffs[i] * rows[i][j];
  }
  ode.verified = row_degree(residual) < 0;
  return ode;
}

/// Residues at the two points at infinity (odd n): rho_i = alpha_i + beta_i t.
struct ResidueProfile {
  int n = 0;
  std::vector<ExactPoly> rho;
  int span_dim = 0;
  std::vector<std::vector<Exact>> S_basis;
  int series_order = 0;
  bool applicable = false;  // false for even n
};

/// Coefficient of u^{-1} in x^{i-1} y dx written in u = 1/x, with
/// y = u^{-(n+1)/2} (1 + R(u) + t u^{n+1})^{1/2} on the sheet where the root
/// tends to 1, and dx = -du/u^2.
inline ResidueProfile residues_at_infinity(const HyperellipticHamiltonian& H) {
  const int n = H.n();
  ResidueProfile prof;
  prof.n = n;
  if (n % 2 == 0) {
    prof.rho.assign(static_cast<std::size_t>(n), ExactPoly());
    return prof;
  }
  prof.applicable = true;
  const int m = (n + 1) / 2;
  const int N = n + m;  // highest u-power needed
  prof.series_order = N;

  // z(u) = u^{n+1} V(1/u) - 1 + t u^{n+1}, as coefficients in t indexed by u-degree.
  detail::XTPoly z(static_cast<std::size_t>(N) + 1, ExactPoly());
  for (int k = 0; k <= n + 1; ++k) {
    const int deg = n + 1 - k;  // x^k -> u^{n+1-k}
    if (deg == 0 || deg > N) continue;
    z[static_cast<std::size_t>(deg)] += ExactPoly::constant(H.V().coeff(k));
  }
  if (n + 1 <= N) z[static_cast<std::size_t>(n + 1)] += ExactPoly::variable('t');

  auto truncated_mul = [N](const detail::XTPoly& a, const detail::XTPoly& b) {
    detail::XTPoly out(static_cast<std::size_t>(N) + 1, ExactPoly());
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.size() && i + j <= static_cast<std::size_t>(N); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  };

  // (1+z)^{1/2} = sum_k binom(1/2, k) z^k; z has no constant term.
  detail::XTPoly series(static_cast<std::size_t>(N) + 1, ExactPoly());
  series[0] = ExactPoly::constant(Exact(1));
  detail::XTPoly zk = series;
  Exact binom(1);
  for (int k = 1; k <= N; ++k) {
    zk = truncated_mul(zk, z);
    binom = binom * (Exact::fraction(1, 2) - Exact(k - 1)) / Exact(k);
    for (int d = 0; d <= N; ++d) series[static_cast<std::size_t>(d)] += zk[static_cast<std::size_t>(d)] * binom;
  }

  ExactMatrix coeffs(2, static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const ExactPoly r = -series[static_cast<std::size_t>(i + m)];
    prof.rho.push_back(r.with_var('t'));
    if (r.degree() > 1) throw std::logic_error("residue at infinity is not affine in t");
    coeffs(0, static_cast<std::size_t>(i - 1)) = r.coeff(0);
    coeffs(1, static_cast<std::size_t>(i - 1)) = r.coeff(1);
  }
  prof.span_dim = static_cast<int>(exact_rank(coeffs));
  prof.S_basis = kernel_basis(coeffs);
  return prof;
}

inline int multiplicity_bound(int n) {
  if (n < 2) throw std::invalid_argument("bound needs n >= 2");
  return n - 1 + n * (n - 1) / 2;
}

/// Degree bookkeeping for forms of (undoubled) weighted degree d: Petrov coefficients
/// of degree <= e = floor(d/(n+1)), deg Q_k <= e + k(n-1), and the order bound
/// grows by n*e over the constant-coefficient case.
struct GeneralBoundReport {
  int n = 0;
  int d = 0;
  int e = 0;
  std::vector<int> q_degree_bounds;
  int delta_degree_bound = 0;
  int bound = 0;      // A(n) + n*e
  Rational A;         // n-1 + n(n-1)/2
  Rational B;         // n/(n+1)
  Rational affine;    // A + d*B

  // Optional realization with a concrete form of degree d.
  bool realized = false;
  std::vector<int> realized_p_degrees;
  std::vector<int> realized_q_degrees;
  int realized_delta_degree = -1;
  bool realized_within_bounds = false;
};

inline GeneralBoundReport general_bound_report(int n, int d) {
  if (n < 2 || d < 0) throw std::invalid_argument("general bound needs n >= 2 and d >= 0");
  GeneralBoundReport rep;
  rep.n = n;
  rep.d = d;
  rep.e = d / (n + 1);
  rep.delta_degree_bound = 0;
  for (int k = 0; k < n; ++k) {
    rep.q_degree_bounds.push_back(rep.e + k * (n - 1));
    rep.delta_degree_bound += rep.q_degree_bounds.back();
  }
  rep.bound = multiplicity_bound(n) + n * rep.e;
  rep.A = Rational(multiplicity_bound(n));
  rep.B = Rational(n, n + 1);
  rep.B.canonicalize();
  rep.affine = rep.A + rep.B * d;
  return rep;
}

/// Runs the construction on an explicit form of degree <= d with a given H.
inline GeneralBoundReport general_bound_report(const HyperellipticHamiltonian& H, const OneForm& omega, int d) {
  GeneralBoundReport rep = general_bound_report(H.n(), d);
  if (weighted_degree(omega, H.n()) > 2 * d) throw std::invalid_argument("form degree exceeds d");
  const auto dec = reduce(omega, H);
  const auto sys = build_system(H);
  rep.realized = true;
  bool ok = true;
  for (const auto& p : dec.coeffs) {
    rep.realized_p_degrees.push_back(p.degree());
    if (p.degree() > rep.e) ok = false;
  }
  const auto rows = qk_rows(sys, dec.coeffs, H.n());
  for (int k = 0; k < H.n(); ++k) {
    rep.realized_q_degrees.push_back(row_degree(rows[static_cast<std::size_t>(k)]));
    if (rep.realized_q_degrees.back() > rep.q_degree_bounds[static_cast<std::size_t>(k)]) ok = false;
  }
  rep.realized_delta_degree = fraction_free_det(rows_to_matrix(rows)).degree();
  if (rep.realized_delta_degree > rep.delta_degree_bound) ok = false;
  rep.realized_within_bounds = ok;
  return rep;
}

}  // namespace hyperpf
