#pragma once

// Gelfand-Leray decompositions H d(omega_i) = dH ^ eta_i + sum_j a_ij d(omega_j)
// and the linear system (tE - A) x' = B x for the periods of omega_1..omega_n.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "hyperpf/algebra/bipoly.hpp"
#include "hyperpf/algebra/matrix.hpp"
#include "hyperpf/hamiltonian.hpp"
#include "hyperpf/petrov.hpp"

namespace hyperpf {

struct GelfandLerayRow {
  std::vector<Exact> a_row;
  OneForm eta;
  std::vector<Exact> b_row;
  ExactPoly quotient;   // q with V x^{i-1} = q V' + r
  ExactPoly remainder;  // r
};

/// H d(omega_i) - sum_j a_ij d(omega_j) - dH ^ eta_i, which must vanish.
inline TwoForm gelfand_leray_defect(const HyperellipticHamiltonian& H, int i, const GelfandLerayRow& row) {
  TwoForm lhs = H.as_bipoly() * exterior_derivative(petrov_basis_form(i));
  for (std::size_t j = 0; j < row.a_row.size(); ++j)
    lhs = lhs - row.a_row[j] * exterior_derivative(petrov_basis_form(static_cast<int>(j) + 1));
  return lhs - wedge_dH(H, row.eta);
}

/// Row i (1-based) of A and B, with eta_i = (y/2) x^{i-1} dx - q(x) dy.
inline GelfandLerayRow gelfand_leray(const HyperellipticHamiltonian& H, int i) {
  const int n = H.n();
  if (i < 1 || i > n) throw std::invalid_argument("basis index out of range");
  GelfandLerayRow row;
  const ExactPoly vx = H.V().shifted(i - 1);
  auto [q, r] = vx.divmod(H.dV());
  row.quotient = q;
  row.remainder = r;
  row.a_row.resize(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) row.a_row[static_cast<std::size_t>(j - 1)] = -r.coeff(j - 1);

  row.eta.P = BiPoly::monomial(Exact::fraction(1, 2), i - 1, 1);
  row.eta.Q = -BiPoly::from_x(q);

  const PetrovDecomposition dec = reduce(row.eta, H);
  row.b_row.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const auto& p = dec.coeffs[static_cast<std::size_t>(j)];
    if (p.degree() > 0) throw std::logic_error("Gelfand-Leray residue has non-constant Petrov coefficients");
    row.b_row[static_cast<std::size_t>(j)] = p.coeff(0);
  }

  if (!gelfand_leray_defect(H, i, row).is_zero())
    throw std::logic_error("Gelfand-Leray identity failed exact re-verification");
  return row;
}

struct PicardFuchsSystem {
  int n = 0;
  ExactMatrix A;
  ExactMatrix B;
  ExactPoly P;   // det(tE - A)
  PolyMatrix adj;  // Adj(tE - A)
  PolyMatrix C;  // Adj(tE - A) B
  bool morse = false;
  bool charpoly_routes_agree = false;  // Bareiss vs Faddeev-LeVerrier
  bool degrees_ok = false;             // deg P = n, deg C <= n-1
  std::vector<GelfandLerayRow> rows;
};

inline PicardFuchsSystem build_system(const HyperellipticHamiltonian& H) {
  const int n = H.n();
  const auto un = static_cast<std::size_t>(n);
  PicardFuchsSystem sys;
  sys.n = n;
  sys.A = ExactMatrix(un, un);
  sys.B = ExactMatrix(un, un);
  for (int i = 1; i <= n; ++i) {
    GelfandLerayRow row = gelfand_leray(H, i);
    for (std::size_t j = 0; j < un; ++j) {
      sys.A(static_cast<std::size_t>(i - 1), j) = row.a_row[j];
      sys.B(static_cast<std::size_t>(i - 1), j) = row.b_row[j];
    }
    sys.rows.push_back(std::move(row));
  }
  sys.P = fraction_free_det(characteristic_matrix(sys.A)).with_var('t');
  const AdjugateResult fl = faddeev_leverrier(sys.A);
  sys.charpoly_routes_agree = fl.charpoly == sys.P;
  sys.adj = fl.adjugate;
  sys.C = sys.adj * to_poly_matrix(sys.B);
  sys.degrees_ok = sys.P.degree() == n && max_degree(sys.C) <= n - 1;
  sys.morse = critical_data<double>(H).morse;
  return sys;
}

template <class Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> to_eigen(const ExactMatrix& m) {
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).to_complex<Real>();
  return out;
}

/// Pairs two equally sized multisets of complex numbers minimizing the
/// largest distance. Exhaustive for up to 8 elements, greedy beyond.
template <class Real>
std::vector<std::size_t> match_multisets(const std::vector<std::complex<Real>>& a,
                                         const std::vector<std::complex<Real>>& b, Real& worst) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  worst = std::numeric_limits<Real>::infinity();
  if (n <= 8) {
    do {
      Real w = 0;
      for (std::size_t i = 0; i < n && w < worst; ++i) w = std::max(w, std::abs(a[i] - b[perm[i]]));
      if (w < worst) {
        worst = w;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  std::vector<bool> used(n, false);
  worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = n;
    for (std::size_t j = 0; j < n; ++j)
      if (!used[j] && (k == n || std::abs(a[i] - b[j]) < std::abs(a[i] - b[k]))) k = j;
    used[k] = true;
    best[i] = k;
    worst = std::max(worst, std::abs(a[i] - b[k]));
  }
  return best;
}

struct EigencheckReport {
  std::vector<std::complex<double>> eigenvalues;
  double max_mismatch = 0;          // absolute
  double rel_mismatch = 0;          // relative to max(1, max |t_i|)
  double max_charpoly_residual = 0;  // |P(t_i)| / scale
  double max_eigenvector_residual = 0;  // |A v - t_i v| / |v| with v = (1, x_i, ..., x_i^{n-1})
  bool ok = false;
};

/// Eigenvalues of A (numerically, from the matrix) against the critical
/// values (from the roots of V').
inline EigencheckReport eigencheck(const PicardFuchsSystem& sys, const CriticalData<double>& crit, double tol) {
  EigencheckReport rep;
  const auto A = to_eigen<double>(sys.A);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) rep.eigenvalues.push_back(es.eigenvalues()(k));
  numeric::sort_lex(rep.eigenvalues);
  double scale = 1;
  for (const auto& v : crit.values) scale = std::max(scale, std::abs(v));
  if (rep.eigenvalues.size() != crit.values.size()) {
    rep.max_mismatch = rep.rel_mismatch = std::numeric_limits<double>::infinity();
    return rep;
  }
  match_multisets(rep.eigenvalues, crit.values, rep.max_mismatch);
  rep.rel_mismatch = rep.max_mismatch / scale;

  std::vector<std::complex<double>> pc;
  for (const auto& e : sys.P.coeffs()) pc.push_back(e.to_complex<double>());
  for (std::size_t k = 0; k < crit.values.size(); ++k) {
    const auto tv = crit.values[k];
    rep.max_charpoly_residual =
        std::max(rep.max_charpoly_residual, std::abs(numeric::horner(pc, tv)) / numeric::horner_scale(pc, tv));
    const auto xk = crit.points[k];
    Eigen::VectorXcd v(A.rows());
    std::complex<double> p(1);
    for (Eigen::Index j = 0; j < v.size(); ++j, p *= xk) v(j) = p;
    rep.max_eigenvector_residual = std::max(rep.max_eigenvector_residual, (A * v - tv * v).norm() / (v.norm() * scale));
  }
  rep.ok = rep.rel_mismatch <= tol;
  return rep;
}

}  // namespace hyperpf
