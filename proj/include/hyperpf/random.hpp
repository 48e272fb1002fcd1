#pragma once

// Seeded generators for random Morse Hamiltonians, forms and regular levels.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "hyperpf/algebra/bipoly.hpp"
#include "hyperpf/hamiltonian.hpp"

namespace hyperpf {

using Rng = std::mt19937_64;

/// Small rational p/q with |p| <= num_max, 1 <= q <= den_max.
inline Exact random_rational(Rng& rng, int num_max = 9, int den_max = 4, bool nonzero = false) {
  std::uniform_int_distribution<int> num(-num_max, num_max);
  std::uniform_int_distribution<int> den(1, den_max);
  int p = num(rng);
  while (nonzero && p == 0) p = num(rng);
  return Exact::fraction(p, den(rng));
}

/// Random H with deg hbar = n-1 whose critical values are well separated:
/// separation > min_sep * max(1, max |t_i|).
inline HyperellipticHamiltonian random_morse_hamiltonian(Rng& rng, int n, double min_sep = 0.05) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Exact> c(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = random_rational(rng, 9, 4, k == n - 1);
    HyperellipticHamiltonian H(n, ExactPoly(c, 'x'));
    const auto crit = critical_data<double>(H);
    if (!crit.morse) continue;
    double scale = 1;
    for (const auto& v : crit.values) scale = std::max(scale, std::abs(v));
    if (crit.separation > min_sep * scale) return H;
  }
  throw std::runtime_error("could not draw a well-separated Morse Hamiltonian");
}

/// Random polynomial 1-form with doubled weighted degree <= max_deg.
inline OneForm random_form(Rng& rng, int n, int max_deg, int terms = 6) {
  std::vector<std::pair<int, int>> dx_monos, dy_monos;
  for (int j = 0; (n + 1) * j + 2 <= max_deg; ++j)
    for (int i = 0; 2 * i + (n + 1) * j + 2 <= max_deg; ++i) dx_monos.emplace_back(i, j);
  for (int j = 0; (n + 1) * j + (n + 1) <= max_deg; ++j)
    for (int i = 0; 2 * i + (n + 1) * j + (n + 1) <= max_deg; ++i) dy_monos.emplace_back(i, j);
  OneForm w;
  std::uniform_int_distribution<int> which(0, 1);
  for (int k = 0; k < terms; ++k) {
    const bool use_dy = !dy_monos.empty() && which(rng) == 1;
    const auto& pool = use_dy ? dy_monos : dx_monos;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const auto [i, j] = pool[pick(rng)];
    (use_dy ? w.Q : w.P).add(i, j, random_rational(rng, 5, 3, true));
  }
  return w;
}

/// Random exact polynomial F with doubled weighted degree <= max_deg.
inline BiPoly random_bipoly(Rng& rng, int n, int max_deg, int terms = 4) {
  std::vector<std::pair<int, int>> monos;
  for (int j = 0; (n + 1) * j <= max_deg; ++j)
    for (int i = 0; 2 * i + (n + 1) * j <= max_deg; ++i) monos.emplace_back(i, j);
  BiPoly f;
  std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
  for (int k = 0; k < terms; ++k) {
    const auto [i, j] = monos[pick(rng)];
    f.add(i, j, random_rational(rng, 5, 3, true));
  }
  return f;
}

/// A level t at distance >= min_dist * scale from every critical value, drawn
/// in a box of radius scale around the origin.
inline std::complex<double> random_regular_t(Rng& rng, const std::vector<std::complex<double>>& crit_values,
                                             double min_dist = 0.15) {
  double scale = 1;
  for (const auto& v : crit_values) scale = std::max(scale, std::abs(v));
  std::uniform_real_distribution<double> u(-scale, scale);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const std::complex<double> t(u(rng), u(rng));
    bool ok = true;
    for (const auto& v : crit_values)
      if (std::abs(t - v) < min_dist * scale) ok = false;
    if (ok) return t;
  }
  throw std::runtime_error("could not draw a regular level");
}

inline std::vector<Exact> random_constant_row(Rng& rng, int n) {
  std::vector<Exact> c(static_cast<std::size_t>(n));
  for (auto& e : c) e = random_rational(rng, 9, 4);
  return c;
}

}  // namespace hyperpf
