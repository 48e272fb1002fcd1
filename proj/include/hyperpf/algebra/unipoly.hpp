#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperpf/algebra/exact.hpp"

namespace hyperpf {

/// Dense univariate polynomial with ascending coefficients over a field K.
/// The stored sequence never ends in a zero coefficient; the zero polynomial
/// is the empty sequence and has degree -1.
template <class K>
class UniPoly {
 public:
  using value_type = K;

  UniPoly() = default;
  /// Integer constant, so that generic code can write T(0) and T(1).
  UniPoly(int c) {
    if (c != 0) coeffs_.push_back(K(c));
  }
  static UniPoly zero(char var) {
    UniPoly p;
    p.var_ = var;
    return p;
  }
  UniPoly(std::vector<K> coeffs, char var = 't') : coeffs_(std::move(coeffs)), var_(var) { trim(); }

  static UniPoly constant(K c, char var = 't') { return UniPoly(std::vector<K>{std::move(c)}, var); }
  static UniPoly monomial(K c, int degree, char var = 't') {
    if (degree < 0) throw std::invalid_argument("negative monomial degree");
    std::vector<K> v(static_cast<std::size_t>(degree) + 1, K(0));
    v.back() = std::move(c);
    return UniPoly(std::move(v), var);
  }
  static UniPoly variable(char var = 't') { return monomial(K(1), 1, var); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  char var() const { return var_; }
  UniPoly with_var(char v) const {
    UniPoly out = *this;
    out.var_ = v;
    return out;
  }

  const std::vector<K>& coeffs() const { return coeffs_; }
  K coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return K(0);
    return coeffs_[static_cast<std::size_t>(i)];
  }
  const K& leading() const {
    if (coeffs_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return coeffs_.back();
  }

  UniPoly operator-() const {
    UniPoly out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
  }
  UniPoly& operator+=(const UniPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), K(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
  }
  UniPoly& operator-=(const UniPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), K(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
  }
  UniPoly& operator*=(const K& s) {
    if (hyperpf::is_zero(s)) {
      coeffs_.clear();
      return *this;
    }
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  UniPoly& operator/=(const K& s) {
    for (auto& c : coeffs_) c /= s;
    return *this;
  }

  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(UniPoly a, const K& s) { return a *= s; }
  friend UniPoly operator*(const K& s, UniPoly a) { return a *= s; }
  friend UniPoly operator/(UniPoly a, const K& s) { return a /= s; }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return zero(a.var_);
    std::vector<K> out(a.coeffs_.size() + b.coeffs_.size() - 1, K(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (hyperpf::is_zero(a.coeffs_[i])) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return UniPoly(std::move(out), a.var_);
  }
  UniPoly& operator*=(const UniPoly& o) { return *this = *this * o; }

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

  UniPoly derivative() const {
    if (coeffs_.size() <= 1) return zero(var_);
    std::vector<K> out(coeffs_.size() - 1, K(0));
    for (std::size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = coeffs_[i] * K(static_cast<long>(i));
    return UniPoly(std::move(out), var_);
  }

  UniPoly pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative polynomial power");
    UniPoly result = constant(K(1), var_);
    UniPoly base = *this;
    while (e > 0) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  /// Multiplies by var^k.
  UniPoly shifted(int k) const {
    if (is_zero() || k == 0) return *this;
    std::vector<K> out(static_cast<std::size_t>(k), K(0));
    out.insert(out.end(), coeffs_.begin(), coeffs_.end());
    return UniPoly(std::move(out), var_);
  }

  /// Horner evaluation at a point of any type that K converts into.
  template <class Z>
  Z eval(const Z& z) const {
    Z acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + convert<Z>(*it);
    return acc;
  }

  /// Euclidean division over the field: *this = q*d + r with deg r < deg d.
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    UniPoly r = *this;
    std::vector<K> q(coeffs_.size() >= d.coeffs_.size() ? coeffs_.size() - d.coeffs_.size() + 1 : 0, K(0));
    const K& lead = d.leading();
    while (!r.is_zero() && r.degree() >= d.degree()) {
      const int shift = r.degree() - d.degree();
      const K factor = r.leading() / lead;
      q[static_cast<std::size_t>(shift)] = factor;
      for (std::size_t i = 0; i < d.coeffs_.size(); ++i)
        r.coeffs_[i + static_cast<std::size_t>(shift)] -= factor * d.coeffs_[i];
      // The top coefficient is cancelled exactly; drop it even for floating K.
      r.coeffs_.pop_back();
      r.trim();
    }
    return {UniPoly(std::move(q), var_), r.with_var(var_)};
  }

  /// Quotient of an exact division; throws when d does not divide *this.
  UniPoly exact_quotient(const UniPoly& d) const {
    auto [q, r] = divmod(d);
    if (!r.is_zero()) throw std::domain_error("polynomial division is not exact");
    return q;
  }

  UniPoly monic() const {
    if (is_zero()) return *this;
    return *this / leading();
  }

 private:
  template <class Z>
  static Z convert(const K& k) {
    if constexpr (std::is_same_v<K, Exact> && !std::is_same_v<Z, Exact>) {
      return scalar_cast<Z>(k);
    } else {
      return Z(k);
    }
  }

  void trim() {
    while (!coeffs_.empty() && hyperpf::is_zero(coeffs_.back())) coeffs_.pop_back();
  }

  std::vector<K> coeffs_;
  char var_ = 't';
};

template <class K>
UniPoly<K> poly_gcd(UniPoly<K> a, UniPoly<K> b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <class To>
UniPoly<To> poly_cast(const UniPoly<Exact>& p) {
  std::vector<To> c;
  c.reserve(p.coeffs().size());
  for (const auto& e : p.coeffs()) c.push_back(scalar_cast<To>(e));
  return UniPoly<To>(std::move(c), p.var());
}

template <class K>
inline bool is_zero(const UniPoly<K>& p) {
  return p.is_zero();
}

using ExactPoly = UniPoly<Exact>;

inline std::string to_string(const ExactPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    const Exact c = p.coeff(i);
    if (c.is_zero()) continue;
    if (!out.empty()) out += " + ";
    const bool paren = !c.is_real();
    out += paren ? "(" + c.str() + ")" : c.str();
    if (i >= 1) out += std::string("*") + p.var();
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

}  // namespace hyperpf
