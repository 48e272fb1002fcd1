#pragma once

// Polynomials in x, y and polynomial differential forms on the plane.

#include <climits>
#include <map>
#include <string>
#include <utility>

#include "hyperpf/algebra/exact.hpp"
#include "hyperpf/algebra/unipoly.hpp"

namespace hyperpf {

/// Sparse bivariate polynomial: (i, j) -> coefficient of x^i y^j.
class BiPoly {
 public:
  using Key = std::pair<int, int>;
  using Terms = std::map<Key, Exact>;

  BiPoly() = default;
  static BiPoly monomial(Exact c, int i, int j) {
    BiPoly p;
    p.add(i, j, std::move(c));
    return p;
  }
  static BiPoly constant(Exact c) { return monomial(std::move(c), 0, 0); }
  /// Embeds a polynomial in x.
  static BiPoly from_x(const ExactPoly& p) {
    BiPoly out;
    for (int i = 0; i <= p.degree(); ++i) out.add(i, 0, p.coeff(i));
    return out;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Exact coeff(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? Exact(0) : it->second;
  }

  void add(int i, int j, const Exact& c) {
    if (i < 0 || j < 0) throw std::invalid_argument("negative exponent in bivariate monomial");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace({i, j}, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  int degree_x() const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first);
    return d;
  }
  int degree_y() const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k.second);
    return d;
  }

  BiPoly operator-() const {
    BiPoly out = *this;
    for (auto& [k, c] : out.terms_) c = -c;
    return out;
  }
  BiPoly& operator+=(const BiPoly& o) {
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
    return *this;
  }
  BiPoly& operator-=(const BiPoly& o) {
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, -c);
    return *this;
  }
  BiPoly& operator*=(const Exact& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(BiPoly a, const Exact& s) { return a *= s; }
  friend BiPoly operator*(const Exact& s, BiPoly a) { return a *= s; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly out;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) out.add(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return out;
  }
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

  BiPoly dx() const {
    BiPoly out;
    for (const auto& [k, c] : terms_)
      if (k.first > 0) out.add(k.first - 1, k.second, c * Exact(k.first));
    return out;
  }
  BiPoly dy() const {
    BiPoly out;
    for (const auto& [k, c] : terms_)
      if (k.second > 0) out.add(k.first, k.second - 1, c * Exact(k.second));
    return out;
  }
  /// Antiderivative in y with zero constant term.
  BiPoly integrate_y() const {
    BiPoly out;
    for (const auto& [k, c] : terms_) out.add(k.first, k.second + 1, c / Exact(k.second + 1));
    return out;
  }

  template <class Z>
  Z eval(const Z& x, const Z& y) const {
    Z acc(0);
    for (const auto& [k, c] : terms_) {
      Z term = convert<Z>(c);
      for (int a = 0; a < k.first; ++a) term *= x;
      for (int b = 0; b < k.second; ++b) term *= y;
      acc += term;
    }
    return acc;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!out.empty()) out += " + ";
      out += it->second.is_real() ? it->second.str() : "(" + it->second.str() + ")";
      if (it->first.first) out += "*x^" + std::to_string(it->first.first);
      if (it->first.second) out += "*y^" + std::to_string(it->first.second);
    }
    return out;
  }

 private:
  template <class Z>
  static Z convert(const Exact& e) {
    if constexpr (std::is_same_v<Z, Exact>) {
      return e;
    } else {
      return scalar_cast<Z>(e);
    }
  }

  Terms terms_;
};

inline bool is_zero(const BiPoly& p) { return p.is_zero(); }

/// P dx + Q dy.
struct OneForm {
  BiPoly P;
  BiPoly Q;

  static OneForm dx_part(BiPoly p) { return {std::move(p), BiPoly()}; }
  static OneForm dy_part(BiPoly q) { return {BiPoly(), std::move(q)}; }

  bool is_zero() const { return P.is_zero() && Q.is_zero(); }
  OneForm& operator+=(const OneForm& o) {
    P += o.P;
    Q += o.Q;
    return *this;
  }
  OneForm& operator-=(const OneForm& o) {
    P -= o.P;
    Q -= o.Q;
    return *this;
  }
  friend OneForm operator+(OneForm a, const OneForm& b) { return a += b; }
  friend OneForm operator-(OneForm a, const OneForm& b) { return a -= b; }
  friend OneForm operator*(const Exact& s, const OneForm& a) { return {s * a.P, s * a.Q}; }
  friend OneForm operator*(const BiPoly& f, const OneForm& a) { return {f * a.P, f * a.Q}; }
  friend bool operator==(const OneForm& a, const OneForm& b) { return a.P == b.P && a.Q == b.Q; }
};

/// F dx^dy, with dx^dy the positive orientation.
struct TwoForm {
  BiPoly F;
  bool is_zero() const { return F.is_zero(); }
  friend TwoForm operator+(const TwoForm& a, const TwoForm& b) { return {a.F + b.F}; }
  friend TwoForm operator-(const TwoForm& a, const TwoForm& b) { return {a.F - b.F}; }
  friend TwoForm operator*(const Exact& s, const TwoForm& a) { return {s * a.F}; }
  friend TwoForm operator*(const BiPoly& f, const TwoForm& a) { return {f * a.F}; }
  friend bool operator==(const TwoForm& a, const TwoForm& b) { return a.F == b.F; }
};

/// Weighted degrees are doubled (x weighs 2, y weighs n+1) so they stay
/// integral. The zero polynomial gets this sentinel.
inline constexpr int kMinusInfinity = INT_MIN / 4;

inline int weighted_degree(const BiPoly& f, int n) {
  if (n < 2) throw std::invalid_argument("weighted degree needs n >= 2");
  int d = kMinusInfinity;
  for (const auto& [k, c] : f.terms()) d = std::max(d, 2 * k.first + (n + 1) * k.second);
  return d;
}

inline int weighted_degree(const OneForm& w, int n) {
  const int dp = weighted_degree(w.P, n);
  const int dq = weighted_degree(w.Q, n);
  return std::max(dp == kMinusInfinity ? dp : dp + 2, dq == kMinusInfinity ? dq : dq + n + 1);
}

inline TwoForm exterior_derivative(const OneForm& w) { return {w.Q.dx() - w.P.dy()}; }

inline OneForm exact_differential(const BiPoly& F) { return {F.dx(), F.dy()}; }

}  // namespace hyperpf
