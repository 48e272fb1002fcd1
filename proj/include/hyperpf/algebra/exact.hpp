#pragma once

// Exact scalars: GMP rationals and Gaussian rationals re + i*im.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace hyperpf {

using Rational = mpq_class;

/// Parses "p/q", an integer, or a plain decimal ("-0.125", "3e-2") into an
/// exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (s.front() == '+') s.erase(s.begin());

  const bool decimal = s.find_first_of(".eE") != std::string::npos;
  if (!decimal) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }

  bool negative = false;
  std::size_t pos = 0;
  if (s[pos] == '-') {
    negative = true;
    ++pos;
  }
  std::string digits;
  long exponent = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      try {
        std::size_t used = 0;
        exponent += std::stol(s.substr(pos + 1), &used);
        if (pos + 1 + used != s.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw std::invalid_argument("malformed exponent in '" + s + "'");
      }
      pos = s.size();
      break;
    } else {
      throw std::invalid_argument("malformed decimal literal '" + s + "'");
    }
  }
  if (!any_digit) throw std::invalid_argument("malformed decimal literal '" + s + "'");
  mpz_class mantissa(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational q = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

/// Converts a rational to a floating type, keeping precision beyond double
/// when Real is long double.
template <class Real>
Real to_real(const Rational& q) {
  if constexpr (std::is_same_v<Real, double> || std::is_same_v<Real, float>) {
    return static_cast<Real>(q.get_d());
  } else {
    mpf_class f(q, 192);
    const double hi = f.get_d();
    f -= hi;
    const double mid = f.get_d();
    f -= mid;
    const double lo = f.get_d();
    return static_cast<Real>(hi) + static_cast<Real>(mid) + static_cast<Real>(lo);
  }
}

inline std::string rational_string(const Rational& q) { return q.get_str(10); }

/// Gaussian rational re + i*im. Purely real values take the rational fast path.
class Exact {
 public:
  Exact() = default;
  Exact(int v) : re_(v) {}
  Exact(long v) : re_(v) {}
  Exact(Rational re) : re_(std::move(re)) { re_.canonicalize(); }
  Exact(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Exact fraction(long p, long q) {
    if (q == 0) throw std::invalid_argument("zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return Exact(r);
  }
  static Exact i() { return Exact(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return is_real() && re_ == 1; }

  Exact conj() const { return Exact(re_, Rational(-im_)); }
  Rational norm() const { return re_ * re_ + im_ * im_; }

  Exact operator-() const { return Exact(Rational(-re_), Rational(-im_)); }

  Exact& operator+=(const Exact& o) {
    re_ += o.re_;
    if (!o.is_real()) im_ += o.im_;
    return *this;
  }
  Exact& operator-=(const Exact& o) {
    re_ -= o.re_;
    if (!o.is_real()) im_ -= o.im_;
    return *this;
  }
  Exact& operator*=(const Exact& o) {
    if (is_real() && o.is_real()) {
      re_ *= o.re_;
      return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  Exact& operator/=(const Exact& o) {
    if (o.is_zero()) throw std::domain_error("division by exact zero");
    if (o.is_real()) {
      re_ /= o.re_;
      if (!is_real()) im_ /= o.re_;
      return *this;
    }
    const Rational d = o.norm();
    Rational r = (re_ * o.re_ + im_ * o.im_) / d;
    Rational m = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }

  friend Exact operator+(Exact a, const Exact& b) { return a += b; }
  friend Exact operator-(Exact a, const Exact& b) { return a -= b; }
  friend Exact operator*(Exact a, const Exact& b) { return a *= b; }
  friend Exact operator/(Exact a, const Exact& b) { return a /= b; }
  friend bool operator==(const Exact& a, const Exact& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const Exact& a, const Exact& b) { return !(a == b); }

  template <class Real>
  std::complex<Real> to_complex() const {
    return {to_real<Real>(re_), to_real<Real>(im_)};
  }

  /// "p/q" for real values, "a+bi" style otherwise (diagnostics only; JSON
  /// uses the re/im object form).
  std::string str() const {
    if (is_real()) return rational_string(re_);
    std::string out = rational_string(re_);
    if (sgn(im_) >= 0) out += "+";
    out += rational_string(im_) + "i";
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const Exact& e) { return os << e.str(); }

 private:
  Rational re_{0};
  Rational im_{0};
};

// Field helpers shared by the templates in algebra/. Each coefficient type
// used with UniPoly or Matrix provides is_zero and a scalar_cast target.

inline bool is_zero(const Exact& e) { return e.is_zero(); }
template <class Real>
bool is_zero(const std::complex<Real>& z) {
  return z.real() == Real(0) && z.imag() == Real(0);
}
inline bool is_zero(double v) { return v == 0.0; }
inline bool is_zero(long double v) { return v == 0.0L; }

template <class To>
struct ScalarCast;

template <>
struct ScalarCast<Exact> {
  static Exact from(const Exact& e) { return e; }
};
template <class Real>
struct ScalarCast<std::complex<Real>> {
  static std::complex<Real> from(const Exact& e) { return e.template to_complex<Real>(); }
};

template <class To>
To scalar_cast(const Exact& e) {
  return ScalarCast<To>::from(e);
}

}  // namespace hyperpf
