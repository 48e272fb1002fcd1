#pragma once

// JSON codecs. Exact rationals travel as "p/q" strings, Gaussian rationals
// as {"re": "p/q", "im": "p/q"}, floating complex values as {"re": x, "im": y}.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperpf/algebra/bipoly.hpp"
#include "hyperpf/algebra/matrix.hpp"
#include "hyperpf/hamiltonian.hpp"

namespace hyperpf::io {

using nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json to_json(const Rational& q) { return rational_string(q); }

inline json to_json(const Exact& e) {
  if (e.is_real()) return rational_string(e.re());
  return json{{"re", rational_string(e.re())}, {"im", rational_string(e.im())}};
}

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw FormatError("expected a rational as \"p/q\" or an integer, got " + j.dump());
}

inline Exact exact_from_json(const json& j) {
  if (j.is_object()) {
    if (!j.contains("re") && !j.contains("im")) throw FormatError("complex coefficient needs \"re\" and/or \"im\"");
    return Exact(j.contains("re") ? rational_from_json(j.at("re")) : Rational(0),
                 j.contains("im") ? rational_from_json(j.at("im")) : Rational(0));
  }
  return Exact(rational_from_json(j));
}

inline json to_json(const ExactPoly& p) {
  json c = json::array();
  for (const auto& e : p.coeffs()) c.push_back(to_json(e));
  return json{{"var", std::string(1, p.var())}, {"coeffs", c}};
}

/// {"var": "x", "coeffs": [...]} or a bare coefficient list.
inline ExactPoly poly_from_json(const json& j, char default_var = 'x') {
  const json* coeffs = &j;
  char var = default_var;
  if (j.is_object()) {
    if (!j.contains("coeffs")) throw FormatError("polynomial needs \"coeffs\"");
    coeffs = &j.at("coeffs");
    if (j.contains("var")) {
      const auto v = j.at("var").get<std::string>();
      if (v.size() != 1) throw FormatError("polynomial variable must be one character");
      var = v[0];
    }
  }
  if (!coeffs->is_array()) throw FormatError("polynomial coefficients must be an array");
  std::vector<Exact> c;
  for (const auto& e : *coeffs) c.push_back(exact_from_json(e));
  return ExactPoly(std::move(c), var);
}

inline json to_json(const BiPoly& p) {
  json out = json::array();
  for (const auto& [k, c] : p.terms()) out.push_back(json{{"i", k.first}, {"j", k.second}, {"c", to_json(c)}});
  return out;
}

inline BiPoly bipoly_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("bivariate polynomial must be a list of {i, j, c} terms");
  BiPoly p;
  for (const auto& t : j) {
    const int i = t.at("i").get<int>(), k = t.at("j").get<int>();
    if (i < 0 || k < 0) throw FormatError("negative exponent in bivariate term");
    p.add(i, k, exact_from_json(t.at("c")));
  }
  return p;
}

inline json to_json(const OneForm& w) { return json{{"dx", to_json(w.P)}, {"dy", to_json(w.Q)}}; }

inline OneForm oneform_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("1-form must be an object {\"dx\": ..., \"dy\": ...}");
  OneForm w;
  if (j.contains("dx")) w.P = bipoly_from_json(j.at("dx"));
  if (j.contains("dy")) w.Q = bipoly_from_json(j.at("dy"));
  return w;
}

inline json to_json(const HyperellipticHamiltonian& H) {
  return json{{"n", H.n()}, {"hbar", to_json(H.hbar().with_var('x'))}};
}

inline HyperellipticHamiltonian hamiltonian_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n")) throw FormatError("Hamiltonian needs {\"n\": int, \"hbar\": polynomial}");
  const int n = j.at("n").get<int>();
  const ExactPoly hbar = j.contains("hbar") ? poly_from_json(j.at("hbar"), 'x') : ExactPoly::zero('x');
  try {
    return HyperellipticHamiltonian(n, hbar.with_var('x'));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline json to_json(const ExactMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    out.push_back(row);
  }
  return out;
}

inline json to_json(const PolyMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    out.push_back(row);
  }
  return out;
}

template <class Real>
json complex_json(const std::complex<Real>& z) {
  return json{{"re", static_cast<double>(z.real())}, {"im", static_cast<double>(z.imag())}};
}

/// "re,im", "re" or {"re": .., "im": ..}.
inline std::complex<double> parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw FormatError("trailing characters");
      return {re, 0.0};
    }
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw FormatError("trailing characters");
    const double im = std::stod(b, &used);
    if (used != b.size()) throw FormatError("trailing characters");
    return {re, im};
  } catch (const std::logic_error&) {
    throw FormatError("cannot read a complex number from \"" + text + "\" (expected re or re,im)");
  }
}

/// Parses text and turns syntax errors into a FormatError naming the byte offset.
inline json parse_document(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("malformed JSON in " + origin + " at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace hyperpf::io
