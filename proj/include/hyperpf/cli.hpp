#pragma once

// Batch front end: subcommands over a Hamiltonian given as JSON, each
// producing one JSON report.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperpf/flatness/verify.hpp"
#include "hyperpf/io/json.hpp"
#include "hyperpf/periods/cauchy.hpp"
#include "hyperpf/petrov.hpp"
#include "hyperpf/picardfuchs.hpp"
#include "hyperpf/random.hpp"

#ifndef HYPERPF_VERSION
#define HYPERPF_VERSION "unknown"
#endif

namespace hyperpf::cli {

using io::json;

struct RunConfig {
  std::string subcommand;
  std::string input_path;   // file with a Hamiltonian, or {"hamiltonian": .., "form": ..}
  std::string input_json;   // the same, inline
  std::string form_path;
  std::string form_json;
  std::string output_path;  // --json-out
  std::uint64_t seed = 1;
  std::string precision = "double";  // or "extended" (long double)
  double quad_tol = 1e-10;
  double verify_tol = 0;    // 0: the per-check default
  double crit_tol = 1e-9;   // Morse separation tolerance
  std::vector<std::string> t_values;
  int samples = 3;
  int identity = 6;
  std::vector<std::string> q0;
  std::vector<std::string> coeffs;
  int vanish = -1;          // multiplicity: impose this many vanishing derivatives
  int cycle = 0;
  double mult_tol = 1e-8;
  bool check_det = false, check_eigen = false, check_orders = false;
  int n = 0, d = -1;        // bound
};

struct RunResult {
  int exit_code = 0;
  json report;
  std::string error;  // diagnostic for exit code 1
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Check {
  std::string name;
  bool pass = false;
  json value;
  json tol;
  std::string method;
};

inline json checks_json(const std::vector<Check>& cs) {
  json out = json::array();
  for (const auto& c : cs)
    out.push_back(json{{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tol", c.tol}, {"method", c.method}});
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Inputs {
  json document;             // as read
  std::optional<HyperellipticHamiltonian> H;
  std::optional<OneForm> form;
};

inline Inputs load_inputs(const RunConfig& cfg, bool need_h, bool need_form) {
  Inputs in;
  if (!cfg.input_path.empty() && !cfg.input_json.empty()) throw UsageError("give either --input or --json, not both");
  if (!cfg.input_path.empty())
    in.document = io::parse_document(read_file(cfg.input_path), cfg.input_path);
  else if (!cfg.input_json.empty())
    in.document = io::parse_document(cfg.input_json, "--json");
  if (!in.document.is_null()) {
    const json& hj = in.document.contains("hamiltonian") ? in.document.at("hamiltonian") : in.document;
    in.H = io::hamiltonian_from_json(hj);
    if (in.document.contains("form")) in.form = io::oneform_from_json(in.document.at("form"));
  }
  if (!cfg.form_path.empty()) in.form = io::oneform_from_json(io::parse_document(read_file(cfg.form_path), cfg.form_path));
  if (!cfg.form_json.empty()) in.form = io::oneform_from_json(io::parse_document(cfg.form_json, "--form-json"));
  if (need_h && !in.H) throw UsageError("this subcommand needs a Hamiltonian (--input or --json)");
  if (need_form && !in.form) throw UsageError("this subcommand needs a 1-form (--form, --form-json, or \"form\" in the input)");
  return in;
}

inline std::vector<Exact> rationals(const std::vector<std::string>& xs) {
  std::vector<Exact> out;
  for (const auto& s : xs) {
    try {
      out.push_back(Exact(parse_rational(s)));
    } catch (const std::exception&) {
      throw UsageError("cannot read rational \"" + s + "\"");
    }
  }
  return out;
}

inline json exact_row(const std::vector<Exact>& v) {
  json out = json::array();
  for (const auto& e : v) out.push_back(io::to_json(e));
  return out;
}

template <class Real>
json complex_list(const std::vector<std::complex<Real>>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(io::complex_json(z));
  return out;
}

/// Sample levels: --t values, else --samples random regular levels from the seed.
inline std::vector<std::complex<double>> sample_levels(const RunConfig& cfg, const std::vector<std::complex<double>>& crit) {
  std::vector<std::complex<double>> ts;
  for (const auto& s : cfg.t_values) ts.push_back(io::parse_complex(s));
  if (ts.empty()) {
    Rng rng(cfg.seed);
    for (int k = 0; k < cfg.samples; ++k) ts.push_back(random_regular_t(rng, crit));
  }
  return ts;
}

template <class Real>
std::vector<std::complex<Real>> widen(const std::vector<std::complex<double>>& v) {
  std::vector<std::complex<Real>> out;
  for (const auto& z : v) out.emplace_back(Real(z.real()), Real(z.imag()));
  return out;
}

inline json identity_json(const flatness::IdentityReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples)
    samples.push_back(json{{"t", io::complex_json(s.t)},
                           {"lhs", io::complex_json(s.lhs)},
                           {"rhs", io::complex_json(s.rhs)},
                           {"rel_err", s.rel_err},
                           {"log_scale", s.log_scale},
                           {"cauchy_radius", s.rho},
                           {"cauchy_nodes", s.nodes},
                           {"closure_error", s.closure_error},
                           {"wronskian_over_hadamard", s.wronskian_over_hadamard}});
  json out{{"identity", r.identity},
           {"samples", samples},
           {"deg_delta", r.deg_delta},
           {"bounds", json{{"deg_delta", r.deg_bound}, {"exponent", r.exponent}}},
           {"degenerate", r.degenerate},
           {"max_rel_err", r.max_rel_err},
           {"tol", r.tol},
           {"derivatives", r.derivative_method}};
  if (r.c_const) out["c"] = io::complex_json(*r.c_const);
  if (r.t_ref) out["t_ref"] = io::complex_json(*r.t_ref);
  return out;
}

// --- subcommands ----------------------------------------------------------

inline json run_analyze(const RunConfig& cfg, const Inputs& in, std::vector<Check>&) {
  const auto& H = *in.H;
  const auto cd = critical_data<double>(H, cfg.crit_tol);
  return json{{"n", H.n()},
              {"hbar_degree", H.hbar_degree()},
              {"genus", genus_formula(H.n())},
              {"critical_points", complex_list(cd.points)},
              {"critical_values", complex_list(cd.values)},
              {"squarefree", cd.squarefree},
              {"distinct_values", cd.distinct_values},
              {"morse", cd.morse},
              {"separation", cd.separation},
              {"tol", cd.tol},
              {"method", "exact gcd(V', V'') for squarefreeness; Aberth roots of V' for values"}};
}

template <class Real>
json run_reduce(const RunConfig& cfg, const Inputs& in, std::vector<Check>& checks) {
  const auto& H = *in.H;
  const auto dec = reduce(*in.form, H);
  const auto cert = degree_certificate(dec, H);
  json coeffs = json::array();
  for (const auto& p : dec.coeffs) coeffs.push_back(io::to_json(p));
  json slack = json::array();
  for (const auto& s : cert.slack) slack.push_back(s ? json(*s) : json(nullptr));
  checks.push_back({"degree_certificate", cert.ok, slack, 0, "exact: deg p_i <= (deg w - deg w_i)/deg H"});
  json result{{"coeffs", coeffs},
              {"source_degree_doubled", dec.source_degree == kMinusInfinity ? json(nullptr) : json(dec.source_degree)},
              {"is_zero", dec.is_zero()}};
  // Optional numeric oracle at the given levels.
  if (!cfg.t_values.empty()) {
    const periods::Curve<Real> curve(H);
    const auto direct = periods::CompiledForms<Real>::compile({*in.form});
    const auto basis_forms = periods::CompiledForms<Real>::basis(H.n());
    json rows = json::array();
    double worst = 0;
    for (const auto& ts : cfg.t_values) {
      const auto t = widen<Real>({io::parse_complex(ts)}).front();
      const auto basis = periods::cycle_basis(curve, t);
      periods::QuadParams qp;
      qp.tol = cfg.quad_tol;
      const auto a = periods::period_matrix(curve, basis, direct, qp);
      const auto b = periods::period_matrix(curve, basis, basis_forms, qp);
      Real scale = 0, err = 0;
      for (std::size_t j = 0; j < basis.cycles.size(); ++j) {
        std::complex<Real> v(0);
        for (int i = 0; i < H.n(); ++i) {
          v += flatness::eval_at<Real>(dec.coeffs[static_cast<std::size_t>(i)], t) * b.entries[static_cast<std::size_t>(i)][j];
          scale = std::max(scale, std::abs(b.entries[static_cast<std::size_t>(i)][j]));
        }
        err = std::max(err, std::abs(v - a.entries[0][j]));
        scale = std::max(scale, std::abs(a.entries[0][j]));
      }
      const double rel = static_cast<double>(err / std::max(scale, Real(1)));
      worst = std::max(worst, rel);
      rows.push_back(json{{"t", io::complex_json(t)}, {"residual", rel}});
    }
    const double tol = cfg.verify_tol > 0 ? cfg.verify_tol : 1e-8;
    checks.push_back({"petrov_numeric", worst <= tol, worst, tol, "contour integrals of w against sum p_i(t) * integrals of w_i"});
    result["numeric"] = rows;
  }
  return result;
}

inline json run_system(const RunConfig& cfg, const Inputs& in, std::vector<Check>& checks) {
  const auto& H = *in.H;
  const auto sys = build_system(H);
  const auto crit = critical_data<double>(H, cfg.crit_tol);
  const double tol = cfg.verify_tol > 0 ? cfg.verify_tol : 1e-8;
  const auto ec = eigencheck(sys, crit, tol);
  checks.push_back({"gelfand_leray_identity", true, "exact zero", 0, "exact polynomial re-verification per row"});
  checks.push_back({"charpoly_routes_agree", sys.charpoly_routes_agree, sys.charpoly_routes_agree, 0, "Bareiss vs Faddeev-LeVerrier"});
  checks.push_back({"degrees", sys.degrees_ok, json{{"deg_P", sys.P.degree()}, {"deg_C", max_degree(sys.C)}}, "deg P = n, deg C <= n-1", "exact"});
  checks.push_back({"eigencheck", ec.ok, ec.rel_mismatch, tol, "Eigen eigenvalues of A vs critical values, multiset match"});
  json eta = json::array();
  for (const auto& r : sys.rows) eta.push_back(io::to_json(r.eta));
  return json{{"A", io::to_json(sys.A)},
              {"B", io::to_json(sys.B)},
              {"P", io::to_json(sys.P)},
              {"adjugate", io::to_json(sys.adj)},
              {"C", io::to_json(sys.C)},
              {"eta", eta},
              {"morse", sys.morse},
              {"eigenvalues", complex_list(ec.eigenvalues)},
              {"critical_values", complex_list(crit.values)},
              {"eigen_mismatch", ec.max_mismatch},
              {"charpoly_residual", ec.max_charpoly_residual},
              {"eigenvector_residual", ec.max_eigenvector_residual}};
}

template <class Real>
json run_periods(const RunConfig& cfg, const Inputs& in, std::vector<Check>& checks) {
  const auto& H = *in.H;
  const periods::Curve<Real> curve(H);
  if (cfg.t_values.size() != 1) throw UsageError("periods needs exactly one --t re,im");
  const auto t = widen<Real>({io::parse_complex(cfg.t_values.front())}).front();
  const auto basis = periods::cycle_basis(curve, t);
  periods::QuadParams qp;
  qp.tol = cfg.quad_tol;
  const auto pm = periods::period_matrix(curve, basis, periods::CompiledForms<Real>::basis(H.n()), qp);
  json matrix = json::array();
  for (const auto& row : pm.entries) matrix.push_back(complex_list(row));
  json cycles = json::array();
  int panels = 0, evals = 0;
  double est = 0;
  bool conv = true;
  for (std::size_t j = 0; j < basis.cycles.size(); ++j) {
    const auto& c = basis.cycles[j];
    const auto& info = pm.info[j];
    panels += info.panels;
    evals += info.evaluations;
    est = std::max(est, info.est_error);
    conv = conv && info.converged;
    cycles.push_back(json{{"pair", {c.a, c.b}},
                          {"mode", periods::path_mode_name(c.mode)},
                          {"clearance", static_cast<double>(c.clearance)},
                          {"chain_length", c.chain.size()}});
  }
  using Mat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  Mat M(H.n(), H.n());
  for (int i = 0; i < H.n(); ++i)
    for (int j = 0; j < H.n(); ++j) M(i, j) = pm.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  Eigen::JacobiSVD<Mat> svd(M);
  const double cond = static_cast<double>(svd.singularValues()(H.n() - 1) / svd.singularValues()(0));
  checks.push_back({"quadrature_converged", conv, est, cfg.quad_tol, "adaptive Gauss-Legendre (16 points), panel bisection"});
  checks.push_back({"nonsingular", cond > 1e-8, cond, 1e-8, "smallest / largest singular value of the period matrix"});
  return json{{"t", io::complex_json(t)},
              {"matrix", matrix},
              {"det", io::complex_json(pm.det)},
              {"roots", complex_list(basis.roots)},
              {"cycles", cycles},
              {"quad", json{{"tol", cfg.quad_tol}, {"panels", panels}, {"evaluations", evals}, {"est_error", est}, {"converged", conv}}}};
}

template <class Real>
json run_verify(const RunConfig& cfg, const Inputs& in, std::vector<Check>& checks) {
  const auto& H = *in.H;
  const int n = H.n();
  const auto sys = build_system(H);
  const periods::Curve<double> dcurve(H);
  const auto ts = sample_levels(cfg, dcurve.critical_values);
  const auto tsr = widen<Real>(ts);
  periods::CauchyParams cp;
  cp.quad.tol = cfg.quad_tol;
  json result;
  std::vector<Exact> q0 = rationals(cfg.q0);
  if (!q0.empty() && static_cast<int>(q0.size()) != n) throw UsageError("--q0 needs n entries");

  if (cfg.identity == 3 || cfg.identity == 6) {
    if (q0.empty()) {
      q0.assign(static_cast<std::size_t>(n), Exact(0));
      q0[0] = 1;
    }
    const double tol = cfg.verify_tol > 0 ? cfg.verify_tol : (n <= 3 ? 1e-6 : 1e-5);
    const auto rep = cfg.identity == 3 ? flatness::verify_identity3<Real>(H, sys, q0, tsr, tol, cp)
                                       : flatness::verify_identity6<Real>(H, sys, q0, tsr, tol, cp);
    result = identity_json(rep);
    result["q0"] = exact_row(q0);
    checks.push_back({"identity_" + std::to_string(cfg.identity), rep.pass, rep.max_rel_err, tol,
                      rep.degenerate ? "Delta == 0: |W| against its Hadamard bound" : "Cauchy-circle Wronskian vs Delta * det"});
    checks.push_back({"deg_delta", rep.deg_delta <= rep.deg_bound, rep.deg_delta, rep.deg_bound, "exact"});
  } else if (cfg.identity == 8) {
    if (n % 2 == 0 || n < 3) throw UsageError("identity 8 needs odd n >= 3");
    const auto prof = residues_at_infinity(H);
    const auto rs = flatness::reduced_system<Real>(H, sys, prof);
    std::vector<std::complex<Real>> c;
    const auto m = static_cast<std::size_t>(n - 2);
    if (q0.empty()) {
      c.assign(m, std::complex<Real>(0));
      Rng rng(cfg.seed);
      std::uniform_real_distribution<double> u(-1, 1);
      for (auto& x : c) x = std::complex<Real>(Real(u(rng)), Real(u(rng)));
    } else {
      // Petrov coordinates to adapted ones; the last two must vanish.
      const auto qc = flatness::to_complex_row<Real>(q0);
      Eigen::Matrix<std::complex<Real>, 1, Eigen::Dynamic> row(n);
      for (int i = 0; i < n; ++i) row(i) = qc[static_cast<std::size_t>(i)];
      const auto ct = (row * rs.T.inverse()).eval();
      Real tail = std::max(std::abs(ct(n - 1)), std::abs(ct(n - 2))), head = ct.cwiseAbs().maxCoeff();
      if (tail > Real(1e-9) * head) throw UsageError("--q0 is not in the residue kernel S");
      for (std::size_t i = 0; i < m; ++i) c.push_back(ct(static_cast<Eigen::Index>(i)));
    }
    const double tol = cfg.verify_tol > 0 ? cfg.verify_tol : 1e-5;
    const auto rep = flatness::verify_identity8<Real>(H, sys, rs, c, tsr, tol, cp);
    result = identity_json(rep.base);
    result["nu"] = rep.nu;
    result["structure"] = json{{"a_prime", rep.a_structure}, {"b_prime", rep.b_structure}, {"c_prime", rep.c_structure}, {"tol", rs.tol},
                               {"residues_independent", rep.residues_independent}};
    result["det_tilde"] = json{{"numeric_degree", rep.det_tilde.numeric_degree}, {"bound", rep.det_tilde.bound},
                               {"top_ratio", rep.det_tilde.top_ratio}, {"nodes", rep.det_tilde.nodes},
                               {"radius", rep.det_tilde.radius}, {"centre", io::complex_json(rep.det_tilde.centre)}};
    json used = json::array();
    for (const auto& u : rep.cycles_used) used.push_back(u);
    result["cycles_used"] = used;
    result["bounds"]["deg_delta_bar"] = rep.deg_delta_bar_bound;
    result["coordinates"] = complex_list(c);
    checks.push_back({"identity_8", rep.base.pass, rep.base.max_rel_err, tol, "Cauchy-circle Wronskian over n-2 cycles"});
    checks.push_back({"b_prime_zeros", rep.b_structure <= rs.tol, rep.b_structure, rs.tol, "max |b'_{i,n-1}|, |b'_{i,n}|, i <= n-1, relative"});
    checks.push_back({"deg_det_tilde", rep.det_tilde.ok, rep.det_tilde.numeric_degree, rep.det_tilde.bound, "interpolation on circle points"});
    checks.push_back({"deg_delta_bar", rep.deg_delta_bar_ok, rep.deg_delta_bar, rep.deg_delta_bar_bound, "interpolation of the reduced determinant"});
  } else {
    throw UsageError("--identity must be 3, 6 or 8");
  }

  if (cfg.check_det) {
    // det P / P(t) along the samples, basis transported from the first.
    const periods::Curve<Real> curve(H);
    const auto forms = periods::CompiledForms<Real>::basis(n);
    auto basis = periods::cycle_basis(curve, tsr.front());
    json vals = json::array();
    std::complex<Real> first(0);
    double spread = 0;
    for (std::size_t k = 0; k < tsr.size(); ++k) {
      if (k > 0) basis = flatness::transport_to(curve, basis, tsr[k]);
      const auto pm = periods::period_matrix(curve, basis, forms, cp.quad);
      const auto c = pm.det / flatness::eval_at<Real>(sys.P, tsr[k]);
      if (k == 0) first = c;
      spread = std::max(spread, static_cast<double>(std::abs(c - first) / std::abs(first)));
      vals.push_back(io::complex_json(c));
    }
    result["det_ratio"] = vals;
    checks.push_back({"det_normalization", spread <= 1e-6 && std::abs(first) > 0, spread, 1e-6, "det / prod (t - t_i), transported basis"});
  }
  if (cfg.check_eigen) {
    const auto ec = eigencheck(sys, critical_data<double>(H, cfg.crit_tol), 1e-8);
    checks.push_back({"eigencheck", ec.ok, ec.rel_mismatch, 1e-8, "Eigen eigenvalues of A vs critical values"});
  }
  if (cfg.check_orders) {
    if (n % 2 != 0) throw UsageError("--orders applies to even n");
    std::vector<Exact> qq = q0;
    if (qq.empty()) qq.assign(static_cast<std::size_t>(n), Exact(1));
    const auto rep = flatness::orders_report<Real>(H, sys, qq, cp);
    json poles = json::array();
    for (const auto& p : rep.poles)
      poles.push_back(json{{"t", io::complex_json(p.t_crit)}, {"slope", p.slope}, {"ci95", p.ci95},
                           {"well_conditioned", p.well_conditioned}, {"order_from_delta", p.order_from_delta},
                           {"radii", p.radii}, {"log_abs_w", p.log_abs_w}});
    result["orders"] = json{{"ord_inf_delta", rep.ord_inf_delta}, {"ord_inf_w", rep.ord_inf_w}, {"ord_inf_w_bound", rep.ord_inf_w_bound},
                            {"poles", poles}, {"pole_sum", rep.pole_sum_fitted}, {"pole_sum_bound", rep.pole_sum_bound},
                            {"budget", rep.budget}, {"budget_bound", rep.budget_bound},
                            {"fit_window", "6 radii in [1e-4, 1e-2] x separation"}};
    checks.push_back({"orders", rep.pass, rep.budget, rep.budget_bound, "least-squares log-log slope of |W|"});
  }
  return result;
}

inline json run_residues(const RunConfig&, const Inputs& in, std::vector<Check>& checks) {
  const auto& H = *in.H;
  const auto prof = residues_at_infinity(H);
  json rho = json::array();
  bool pattern = true;
  for (int i = 1; i <= H.n(); ++i) {
    const auto& r = prof.rho[static_cast<std::size_t>(i - 1)];
    rho.push_back(io::to_json(r));
    pattern = pattern && r.degree() <= (i < (H.n() + 1) / 2 ? 0 : 1);
  }
  json S = json::array();
  for (const auto& s : prof.S_basis) S.push_back(exact_row(s));
  if (prof.applicable) checks.push_back({"residue_degrees", pattern, pattern, "constant below (n+1)/2, affine above", "exact series"});
  return json{{"applicable", prof.applicable},
              {"rho", rho},
              {"span_dim", prof.span_dim},
              {"S_basis", S},
              {"dim_S", prof.applicable ? static_cast<int>(prof.S_basis.size()) : 0},
              {"series_order", prof.series_order}};
}

template <class Real>
json run_multiplicity(const RunConfig& cfg, const Inputs& in, std::vector<Check>& checks) {
  const auto& H = *in.H;
  const int n = H.n();
  const periods::Curve<Real> curve(H);
  if (cfg.t_values.size() != 1) throw UsageError("multiplicity needs exactly one --t0 re,im");
  const auto t0 = widen<Real>({io::parse_complex(cfg.t_values.front())}).front();
  if (cfg.cycle < 0 || cfg.cycle >= n) throw UsageError("--cycle out of range");
  const auto basis = periods::cycle_basis(curve, t0);
  periods::CauchyParams cp;
  cp.quad.tol = cfg.quad_tol;
  std::vector<std::complex<Real>> c;
  bool exact_zero = false;
  if (cfg.vanish >= 0) {
    c = periods::vanishing_combination(curve, basis, static_cast<std::size_t>(cfg.cycle), cfg.vanish, cp);
  } else {
    auto q = rationals(cfg.coeffs);
    if (q.empty()) q = random_constant_row(*std::make_unique<Rng>(cfg.seed), n);
    if (static_cast<int>(q.size()) != n) throw UsageError("--coeffs needs n entries");
    exact_zero = std::all_of(q.begin(), q.end(), [](const Exact& e) { return e.is_zero(); });
    c = flatness::to_complex_row<Real>(q);
  }
  const auto r = periods::multiplicity_estimate(curve, basis, c, static_cast<std::size_t>(cfg.cycle), cfg.mult_tol, cp);
  json result{{"order", r.flat ? json(nullptr) : json(r.order)},
              {"flat", r.flat},
              {"taylor_magnitudes", r.taylor_magnitudes},
              {"bound", r.bound},
              {"coeffs", complex_list(c)},
              {"cauchy_radius", r.rho},
              {"cauchy_nodes", r.nodes},
              {"tol", r.tol}};
  if (r.flat) {
    // A combination of basis forms with constant coefficients is exact only when all vanish.
    result["petrov_class_zero"] = exact_zero;
    checks.push_back({"flat_implies_exact", exact_zero, exact_zero, nullptr, "Petrov class of a constant combination"});
  } else {
    checks.push_back({"within_bound", r.order <= r.bound, r.order, r.bound, "smallest k with |a_k| > tol * max |I| on the circle"});
  }
  if (cfg.vanish >= 0) {
    result["imposed"] = cfg.vanish;
    checks.push_back({"imposed_order", r.order == cfg.vanish, r.order, cfg.vanish, "null vector of the Taylor matrix"});
  }
  return result;
}

inline json run_bound(const RunConfig& cfg, std::vector<Check>& checks) {
  if (cfg.n < 2) throw UsageError("bound needs --n >= 2");
  json result{{"n", cfg.n}, {"multiplicity_bound", multiplicity_bound(cfg.n)}};
  if (cfg.d >= 0) {
    const auto r = general_bound_report(cfg.n, cfg.d);
    result["general"] = json{{"d", r.d}, {"e", r.e}, {"q_degree_bounds", r.q_degree_bounds},
                             {"delta_degree_bound", r.delta_degree_bound}, {"bound", r.bound},
                             {"A", io::to_json(r.A)}, {"B", io::to_json(r.B)}, {"affine", io::to_json(r.affine)}};
    checks.push_back({"bound_below_affine", Rational(r.bound) <= r.affine, r.bound, io::to_json(r.affine), "degree bookkeeping"});
  }
  return result;
}

template <class Real>
json dispatch(const RunConfig& cfg, const Inputs& in, std::vector<Check>& checks) {
  const auto& s = cfg.subcommand;
  if (s == "analyze") return run_analyze(cfg, in, checks);
  if (s == "reduce") return run_reduce<Real>(cfg, in, checks);
  if (s == "system") return run_system(cfg, in, checks);
  if (s == "periods") return run_periods<Real>(cfg, in, checks);
  if (s == "verify") return run_verify<Real>(cfg, in, checks);
  if (s == "residues") return run_residues(cfg, in, checks);
  if (s == "multiplicity") return run_multiplicity<Real>(cfg, in, checks);
  if (s == "bound") return run_bound(cfg, checks);
  throw UsageError("unknown subcommand " + s);
}

inline json config_echo(const RunConfig& cfg) {
  return json{{"input_path", cfg.input_path}, {"t", cfg.t_values}, {"samples", cfg.samples}, {"identity", cfg.identity},
              {"q0", cfg.q0}, {"coeffs", cfg.coeffs}, {"vanish", cfg.vanish}, {"cycle", cfg.cycle},
              {"quad_tol", cfg.quad_tol}, {"verify_tol", cfg.verify_tol}, {"mult_tol", cfg.mult_tol},
              {"crit_tol", cfg.crit_tol}, {"n", cfg.n}, {"d", cfg.d}};
}

}  // namespace detail

/// Runs one subcommand. Exit code 0: every check passed; 2: some check
/// failed; 1: usage or input error (report carries the diagnostic).
inline RunResult run(const RunConfig& cfg) {
  RunResult res;
  json report{{"tool", "hyperpf"}, {"version", HYPERPF_VERSION}, {"subcommand", cfg.subcommand},
              {"seed", cfg.seed}, {"precision", cfg.precision}, {"options", detail::config_echo(cfg)}};
  try {
    if (cfg.precision != "double" && cfg.precision != "extended") throw UsageError("--precision must be double or extended");
    if (cfg.quad_tol <= 0 || cfg.verify_tol < 0 || cfg.mult_tol <= 0 || cfg.crit_tol <= 0)
      throw UsageError("tolerances must be positive");
    const bool need_h = cfg.subcommand != "bound";
    const auto in = detail::load_inputs(cfg, need_h, cfg.subcommand == "reduce");
    if (in.H) report["input"] = json{{"hamiltonian", io::to_json(*in.H)}};
    if (in.form) report["input"]["form"] = io::to_json(*in.form);
    std::vector<detail::Check> checks;
    report["result"] = cfg.precision == "extended" ? detail::dispatch<long double>(cfg, in, checks)
                                                   : detail::dispatch<double>(cfg, in, checks);
    report["checks"] = detail::checks_json(checks);
    bool ok = true;
    for (const auto& c : checks) ok = ok && c.pass;
    report["status"] = ok ? "pass" : "fail";
    res.exit_code = ok ? 0 : 2;
  } catch (const periods::NearCriticalError& e) {
    res.exit_code = 1;
    std::ostringstream msg;
    msg << "refusing near-critical level: " << e.what() << " (distance " << std::scientific << e.distance() << ")";
    res.error = msg.str();
    report["status"] = "error";
    report["error"] = json{{"message", res.error}, {"distance", e.distance()}};
  } catch (const std::exception& e) {
    res.exit_code = 1;
    res.error = e.what();
    report["status"] = "error";
    report["error"] = json{{"message", res.error}};
  }
  res.report = std::move(report);
  return res;
}

/// Builds a RunConfig from argv. Throws CLI::ParseError (handled by app.exit).
inline void configure(CLI::App& app, RunConfig& cfg) {
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-i,--input", cfg.input_path, "Hamiltonian JSON file (or {\"hamiltonian\":..,\"form\":..})");
  app.add_option("--json", cfg.input_json, "Hamiltonian JSON inline");
  app.add_option("--json-out", cfg.output_path, "write the report here instead of stdout");
  app.add_option("--seed", cfg.seed, "seed for randomized samples");
  app.add_option("--precision", cfg.precision, "double or extended")->check(CLI::IsMember({"double", "extended"}));
  app.add_option("--quad-tol", cfg.quad_tol, "relative quadrature tolerance");
  app.add_option("--crit-tol", cfg.crit_tol, "critical value separation tolerance");

  auto* a = app.add_subcommand("analyze", "critical data, Morse flag, genus");
  auto* r = app.add_subcommand("reduce", "Petrov decomposition of a 1-form");
  r->add_option("--form", cfg.form_path, "1-form JSON file");
  r->add_option("--form-json", cfg.form_json, "1-form JSON inline");
  r->add_option("--t", cfg.t_values, "levels for a numeric cross-check");
  r->add_option("--tol", cfg.verify_tol, "numeric cross-check tolerance");
  auto* s = app.add_subcommand("system", "Picard-Fuchs system and eigencheck");
  auto* p = app.add_subcommand("periods", "period matrix at one level");
  p->add_option("--t", cfg.t_values, "level as re,im")->required();
  auto* v = app.add_subcommand("verify", "Wronskian identities and related checks");
  v->add_option("--identity", cfg.identity, "3, 6 or 8")->check(CLI::IsMember({3, 6, 8}));
  v->add_option("--samples", cfg.samples, "number of random regular levels when --t is absent")->check(CLI::PositiveNumber);
  v->add_option("--t", cfg.t_values, "sample levels as re,im");
  v->add_option("--q0", cfg.q0, "seed row as rationals");
  v->add_option("--tol", cfg.verify_tol, "relative tolerance");
  v->add_flag("--det", cfg.check_det, "also check det / prod(t - t_i) is constant");
  v->add_flag("--eigen", cfg.check_eigen, "also run the eigencheck");
  v->add_flag("--orders", cfg.check_orders, "also run the order bookkeeping (even n)");
  auto* e = app.add_subcommand("residues", "residues at infinity and the kernel S");
  auto* m = app.add_subcommand("multiplicity", "order of vanishing of one period");
  m->add_option("--t0", cfg.t_values, "level as re,im")->required();
  m->add_option("--coeffs", cfg.coeffs, "combination of the basis forms, rationals");
  m->add_option("--vanish", cfg.vanish, "construct a combination with this many vanishing derivatives");
  m->add_option("--cycle", cfg.cycle, "basis cycle index");
  m->add_option("--tol", cfg.mult_tol, "relative threshold for nonzero Taylor coefficients");
  auto* b = app.add_subcommand("bound", "multiplicity bounds");
  b->add_option("--n", cfg.n, "degree parameter n")->required();
  b->add_option("--d", cfg.d, "form degree for the general bound");
  for (auto* sub : {a, r, s, p, v, e, m, b})
    sub->callback([&cfg, sub] { cfg.subcommand = sub->get_name(); });
}

inline int main_entry(int argc, char** argv) {
  CLI::App app{"hyperpf: Picard-Fuchs systems and Abelian integrals of hyperelliptic Hamiltonians"};
  app.set_version_flag("--version", HYPERPF_VERSION);
  RunConfig cfg;
  configure(app, cfg);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  const auto res = run(cfg);
  const std::string text = res.report.dump(2);
  if (!cfg.output_path.empty()) {
    std::ofstream out(cfg.output_path);
    if (!out) {
      std::cerr << "cannot write " << cfg.output_path << "\n";
      return 1;
    }
    out << text << "\n";
  } else {
    std::cout << text << "\n";
  }
  if (res.exit_code == 1) std::cerr << "hyperpf: " << res.error << "\n";
  return res.exit_code;
}

}  // namespace hyperpf::cli
