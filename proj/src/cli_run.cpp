// Copyright 2026 The qpd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "qpd/bounds.hpp"
#include "qpd/capacity.hpp"
#include "qpd/dynamics.hpp"
#include "qpd/gaussian.hpp"
#include "qpd/polarity.hpp"
#include "qpd/reconstruct.hpp"
#include "qpd/selftest.hpp"
#include "qpd/symplectic.hpp"

namespace qpd {

namespace {

using Json = nlohmann::ordered_json;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::dimension_mismatch:
    case Errc::dimension_odd:
    case Errc::index_out_of_range:
    case Errc::unsupported_body:
    case Errc::degenerate_box:
    case Errc::space_mismatch:
      return 1;
    case Errc::verification_failed:
      return 3;
    default:
      return 2;
  }
}

void require_fields(const Json& j, std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(Errc::invalid_argument, "unknown field '" + item.key() + "'");
  }
}

double parse_finite(const Json& j, const char* what) {
  if (!j.is_number()) fail(Errc::invalid_argument, std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(Errc::invalid_argument, std::string(what) + " must be finite");
  return v;
}

Matrix parse_matrix(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    fail(Errc::invalid_argument, std::string(what) + " must be a non-empty array of rows");
  }
  const int rows = static_cast<int>(j.size());
  if (!j[0].is_array() || j[0].empty()) {
    fail(Errc::invalid_argument, std::string(what) + " rows must be non-empty arrays");
  }
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols) {
      fail(Errc::invalid_argument, std::string(what) + " is ragged");
    }
    for (int c = 0; c < cols; ++c) m(i, c) = parse_finite(j[i][c], what);
  }
  return m;
}

Vec parse_vector(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    fail(Errc::invalid_argument, std::string(what) + " must be a non-empty array");
  }
  Vec v;
  for (const auto& x : j) v.push_back(parse_finite(x, what));
  return v;
}

Json json_matrix(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json json_vector(const Vec& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

Space parse_space(const Json& j) {
  const std::string s = j.get<std::string>();
  if (s == "position") return Space::Position;
  if (s == "momentum") return Space::Momentum;
  if (s == "phase") return Space::Phase;
  fail(Errc::invalid_argument, "space must be position, momentum, or phase");
}

Body parse_body(const Json& j, const Tolerance& tol) {
  if (!j.is_object()) fail(Errc::invalid_argument, "body must be an object");
  if (!j.contains("kind")) fail(Errc::invalid_argument, "body needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  const Space space = j.contains("space") ? parse_space(j.at("space")) : Space::Position;
  if (kind == "ellipsoid") {
    require_fields(j, {"kind", "space", "shape", "level"});
    const double level = j.contains("level") ? parse_finite(j.at("level"), "level") : 1.0;
    return EllipsoidBody(space, parse_matrix(j.at("shape"), "shape"), level, tol);
  }
  if (kind == "box") {
    require_fields(j, {"kind", "space", "half_widths"});
    BoxBody box{space, parse_vector(j.at("half_widths"), "half_widths")};
    for (double w : box.half_widths) {
      if (!(w > 0.0)) fail(Errc::degenerate_box, "box half-widths must be positive");
    }
    return box;
  }
  if (kind == "cross-polytope") {
    require_fields(j, {"kind", "space", "weights", "level"});
    CrossPolytopeBody cp{space, parse_vector(j.at("weights"), "weights"),
                         parse_finite(j.at("level"), "level")};
    for (double w : cp.weights) {
      if (!(w > 0.0)) fail(Errc::invalid_argument, "weights must be positive");
    }
    if (!(cp.level > 0.0)) fail(Errc::invalid_argument, "level must be positive");
    return cp;
  }
  fail(Errc::unsupported_body, "body kind '" + kind + "'");
}

Json json_body(const Body& b) {
  Json j;
  if (std::holds_alternative<EllipsoidBody>(b)) {
    const auto& e = std::get<EllipsoidBody>(b);
    j["kind"] = "ellipsoid";
    j["space"] = to_string(e.space());
    j["shape"] = json_matrix(e.shape());
    j["level"] = e.level();
    j["volume"] = e.volume();
  } else if (std::holds_alternative<BoxBody>(b)) {
    const auto& box = std::get<BoxBody>(b);
    j["kind"] = "box";
    j["space"] = to_string(box.space);
    j["half_widths"] = json_vector(box.half_widths);
    j["volume"] = box.volume();
  } else {
    const auto& cp = std::get<CrossPolytopeBody>(b);
    j["kind"] = "cross-polytope";
    j["space"] = to_string(cp.space);
    j["weights"] = json_vector(cp.weights);
    j["level"] = cp.level;
    j["volume"] = cp.volume();
  }
  return j;
}

Json json_pair_report(const DualPairReport& rep) {
  Json j;
  j["is_pair"] = rep.is_pair;
  j["is_saturated"] = rep.is_saturated;
  j["lambda"] = json_vector(rep.lambda);
  if (!rep.witness.empty()) j["witness"] = json_vector(rep.witness);
  return j;
}

Json json_gaussian(const GaussianPure& psi) {
  Json j;
  j["hbar"] = psi.hbar;
  j["W"] = json_matrix(psi.W);
  j["Y"] = json_matrix(psi.Y);
  return j;
}

struct Problem {
  Json raw;
  double hbar = 1.0;
  int n = 0;
  Tolerance tol;
  std::uint64_t seed = 1;
  bool seed_given = false;
};

Problem parse_common(const std::string& input, const CliOptions& opts,
                     std::initializer_list<const char*> allowed) {
  Problem p;
  Json j;
  try {
    j = Json::parse(input);
  } catch (const std::exception& e) {
    fail(Errc::invalid_argument, std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object()) fail(Errc::invalid_argument, "problem file must be a JSON object");
  require_fields(j, allowed);
  if (!j.contains("version") || !j.at("version").is_string() ||
      j.at("version").get<std::string>() != "1") {
    fail(Errc::invalid_argument, "problem files must carry \"version\": \"1\"");
  }
  if (j.contains("hbar")) {
    p.hbar = parse_finite(j.at("hbar"), "hbar");
    if (!(p.hbar > 0.0)) fail(Errc::invalid_argument, "hbar must be positive");
  }
  if (j.contains("n")) {
    if (!j.at("n").is_number_integer() || j.at("n").get<long long>() < 1) {
      fail(Errc::invalid_argument, "n must be a positive integer");
    }
    p.n = static_cast<int>(j.at("n").get<long long>());
  }
  if (j.contains("tolerance_rel")) {
    p.tol.rel_eq = parse_finite(j.at("tolerance_rel"), "tolerance_rel");
  }
  if (opts.tolerance_rel) p.tol.rel_eq = *opts.tolerance_rel;
  p.tol.validate();
  if (j.contains("seed")) {
    p.seed = j.at("seed").get<std::uint64_t>();
    p.seed_given = true;
  }
  if (opts.seed) {
    p.seed = *opts.seed;
    p.seed_given = true;
  }
  p.raw = std::move(j);
  return p;
}

void check_n(const Problem& p, int dim, const char* what) {
  if (p.n != 0 && dim != p.n) {
    std::ostringstream os;
    os << what << " has dimension " << dim << " but n = " << p.n;
    fail(Errc::invalid_argument, os.str());
  }
}

Json report_header(const std::string& command, const Problem& p) {
  Json rep;
  rep["command"] = command;
  rep["version"] = "1";
  rep["hbar"] = p.hbar;
  if (p.n != 0) rep["n"] = p.n;
  Json tol;
  tol["rel_eq"] = p.tol.rel_eq;
  tol["psd_slack"] = p.tol.psd_slack;
  tol["strict_pd_floor"] = p.tol.strict_pd_floor;
  rep["tolerance"] = std::move(tol);
  if (p.seed_given) rep["seed"] = p.seed;
  rep["input"] = p.raw;
  return rep;
}

// --- command handlers -------------------------------------------------------

Json cmd_dual(const Problem& p) {
  const Body body = parse_body(p.raw.at("body"), p.tol);
  check_n(p, body_dim(body), "body");
  const Body dual = polar_dual(body, p.hbar, p.tol);
  Json result;
  result["dual"] = json_body(dual);
  if (std::holds_alternative<EllipsoidBody>(body)) {
    const auto& e = std::get<EllipsoidBody>(body);
    const auto& d = std::get<EllipsoidBody>(dual);
    const bool self_dual =
        approx_equal(e.with_level(p.hbar).shape(), d.with_level(p.hbar).shape(), p.tol.rel_eq);
    result["self_dual"] = self_dual;
    if (self_dual) {
      result["note"] = "the body coincides with its dual: the pair (X, X^hbar) is saturated";
    }
  }
  return result;
}

Json cmd_pair_check(const Problem& p) {
  const Matrix a = parse_matrix(p.raw.at("A"), "A");
  const Matrix b = parse_matrix(p.raw.at("B"), "B");
  check_n(p, a.rows(), "A");
  const double lx = p.raw.contains("level_x") ? parse_finite(p.raw.at("level_x"), "level_x") : p.hbar;
  const double lp = p.raw.contains("level_p") ? parse_finite(p.raw.at("level_p"), "level_p") : p.hbar;
  const EllipsoidBody x(Space::Position, a, lx, p.tol);
  const EllipsoidBody pp(Space::Momentum, b, lp, p.tol);
  Json result;
  result["pair"] = json_pair_report(is_quantum_pair(x, pp, p.hbar, p.tol));
  return result;
}

Json cmd_williamson(const Problem& p) {
  const Matrix sigma = parse_matrix(p.raw.at("sigma"), "sigma");
  check_n(p, sigma.rows() / 2, "sigma");
  const auto w = williamson(sigma, p.tol);
  Json result;
  result["nu"] = json_vector(w.nu);
  result["S"] = json_matrix(w.S.matrix());
  result["certification_residual"] = w.S.residual();
  Vec d(static_cast<size_t>(sigma.rows()));
  const int n = sigma.rows() / 2;
  for (int k = 0; k < n; ++k) d[k] = d[n + k] = w.nu[k];
  const Matrix recon = w.S.matrix().transposed() * Matrix::diag(d) * w.S.matrix();
  result["reconstruction_residual"] =
      frobenius_norm(recon - symmetrize(sigma)) / frobenius_norm(sigma);
  return result;
}

Json cmd_project(const Problem& p) {
  Json result;
  if (p.raw.contains("M") == p.raw.contains("sigma")) {
    fail(Errc::invalid_argument, "provide exactly one of 'M' or 'sigma'");
  }
  if (p.raw.contains("M")) {
    const PhaseEllipsoid omega(p.hbar, parse_matrix(p.raw.at("M"), "M"), p.tol);
    check_n(p, omega.dof(), "M");
    const auto [ox, op] = project(omega, p.tol);
    result["omega_x"] = json_body(Body{ox});
    result["omega_p"] = json_body(Body{op});
    result["pair"] = json_pair_report(is_quantum_pair(ox, op, p.hbar, p.tol));
  } else {
    const CovState state(p.hbar, parse_matrix(p.raw.at("sigma"), "sigma"), p.tol);
    check_n(p, state.dof(), "sigma");
    const auto [ox, op] = project(covariance_ellipsoid(state, p.tol), p.tol);
    result["omega_x"] = json_body(Body{ox});
    result["omega_p"] = json_body(Body{op});
    result["nu"] = json_vector(state.nu());
    result["quantum"] = state.quantum();
    if (state.quantum()) {
      result["pair"] = json_pair_report(projection_pair_check(state, p.tol));
    }
  }
  return result;
}

Json json_solution(const PauliSolution& sol) {
  Json j;
  j["ambiguity"] = sol.ambiguity == Ambiguity::Unique ? "unique" : "sign-pair";
  j["xp_rank"] = sol.xp_rank;
  Json partners = Json::array();
  for (const auto& partner : sol.partners) partners.push_back(json_gaussian(partner));
  j["partners"] = std::move(partners);
  Json sigmas = Json::array();
  for (const auto& s : sol.blob_sigmas) sigmas.push_back(json_matrix(s.sigma()));
  j["sigmas"] = std::move(sigmas);
  Json residuals;
  residuals["projection"] = sol.projection_residual;
  residuals["symplectic"] = sol.symplectic_residual;
  residuals["uncertainty_identity"] = sol.identity_residual;
  j["residuals"] = std::move(residuals);
  return j;
}

Json cmd_reconstruct(const Problem& p) {
  const std::string mode = p.raw.at("mode").get<std::string>();
  Json result;
  result["mode"] = mode;
  Json notes = Json::array();
  if (mode == "pauli-1d") {
    const double sxx = parse_finite(p.raw.at("sigma_xx"), "sigma_xx");
    const double spp = parse_finite(p.raw.at("sigma_pp"), "sigma_pp");
    result["solution"] = json_solution(pauli_1d(sxx, spp, p.hbar, p.tol));
  } else if (mode == "saturated") {
    const Matrix a = parse_matrix(p.raw.at("A"), "A");
    check_n(p, a.rows(), "A");
    result["solution"] = json_solution(reconstruct_saturated(a, p.hbar, p.tol));
    notes.push_back(
        "sigma_xx is pinned to (hbar/2) inv(A) by the reprojection constraint; "
        "the variant (hbar/2) A^2 fails it and is rejected");
  } else if (mode == "pair") {
    const Matrix a = parse_matrix(p.raw.at("A"), "A");
    const Matrix b = parse_matrix(p.raw.at("B"), "B");
    check_n(p, a.rows(), "A");
    result["solution"] = json_solution(reconstruct_pair(a, b, p.hbar, p.tol));
    notes.push_back(
        "the cross block is the principal square root of (hbar/2)^2 (inv(A) inv(B) - I), "
        "taken through a PSD similarity; the transposed ordering fails the "
        "symplecticity check on non-commuting inputs");
  } else if (mode == "max-volume") {
    const Matrix a = parse_matrix(p.raw.at("A"), "A");
    const Matrix b = parse_matrix(p.raw.at("B"), "B");
    check_n(p, a.rows(), "A");
    const auto rep = max_volume_state(a, b, p.hbar, p.tol);
    Json mv;
    mv["sigma"] = json_matrix(rep.state.state().sigma());
    mv["lambda"] = json_vector(rep.lambda);
    mv["purity"] = rep.purity;
    mv["purity_from_spectrum"] = rep.purity_from_spectrum;
    mv["lambda_sq_product"] = rep.lambda_sq_product;
    mv["lambda_quarter_product"] = rep.lambda_quarter_product;
    mv["exponent_flagged"] = rep.exponent_flagged;
    result["solution"] = std::move(mv);
    if (rep.exponent_flagged) {
      notes.push_back(
          "purity equals prod_j lambda_j^{1/2}; the exponent-2 and exponent-1/4 "
          "variants are reported for comparison and do not satisfy the "
          "reprojection constraint");
    }
  } else {
    fail(Errc::invalid_argument, "mode must be pauli-1d, saturated, pair, or max-volume");
  }
  if (!notes.empty()) result["notes"] = std::move(notes);
  return result;
}

Json json_capacity(const CapacityReport& rep) {
  Json j;
  j["value"] = rep.value;
  j["formula"] = to_string(rep.formula);
  j["witnesses"] = json_vector(rep.witnesses);
  if (rep.formula == CapacityFormula::ProductScaling) {
    j["scaling_factor"] = rep.scaling_factor;
  }
  return j;
}

Json cmd_capacity(const Problem& p) {
  const std::string mode = p.raw.at("mode").get<std::string>();
  Json result;
  result["mode"] = mode;
  if (mode == "ellipsoid") {
    const PhaseEllipsoid omega(p.hbar, parse_matrix(p.raw.at("M"), "M"), p.tol);
    check_n(p, omega.dof(), "M");
    result["capacity"] = json_capacity(capacity_ellipsoid(omega, p.tol));
  } else if (mode == "threshold") {
    const CovState state(p.hbar, parse_matrix(p.raw.at("sigma"), "sigma"), p.tol);
    check_n(p, state.dof(), "sigma");
    const auto th = capacity_quantum_threshold(state, p.tol);
    result["capacity"] = th.capacity;
    result["quantum"] = th.quantum;
    result["nu_min"] = state.nu_min();
    result["threshold"] = 3.141592653589793 * p.hbar;
  } else if (mode == "product") {
    const EllipsoidBody x(Space::Position, parse_matrix(p.raw.at("A"), "A"), p.hbar, p.tol);
    const EllipsoidBody pp(Space::Momentum, parse_matrix(p.raw.at("B"), "B"), p.hbar, p.tol);
    check_n(p, x.dim(), "A");
    result["capacity"] = json_capacity(cmax_product(x, pp, p.hbar, p.tol));
  } else if (mode == "isoperimetric") {
    IsoperimetricReport rep;
    if (p.raw.contains("M")) {
      const PhaseEllipsoid omega(p.hbar, parse_matrix(p.raw.at("M"), "M"), p.tol);
      check_n(p, omega.dof(), "M");
      rep = isoperimetric_check(omega, p.tol);
    } else {
      const EllipsoidBody x(Space::Position, parse_matrix(p.raw.at("A"), "A"), p.hbar, p.tol);
      const EllipsoidBody pp(Space::Momentum, parse_matrix(p.raw.at("B"), "B"), p.hbar, p.tol);
      check_n(p, x.dim(), "A");
      rep = isoperimetric_check(x, pp, p.hbar, p.tol);
    }
    result["lhs"] = rep.lhs;
    result["rhs"] = rep.rhs;
    result["volume"] = rep.volume;
    result["holds"] = rep.holds;
  } else {
    fail(Errc::invalid_argument, "mode must be ellipsoid, threshold, product, or isoperimetric");
  }
  return result;
}

Json cmd_evolve(const Problem& p, std::string* csv_out) {
  const CovState state(p.hbar, parse_matrix(p.raw.at("sigma"), "sigma"), p.tol);
  check_n(p, state.dof(), "sigma");
  const Vec grid = parse_vector(p.raw.at("t_grid"), "t_grid");

  if (p.raw.contains("hess") == p.raw.contains("schedule")) {
    fail(Errc::invalid_argument, "provide exactly one of 'hess' or 'schedule'");
  }

  Json result;
  Json notes = Json::array();
  notes.push_back(
      "flow matrices are exp(t J H''); the variant exp(t H'') is not symplectic "
      "and is rejected by the group certification");

  if (p.raw.contains("schedule")) {
    Schedule schedule;
    for (const auto& seg : p.raw.at("schedule")) {
      require_fields(seg, {"hess", "duration"});
      schedule.segments.push_back(
          Segment{QuadHamiltonian(parse_matrix(seg.at("hess"), "hess"), p.tol),
                  parse_finite(seg.at("duration"), "duration")});
    }
    const auto s = flow_schedule(schedule, p.tol);
    result["flow"] = json_matrix(s.matrix());
    result["certification_residual"] = s.residual();
    const Matrix sigma_t = symmetrize(s.matrix() * state.sigma() * s.matrix().transposed());
    result["sigma_final"] = json_matrix(sigma_t);
    result["notes"] = std::move(notes);
    return result;
  }

  const QuadHamiltonian h(parse_matrix(p.raw.at("hess"), "hess"), p.tol);
  const auto series = projection_volume_series(state, h, grid, p.tol);
  Json points = Json::array();
  std::ostringstream csv;
  csv << "t,vol_x,vol_p,is_pair,is_saturated,det_sigma\n";
  for (const auto& pt : series) {
    const CovState st = evolve_cov(state, h, pt.t, p.tol);
    Json row;
    row["t"] = pt.t;
    row["vol_x"] = pt.vol_x;
    row["vol_p"] = pt.vol_p;
    row["is_pair"] = pt.pair.is_pair;
    row["is_saturated"] = pt.pair.is_saturated;
    row["det_sigma"] = determinant(st.sigma());
    row["nu"] = json_vector(st.nu());
    points.push_back(std::move(row));
    csv << pt.t << ',' << pt.vol_x << ',' << pt.vol_p << ',' << (pt.pair.is_pair ? 1 : 0)
        << ',' << (pt.pair.is_saturated ? 1 : 0) << ',' << determinant(st.sigma()) << '\n';
  }
  result["series"] = std::move(points);
  result["notes"] = std::move(notes);
  if (csv_out) *csv_out = csv.str();
  return result;
}

Json cmd_mahler(const Problem& p) {
  const Body body = parse_body(p.raw.at("body"), p.tol);
  check_n(p, body_dim(body), "body");
  const auto rep = mahler_volume(body, p.hbar, p.tol);
  Json result;
  result["upsilon"] = rep.upsilon;
  result["lower_kuperberg"] = rep.lower_kuperberg;
  result["lower_conjecture"] = rep.lower_conjecture;
  result["upper_santalo"] = rep.upper_santalo;
  result["within_bounds"] = rep.within_bounds;
  result["dual"] = json_body(polar_dual(body, p.hbar, p.tol));
  if (p.raw.contains("mc_samples")) {
    const long long samples = p.raw.at("mc_samples").get<long long>();
    const auto est = mc_volume(oracle_for(body), p.seed, samples);
    Json mc;
    mc["estimate"] = est.estimate;
    mc["std_error"] = est.std_error;
    mc["exact"] = body_volume(body);
    mc["within_3_sigma"] =
        std::abs(est.estimate - body_volume(body)) <= 3.0 * est.std_error + 1e-12;
    result["mc"] = std::move(mc);
  }
  return result;
}

Json cmd_hardy(const Problem& p) {
  const Matrix a = parse_matrix(p.raw.at("A"), "A");
  const Matrix b = parse_matrix(p.raw.at("B"), "B");
  check_n(p, a.rows(), "A");
  const auto verdict = hardy_classify(a, b, p.hbar, p.tol);
  Json result;
  result["case"] = to_string(verdict.kind);
  result["lambda"] = json_vector(verdict.lambda);
  result["capacity"] = verdict.capacity;
  if (verdict.unique_state) result["unique_state"] = json_gaussian(*verdict.unique_state);
  if (verdict.family_note) result["family_note"] = *verdict.family_note;
  return result;
}

Json cmd_donoho_stark(const Problem& p) {
  const Body x = parse_body(p.raw.at("X"), p.tol);
  check_n(p, body_dim(x), "X");
  const Body pbody =
      p.raw.contains("P") ? parse_body(p.raw.at("P"), p.tol) : polar_dual(x, p.hbar, p.tol);

  double eps_x = 0.0, eps_p = 0.0;
  Json measured;
  if (p.raw.contains("state")) {
    const Json& sj = p.raw.at("state");
    require_fields(sj, {"sigma", "W", "Y"});
    CovState state = sj.contains("sigma")
                         ? CovState(p.hbar, parse_matrix(sj.at("sigma"), "state.sigma"), p.tol)
                         : sigma_from_wy(make_gaussian_pure(
                               p.hbar, parse_matrix(sj.at("W"), "state.W"),
                               parse_matrix(sj.at("Y"), "state.Y"), p.tol), p.tol);
    const long long samples =
        p.raw.contains("samples") ? p.raw.at("samples").get<long long>() : (1 << 18);
    const auto ex = concentration(state, x, Space::Position, p.seed, samples);
    const auto ep = concentration(state, pbody, Space::Momentum, p.seed + 1, samples);
    eps_x = ex.eps;
    eps_p = ep.eps;
    measured["eps_x_std_error"] = ex.mass_std_error;
    measured["eps_p_std_error"] = ep.mass_std_error;
  } else {
    eps_x = parse_finite(p.raw.at("eps_x"), "eps_x");
    eps_p = parse_finite(p.raw.at("eps_p"), "eps_p");
  }

  const auto rep = donoho_stark_check(eps_x, eps_p, x, pbody, p.hbar, p.tol);
  Json result;
  result["eps_x"] = rep.eps_x;
  result["eps_p"] = rep.eps_p;
  result["ds_lhs"] = rep.ds_lhs;
  result["ds_rhs"] = rep.ds_rhs;
  result["vacuous"] = rep.vacuous;
  result["holds"] = rep.holds;
  result["band_lower"] = rep.band_lower;
  result["band_upper"] = rep.band_upper;
  result["band_applicable"] = rep.band_applicable;
  if (!measured.empty()) result["measured"] = std::move(measured);
  return result;
}

Json cmd_selftest() {
  const auto results = run_acceptance_suite();
  Json rows = Json::array();
  for (const auto& r : results) {
    Json row;
    row["index"] = r.index;
    row["name"] = r.name;
    row["pass"] = r.pass;
    row["detail"] = r.detail;
    rows.push_back(std::move(row));
  }
  Json result;
  result["criteria"] = std::move(rows);
  result["all_passed"] = all_passed(results);
  return result;
}

}  // namespace

RunResult run_command(const std::string& command, const std::string& input_json,
                      const CliOptions& options) {
  RunResult out;
  try {
    Json report;
    std::string csv;
    if (command == "dual") {
      Problem p = parse_common(input_json, options,
                               {"version", "hbar", "n", "tolerance_rel", "body"});
      report = report_header(command, p);
      report["result"] = cmd_dual(p);
    } else if (command == "pair-check") {
      Problem p = parse_common(
          input_json, options,
          {"version", "hbar", "n", "tolerance_rel", "A", "B", "level_x", "level_p"});
      report = report_header(command, p);
      report["result"] = cmd_pair_check(p);
    } else if (command == "williamson") {
      Problem p =
          parse_common(input_json, options, {"version", "hbar", "n", "tolerance_rel", "sigma"});
      report = report_header(command, p);
      report["result"] = cmd_williamson(p);
    } else if (command == "project") {
      Problem p = parse_common(input_json, options,
                               {"version", "hbar", "n", "tolerance_rel", "M", "sigma"});
      report = report_header(command, p);
      report["result"] = cmd_project(p);
    } else if (command == "reconstruct") {
      Problem p = parse_common(input_json, options,
                               {"version", "hbar", "n", "tolerance_rel", "mode", "sigma_xx",
                                "sigma_pp", "A", "B"});
      report = report_header(command, p);
      report["result"] = cmd_reconstruct(p);
    } else if (command == "capacity") {
      Problem p = parse_common(input_json, options,
                               {"version", "hbar", "n", "tolerance_rel", "mode", "M", "sigma",
                                "A", "B"});
      report = report_header(command, p);
      report["result"] = cmd_capacity(p);
    } else if (command == "evolve") {
      Problem p = parse_common(input_json, options,
                               {"version", "hbar", "n", "tolerance_rel", "sigma", "hess",
                                "schedule", "t_grid"});
      report = report_header(command, p);
      report["result"] = cmd_evolve(p, &csv);
      if (options.format == "csv" && !csv.empty()) {
        out.report = csv;
        return out;
      }
    } else if (command == "mahler") {
      Problem p = parse_common(input_json, options,
                               {"version", "hbar", "n", "tolerance_rel", "body", "mc_samples",
                                "seed"});
      report = report_header(command, p);
      report["result"] = cmd_mahler(p);
    } else if (command == "hardy") {
      Problem p =
          parse_common(input_json, options, {"version", "hbar", "n", "tolerance_rel", "A", "B"});
      report = report_header(command, p);
      report["result"] = cmd_hardy(p);
    } else if (command == "donoho-stark") {
      Problem p = parse_common(input_json, options,
                               {"version", "hbar", "n", "tolerance_rel", "X", "P", "eps_x",
                                "eps_p", "state", "seed", "samples"});
      report = report_header(command, p);
      report["result"] = cmd_donoho_stark(p);
    } else if (command == "selftest") {
      Problem p = input_json.empty()
                      ? Problem{}
                      : parse_common(input_json, options, {"version", "hbar", "n"});
      (void)p;
      if (options.format == "table") {
        const auto results = run_acceptance_suite();
        out.report = acceptance_table(results);
        out.exit_code = all_passed(results) ? 0 : 3;
        return out;
      }
      report["command"] = command;
      report["version"] = "1";
      report["result"] = cmd_selftest();
      if (!report["result"]["all_passed"].get<bool>()) {
        out.exit_code = 3;
      }
    } else {
      fail(Errc::invalid_argument, "unknown command '" + command + "'");
    }
    out.report = report.dump(2);
    out.report.push_back('\n');
  } catch (const Error& e) {
    Json err;
    err["command"] = command;
    err["error"]["name"] = to_string(e.code());
    err["error"]["message"] = e.what();
    out.exit_code = exit_code_for(e.code());
    out.report = err.dump(2);
    out.report.push_back('\n');
  } catch (const std::exception& e) {
    Json err;
    err["command"] = command;
    err["error"]["name"] = "InvalidArgument";
    err["error"]["message"] = e.what();
    out.exit_code = 1;
    out.report = err.dump(2);
    out.report.push_back('\n');
  }
  return out;
}

}  // namespace qpd
