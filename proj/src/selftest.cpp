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

#include "qpd/selftest.hpp"

#include <cmath>
#include <sstream>

#include "qpd/bounds.hpp"
#include "qpd/capacity.hpp"
#include "qpd/cli.hpp"
#include "qpd/dynamics.hpp"
#include "qpd/gaussian.hpp"
#include "qpd/polarity.hpp"
#include "qpd/reconstruct.hpp"
#include "qpd/rng.hpp"

namespace qpd {

namespace {

constexpr double kPi = 3.141592653589793;

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool condition, const std::string& message) {
    if (!condition) {
      pass = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << message;
    }
  }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Hamiltonians with a pinned spectral norm keep exp(10 J H) well conditioned,
// so the conservation tolerances measure algebra rather than roundoff blowup.
Matrix random_hessian(Rng& rng, int dim, double target_norm) {
  Matrix h = rng.symmetric(dim);
  const double nrm = spectral_norm_sym(h);
  if (nrm < 1e-12) return target_norm * Matrix::identity(dim);
  return (target_norm / nrm) * h;
}

// 1. The nu_min >= hbar/2 verdict agrees with the capacity threshold on a
//    seeded mixed population; tolerance 1e-9 on the capacity comparison.
CriterionResult criterion_quantum_equivalence() {
  Check chk;
  int disagreements = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 4;
    StateKind kind;
    if (i % 5 == 0) {
      kind = StateKind::Blob;  // exact boundary cases
    } else {
      kind = (i % 2 == 0) ? StateKind::Mixed : StateKind::NonQuantum;
    }
    const CovState state = random_cov_state(100000 + i, n, 1.0, kind);
    const bool by_nu = quantum_condition(state).holds;
    const auto th = capacity_quantum_threshold(state);
    const bool by_capacity = th.capacity >= kPi * state.hbar() * (1.0 - 1e-9);
    if (by_nu != by_capacity || by_nu != th.quantum) ++disagreements;
  }
  chk.expect(disagreements == 0, "disagreements: " + std::to_string(disagreements));
  CriterionResult r{1, "quantum condition equivalent to capacity threshold", chk.pass,
                    chk.pass ? "1000/1000 verdicts agree" : chk.detail.str()};
  return r;
}

// 2. Projections of every quantum covariance ellipsoid form a dual pair;
//    saturation occurs exactly for the blob-constructed inputs.
CriterionResult criterion_projection_theorem() {
  Check chk;
  int pair_failures = 0, saturation_mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 4;
    const bool blob_cohort = (i % 2 == 1);
    const CovState state = blob_cohort
                               ? random_uncorrelated_blob(200000 + i, n, 1.0)
                               : random_cov_state(200000 + i, n, 1.0, StateKind::Mixed);
    const auto rep = projection_pair_check(state);
    if (!rep.is_pair) ++pair_failures;
    if (rep.is_saturated != blob_cohort) ++saturation_mismatches;
  }
  chk.expect(pair_failures == 0, "pair failures: " + std::to_string(pair_failures));
  chk.expect(saturation_mismatches == 0,
             "saturation mismatches: " + std::to_string(saturation_mismatches));
  return {2, "projection theorem certificates on 1000 quantum states", chk.pass,
          chk.pass ? "0 failures; saturation exactly on blob-constructed inputs"
                   : chk.detail.str()};
}

// 3. c_max(X x X^hbar) = 4 hbar to 1e-10; eigenvalue and rescaling routes
//    agree to 1e-9 on non-saturated pairs.
CriterionResult criterion_cmax() {
  Check chk;
  double worst_sat = 0.0, worst_route = 0.0;
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + i % 4;
    Rng rng(300000 + i);
    const EllipsoidBody x(Space::Position, rng.spd(n, 0.3, 3.0), 1.0);
    const auto rep = cmax_product(x, polar_dual(x, 1.0), 1.0);
    worst_sat = std::max(worst_sat, std::abs(rep.value - 4.0) / 4.0);
  }
  chk.expect(worst_sat <= 1e-10, "saturated-product deviation " + num(worst_sat));
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + i % 4;
    Rng rng(310000 + i);
    const Matrix a = rng.spd(n, 0.3, 3.0);
    const Matrix ah = sym_sqrt(a);
    const Matrix q = rng.spd(n, 0.15, 0.98);
    const Matrix b = symmetrize(inverse(ah) * q * inverse(ah));
    const EllipsoidBody x(Space::Position, a, 1.0);
    const EllipsoidBody p(Space::Momentum, b, 1.0);
    const auto rep = cmax_product(x, p, 1.0);  // routes compared internally too
    const double via_scaling = 4.0 * rep.scaling_factor;
    worst_route = std::max(worst_route, std::abs(via_scaling - rep.value) / rep.value);
  }
  chk.expect(worst_route <= 1e-9, "route disagreement " + num(worst_route));
  return {3, "cylindrical capacity of dual products", chk.pass,
          chk.pass ? "max |c-4h|/4h = " + num(worst_sat) + ", max route gap = " + num(worst_route)
                   : chk.detail.str()};
}

// 4. One-dimensional reconstruction: partners at +-sqrt(3)/2, both blobs,
//    exact reprojection; sub-Heisenberg inputs rejected.
CriterionResult criterion_pauli_1d() {
  Check chk;
  const auto sol = pauli_1d(1.0, 1.0, 1.0);
  const double r3 = std::sqrt(3.0) / 2.0;
  chk.expect(sol.partners.size() == 2, "expected two partners");
  if (sol.partners.size() == 2) {
    chk.expect(std::abs(sol.blob_sigmas[0].sigma()(0, 1) - r3) <= 1e-12,
               "sigma_xp+ = " + num(sol.blob_sigmas[0].sigma()(0, 1)));
    chk.expect(std::abs(sol.blob_sigmas[1].sigma()(0, 1) + r3) <= 1e-12,
               "sigma_xp- = " + num(sol.blob_sigmas[1].sigma()(0, 1)));
    for (const auto& s : sol.blob_sigmas) {
      chk.expect(is_quantum_blob(s).is_blob, "partner is not a blob");
    }
    chk.expect(sol.projection_residual <= 1e-10,
               "reprojection residual " + num(sol.projection_residual));
  }
  bool rejected = false;
  try {
    pauli_1d(0.4, 0.4, 1.0);
  } catch (const Error& e) {
    rejected = e.code() == Errc::sub_heisenberg;
  }
  chk.expect(rejected, "sub-Heisenberg input was not rejected");
  return {4, "one-dimensional reconstruction", chk.pass,
          chk.pass ? "partners sigma_xp = +-0.866025; sub-Heisenberg rejected"
                   : chk.detail.str()};
}

// 5. Full verification chain on 200 random quantum pairs, including
//    non-commuting shadows at n = 2, 3.
CriterionResult criterion_reconstruction_chain() {
  Check chk;
  double worst_proj = 0.0, worst_sympl = 0.0, worst_purity = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + i % 3;
    Rng rng(400000 + i);
    const Matrix a = rng.spd(n, 0.35, 2.5);
    const Matrix ah = sym_sqrt(a);
    const Matrix q = rng.spd(n, 0.2, 0.97);
    const Matrix b = symmetrize(inverse(ah) * q * inverse(ah));
    try {
      const auto sol = reconstruct_pair(a, b, 1.0);
      worst_proj = std::max(worst_proj, sol.projection_residual);
      worst_sympl = std::max(worst_sympl, sol.symplectic_residual);
      for (const auto& s : sol.blob_sigmas) {
        worst_purity = std::max(worst_purity, std::abs(purity(s) - 1.0));
      }
      const auto mv = max_volume_state(a, b, 1.0);
      const auto [ox, op] =
          project(covariance_ellipsoid(mv.state.state()), Tolerance{});
      const double proj_mv =
          std::max(frobenius_norm(ox.shape() - a) / frobenius_norm(a),
                   frobenius_norm(op.shape() - b) / frobenius_norm(b));
      worst_proj = std::max(worst_proj, proj_mv);
    } catch (const Error& e) {
      chk.expect(false, std::string("solver raised: ") + e.what());
      break;
    }
  }
  chk.expect(worst_proj <= 1e-8, "reprojection residual " + num(worst_proj));
  chk.expect(worst_sympl <= 1e-8, "symplecticity residual " + num(worst_sympl));
  chk.expect(worst_purity <= 1e-8, "pure-solution purity deviation " + num(worst_purity));
  return {5, "reconstruction verification chain on 200 random pairs", chk.pass,
          chk.pass ? "max residuals: projection " + num(worst_proj) + ", symplectic " +
                         num(worst_sympl) + ", purity " + num(worst_purity)
                   : chk.detail.str()};
}

// 6. Max-volume purity identity and the flagged exponent discrepancy.
CriterionResult criterion_maxvol_purity() {
  Check chk;
  double worst_identity = 0.0;
  int missing_flags = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + i % 3;
    Rng rng(500000 + i);
    const Matrix a = rng.spd(n, 0.35, 2.5);
    const Matrix ah = sym_sqrt(a);
    const Matrix q = rng.spd(n, 0.2, 0.9);
    const Matrix b = symmetrize(inverse(ah) * q * inverse(ah));
    const auto rep = max_volume_state(a, b, 1.0);
    worst_identity = std::max(
        worst_identity, std::abs(rep.purity - rep.purity_from_spectrum) / rep.purity);
    if (!rep.exponent_flagged) ++missing_flags;  // all pairs here are strict
  }
  chk.expect(worst_identity <= 1e-10, "purity identity gap " + num(worst_identity));
  chk.expect(missing_flags == 0, "missing discrepancy flags: " + std::to_string(missing_flags));

  // Worked example lambda = 1/4: reprojection pins purity to sqrt(lambda) = 0.5;
  // the quarter-exponent variant 0.70711 is computed and flagged alongside.
  const auto rep = max_volume_state(Matrix{{1.0}}, Matrix{{0.25}}, 1.0);
  chk.expect(std::abs(rep.purity - 0.5) <= 1e-12, "example purity " + num(rep.purity));
  chk.expect(std::abs(rep.lambda_quarter_product - 0.7071067811865476) <= 1e-9,
             "quarter-exponent value " + num(rep.lambda_quarter_product));
  chk.expect(rep.exponent_flagged, "example discrepancy not flagged");
  return {6, "max-volume purity identity and exponent flag", chk.pass,
          chk.pass ? "identity gap " + num(worst_identity) +
                         "; example: purity 0.5, quarter-exponent 0.70711 flagged"
                   : chk.detail.str()};
}

// 7. Conservation along quadratic flows over t in [0, 10], and the
//    free-particle closed form.
CriterionResult criterion_dynamics() {
  Check chk;
  Vec grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.5 * i);
  double worst_det = 0.0, worst_nu = 0.0;
  int pair_failures = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 3;
    Rng rng(600000 + i);
    const CovState state = random_cov_state(600000 + i, n, 1.0,
                                            i % 4 == 0 ? StateKind::Blob : StateKind::Mixed);
    const QuadHamiltonian h(random_hessian(rng, 2 * n, 0.3));
    const double det0 = determinant(state.sigma());
    for (double t : grid) {
      const CovState out = evolve_cov(state, h, t);
      worst_det = std::max(worst_det, std::abs(determinant(out.sigma()) - det0) / det0);
      for (size_t k = 0; k < out.nu().size(); ++k) {
        worst_nu = std::max(worst_nu,
                            std::abs(out.nu()[k] - state.nu()[k]) / state.nu()[k]);
      }
    }
    const auto series = projection_volume_series(state, h, grid);
    for (const auto& pt : series) {
      if (!pt.pair.is_pair) ++pair_failures;
    }
  }
  chk.expect(worst_det <= 1e-8, "det drift " + num(worst_det));
  chk.expect(worst_nu <= 1e-8, "symplectic eigenvalue drift " + num(worst_nu));
  chk.expect(pair_failures == 0, "pair failures: " + std::to_string(pair_failures));

  double worst_free = 0.0;
  const QuadHamiltonian free_p(Matrix::diag({0.0, 1.0}));
  for (int i = 0; i < 20; ++i) {
    const CovState state = random_cov_state(610000 + i, 1, 1.0, StateKind::Mixed);
    const double sxx = state.sigma()(0, 0);
    const double sxp = state.sigma()(0, 1);
    const double spp = state.sigma()(1, 1);
    for (double t : grid) {
      const double expected = sxx + 2.0 * t * sxp + t * t * spp;
      const double got = evolve_cov(state, free_p, t).sigma()(0, 0);
      worst_free = std::max(worst_free, std::abs(got - expected) / expected);
    }
  }
  chk.expect(worst_free <= 1e-10, "free-particle spread deviation " + num(worst_free));
  return {7, "conservation laws along quadratic flows", chk.pass,
          chk.pass ? "det drift " + num(worst_det) + ", nu drift " + num(worst_nu) +
                         ", free-particle deviation " + num(worst_free)
                   : chk.detail.str()};
}

// 8. Trapezoid quadrature of the Wigner function reproduces the position
//    marginal to 1e-6 at 11 sample points.
CriterionResult criterion_wigner_marginal() {
  Check chk;
  const CovState state(1.0, Matrix{{1.0, 0.3}, {0.3, 0.7}});
  const double sp = std::sqrt(state.sigma()(1, 1));
  const int grid = 2001;
  const double hp = 12.0 * sp / (grid - 1);
  double worst = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double x = -2.5 + 0.5 * k;
    double integral = 0.0;
    for (int j = 0; j < grid; ++j) {
      const double p = -6.0 * sp + j * hp;
      const double w = wigner_eval(state, {x, p});
      integral += (j == 0 || j == grid - 1) ? 0.5 * w : w;
    }
    integral *= hp;
    worst = std::max(worst, std::abs(integral - marginal_density(state, Space::Position, {x})));
  }
  chk.expect(worst <= 1e-6, "marginal deviation " + num(worst));
  return {8, "wigner marginal by quadrature", chk.pass,
          chk.pass ? "max |quadrature - analytic| = " + num(worst) : chk.detail.str()};
}

// 9. Mahler suite: exact n = 1 area, shape invariance, the bound chain, and
//    Monte Carlo confirmation of the closed forms.
CriterionResult criterion_mahler() {
  Check chk;
  for (double hbar : {0.5, 1.0, 2.0}) {
    const auto rep = mahler_volume(Body{BoxBody{Space::Position, {1.7}}}, hbar);
    chk.expect(std::abs(rep.upsilon - 4.0 * hbar) <= 1e-12 * 4.0 * hbar,
               "n=1 area " + num(rep.upsilon));
  }
  double worst_inv = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const double gamma_half = std::tgamma(0.5 * n + 1.0);
    const double reference = std::pow(kPi, n) / (gamma_half * gamma_half);
    for (int i = 0; i < 100; ++i) {
      Rng rng(700000 + 100 * n + i);
      const Body body{EllipsoidBody(Space::Position, rng.spd(n, 0.3, 3.0),
                                    rng.uniform(0.5, 2.0))};
      const double ups = mahler_volume(body, 1.0).upsilon;
      worst_inv = std::max(worst_inv, std::abs(ups - reference) / reference);
    }
  }
  chk.expect(worst_inv <= 1e-10, "ellipsoid invariance deviation " + num(worst_inv));

  for (int n = 1; n <= 8; ++n) {
    Vec widths(static_cast<size_t>(n), 0.9);
    const auto rep = mahler_volume(Body{BoxBody{Space::Position, widths}}, 1.0);
    chk.expect(rep.within_bounds && rep.lower_kuperberg <= rep.lower_conjecture &&
                   rep.lower_conjecture <= rep.upper_santalo * (1.0 + 1e-12),
               "chain violated at n = " + std::to_string(n));
  }

  // Monte Carlo confirmation of each closed form at 1e6 samples.
  struct McCase {
    Body body;
    std::uint64_t seed;
  };
  const std::vector<McCase> cases = {
      {Body{EllipsoidBody(Space::Position, Matrix::diag({2.0, 0.5}), 1.0)}, 901},
      {Body{CrossPolytopeBody{Space::Momentum, {1.0, 0.7}, 1.0}}, 902},
      {Body{CrossPolytopeBody{Space::Momentum, {1.0, 0.7, 1.4}, 1.0}}, 903},
      {Body{EllipsoidBody(Space::Position, Matrix::identity(6), 1.0)}, 904},
  };
  for (const auto& c : cases) {
    const auto est = mc_volume(oracle_for(c.body), c.seed, 1000000);
    const double exact = body_volume(c.body);
    chk.expect(std::abs(est.estimate - exact) <= 3.0 * est.std_error,
               "MC deviates by " + num(std::abs(est.estimate - exact) / est.std_error) +
                   " sigma from " + num(exact));
  }
  return {9, "mahler volume suite", chk.pass,
          chk.pass ? "invariance deviation " + num(worst_inv) +
                         "; chain holds for n <= 8; MC within 3 sigma"
                   : chk.detail.str()};
}

// 10. Donoho-Stark band endpoints at n = 6 and measured concentrations of the
//     standard Gaussian on balls.
CriterionResult criterion_donoho_stark() {
  Check chk;
  const double lower6 = ds_band_lower(6);
  const double upper6 = ds_band_upper(6);
  chk.expect(std::abs(lower6 - (1.0 - 1.0 / 48.0)) <= 1e-14, "lower endpoint " + num(lower6));
  chk.expect(std::abs(lower6 - 0.97917) <= 5e-6, "lower endpoint rounds to " + num(lower6));
  chk.expect(std::abs(upper6 - 0.99970) <= 5e-6, "upper endpoint rounds to " + num(upper6));

  int checked = 0;
  for (int n : {1, 2}) {
    const CovState phi0(1.0, 0.5 * Matrix::identity(2 * n));
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
      const Body x{EllipsoidBody(Space::Position, Matrix::identity(n), r * r)};
      const Body p = polar_dual(x, 1.0);
      const auto ex = concentration(phi0, x, Space::Position, 810000 + n);
      const auto ep = concentration(phi0, p, Space::Momentum, 820000 + n);
      const auto rep = donoho_stark_check(ex.eps, ep.eps, x, p, 1.0);
      chk.expect(rep.holds, "bound violated at n = " + std::to_string(n) +
                                ", r = " + num(r));
      ++checked;
    }
  }
  return {10, "donoho-stark band and measured concentrations", chk.pass,
          chk.pass ? "n=6 band [" + num(lower6) + ", " + num(upper6) + "]; bound holds at " +
                         std::to_string(checked) + " radii"
                   : chk.detail.str()};
}

// 11. Re-running a problem file yields byte-identical reports.
CriterionResult criterion_cli_determinism() {
  Check chk;
  const std::vector<std::pair<std::string, std::string>> problems = {
      {"dual",
       R"({"version":"1","hbar":1.0,"n":2,"body":{"kind":"ellipsoid","space":"position",)"
       R"("shape":[[1.0,0.0],[0.0,1.0]],"level":1.0}})"},
      {"pair-check",
       R"({"version":"1","hbar":1.0,"n":2,"A":[[1.0,0.0],[0.0,1.0]],"B":[[0.5,0.0],[0.0,0.5]]})"},
      {"williamson",
       R"({"version":"1","n":1,"sigma":[[3.0,0.4],[0.4,0.75]]})"},
      {"project",
       R"({"version":"1","hbar":1.0,"n":1,"sigma":[[1.0,0.8],[0.8,1.0]]})"},
      {"reconstruct",
       R"({"version":"1","hbar":1.0,"mode":"pauli-1d","sigma_xx":1.0,"sigma_pp":1.0})"},
      {"capacity",
       R"({"version":"1","hbar":1.0,"n":1,"mode":"product","A":[[1.0]],"B":[[0.25]]})"},
      {"evolve",
       R"({"version":"1","hbar":1.0,"n":1,"sigma":[[0.5,0.0],[0.0,0.5]],)"
       R"("hess":[[0.0,0.0],[0.0,1.0]],"t_grid":[0.0,1.0,2.0]})"},
      {"mahler",
       R"({"version":"1","hbar":1.0,"n":2,"body":{"kind":"box","space":"position",)"
       R"("half_widths":[1.0,2.0]},"mc_samples":100000,"seed":7})"},
      {"hardy",
       R"({"version":"1","hbar":1.0,"n":1,"A":[[1.0]],"B":[[1.0]]})"},
      {"donoho-stark",
       R"({"version":"1","hbar":1.0,"n":6,"eps_x":0.5,"eps_p":0.45,)"
       R"("X":{"kind":"ellipsoid","space":"position","shape":[[1,0,0,0,0,0],[0,1,0,0,0,0],)"
       R"([0,0,1,0,0,0],[0,0,0,1,0,0],[0,0,0,0,1,0],[0,0,0,0,0,1]],"level":1.0}})"},
  };
  int mismatches = 0, errors = 0;
  for (const auto& [command, text] : problems) {
    const RunResult first = run_command(command, text);
    const RunResult second = run_command(command, text);
    if (first.exit_code != 0 || second.exit_code != 0) ++errors;
    if (first.report != second.report) ++mismatches;
  }
  chk.expect(errors == 0, "commands exited nonzero: " + std::to_string(errors));
  chk.expect(mismatches == 0, "non-identical reruns: " + std::to_string(mismatches));
  return {11, "deterministic reports across reruns", chk.pass,
          chk.pass ? std::to_string(problems.size()) + " problems, byte-identical reruns"
                   : chk.detail.str()};
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite() {
  using Criterion = CriterionResult (*)();
  const Criterion criteria[] = {
      criterion_quantum_equivalence, criterion_projection_theorem,
      criterion_cmax,                criterion_pauli_1d,
      criterion_reconstruction_chain, criterion_maxvol_purity,
      criterion_dynamics,            criterion_wigner_marginal,
      criterion_mahler,              criterion_donoho_stark,
      criterion_cli_determinism};
  std::vector<CriterionResult> results;
  int index = 0;
  for (Criterion fn : criteria) {
    ++index;
    try {
      results.push_back(fn());
    } catch (const std::exception& e) {
      results.push_back({index, "criterion raised an exception", false, e.what()});
    }
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

std::string acceptance_table(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.index << ". " << r.name << " -- "
       << r.detail << "\n";
  }
  return os.str();
}

}  // namespace qpd
