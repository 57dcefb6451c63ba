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

#include "qpd/gaussian.hpp"

#include <cmath>
#include <sstream>

#include "qpd/rng.hpp"

namespace qpd {

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

CovState::CovState(double hbar, Matrix sigma, const Tolerance& tol)
    : hbar_(hbar), sigma_(require_symmetric(sigma, tol)) {
  if (!(hbar > 0.0)) fail(Errc::invalid_argument, "hbar must be positive");
  if (sigma_.rows() % 2 != 0 || sigma_.rows() == 0) {
    fail(Errc::dimension_odd, "covariance matrices have even dimension");
  }
  require_pd(sigma_, tol, "covariance matrix");
  nu_ = symplectic_eigenvalues(sigma_, tol);
  const double slack = tol.psd_slack * std::max(hbar_, nu_.front());
  quantum_ = nu_.front() >= 0.5 * hbar_ - slack;
}

Matrix CovState::block_xx() const { return sigma_.block(0, 0, dof(), dof()); }
Matrix CovState::block_xp() const { return sigma_.block(0, dof(), dof(), dof()); }
Matrix CovState::block_pp() const { return sigma_.block(dof(), dof(), dof(), dof()); }

PhaseEllipsoid::PhaseEllipsoid(double hbar, Matrix m, const Tolerance& tol)
    : hbar_(hbar), m_(require_symmetric(m, tol)) {
  if (!(hbar > 0.0)) fail(Errc::invalid_argument, "hbar must be positive");
  if (m_.rows() % 2 != 0 || m_.rows() == 0) {
    fail(Errc::dimension_odd, "phase-space ellipsoids have even dimension");
  }
  require_pd(m_, tol, "ellipsoid matrix");
}

PhaseEllipsoid covariance_ellipsoid(const CovState& state, const Tolerance& tol) {
  return PhaseEllipsoid(state.hbar(),
                        symmetrize((0.5 * state.hbar()) * inverse(state.sigma())), tol);
}

CovState state_from_ellipsoid(const PhaseEllipsoid& omega, const Tolerance& tol) {
  return CovState(omega.hbar(),
                  symmetrize((0.5 * omega.hbar()) * inverse(omega.shape())), tol);
}

GaussianPure make_gaussian_pure(double hbar, Matrix w, Matrix y, const Tolerance& tol) {
  if (!(hbar > 0.0)) fail(Errc::invalid_argument, "hbar must be positive");
  Matrix ws = require_symmetric(w, tol);
  Matrix ys = require_symmetric(y, tol);
  if (ws.rows() != ys.rows()) fail(Errc::dimension_mismatch, "W and Y sizes differ");
  require_pd(ws, tol, "W");
  return GaussianPure{hbar, std::move(ws), std::move(ys)};
}

GaussianMixed::GaussianMixed(CovState state, const Tolerance& tol)
    : state_(std::move(state)), purity_(qpd::purity(state_)) {
  if (!state_.quantum()) {
    std::ostringstream os;
    os << "nu_min = " << state_.nu_min() << " < hbar/2 = " << 0.5 * state_.hbar();
    fail(Errc::quantum_condition_violated, os.str());
  }
  if (!(purity_ > 0.0) || purity_ > 1.0 + tol.rel_eq) {
    std::ostringstream os;
    os << "purity " << purity_ << " outside (0, 1]";
    fail(Errc::verification_failed, os.str());
  }
}

QuantumVerdict quantum_condition(const CovState& state, const Tolerance& tol) {
  (void)tol;
  QuantumVerdict v;
  v.nu_min = state.nu_min();
  v.margin = v.nu_min - 0.5 * state.hbar();
  v.holds = state.quantum();
  return v;
}

bool rsup_check(const CovState& state, int mode, const Tolerance& tol) {
  const int n = state.dof();
  if (mode < 1 || mode > n) fail(Errc::index_out_of_range, "mode index");
  const int j = mode - 1;
  const double sxx = state.sigma()(j, j);
  const double spp = state.sigma()(n + j, n + j);
  const double sxp = state.sigma()(j, n + j);
  const double hbar = state.hbar();
  const double lhs = sxx * spp;
  const double rhs = sxp * sxp + 0.25 * hbar * hbar;
  return lhs >= rhs - tol.psd_slack * std::max(1.0, rhs);
}

std::pair<EllipsoidBody, EllipsoidBody> project(const PhaseEllipsoid& omega,
                                                const Tolerance& tol) {
  const Matrix ax = schur_complement(omega.shape(), Block::Lower, tol);
  const Matrix ap = schur_complement(omega.shape(), Block::Upper, tol);
  return {EllipsoidBody(Space::Position, ax, omega.hbar(), tol),
          EllipsoidBody(Space::Momentum, ap, omega.hbar(), tol)};
}

DualPairReport projection_pair_check(const CovState& state, const Tolerance& tol) {
  if (!state.quantum()) {
    std::ostringstream os;
    os << "nu_min = " << state.nu_min() << "; the projection theorem presumes the quantum condition";
    fail(Errc::quantum_condition_violated, os.str());
  }
  const PhaseEllipsoid omega = covariance_ellipsoid(state, tol);
  const auto [ox, op] = project(omega, tol);
  return is_quantum_pair(ox, op, state.hbar(), tol);
}

WignerFactor wigner_factor(const GaussianPure& psi, const Tolerance& tol) {
  const int n = psi.W.rows();
  const Matrix winv = symmetrize(inverse(psi.W));
  const Matrix g = Matrix::from_blocks(psi.W + psi.Y * winv * psi.Y, psi.Y * winv,
                                       winv * psi.Y, winv);
  const Matrix wh = sym_sqrt(psi.W, tol);
  const Matrix whinv = symmetrize(inverse(wh));
  Matrix s(2 * n, 2 * n);
  s.set_block(0, 0, wh);
  s.set_block(n, 0, whinv * psi.Y);
  s.set_block(n, n, whinv);
  SymplecticMatrix sc = SymplecticMatrix::certify(s, tol);
  const Matrix gs = symmetrize(g);
  if (!approx_equal(gs, s.transposed() * s, std::max(tol.rel_eq, 1e-10))) {
    fail(Errc::verification_failed, "G != S^T S");
  }
  const auto grep = block_symplectic_check(gs, tol);
  if (!grep.ok) fail(Errc::verification_failed, "Wigner matrix is not symplectic");
  return {gs, std::move(sc)};
}

CovState sigma_from_wy(const GaussianPure& psi, const Tolerance& tol) {
  const Matrix winv = symmetrize(inverse(psi.W));
  const Matrix sigma = Matrix::from_blocks(
      winv, -1.0 * (winv * psi.Y), -1.0 * (psi.Y * winv),
      psi.W + psi.Y * winv * psi.Y);
  return CovState(psi.hbar, (0.5 * psi.hbar) * sigma, tol);
}

GaussianPure wy_from_sigma(const CovState& state, const Tolerance& tol) {
  const double hbar = state.hbar();
  const double half = 0.5 * hbar;
  for (double nu : state.nu()) {
    if (std::abs(nu - half) > std::max(tol.rel_eq, 1e-9) * half) {
      std::ostringstream os;
      os << "symplectic eigenvalue " << nu << " != hbar/2 = " << half;
      fail(Errc::not_pure, os.str());
    }
  }
  const Matrix sxx = state.block_xx();
  const Matrix sxp = state.block_xp();
  const Matrix spp = state.block_pp();
  const Matrix sxx_inv = symmetrize(inverse(sxx));
  const Matrix w = half * sxx_inv;
  const Matrix y_raw = -1.0 * (sxp.transposed() * sxx_inv);
  const double asym = frobenius_norm(y_raw - y_raw.transposed());
  const double yscale = std::max(1.0, frobenius_norm(y_raw));
  if (asym > 1e-7 * yscale) {
    std::ostringstream os;
    os << "Y asymmetry " << asym / yscale;
    fail(Errc::residual_too_large, os.str());
  }
  const Matrix y = symmetrize(y_raw);
  // Remaining block of the overcomplete system must be consistent.
  const Matrix winv = symmetrize(inverse(w));
  const Matrix spp_expect = half * (w + y * winv * y);
  if (!approx_equal(spp, spp_expect, std::max(tol.rel_eq, 1e-8))) {
    std::ostringstream os;
    os << "momentum block residual "
       << frobenius_norm(spp - spp_expect) / std::max(1e-300, frobenius_norm(spp));
    fail(Errc::residual_too_large, os.str());
  }
  return GaussianPure{hbar, w, y};
}

GaussianPure fourier_gaussian(const GaussianPure& psi, const Tolerance& tol) {
  const Matrix winv = symmetrize(inverse(psi.W));
  const Matrix denom = symmetrize(psi.W + psi.Y * winv * psi.Y);
  const Matrix wprime = symmetrize(inverse(denom));
  const Matrix yprime = symmetrize(-1.0 * (winv * psi.Y * wprime));
  return make_gaussian_pure(psi.hbar, wprime, yprime, tol);
}

GaussianPure metaplectic_apply(const Generator& g, const GaussianPure& psi,
                               const Tolerance& tol) {
  const int n = psi.W.rows();
  GaussianPure out = psi;
  if (std::holds_alternative<ShearGen>(g)) {
    const Matrix p = require_symmetric(std::get<ShearGen>(g).p, tol);
    if (p.rows() != n) fail(Errc::dimension_mismatch, "shear size");
    out = GaussianPure{psi.hbar, psi.W, symmetrize(psi.Y - p)};
  } else if (std::holds_alternative<DilationGen>(g)) {
    const Matrix& l = std::get<DilationGen>(g).l;
    if (l.rows() != n) fail(Errc::dimension_mismatch, "dilation size");
    if (std::abs(determinant(l)) < 1e-12) throw Error(Errc::singular_matrix, "SingularL");
    out = make_gaussian_pure(psi.hbar, symmetrize(l.transposed() * psi.W * l),
                             symmetrize(l.transposed() * psi.Y * l), tol);
  } else {
    out = fourier_gaussian(psi, tol);
  }
  // Covariance contract against the generator's symplectic matrix.
  const Matrix gm = wigner_factor(psi, tol).G;
  const Matrix gp = wigner_factor(out, tol).G;
  const Matrix smat = generator_matrix(g, n, tol).matrix();
  const Matrix sinv = inverse(smat);
  const Matrix expected = symmetrize(sinv.transposed() * gm * sinv);
  if (!approx_equal(gp, expected, std::max(tol.rel_eq, 1e-9))) {
    fail(Errc::verification_failed, "metaplectic covariance contract violated");
  }
  return out;
}

double purity(const CovState& state) {
  const int n = state.dof();
  return std::pow(0.5 * state.hbar(), n) / std::sqrt(determinant(state.sigma()));
}

double purity_from_nu(const CovState& state) {
  double mu = 1.0;
  for (double nu : state.nu()) mu *= 0.5 * state.hbar() / nu;
  return mu;
}

BlobReport is_quantum_blob(const CovState& state, const Tolerance& tol) {
  BlobReport rep;
  rep.nu = state.nu();
  const double half = 0.5 * state.hbar();
  rep.is_blob = true;
  for (double nu : rep.nu) {
    if (std::abs(nu - half) > std::max(tol.rel_eq, 1e-9) * half) rep.is_blob = false;
  }
  const auto w = williamson(state.sigma(), tol);
  rep.witness = w.S.matrix();
  return rep;
}

double wigner_eval(const CovState& state, const Vec& z) {
  const int n = state.dof();
  if (static_cast<int>(z.size()) != 2 * n) fail(Errc::dimension_mismatch, "phase point size");
  const Matrix sinv = inverse(state.sigma());
  const double quad = dot(z, sinv * z);
  return std::pow(kTwoPi, -n) / std::sqrt(determinant(state.sigma())) *
         std::exp(-0.5 * quad);
}

double wigner_eval(const GaussianPure& psi, const Vec& z) {
  return wigner_eval(sigma_from_wy(psi), z);
}

double marginal_density(const CovState& state, Space axis, const Vec& coord) {
  const int n = state.dof();
  if (static_cast<int>(coord.size()) != n) fail(Errc::dimension_mismatch, "marginal point size");
  Matrix cov;
  if (axis == Space::Position) {
    cov = state.block_xx();
  } else if (axis == Space::Momentum) {
    cov = state.block_pp();
  } else {
    fail(Errc::space_mismatch, "marginals are taken in position or momentum space");
  }
  const double quad = dot(coord, inverse(cov) * coord);
  return std::pow(kTwoPi, -0.5 * n) / std::sqrt(determinant(cov)) * std::exp(-0.5 * quad);
}

CovState random_cov_state(std::uint64_t seed, int n, double hbar, StateKind kind,
                          const Tolerance& tol) {
  Rng rng(seed);
  const double half = 0.5 * hbar;
  Vec nu(static_cast<size_t>(n));
  switch (kind) {
    case StateKind::Blob:
      for (int j = 0; j < n; ++j) nu[j] = half;
      break;
    case StateKind::Mixed:
      for (int j = 0; j < n; ++j) nu[j] = half * (1.05 + std::abs(rng.normal()));
      break;
    case StateKind::NonQuantum:
      for (int j = 0; j < n; ++j) nu[j] = half * (1.05 + std::abs(rng.normal()));
      nu[rng.uniform_int(0, n - 1)] = half * rng.uniform(0.5, 0.95);
      break;
  }
  Vec d(static_cast<size_t>(2 * n));
  for (int j = 0; j < n; ++j) d[j] = d[n + j] = nu[j];
  const Matrix s = random_symplectic(seed ^ 0x9e3779b97f4a7c15ull, n, 0.7, tol).matrix();
  return CovState(hbar, symmetrize(s.transposed() * Matrix::diag(d) * s), tol);
}

CovState random_uncorrelated_blob(std::uint64_t seed, int n, double hbar,
                                  const Tolerance& tol) {
  Rng rng(seed);
  const Matrix g = rng.spd(n, 0.4, 2.5);
  const Matrix sigma = Matrix::from_blocks(g, Matrix::zero(n, n), Matrix::zero(n, n),
                                           symmetrize(inverse(g)));
  return CovState(hbar, (0.5 * hbar) * sigma, tol);
}

}  // namespace qpd
