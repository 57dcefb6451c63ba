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

#include "qpd/reconstruct.hpp"

#include <cmath>
#include <sstream>

namespace qpd {

namespace {

// Residuals of the full verification chain for one candidate covariance
// matrix against shadow shapes A and B (levels normalized to hbar).
struct ChainResiduals {
  double projection = 0.0;
  double symplectic = 0.0;
  double identity = 0.0;
};

ChainResiduals verify_chain(const CovState& state, const Matrix& a, const Matrix& b,
                            bool expect_pure, const Tolerance& tol) {
  const double hbar = state.hbar();
  ChainResiduals res;

  const PhaseEllipsoid omega = covariance_ellipsoid(state, tol);
  const auto [ox, op] = project(omega, tol);
  res.projection =
      std::max(frobenius_norm(ox.shape() - a) / std::max(1e-300, frobenius_norm(a)),
               frobenius_norm(op.shape() - b) / std::max(1e-300, frobenius_norm(b)));

  if (expect_pure) {
    const auto rep = block_symplectic_check(omega.shape(), tol);
    const double scale = std::max(1.0, frobenius_norm(omega.shape()));
    res.symplectic = std::max({rep.res_identity, rep.res_sym_xx_px, rep.res_sym_xp_pp}) / scale;

    // The matrix uncertainty identity pins the cross block of pure states:
    // Sigma_XP^2 = Sigma_XX Sigma_PP - (hbar/2)^2 I.
    const int n = state.dof();
    const Matrix sxp = state.block_xp();
    const Matrix lhs = sxp * sxp;
    const Matrix rhs =
        state.block_xx() * state.block_pp() - (0.25 * hbar * hbar) * Matrix::identity(n);
    res.identity = frobenius_norm(lhs - rhs) / std::max(1.0, frobenius_norm(rhs));
  }

  const double bound = 1e-8;
  if (res.projection > bound || res.symplectic > bound || res.identity > bound) {
    std::ostringstream os;
    os << "verification chain failed: projection " << res.projection << ", symplectic "
       << res.symplectic << ", identity " << res.identity;
    fail(Errc::verification_failed, os.str());
  }
  if (expect_pure) {
    const double mu = purity(state);
    if (std::abs(mu - 1.0) > 1e-8) {
      std::ostringstream os;
      os << "purity " << mu << " of a claimed pure solution";
      fail(Errc::verification_failed, os.str());
    }
  }
  return res;
}

Vec pair_spectrum(const Matrix& a, const Matrix& b, double hbar, const Tolerance& tol) {
  const Matrix sa = require_symmetric(a, tol);
  const Matrix sb = require_symmetric(b, tol);
  if (sa.rows() != sb.rows()) fail(Errc::dimension_mismatch, "shadow shapes");
  require_pd(sa, tol, "A");
  require_pd(sb, tol, "B");
  (void)hbar;
  const Matrix ah = sym_sqrt(sa, tol);
  const SymEig e = eigen_sym(symmetrize(ah * sb * ah));
  if (e.values.back() > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "eigenvalue " << e.values.back() << " of A*B exceeds 1: the shadows are not a quantum pair";
    fail(Errc::not_quantum_pair, os.str());
  }
  return e.values;
}

}  // namespace

PauliSolution pauli_1d(double sigma_xx, double sigma_pp, double hbar,
                       const Tolerance& tol) {
  if (!(sigma_xx > 0.0) || !(sigma_pp > 0.0) || !(hbar > 0.0)) {
    fail(Errc::invalid_argument, "variances and hbar must be positive");
  }
  const double quarter = 0.25 * hbar * hbar;
  const double d = sigma_xx * sigma_pp - quarter;
  if (d < -tol.psd_slack * quarter - 1e-14 * quarter) {
    std::ostringstream os;
    os << "sigma_xx*sigma_pp = " << sigma_xx * sigma_pp << " < hbar^2/4 = " << quarter
       << ": no quantum state has these shadows";
    fail(Errc::sub_heisenberg, os.str());
  }
  const double sxp = std::sqrt(std::max(0.0, d));
  const bool saturated = sxp * sxp <= tol.rel_eq * quarter;

  PauliSolution sol;
  sol.ambiguity = saturated ? Ambiguity::Unique : Ambiguity::SignPair;
  sol.xp_rank = saturated ? 0 : 1;
  const Matrix a{{hbar / (2.0 * sigma_xx)}};
  const Matrix b{{hbar / (2.0 * sigma_pp)}};
  const int copies = saturated ? 1 : 2;
  for (int k = 0; k < copies; ++k) {
    const double sign = (k == 0) ? 1.0 : -1.0;
    const Matrix sigma{{sigma_xx, sign * sxp}, {sign * sxp, sigma_pp}};
    CovState state(hbar, sigma, tol);
    const auto res = verify_chain(state, a, b, /*expect_pure=*/true, tol);
    sol.projection_residual = std::max(sol.projection_residual, res.projection);
    sol.symplectic_residual = std::max(sol.symplectic_residual, res.symplectic);
    sol.identity_residual = std::max(sol.identity_residual, res.identity);
    sol.partners.push_back(wy_from_sigma(state, tol));
    sol.blob_sigmas.push_back(std::move(state));
  }
  return sol;
}

PauliSolution reconstruct_saturated(const Matrix& a, double hbar, const Tolerance& tol) {
  const Matrix sa = require_symmetric(a, tol);
  require_pd(sa, tol, "A");
  if (!(hbar > 0.0)) fail(Errc::invalid_argument, "hbar must be positive");
  const int n = sa.rows();
  const Matrix ainv = symmetrize(inverse(sa));
  const Matrix sigma = Matrix::from_blocks((0.5 * hbar) * ainv, Matrix::zero(n, n),
                                           Matrix::zero(n, n), (0.5 * hbar) * sa);
  CovState state(hbar, sigma, tol);
  PauliSolution sol;
  sol.ambiguity = Ambiguity::Unique;
  sol.xp_rank = 0;
  const auto res = verify_chain(state, sa, ainv, /*expect_pure=*/true, tol);
  sol.projection_residual = res.projection;
  sol.symplectic_residual = res.symplectic;
  sol.identity_residual = res.identity;
  const auto blob = is_quantum_blob(state, tol);
  if (!blob.is_blob) fail(Errc::verification_failed, "saturated solution is not a blob");
  sol.partners.push_back(wy_from_sigma(state, tol));
  sol.blob_sigmas.push_back(std::move(state));
  return sol;
}

PauliSolution reconstruct_pair(const Matrix& a, const Matrix& b, double hbar,
                               const Tolerance& tol) {
  if (!(hbar > 0.0)) fail(Errc::invalid_argument, "hbar must be positive");
  const Matrix sa = require_symmetric(a, tol);
  const Matrix sb = require_symmetric(b, tol);
  const Vec lambda = pair_spectrum(sa, sb, hbar, tol);
  const int n = sa.rows();

  // K = A^{-1/2} B^{-1} A^{-1/2} - I is symmetric PSD exactly when the
  // shadows form a quantum pair; the cross block is the similarity image of
  // its square root, which squares to (hbar/2)^2 (A^{-1}B^{-1} - I).
  const Matrix ah = sym_sqrt(sa, tol);
  const Matrix ah_inv = symmetrize(inverse(ah));
  const Matrix k = symmetrize(ah_inv * inverse(sb) * ah_inv - Matrix::identity(n));
  // Saturated directions put eigenvalues of K at zero up to roundoff; clamp
  // against the pair tolerance (relative to I + K, not to K itself).
  const SymEig ke = eigen_sym(k);
  const double k_scale = std::max(1.0, std::abs(ke.values.back()));
  Matrix k_half(n, n);
  for (int j = 0; j < n; ++j) {
    double lam = ke.values[j];
    if (lam < -1e-9 * k_scale) {
      fail(Errc::not_quantum_pair, "cross-block spectrum is negative beyond tolerance");
    }
    const double root = std::sqrt(std::max(lam, 0.0));
    for (int r = 0; r < n; ++r)
      for (int c2 = 0; c2 < n; ++c2)
        k_half(r, c2) += root * ke.vectors(r, j) * ke.vectors(c2, j);
  }
  const Matrix cross = (0.5 * hbar) * (ah_inv * k_half * ah);

  int rank = 0;
  for (double lam : lambda) {
    if (lam < 1.0 - 1e-9) ++rank;
  }
  const bool saturated = rank == 0;

  PauliSolution sol;
  sol.ambiguity = saturated ? Ambiguity::Unique : Ambiguity::SignPair;
  sol.xp_rank = rank;
  const Matrix sxx = (0.5 * hbar) * symmetrize(inverse(sa));
  const Matrix spp = (0.5 * hbar) * symmetrize(inverse(sb));
  const int copies = saturated ? 1 : 2;
  for (int c = 0; c < copies; ++c) {
    const double sign = (c == 0) ? 1.0 : -1.0;
    const Matrix sigma =
        Matrix::from_blocks(sxx, sign * cross, sign * cross.transposed(), spp);
    CovState state(hbar, sigma, tol);
    const auto res = verify_chain(state, sa, sb, /*expect_pure=*/true, tol);
    sol.projection_residual = std::max(sol.projection_residual, res.projection);
    sol.symplectic_residual = std::max(sol.symplectic_residual, res.symplectic);
    sol.identity_residual = std::max(sol.identity_residual, res.identity);
    sol.partners.push_back(wy_from_sigma(state, tol));
    sol.blob_sigmas.push_back(std::move(state));
  }
  return sol;
}

MaxVolReport max_volume_state(const Matrix& a, const Matrix& b, double hbar,
                              const Tolerance& tol) {
  if (!(hbar > 0.0)) fail(Errc::invalid_argument, "hbar must be positive");
  const Matrix sa = require_symmetric(a, tol);
  const Matrix sb = require_symmetric(b, tol);
  const Vec guard = pair_spectrum(sa, sb, hbar, tol);
  (void)guard;
  const int n = sa.rows();

  // Balanced frame: the shadows become a pair of equal ellipsoids whose
  // product is inscribed by the ball-like John ellipsoid
  // {sum_j sqrt(lambda_j) (x_j^2 + p_j^2) <= hbar}.
  const BalancedDiag bd = balanced_diagonalize(sa, sb, tol);
  Vec inv_sqrt(bd.lambda.size());
  for (size_t j = 0; j < bd.lambda.size(); ++j) inv_sqrt[j] = 1.0 / std::sqrt(bd.lambda[j]);
  Matrix sigma_reduced(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    sigma_reduced(j, j) = 0.5 * hbar * inv_sqrt[j];
    sigma_reduced(n + j, n + j) = 0.5 * hbar * inv_sqrt[j];
  }
  // Undo the balanced-frame dilation: Sigma = M_L^{-1} Sigma' M_L^{-T}.
  Matrix ml_inv(2 * n, 2 * n);
  ml_inv.set_block(0, 0, bd.L);
  ml_inv.set_block(n, n, inverse(bd.L).transposed());
  const Matrix sigma = symmetrize(ml_inv * sigma_reduced * ml_inv.transposed());

  // Independent route: the same state is (hbar/2) diag(A^{-1}, B^{-1}).
  const Matrix direct = Matrix::from_blocks(
      (0.5 * hbar) * symmetrize(inverse(sa)), Matrix::zero(n, n), Matrix::zero(n, n),
      (0.5 * hbar) * symmetrize(inverse(sb)));
  if (!approx_equal(sigma, direct, 1e-9)) {
    fail(Errc::verification_failed, "balanced-frame and block-diagonal routes disagree");
  }

  CovState state(hbar, sigma, tol);
  verify_chain(state, sa, sb, /*expect_pure=*/false, tol);

  MaxVolReport rep{GaussianMixed(std::move(state), tol), bd.lambda, 0.0, 0.0, 1.0, 1.0, false};
  rep.purity = rep.state.purity();
  rep.purity_from_spectrum = purity_from_nu(rep.state.state());
  if (std::abs(rep.purity - rep.purity_from_spectrum) > 1e-10 * rep.purity) {
    fail(Errc::verification_failed, "purity routes disagree");
  }
  for (double lam : rep.lambda) {
    if (lam < 1.0 - 1e-9) rep.lambda_sq_product *= lam * lam;
    rep.lambda_quarter_product *= std::pow(lam, 0.25);
  }
  rep.exponent_flagged =
      std::abs(rep.purity - rep.lambda_sq_product) > 1e-9 * std::max(1.0, rep.purity);
  return rep;
}

}  // namespace qpd
