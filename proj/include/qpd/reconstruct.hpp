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

#pragma once

#include "qpd/gaussian.hpp"

namespace qpd {

// Recovering Gaussian states from their position/momentum shadows. Every
// solver output is post-verified: the covariance ellipsoid must reproject
// exactly onto the input bodies, the ellipsoid matrix of a pure solution must
// be symplectic, and the matrix uncertainty identity must close. Outputs that
// fail any check are reported as errors, never returned silently.

enum class Ambiguity { Unique, SignPair };

struct PauliSolution {
  std::vector<GaussianPure> partners;  // one (Unique) or two (SignPair)
  std::vector<CovState> blob_sigmas;   // matching covariance matrices
  Ambiguity ambiguity = Ambiguity::Unique;
  int xp_rank = 0;  // rank of the cross-covariance block
  double projection_residual = 0.0;
  double symplectic_residual = 0.0;
  double identity_residual = 0.0;
};

/// One degree of freedom: shadows are the variances. The cross covariance is
/// determined up to sign, sigma_xp = +-sqrt(sigma_xx sigma_pp - hbar^2/4);
/// inputs below the Heisenberg threshold admit no quantum state.
PauliSolution pauli_1d(double sigma_xx, double sigma_pp, double hbar,
                       const Tolerance& tol = {});

/// Saturated shadows X = {A x.x <= hbar} and P = X^hbar: the product contains
/// exactly one quantum blob, Sigma = (hbar/2) diag(A^{-1}, A), the covariance
/// of the Gaussian with W = A, Y = 0.
PauliSolution reconstruct_saturated(const Matrix& a, double hbar,
                                    const Tolerance& tol = {});

/// General quantum-pair shadows (eigenvalues of A*B in (0, 1]): two blob
/// solutions whose cross block is the principal square root of
/// (hbar/2)^2 (A^{-1} B^{-1} - I), taken through the PSD similarity
/// K = A^{-1/2} B^{-1} A^{-1/2} - I so the construction survives
/// non-commuting inputs.
PauliSolution reconstruct_pair(const Matrix& a, const Matrix& b, double hbar,
                               const Tolerance& tol = {});

/// The maximal-volume quantum state with the given shadows: the John
/// ellipsoid of X x P, computed in the balanced frame of A and B and mapped
/// back with a dilation. Purity comes out to prod_j lambda_j^{1/2}; the
/// report also carries the exponent-2 and exponent-1/4 variants this quantity
/// is sometimes quoted with, both of which fail the reprojection constraint,
/// and flags the mismatch.
struct MaxVolReport {
  GaussianMixed state;
  Vec lambda;                    // eigenvalues of A*B, ascending
  double purity = 0.0;           // (hbar/2)^n det(Sigma)^{-1/2}
  double purity_from_spectrum = 0.0;  // prod (hbar/2)/nu_j
  double lambda_sq_product = 0.0;     // prod over lambda_j < 1 of lambda_j^2
  double lambda_quarter_product = 0.0;  // prod lambda_j^{1/4}
  bool exponent_flagged = false;
};
MaxVolReport max_volume_state(const Matrix& a, const Matrix& b, double hbar,
                              const Tolerance& tol = {});

}  // namespace qpd
