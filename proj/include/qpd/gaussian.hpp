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

#include <cstdint>
#include <utility>

#include "qpd/polarity.hpp"
#include "qpd/symplectic.hpp"

namespace qpd {

// Centered Gaussian states over z = (x, p). All first moments are zero by
// convention; only second moments are represented.

/// Covariance matrix Sigma (SPD, dim 2n) together with hbar. The symplectic
/// spectrum is computed once at construction; the state itself may violate
/// the quantum condition (capacity checks want such inputs too).
class CovState {
 public:
  CovState(double hbar, Matrix sigma, const Tolerance& tol = {});

  double hbar() const { return hbar_; }
  const Matrix& sigma() const { return sigma_; }
  int dof() const { return sigma_.rows() / 2; }

  /// Symplectic eigenvalues of Sigma, ascending (cached).
  const Vec& nu() const { return nu_; }
  double nu_min() const { return nu_.front(); }
  bool quantum() const { return quantum_; }

  Matrix block_xx() const;
  Matrix block_xp() const;
  Matrix block_pp() const;

 private:
  double hbar_;
  Matrix sigma_;
  Vec nu_;
  bool quantum_;
};

/// {z : M z.z <= hbar}, M SPD. For a state, M = (hbar/2) Sigma^{-1}.
class PhaseEllipsoid {
 public:
  PhaseEllipsoid(double hbar, Matrix m, const Tolerance& tol = {});
  double hbar() const { return hbar_; }
  const Matrix& shape() const { return m_; }
  int dof() const { return m_.rows() / 2; }

 private:
  double hbar_;
  Matrix m_;
};

PhaseEllipsoid covariance_ellipsoid(const CovState& state, const Tolerance& tol = {});
CovState state_from_ellipsoid(const PhaseEllipsoid& omega, const Tolerance& tol = {});

/// Parameters (W, Y) of the Gaussian wavefunction with exponent
/// -(W + iY) x.x / (2 hbar); W SPD, Y symmetric.
struct GaussianPure {
  double hbar;
  Matrix W;
  Matrix Y;
};
GaussianPure make_gaussian_pure(double hbar, Matrix w, Matrix y,
                                const Tolerance& tol = {});

/// A quantum CovState with its purity cached; construction enforces the
/// quantum condition and 0 < purity <= 1 (up to tolerance).
class GaussianMixed {
 public:
  explicit GaussianMixed(CovState state, const Tolerance& tol = {});
  const CovState& state() const { return state_; }
  double purity() const { return purity_; }

 private:
  CovState state_;
  double purity_;
};

// --- predicates and transforms ---------------------------------------------

struct QuantumVerdict {
  bool holds = false;
  double nu_min = 0.0;
  double margin = 0.0;  // nu_min - hbar/2
};

/// nu_min >= hbar/2, evaluated entirely with real symplectic eigenvalues.
QuantumVerdict quantum_condition(const CovState& state, const Tolerance& tol = {});

/// Per-mode Robertson-Schrodinger test
/// sigma_xx sigma_pp >= sigma_xp^2 + hbar^2/4 for mode j (1-based).
bool rsup_check(const CovState& state, int mode, const Tolerance& tol = {});

/// Orthogonal projections of a phase-space ellipsoid onto the x- and p-
/// planes: shapes are the Schur complements M/M_PP and M/M_XX at level hbar.
std::pair<EllipsoidBody, EllipsoidBody> project(const PhaseEllipsoid& omega,
                                                const Tolerance& tol = {});

/// Certifies that the projections of the covariance ellipsoid form a quantum
/// dual pair. Requires the quantum condition (the claim is only made there).
DualPairReport projection_pair_check(const CovState& state, const Tolerance& tol = {});

/// Wigner exponent matrix G (symmetric, SPD, symplectic) of a pure Gaussian
/// and the triangular symplectic factor with G = S^T S.
struct WignerFactor {
  Matrix G;
  SymplecticMatrix S;
};
WignerFactor wigner_factor(const GaussianPure& psi, const Tolerance& tol = {});

CovState sigma_from_wy(const GaussianPure& psi, const Tolerance& tol = {});

/// Inverse of sigma_from_wy. Requires a pure state (every nu_j = hbar/2) and
/// enforces the matrix uncertainty identity as a residual check on the
/// remaining block.
GaussianPure wy_from_sigma(const CovState& state, const Tolerance& tol = {});

/// Parameter-level Fourier transform; the constant phase is not tracked.
GaussianPure fourier_gaussian(const GaussianPure& psi, const Tolerance& tol = {});

/// Action of a metaplectic generator on (W, Y): shear shifts Y, dilation maps
/// both by congruence, rotation is the Fourier transform. The result is
/// verified against the Wigner covariance contract G' = S^{-T} G S^{-1}.
GaussianPure metaplectic_apply(const Generator& g, const GaussianPure& psi,
                               const Tolerance& tol = {});

/// (hbar/2)^n det(Sigma)^{-1/2}.
double purity(const CovState& state);
/// The same quantity from the Williamson spectrum, prod_j (hbar/2)/nu_j.
double purity_from_nu(const CovState& state);

/// True iff every nu_j = hbar/2; then Sigma = (hbar/2) S^T S and the witness
/// S is returned.
struct BlobReport {
  bool is_blob = false;
  Vec nu;
  Matrix witness;
};
BlobReport is_quantum_blob(const CovState& state, const Tolerance& tol = {});

/// Pointwise Wigner function value (2 pi)^{-n} det(Sigma)^{-1/2}
/// exp(-Sigma^{-1} z.z / 2).
double wigner_eval(const CovState& state, const Vec& z);
double wigner_eval(const GaussianPure& psi, const Vec& z);

/// Position (or momentum) marginal density at a point of R^n.
double marginal_density(const CovState& state, Space axis, const Vec& coord);

// --- seeded samplers --------------------------------------------------------

enum class StateKind {
  Blob,        // every nu_j = hbar/2 exactly
  Mixed,       // every nu_j >= hbar/2 with a strict margin
  NonQuantum,  // at least one nu_j < hbar/2 with a strict margin
};

/// Sigma = S^T diag(nu, nu) S with S from random_symplectic; deterministic.
CovState random_cov_state(std::uint64_t seed, int n, double hbar, StateKind kind,
                          const Tolerance& tol = {});

/// Quantum blob whose covariance has zero cross block (saturated projections):
/// Sigma = (hbar/2) diag(G, G^{-1}).
CovState random_uncorrelated_blob(std::uint64_t seed, int n, double hbar,
                                  const Tolerance& tol = {});

}  // namespace qpd
