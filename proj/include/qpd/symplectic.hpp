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
#include <variant>

#include "qpd/matrix.hpp"

namespace qpd {

// Phase-space coordinates are ordered z = (x_1..x_n, p_1..p_n) throughout,
// with the standard form J = [[0, I], [-I, 0]].

/// The 2n x 2n standard symplectic matrix as a plain Matrix.
Matrix standard_J_matrix(int n);

/// A certified element of Sp(n). Construction verifies S^T J S = J against a
/// residual tolerance that scales with ||S||^2, and checks det S = +1.
class SymplecticMatrix {
 public:
  static SymplecticMatrix certify(Matrix s, const Tolerance& tol = {});

  const Matrix& matrix() const { return s_; }
  int dof() const { return n_; }
  double residual() const { return residual_; }

  /// Exact symplectic inverse -J S^T J (re-certified).
  SymplecticMatrix inverse(const Tolerance& tol = {}) const;
  SymplecticMatrix transposed(const Tolerance& tol = {}) const;

  friend SymplecticMatrix operator*(const SymplecticMatrix& a,
                                    const SymplecticMatrix& b);

 private:
  SymplecticMatrix(Matrix s, int n, double residual)
      : s_(std::move(s)), n_(n), residual_(residual) {}

  Matrix s_;
  int n_ = 0;
  double residual_ = 0.0;
};

SymplecticMatrix standard_J(int n);

/// Generators of Sp(n): the shear [[I,0],[P,I]] with symmetric P, the
/// dilation [[L^{-1},0],[0,L^T]] with invertible L, and the rotation J.
struct ShearGen {
  Matrix p;  // symmetric
};
struct DilationGen {
  Matrix l;  // invertible
};
struct FourierGen {};
using Generator = std::variant<ShearGen, DilationGen, FourierGen>;

SymplecticMatrix generator_matrix(const Generator& g, int n,
                                  const Tolerance& tol = {});

/// The n positive numbers nu_j with +-i*nu_j in the spectrum of J*M, computed
/// from the skew-symmetric similarity M^{1/2} J M^{1/2}; ascending.
Vec symplectic_eigenvalues(const Matrix& spd, const Tolerance& tol = {});

/// Sigma = S^T diag(nu, nu) S with S symplectic and nu ascending.
/// Deterministic for a fixed input.
struct WilliamsonDecomposition {
  SymplecticMatrix S;
  Vec nu;
};
WilliamsonDecomposition williamson(const Matrix& spd, const Tolerance& tol = {});

/// Simultaneous balanced diagonalization of two SPD matrices:
/// L^T A L = L^{-1} B L^{-T} = diag(sqrt(lambda)), lambda = eig(A B) ascending.
struct BalancedDiag {
  Matrix L;
  Vec lambda;
};
BalancedDiag balanced_diagonalize(const Matrix& a, const Matrix& b,
                                  const Tolerance& tol = {});

/// Block-relation test for membership in Sp(n):
/// M_XX^T M_PP - M_PX^T M_XP = I plus symmetry of M_XX^T M_PX and
/// M_XP^T M_PP. Carries the residuals and the direct S^T J S - J residual for
/// cross-checking; never throws.
struct BlockSymplecticReport {
  bool ok = false;
  double res_identity = 0.0;
  double res_sym_xx_px = 0.0;
  double res_sym_xp_pp = 0.0;
  double res_stjs = 0.0;
};
BlockSymplecticReport block_symplectic_check(const Matrix& m,
                                             const Tolerance& tol = {});

/// Deterministic sampler: a product of 3..8 random shear/dilation/rotation
/// generators with entry magnitudes controlled by `spread`. spread == 0 gives
/// the identity.
SymplecticMatrix random_symplectic(std::uint64_t seed, int n, double spread,
                                   const Tolerance& tol = {});

}  // namespace qpd
