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

#include "qpd/rng.hpp"

namespace qpd {

Matrix Rng::spd(int dim, double eig_lo, double eig_hi) {
  // Random orthogonal frame by Gram-Schmidt on a generic matrix, then
  // Q diag(lambda) Q^T with prescribed eigenvalue range.
  Matrix q(dim, dim);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix g = matrix(dim, dim);
    bool ok = true;
    for (int j = 0; j < dim && ok; ++j) {
      Vec v(static_cast<size_t>(dim));
      for (int i = 0; i < dim; ++i) v[i] = g(i, j);
      for (int k = 0; k < j; ++k) {
        double proj = 0.0;
        for (int i = 0; i < dim; ++i) proj += q(i, k) * v[i];
        for (int i = 0; i < dim; ++i) v[i] -= proj * q(i, k);
      }
      const double len = norm(v);
      if (len < 1e-6) {
        ok = false;
        break;
      }
      for (int i = 0; i < dim; ++i) q(i, j) = v[i] / len;
    }
    if (ok) break;
  }
  Vec lam(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) lam[i] = uniform(eig_lo, eig_hi);
  return symmetrize(q * Matrix::diag(lam) * q.transposed());
}

}  // namespace qpd
