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

#include <cmath>

#include "doctest.h"
#include "qpd/reconstruct.hpp"
#include "qpd/rng.hpp"

using namespace qpd;

namespace {

Matrix rotation2(double angle) {
  return Matrix{{std::cos(angle), -std::sin(angle)}, {std::sin(angle), std::cos(angle)}};
}

}  // namespace

TEST_SUITE("reconstruct") {

TEST_CASE("one-dimensional saturated shadows give the unique minimal state") {
  const auto sol = pauli_1d(0.5, 0.5, 1.0);
  CHECK(sol.ambiguity == Ambiguity::Unique);
  REQUIRE(sol.partners.size() == 1);
  CHECK(sol.partners[0].W(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.partners[0].Y(0, 0) == doctest::Approx(0.0));
  CHECK(sol.blob_sigmas[0].sigma()(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("one-dimensional partners carry opposite cross covariances") {
  const auto sol = pauli_1d(1.0, 1.0, 1.0);
  CHECK(sol.ambiguity == Ambiguity::SignPair);
  REQUIRE(sol.partners.size() == 2);
  const double r3 = std::sqrt(3.0) / 2.0;
  CHECK(sol.blob_sigmas[0].sigma()(0, 1) == doctest::Approx(r3).epsilon(1e-12));
  CHECK(sol.blob_sigmas[1].sigma()(0, 1) == doctest::Approx(-r3).epsilon(1e-12));
  CHECK(sol.partners[0].W(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.partners[0].Y(0, 0) == doctest::Approx(-r3).epsilon(1e-12));
  CHECK(sol.partners[1].Y(0, 0) == doctest::Approx(r3).epsilon(1e-12));
  for (const auto& sigma : sol.blob_sigmas) {
    CHECK(is_quantum_blob(sigma).is_blob);
  }
  CHECK(sol.xp_rank == 1);
}

TEST_CASE("shadows below the Heisenberg threshold are rejected") {
  CHECK_THROWS_AS(pauli_1d(0.4, 0.4, 1.0), Error);
  try {
    pauli_1d(0.4, 0.4, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::sub_heisenberg);
  }
}

TEST_CASE("saturated reconstruction at the identity gives the standard Gaussian") {
  const auto sol = reconstruct_saturated(Matrix::identity(2), 1.0);
  CHECK(sol.ambiguity == Ambiguity::Unique);
  CHECK(approx_equal(sol.partners[0].W, Matrix::identity(2), 1e-12));
  CHECK(approx_equal(sol.blob_sigmas[0].sigma(), 0.5 * Matrix::identity(4), 1e-12));
}

TEST_CASE("saturated reconstruction of a diagonal shape") {
  const auto sol = reconstruct_saturated(Matrix::diag({2.0, 0.5}), 1.0);
  CHECK(approx_equal(sol.blob_sigmas[0].sigma(),
                     0.5 * Matrix::diag({0.5, 2.0, 2.0, 0.5}), 1e-12));
  CHECK(is_quantum_blob(sol.blob_sigmas[0]).is_blob);
  CHECK(sol.projection_residual <= 1e-10);
}

TEST_CASE("saturated solution is the only blob with those projections") {
  // Any nonzero cross block either breaks positivity, the quantum condition,
  // or purity; probe 200 random perturbations.
  Rng rng(401);
  const Matrix a = rng.spd(2, 0.5, 2.0);
  const auto sol = reconstruct_saturated(a, 1.0);
  const Matrix sxx = sol.blob_sigmas[0].block_xx();
  const Matrix spp = sol.blob_sigmas[0].block_pp();
  int rejected = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix c = rng.matrix(2, 2, -0.3, 0.3);
    if (frobenius_norm(c) < 1e-3) continue;
    const Matrix sigma = Matrix::from_blocks(sxx, c, c.transposed(), spp);
    bool is_candidate = true;
    try {
      const CovState state(1.0, sigma);
      is_candidate = state.quantum() && is_quantum_blob(state).is_blob;
    } catch (const Error&) {
      is_candidate = false;
    }
    if (!is_candidate) ++rejected;
  }
  CHECK(rejected >= 198);  // all nonzero perturbations fail
}

TEST_CASE("pair reconstruction degenerates to the saturated case at B = inv(A)") {
  Rng rng(409);
  const Matrix a = rng.spd(3, 0.5, 2.0);
  const auto sol = reconstruct_pair(a, inverse(a), 1.0);
  CHECK(sol.ambiguity == Ambiguity::Unique);
  CHECK(sol.xp_rank == 0);
  CHECK(frobenius_norm(sol.blob_sigmas[0].block_xp()) <= 1e-7);
}

TEST_CASE("scalar pair reconstruction") {
  const auto sol = reconstruct_pair(Matrix{{1.0}}, Matrix{{0.25}}, 1.0);
  CHECK(sol.ambiguity == Ambiguity::SignPair);
  REQUIRE(sol.blob_sigmas.size() == 2);
  const double r3 = std::sqrt(3.0) / 2.0;
  CHECK(sol.blob_sigmas[0].sigma()(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.blob_sigmas[0].sigma()(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(sol.blob_sigmas[0].sigma()(0, 1)) == doctest::Approx(r3).epsilon(1e-12));

  // Consistency with the one-dimensional solver after the change of
  // variables A = hbar/(2 sxx), B = hbar/(2 spp).
  const auto oned = pauli_1d(0.5, 2.0, 1.0);
  CHECK(approx_equal(sol.blob_sigmas[0].sigma(), oned.blob_sigmas[0].sigma(), 1e-10));
  CHECK(approx_equal(sol.blob_sigmas[1].sigma(), oned.blob_sigmas[1].sigma(), 1e-10));
}

TEST_CASE("pair reconstruction with non-commuting shadows") {
  const Matrix a = Matrix::identity(2);
  const Matrix r = rotation2(0.6);
  const Matrix b = symmetrize(0.5 * (r * Matrix::diag({1.0, 0.5}) * r.transposed()));
  const auto sol = reconstruct_pair(a, b, 1.0);
  CHECK(sol.ambiguity == Ambiguity::SignPair);
  CHECK(sol.projection_residual <= 1e-8);
  CHECK(sol.symplectic_residual <= 1e-8);
  CHECK(sol.identity_residual <= 1e-8);
  for (const auto& partner : sol.partners) {
    CHECK(approx_equal(partner.W, a, 1e-9));
    CHECK(is_symmetric(partner.Y));
  }
  // Partners coincide after reflecting p -> -p.
  const Matrix refl = Matrix::diag({1.0, 1.0, -1.0, -1.0});
  CHECK(approx_equal(refl * sol.blob_sigmas[0].sigma() * refl,
                     sol.blob_sigmas[1].sigma(), 1e-10));
}

TEST_CASE("pair reconstruction verification chain on random quantum pairs") {
  Rng rng(419);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + trial % 3;
    const Matrix a = rng.spd(n, 0.4, 2.5);
    // B = t * inv(A)-ish mixed with another SPD so that eig(AB) <= 1.
    const Matrix ah = sym_sqrt(a);
    const Matrix q = rng.spd(n, 0.2, 0.95);  // eigenvalues strictly below 1
    const Matrix b = symmetrize(inverse(ah) * q * inverse(ah));
    const auto sol = reconstruct_pair(a, b, 1.0);
    for (const auto& sigma : sol.blob_sigmas) {
      CHECK(is_quantum_blob(sigma).is_blob);
      CHECK(std::abs(purity(sigma) - 1.0) <= 1e-8);
    }
    CHECK(sol.projection_residual <= 1e-8);
  }
}

TEST_CASE("pairs with spectrum above one are rejected") {
  CHECK_THROWS_AS(reconstruct_pair(2.0 * Matrix::identity(2), Matrix::identity(2), 1.0), Error);
  try {
    reconstruct_pair(2.0 * Matrix::identity(2), Matrix::identity(2), 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_quantum_pair);
  }
}

TEST_CASE("cross covariance shrinks monotonically toward saturation") {
  Rng rng(421);
  const Matrix a = rng.spd(2, 0.5, 2.0);
  double previous = 1e300;
  for (double t : {0.2, 0.4, 0.6, 0.8, 0.95, 1.0}) {
    const Matrix b = symmetrize(t * inverse(a));
    const auto sol = reconstruct_pair(a, b, 1.0);
    const double cross = frobenius_norm(sol.blob_sigmas[0].block_xp());
    CHECK(cross <= previous + 1e-12);
    previous = cross;
    if (t == 1.0) CHECK(cross <= 1e-7);
  }
}

TEST_CASE("max-volume state on saturated shadows is the pure blob") {
  Rng rng(431);
  const Matrix a = rng.spd(2, 0.5, 2.0);
  const auto rep = max_volume_state(a, inverse(a), 1.0);
  CHECK(rep.purity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(rep.exponent_flagged);
  for (double lam : rep.lambda) CHECK(lam == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("scalar max-volume state") {
  const auto rep = max_volume_state(Matrix{{1.0}}, Matrix{{0.25}}, 1.0);
  CHECK(rep.lambda.front() == doctest::Approx(0.25).epsilon(1e-12));
  // The John ellipsoid of the product reprojects exactly, which pins
  // Sigma = diag(1/2, 2) and purity sqrt(lambda) = 1/2.
  CHECK(approx_equal(rep.state.state().sigma(), Matrix::diag({0.5, 2.0}), 1e-10));
  CHECK(rep.purity == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rep.purity_from_spectrum == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rep.lambda_quarter_product == doctest::Approx(std::pow(0.25, 0.25)).epsilon(1e-12));
  CHECK(rep.lambda_sq_product == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(rep.exponent_flagged);
}

TEST_CASE("max-volume state dominates every reprojecting quantum state") {
  Rng rng(433);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const Matrix a = rng.spd(n, 0.5, 2.0);
    const Matrix ah = sym_sqrt(a);
    const Matrix q = rng.spd(n, 0.3, 0.9);
    const Matrix b = symmetrize(inverse(ah) * q * inverse(ah));
    const auto rep = max_volume_state(a, b, 1.0);
    const double det_max = determinant(rep.state.state().sigma());

    // Random quantum states with the same projections: diagonal blocks are
    // pinned, the cross block varies.
    const Matrix sxx = rep.state.state().block_xx();
    const Matrix spp = rep.state.state().block_pp();
    for (int probe = 0; probe < 10; ++probe) {
      const Matrix c = rng.matrix(n, n, -0.2, 0.2);
      const Matrix sigma = Matrix::from_blocks(sxx, c, c.transposed(), spp);
      try {
        const CovState state(1.0, sigma);
        if (!state.quantum()) continue;
        CHECK(determinant(state.sigma()) <= det_max * (1.0 + 1e-10));
      } catch (const Error&) {
        continue;  // not positive definite: outside the feasible set
      }
    }
  }
}

TEST_CASE("max-volume purity identity and flags on random pairs") {
  Rng rng(439);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 3;
    const Matrix a = rng.spd(n, 0.4, 2.0);
    const Matrix ah = sym_sqrt(a);
    const Matrix q = rng.spd(n, 0.25, 0.9);
    const Matrix b = symmetrize(inverse(ah) * q * inverse(ah));
    const auto rep = max_volume_state(a, b, 1.0);
    CHECK(rep.purity == doctest::Approx(rep.purity_from_spectrum).epsilon(1e-10));
    double expect = 1.0;
    for (double lam : rep.lambda) expect *= std::sqrt(lam);
    CHECK(rep.purity == doctest::Approx(expect).epsilon(1e-9));
    CHECK(rep.exponent_flagged);  // strictly non-saturated inputs
  }
}

TEST_CASE("boundary eigenvalues reported through the cross rank") {
  // One direction saturated, one strictly inside.
  const Matrix a = Matrix::identity(2);
  const Matrix b = Matrix::diag({1.0, 0.25});
  const auto sol = reconstruct_pair(a, b, 1.0);
  CHECK(sol.ambiguity == Ambiguity::SignPair);
  CHECK(sol.xp_rank == 1);
}

}  // TEST_SUITE
