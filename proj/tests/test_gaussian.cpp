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
#include <complex>

#include "doctest.h"
#include "qpd/gaussian.hpp"
#include "qpd/rng.hpp"

using namespace qpd;

namespace {

// One-dimensional oracle: largest |x| over the boundary of {M z.z = hbar},
// dense parameter scan refined by golden-section search.
double max_x_on_ellipse(const Matrix& m, double hbar) {
  const Matrix mh_inv = inverse(sym_sqrt(m));
  auto x_at = [&](double theta) {
    const Vec u{std::sqrt(hbar) * std::cos(theta), std::sqrt(hbar) * std::sin(theta)};
    const Vec z = mh_inv * u;
    return std::abs(z[0]);
  };
  double best = 0.0, best_theta = 0.0;
  const int grid = 20000;
  for (int i = 0; i < grid; ++i) {
    const double theta = 2.0 * 3.141592653589793 * i / grid;
    const double v = x_at(theta);
    if (v > best) { best = v; best_theta = theta; }
  }
  double a = best_theta - 1e-3, b = best_theta + 1e-3;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  for (int it = 0; it < 200; ++it) {
    if (x_at(c) < x_at(d)) a = c; else b = d;
    c = b - phi * (b - a);
    d = a + phi * (b - a);
  }
  return x_at(0.5 * (a + b));
}

GaussianPure random_pure(Rng& rng, int n, double hbar) {
  return make_gaussian_pure(hbar, rng.spd(n, 0.4, 2.5), rng.symmetric(n));
}

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("quantum condition basics") {
  const double hbar = 1.0;
  const CovState blob(hbar, 0.5 * hbar * Matrix::identity(2));
  const auto v1 = quantum_condition(blob);
  CHECK(v1.holds);
  CHECK(v1.margin == doctest::Approx(0.0).epsilon(1e-12));

  const CovState sub(hbar, 0.25 * hbar * Matrix::identity(2));
  const auto v2 = quantum_condition(sub);
  CHECK_FALSE(v2.holds);
  CHECK(v2.nu_min == doctest::Approx(0.25 * hbar));

  // Diagonal n = 1 case: holds iff sxx*spp >= hbar^2/4.
  CHECK(quantum_condition(CovState(1.0, Matrix::diag({2.0, 0.2}))).holds);
  CHECK_FALSE(quantum_condition(CovState(1.0, Matrix::diag({2.0, 0.1}))).holds);
}

TEST_CASE("rsup per mode") {
  const double r3 = std::sqrt(3.0) / 2.0;
  const CovState sat(1.0, Matrix{{1.0, r3}, {r3, 1.0}});
  CHECK(rsup_check(sat, 1));
  CHECK_THROWS_AS(rsup_check(sat, 2), Error);

  const CovState blob(1.0, 0.5 * Matrix::identity(4));
  CHECK(rsup_check(blob, 1));
  CHECK(rsup_check(blob, 2));
}

TEST_CASE("quantum condition implies rsup for every mode") {
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 4;
    const CovState s = random_cov_state(4000 + trial, n, 1.0,
                                        trial % 2 ? StateKind::Mixed : StateKind::Blob);
    REQUIRE(s.quantum());
    for (int j = 1; j <= n; ++j) CHECK(rsup_check(s, j));
  }
}

TEST_CASE("projection of the unit phase ellipsoid") {
  const PhaseEllipsoid omega(1.0, Matrix::identity(4));
  const auto [ox, op] = project(omega);
  CHECK(approx_equal(ox.shape(), Matrix::identity(2), 1e-12));
  CHECK(approx_equal(op.shape(), Matrix::identity(2), 1e-12));
  CHECK(ox.space() == Space::Position);
  CHECK(op.space() == Space::Momentum);
}

TEST_CASE("projection against the one-dimensional boundary oracle") {
  Rng rng(81);
  for (int trial = 0; trial < 30; ++trial) {
    const double a = rng.uniform(0.5, 3.0);
    const double c = rng.uniform(0.5, 3.0);
    const double b = rng.uniform(-0.8, 0.8) * std::sqrt(a * c);
    const double hbar = rng.uniform(0.5, 2.0);
    const Matrix m{{a, b}, {b, c}};
    if (eigen_min(m) < 0.05) continue;
    const auto [ox, op] = project(PhaseEllipsoid(hbar, m));
    const double half_width = std::sqrt(hbar / ox.shape()(0, 0));
    CHECK(half_width == doctest::Approx(max_x_on_ellipse(m, hbar)).epsilon(1e-9));
    CHECK(ox.shape()(0, 0) == doctest::Approx(a - b * b / c).epsilon(1e-12));
    (void)op;
  }
}

TEST_CASE("dilation generators map ball projections by L^{-1} and L^T") {
  Rng rng(83);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3;
    Matrix l = Matrix::identity(n) + 0.5 * rng.matrix(n, n);
    if (std::abs(determinant(l)) < 0.15) continue;
    const Matrix s = generator_matrix(DilationGen{l}, n).matrix();
    // S(B(sqrt(hbar))) = {z : (S S^T)^{-1} z.z <= hbar}.
    const Matrix r = symmetrize(inverse(s * s.transposed()));
    const auto [ox, op] = project(PhaseEllipsoid(1.0, r));
    CHECK(approx_equal(ox.shape(), symmetrize(l.transposed() * l), 1e-9));
    CHECK(approx_equal(op.shape(), symmetrize(inverse(l) * inverse(l).transposed()), 1e-9));
  }
}

TEST_CASE("projection pair certificates for quantum states") {
  const CovState blob(1.0, 0.5 * Matrix::identity(2));
  const auto rep = projection_pair_check(blob);
  CHECK(rep.is_pair);
  CHECK(rep.is_saturated);

  // n = 1 with correlation: strict inclusion.
  const CovState corr(1.0, Matrix{{1.0, 0.8}, {0.8, 1.0}});
  REQUIRE(corr.quantum());
  const auto rep2 = projection_pair_check(corr);
  CHECK(rep2.is_pair);
  CHECK_FALSE(rep2.is_saturated);

  // Non-quantum input is rejected: the theorem is only claimed under the
  // quantum condition.
  const CovState sub(1.0, 0.25 * Matrix::identity(2));
  CHECK_THROWS_AS(projection_pair_check(sub), Error);
}

TEST_CASE("projection pair property over random quantum states") {
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 4;
    const StateKind kind = trial % 3 == 0 ? StateKind::Blob : StateKind::Mixed;
    const CovState s = random_cov_state(7000 + trial, n, 1.0, kind);
    const auto rep = projection_pair_check(s);
    CHECK(rep.is_pair);
  }
}

TEST_CASE("wigner factorization") {
  const auto phi0 = make_gaussian_pure(1.0, Matrix::identity(2), Matrix::zero(2, 2));
  const auto wf = wigner_factor(phi0);
  CHECK(approx_equal(wf.G, Matrix::identity(4), 1e-12));

  const auto psi = make_gaussian_pure(1.0, Matrix::identity(1), Matrix::identity(1));
  const auto wf2 = wigner_factor(psi);
  CHECK(approx_equal(wf2.G, Matrix{{2.0, 1.0}, {1.0, 1.0}}, 1e-12));

  Rng rng(91);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 3;
    const auto g = wigner_factor(random_pure(rng, n, 1.0)).G;
    CHECK(determinant(g) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("covariance matrix from wavefunction parameters") {
  const auto phi0 = make_gaussian_pure(1.0, Matrix::identity(2), Matrix::zero(2, 2));
  CHECK(approx_equal(sigma_from_wy(phi0).sigma(), 0.5 * Matrix::identity(4), 1e-12));

  // Saturated one-dimensional state.
  const double r3 = std::sqrt(3.0) / 2.0;
  const CovState sat(1.0, Matrix{{1.0, r3}, {r3, 1.0}});
  const GaussianPure wy = wy_from_sigma(sat);
  CHECK(wy.W(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wy.Y(0, 0) == doctest::Approx(-r3).epsilon(1e-12));
}

TEST_CASE("wy round-trip on random pure states") {
  Rng rng(97);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 4;
    const double hbar = rng.uniform(0.5, 2.0);
    const GaussianPure psi = random_pure(rng, n, hbar);
    const GaussianPure back = wy_from_sigma(sigma_from_wy(psi));
    CHECK(approx_equal(back.W, psi.W, 1e-9));
    CHECK(approx_equal(back.Y, psi.Y, 1e-8));
  }
}

TEST_CASE("wy_from_sigma rejects mixed states") {
  const CovState mixed(1.0, Matrix::identity(2));  // nu = 1 > 1/2
  CHECK_THROWS_AS(wy_from_sigma(mixed), Error);
}

TEST_CASE("fourier transform of the parameters") {
  const auto phi0 = make_gaussian_pure(1.0, Matrix::identity(2), Matrix::zero(2, 2));
  const auto f = fourier_gaussian(phi0);
  CHECK(approx_equal(f.W, Matrix::identity(2), 1e-12));
  CHECK(approx_equal(f.Y, Matrix::zero(2, 2), 1e-12));

  // n = 1 oracle via complex inversion: W' + i Y' = (W + i Y)^{-1} conjugated.
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const double w = rng.uniform(0.3, 3.0);
    const double y = rng.uniform(-2.0, 2.0);
    const auto psi = make_gaussian_pure(1.0, Matrix{{w}}, Matrix{{y}});
    const auto f1 = fourier_gaussian(psi);
    const std::complex<double> inv = 1.0 / std::complex<double>(w, y);
    CHECK(f1.W(0, 0) == doctest::Approx(inv.real()).epsilon(1e-12));
    CHECK(f1.Y(0, 0) == doctest::Approx(inv.imag()).epsilon(1e-12));
  }
  const auto psi11 = make_gaussian_pure(1.0, Matrix{{1.0}}, Matrix{{1.0}});
  const auto f11 = fourier_gaussian(psi11);
  CHECK(f11.W(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f11.Y(0, 0) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("double fourier transform is the identity on the parameters") {
  Rng rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const GaussianPure psi = random_pure(rng, n, 1.0);
    const GaussianPure twice = fourier_gaussian(fourier_gaussian(psi));
    CHECK(approx_equal(twice.W, psi.W, 1e-9));
    CHECK(approx_equal(twice.Y, psi.Y, 1e-9));
  }
}

TEST_CASE("metaplectic generator action") {
  const auto phi0 = make_gaussian_pure(1.0, Matrix::identity(1), Matrix::zero(1, 1));
  const auto same = metaplectic_apply(ShearGen{Matrix::zero(1, 1)}, phi0);
  CHECK(approx_equal(same.W, phi0.W, 1e-14));
  CHECK(approx_equal(same.Y, phi0.Y, 1e-14));

  const auto scaled = metaplectic_apply(DilationGen{2.0 * Matrix::identity(1)}, phi0);
  CHECK(scaled.W(0, 0) == doctest::Approx(4.0));
  CHECK(scaled.Y(0, 0) == doctest::Approx(0.0));

  // The Wigner covariance contract is verified inside the call; 300 random
  // generator/state pairs must go through without a violation.
  Rng rng(107);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 3;
    const GaussianPure psi = random_pure(rng, n, 1.0);
    Generator g;
    const int kind = trial % 3;
    if (kind == 0) {
      g = ShearGen{rng.symmetric(n)};
    } else if (kind == 1) {
      Matrix l = Matrix::identity(n) + 0.5 * rng.matrix(n, n);
      if (std::abs(determinant(l)) < 0.15) l = Matrix::identity(n);
      g = DilationGen{l};
    } else {
      g = FourierGen{};
    }
    CHECK_NOTHROW(metaplectic_apply(g, psi));
  }
}

TEST_CASE("purity") {
  const CovState blob(1.0, 0.5 * Matrix::identity(2));
  CHECK(purity(blob) == doctest::Approx(1.0).epsilon(1e-12));
  const CovState mixed(1.0, Matrix::identity(2));
  CHECK(purity(mixed) == doctest::Approx(0.5).epsilon(1e-12));

  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const CovState s = random_cov_state(11000 + trial, n, 1.0, StateKind::Mixed);
    const double mu = purity(s);
    CHECK(mu <= 1.0 + 1e-9);
    CHECK(mu == doctest::Approx(purity_from_nu(s)).epsilon(1e-9));
  }
}

TEST_CASE("purity is a symplectic invariant") {
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 3;
    const CovState s = random_cov_state(13000 + trial, n, 1.0, StateKind::Mixed);
    const Matrix t = random_symplectic(500 + trial, n, 0.7).matrix();
    const CovState moved(1.0, symmetrize(t * s.sigma() * t.transposed()));
    CHECK(purity(moved) == doctest::Approx(purity(s)).epsilon(1e-9));
    CHECK(moved.quantum() == s.quantum());
  }
}

TEST_CASE("quantum blob detection") {
  // (hbar/2) S^T S is always a blob.
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 3;
    const Matrix s = random_symplectic(1700 + trial, n, 0.8).matrix();
    const CovState state(1.0, symmetrize(0.5 * (s.transposed() * s)));
    const auto rep = is_quantum_blob(state);
    CHECK(rep.is_blob);
    // The witness reconstructs Sigma as (hbar/2) S^T S.
    const Matrix recon = symmetrize(0.5 * (rep.witness.transposed() * rep.witness));
    CHECK(approx_equal(recon, state.sigma(), 1e-8));
  }
  CHECK(is_quantum_blob(CovState(1.0, Matrix::diag({1.0, 0.25}))).is_blob);
  CHECK_FALSE(is_quantum_blob(CovState(1.0, Matrix::identity(2))).is_blob);
}

TEST_CASE("pure iff blob iff the ellipsoid matrix is symplectic") {
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 3;
    const StateKind kind = trial % 2 ? StateKind::Blob : StateKind::Mixed;
    const CovState s = random_cov_state(19000 + trial, n, 1.0, kind);
    const bool blob = is_quantum_blob(s).is_blob;
    const bool pure = std::abs(purity(s) - 1.0) <= 1e-8;
    const Matrix m = covariance_ellipsoid(s).shape();
    const bool m_symplectic = block_symplectic_check(m).ok;
    CHECK(blob == pure);
    CHECK(blob == m_symplectic);
    CHECK(blob == (kind == StateKind::Blob));
  }
}

TEST_CASE("wigner values and marginals") {
  const auto phi0 = make_gaussian_pure(1.0, Matrix::identity(1), Matrix::zero(1, 1));
  CHECK(wigner_eval(phi0, {0.0, 0.0}) == doctest::Approx(1.0 / 3.141592653589793).epsilon(1e-12));

  // Total integral and the position marginal by trapezoid quadrature on a
  // +-6 sigma grid.
  const CovState state(1.0, Matrix{{1.0, 0.3}, {0.3, 0.7}});
  const double sx = std::sqrt(state.sigma()(0, 0));
  const double sp = std::sqrt(state.sigma()(1, 1));
  const int grid = 801;
  const double hx = 12.0 * sx / (grid - 1);
  const double hp = 12.0 * sp / (grid - 1);
  double total = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x = -6.0 * sx + i * hx;
    double row = 0.0;
    for (int j = 0; j < grid; ++j) {
      const double p = -6.0 * sp + j * hp;
      const double w = wigner_eval(state, {x, p});
      row += (j == 0 || j == grid - 1) ? 0.5 * w : w;
    }
    row *= hp;
    total += (i == 0 || i == grid - 1) ? 0.5 * row : row;
  }
  total *= hx;
  CHECK(std::abs(total - 1.0) <= 1e-6);

  for (double x : {-1.0, -0.3, 0.0, 0.4, 1.2}) {
    double integral = 0.0;
    for (int j = 0; j < grid; ++j) {
      const double p = -6.0 * sp + j * hp;
      const double w = wigner_eval(state, {x, p});
      integral += (j == 0 || j == grid - 1) ? 0.5 * w : w;
    }
    integral *= hp;
    CHECK(std::abs(integral - marginal_density(state, Space::Position, {x})) <= 1e-6);
  }
}

TEST_CASE("two-mode wigner quadrature reduces to the single-mode state") {
  // Integrating the n = 2 Wigner function over one conjugate plane must leave
  // the Wigner function of the sub-covariance of the other mode.
  Matrix sigma(4, 4);
  sigma = Matrix{{1.0, 0.1, 0.25, 0.05},
                 {0.1, 0.8, 0.05, -0.15},
                 {0.25, 0.05, 1.1, 0.0},
                 {0.05, -0.15, 0.0, 0.9}};
  const CovState state(1.0, sigma);
  REQUIRE(state.quantum());
  // Sub-covariance of mode 2: rows/cols {x2, p2} = {1, 3}.
  const Matrix sub{{sigma(1, 1), sigma(1, 3)}, {sigma(3, 1), sigma(3, 3)}};
  const CovState reduced(1.0, sub);

  const double s1 = std::sqrt(sigma(0, 0));
  const double sp1 = std::sqrt(sigma(2, 2));
  const int grid = 301;
  const double hx = 12.0 * s1 / (grid - 1);
  const double hp = 12.0 * sp1 / (grid - 1);
  for (const Vec& z2 : {Vec{0.0, 0.0}, Vec{0.5, -0.4}, Vec{-1.0, 0.8}}) {
    double integral = 0.0;
    for (int i = 0; i < grid; ++i) {
      const double x1 = -6.0 * s1 + i * hx;
      double row = 0.0;
      for (int j = 0; j < grid; ++j) {
        const double p1 = -6.0 * sp1 + j * hp;
        const double w = wigner_eval(state, {x1, z2[0], p1, z2[1]});
        row += (j == 0 || j == grid - 1) ? 0.5 * w : w;
      }
      integral += (i == 0 || i == grid - 1) ? 0.5 * row * hp : row * hp;
    }
    integral *= hx;
    CHECK(std::abs(integral - wigner_eval(reduced, z2)) <= 1e-6);
  }

  // Integrating the reduced state over its own plane closes the total
  // four-dimensional integral to one.
  const double s2 = std::sqrt(sub(0, 0));
  const double sp2 = std::sqrt(sub(1, 1));
  const double hx2 = 12.0 * s2 / (grid - 1);
  const double hp2 = 12.0 * sp2 / (grid - 1);
  double total = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x2 = -6.0 * s2 + i * hx2;
    double row = 0.0;
    for (int j = 0; j < grid; ++j) {
      const double p2 = -6.0 * sp2 + j * hp2;
      const double w = wigner_eval(reduced, {x2, p2});
      row += (j == 0 || j == grid - 1) ? 0.5 * w : w;
    }
    total += (i == 0 || i == grid - 1) ? 0.5 * row * hp2 : row * hp2;
  }
  total *= hx2;
  CHECK(std::abs(total - 1.0) <= 1e-6);
}

TEST_CASE("samplers produce the advertised kinds") {
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    CHECK(random_cov_state(31000 + trial, n, 1.0, StateKind::Mixed).quantum());
    CHECK_FALSE(random_cov_state(37000 + trial, n, 1.0, StateKind::NonQuantum).quantum());
    const CovState blob = random_uncorrelated_blob(41000 + trial, n, 1.0);
    CHECK(is_quantum_blob(blob).is_blob);
    CHECK(projection_pair_check(blob).is_saturated);
  }
}

}  // TEST_SUITE
