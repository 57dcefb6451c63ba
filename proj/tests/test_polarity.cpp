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
#include "qpd/polarity.hpp"
#include "qpd/rng.hpp"

using namespace qpd;

namespace {

EllipsoidBody ball(Space space, int dim, double radius) {
  return EllipsoidBody(space, Matrix::identity(dim), radius * radius);
}

}  // namespace

TEST_SUITE("polarity") {

TEST_CASE("dual of a ball inverts the radius") {
  const double hbar = 1.0;
  for (int d : {1, 2, 3}) {
    for (double r : {0.5, 1.0, 3.0}) {
      const EllipsoidBody x = ball(Space::Position, d, r);
      const EllipsoidBody dual = polar_dual(x, hbar);
      CHECK(dual.space() == Space::Momentum);
      // {p : |p| <= hbar / r}: support at any direction is hbar/r.
      Vec dir(static_cast<size_t>(d), 0.0);
      dir[0] = 1.0;
      CHECK(support_function(Body{dual}, dir) == doctest::Approx(hbar / r).epsilon(1e-12));
    }
  }
}

TEST_CASE("one-dimensional interval duality") {
  // [-sqrt(2 s), sqrt(2 s)] maps to [-hbar/sqrt(2 s), hbar/sqrt(2 s)].
  const double hbar = 1.0, sxx = 0.8;
  const double w = std::sqrt(2.0 * sxx);
  const BoxBody x{Space::Position, {w}};
  const Body dual = polar_dual(Body{x}, hbar);
  const auto& cp = std::get<CrossPolytopeBody>(dual);
  // In one dimension the cross polytope {w |p| <= hbar} is the interval of
  // half-width hbar / w.
  CHECK(support_function(dual, {1.0}) == doctest::Approx(hbar / w).epsilon(1e-12));
  CHECK(cp.space == Space::Momentum);
}

TEST_CASE("explicit diagonal ellipsoid dual") {
  const EllipsoidBody x(Space::Position, Matrix::diag({2.0, 0.5}), 1.0);
  const EllipsoidBody dual = polar_dual(x, 1.0);
  CHECK(approx_equal(dual.shape(), Matrix::diag({0.5, 2.0}), 1e-12));
  CHECK(dual.level() == doctest::Approx(1.0));
}

TEST_CASE("phase-space bodies cannot be dualized directly") {
  const EllipsoidBody omega(Space::Phase, Matrix::identity(2), 1.0);
  CHECK_THROWS_AS(polar_dual(omega, 1.0), Error);
}

TEST_CASE("biduality for ellipsoids and boxes") {
  Rng rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + trial % 4;
    const double hbar = rng.uniform(0.5, 2.0);
    const EllipsoidBody x(Space::Position, rng.spd(d, 0.3, 3.0), rng.uniform(0.5, 2.0));
    const EllipsoidBody back = polar_dual(polar_dual(x, hbar), hbar);
    CHECK(back.space() == Space::Position);
    CHECK(approx_equal(back.with_level(x.level()).shape(), x.shape(), 1e-10));

    BoxBody box{Space::Position, {}};
    for (int i = 0; i < d; ++i) box.half_widths.push_back(rng.uniform(0.2, 2.0));
    const Body round = polar_dual(polar_dual(Body{box}, hbar), hbar);
    const auto& back_box = std::get<BoxBody>(round);
    for (int i = 0; i < d; ++i) {
      CHECK(back_box.half_widths[i] == doctest::Approx(box.half_widths[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("antimonotonicity on nested ellipsoids") {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 3;
    const Matrix ay = rng.spd(d, 0.3, 2.0);
    const Matrix ax = ay + rng.spd(d, 0.1, 1.0);  // A_X >= A_Y so X subset Y
    const EllipsoidBody x(Space::Position, ax, 1.0);
    const EllipsoidBody y(Space::Position, ay, 1.0);
    const EllipsoidBody xd = polar_dual(x, 1.0);
    const EllipsoidBody yd = polar_dual(y, 1.0);
    // dual(Y) subset dual(X): shape of dual(Y) dominates shape of dual(X).
    CHECK(loewner_leq(xd.shape(), yd.shape()));
  }
}

TEST_CASE("scaling identity for linear images") {
  Rng rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 3;
    Matrix l = Matrix::identity(d) + 0.5 * rng.matrix(d, d);
    if (std::abs(determinant(l)) < 0.1) continue;
    const Matrix a = rng.spd(d, 0.4, 2.5);
    const double hbar = 1.0;
    // L X has shape L^{-T} A L^{-1}; its dual must be (L^T)^{-1} X^hbar,
    // whose shape is L A^{-1} L^T.
    const Matrix linv = inverse(l);
    const EllipsoidBody lx(Space::Position, symmetrize(linv.transposed() * a * linv), hbar);
    const EllipsoidBody got = polar_dual(lx, hbar);
    const Matrix expect = symmetrize(l * inverse(a) * l.transposed());
    CHECK(approx_equal(got.shape(), expect, 1e-9));
  }
}

TEST_CASE("quantum pair reports") {
  const double hbar = 1.0;
  const auto id2 = Matrix::identity(2);
  const auto saturated = is_quantum_pair(EllipsoidBody(Space::Position, id2, hbar),
                                         EllipsoidBody(Space::Momentum, id2, hbar), hbar);
  CHECK(saturated.is_pair);
  CHECK(saturated.is_saturated);
  for (double lam : saturated.lambda) CHECK(lam == doctest::Approx(1.0));

  const auto strict = is_quantum_pair(EllipsoidBody(Space::Position, id2, hbar),
                                      EllipsoidBody(Space::Momentum, 0.5 * id2, hbar), hbar);
  CHECK(strict.is_pair);
  CHECK_FALSE(strict.is_saturated);
  CHECK(strict.lambda.front() == doctest::Approx(0.5));

  const auto fails = is_quantum_pair(EllipsoidBody(Space::Position, 2.0 * id2, hbar),
                                     EllipsoidBody(Space::Momentum, id2, hbar), hbar);
  CHECK_FALSE(fails.is_pair);
  CHECK(fails.lambda.front() == doctest::Approx(2.0));
  REQUIRE(fails.witness.size() == 2);
  // The witness lies on the boundary of X^hbar but outside P.
  const EllipsoidBody xd = polar_dual(EllipsoidBody(Space::Position, 2.0 * id2, hbar), hbar);
  const double s = support_function(Body{xd}, fails.witness);
  Vec p = s * fails.witness;
  CHECK_FALSE(EllipsoidBody(Space::Momentum, id2, hbar).contains(p));
}

TEST_CASE("pair extension under inclusion") {
  Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 3;
    const Matrix a = rng.spd(d, 0.5, 2.0);
    const EllipsoidBody x(Space::Position, a, 1.0);
    const EllipsoidBody p = polar_dual(x, 1.0);
    // Enlarge both bodies: shrinking the shapes enlarges the sets.
    const Matrix ay = symmetrize(a - 0.3 * rng.spd(d, 0.1, 0.6));
    if (eigen_min(ay) < 0.05) continue;
    const Matrix aq = symmetrize(p.shape() - 0.3 * rng.spd(d, 0.1, 0.6));
    if (eigen_min(aq) < 0.05) continue;
    const auto rep = is_quantum_pair(EllipsoidBody(Space::Position, ay, 1.0),
                                     EllipsoidBody(Space::Momentum, aq, 1.0), 1.0);
    CHECK(rep.is_pair);
  }
}

TEST_CASE("saturation iff the shapes are inverse to each other") {
  Rng rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 3;
    const Matrix a = rng.spd(d, 0.4, 2.0);
    const auto rep = is_quantum_pair(EllipsoidBody(Space::Position, a, 1.0),
                                     EllipsoidBody(Space::Momentum, inverse(a), 1.0), 1.0);
    CHECK(rep.is_saturated);
  }
}

TEST_CASE("support functions of the basic bodies") {
  CHECK(support_function(Body{ball(Space::Position, 3, 1.0)}, {0.3, -0.2, 0.9}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const BoxBody box{Space::Position, {1.0, 3.0}};
  CHECK(support_function(Body{box}, {1.0, 0.0}) == doctest::Approx(1.0));
  CHECK(support_function(Body{box}, {0.0, 1.0}) == doctest::Approx(3.0));
  const CrossPolytopeBody cp{Space::Momentum, {1.0, 2.0}, 1.0};
  CHECK(support_function(Body{cp}, {1.0, 0.0}) == doctest::Approx(1.0));
  CHECK(support_function(Body{cp}, {0.0, 1.0}) == doctest::Approx(0.5));
}

TEST_CASE("membership in the dual matches the support-function test") {
  Rng rng(71);
  int tested = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 3;
    const double hbar = rng.uniform(0.5, 2.0);
    const EllipsoidBody x(Space::Position, rng.spd(d, 0.3, 3.0), rng.uniform(0.5, 2.0));
    const EllipsoidBody dual = polar_dual(x, hbar);
    Vec u(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) u[i] = rng.uniform(-2.0, 2.0);
    if (norm(u) < 1e-6) continue;
    // u in X^hbar  iff  sup_{x in X} u.x <= hbar.
    const bool member = dual.contains(u);
    const bool by_support = support_function(Body{x}, u) * norm(u) <= hbar * (1.0 + 1e-12);
    CHECK(member == by_support);
    ++tested;
  }
  CHECK(tested >= 190);
}

TEST_CASE("volumes of the closed-form bodies") {
  CHECK(ball(Space::Position, 2, 1.0).volume() == doctest::Approx(3.141592653589793));
  CHECK(ball(Space::Position, 3, 2.0).volume() ==
        doctest::Approx(4.0 / 3.0 * 3.141592653589793 * 8.0));
  const BoxBody box{Space::Position, {1.0, 2.0}};
  CHECK(box.volume() == doctest::Approx(8.0));
  const CrossPolytopeBody cp{Space::Momentum, {1.0, 1.0}, 1.0};
  CHECK(cp.volume() == doctest::Approx(2.0));
}

TEST_CASE("lagrangian-frame duality") {
  const double hbar = 1.0;
  Rng rng(73);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 3;
    const SymplecticMatrix s = random_symplectic(300 + trial, n, 0.6);
    const EllipsoidBody x(Space::Position, rng.spd(n, 0.4, 2.0), hbar);
    const FramedBody fx{s, x};
    const FramedBody dual = lagrangian_polar_dual(fx, hbar);
    CHECK(dual.model.space() == Space::Momentum);

    // Identity frame reduces to the plain dual.
    const FramedBody plain{standard_J(n) * standard_J(n).inverse(), x};  // identity
    const FramedBody pd = lagrangian_polar_dual(plain, hbar);
    CHECK(approx_equal(pd.model.shape(), polar_dual(x, hbar).shape(), 1e-12));

    // Biduality in-frame.
    const FramedBody back = lagrangian_polar_dual(dual, hbar);
    CHECK(approx_equal(back.model.with_level(x.level()).shape(), x.shape(), 1e-10));

    // Covariance: pushing the frame by S0 commutes with taking the dual.
    const SymplecticMatrix s0 = random_symplectic(900 + trial, n, 0.6);
    const FramedBody pushed{s0 * s, x};
    const FramedBody dual_pushed = lagrangian_polar_dual(pushed, hbar);
    CHECK(approx_equal(dual_pushed.model.shape(), dual.model.shape(), 1e-10));
    CHECK(approx_equal(dual_pushed.frame.matrix(), (s0 * s).matrix(), 1e-12));
  }
}

}  // TEST_SUITE
