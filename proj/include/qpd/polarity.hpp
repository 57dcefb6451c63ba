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

#include <variant>

#include "qpd/matrix.hpp"
#include "qpd/symplectic.hpp"

namespace qpd {

/// Which copy of R^n (or R^2n) a body lives in. Polar duality maps position
/// bodies to momentum bodies and back; phase-space bodies take the
/// Lagrangian-frame route instead.
enum class Space { Position, Momentum, Phase };

const char* to_string(Space s);
Space dual_space(Space s);

/// Centered ellipsoid {u : A u.u <= h} with SPD shape A and level h > 0.
/// Keeping the level explicit lets one representation cover both the
/// R^2-level and the hbar-level normalizations.
class EllipsoidBody {
 public:
  EllipsoidBody(Space space, Matrix shape, double level,
                const Tolerance& tol = {});

  Space space() const { return space_; }
  const Matrix& shape() const { return shape_; }
  double level() const { return level_; }
  int dim() const { return shape_.rows(); }

  /// Shape rescaled so the level equals `new_level` (same point set).
  EllipsoidBody with_level(double new_level) const;

  double volume() const;
  bool contains(const Vec& point) const;

 private:
  Space space_;
  Matrix shape_;
  double level_;
};

/// Axis-aligned box  Prod_i [-a_i, a_i].
struct BoxBody {
  Space space;
  Vec half_widths;

  double volume() const;
  bool contains(const Vec& point) const;
};

/// {u : sum_i w_i |u_i| <= level}; arises as the polar dual of a box.
struct CrossPolytopeBody {
  Space space;
  Vec weights;
  double level;

  double volume() const;
  bool contains(const Vec& point) const;
};

using Body = std::variant<EllipsoidBody, BoxBody, CrossPolytopeBody>;

int body_dim(const Body& b);
Space body_space(const Body& b);
double body_volume(const Body& b);
bool body_contains(const Body& b, const Vec& point);

/// hbar-polar dual. Ellipsoid {A, h} -> {A^{-1}, hbar^2/h}; box <-> cross
/// polytope. The space tag flips Position <-> Momentum; Phase bodies are
/// rejected.
Body polar_dual(const Body& body, double hbar, const Tolerance& tol = {});
EllipsoidBody polar_dual(const EllipsoidBody& body, double hbar,
                         const Tolerance& tol = {});

/// sup_{u in body} u . direction  (direction normalized internally).
double support_function(const Body& body, Vec direction);

/// Certificate for X^hbar subset-of P on a pair of ellipsoids. `lambda` holds
/// the eigenvalues of A*B (levels normalized to hbar) sorted descending;
/// the pair holds iff all are <= 1, and is saturated iff all equal 1. On
/// failure `witness` is a unit direction p/|p| with p on the boundary of
/// X^hbar but outside P.
struct DualPairReport {
  bool is_pair = false;
  bool is_saturated = false;
  Vec lambda;
  Vec witness;
};

DualPairReport is_quantum_pair(const EllipsoidBody& x, const EllipsoidBody& p,
                               double hbar, const Tolerance& tol = {});

/// A convex body inside the Lagrangian plane S . (model plane), stored as the
/// frame together with the model-plane coordinates.
struct FramedBody {
  SymplecticMatrix frame;
  EllipsoidBody model;
};

/// Polar duality between the transversal Lagrangian planes S.l_X and S.l_P:
/// the model body is dualized and re-attached to the same frame.
FramedBody lagrangian_polar_dual(const FramedBody& body, double hbar,
                                 const Tolerance& tol = {});

}  // namespace qpd
