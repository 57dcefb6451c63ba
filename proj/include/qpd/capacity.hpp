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
#include "qpd/polarity.hpp"

namespace qpd {

enum class CapacityFormula { EllipsoidNuMax, ProductScaling };

const char* to_string(CapacityFormula f);

/// A symplectic capacity value with the route that produced it and the
/// spectral witnesses (symplectic eigenvalues, or the eigenvalues of A*B for
/// product bodies).
struct CapacityReport {
  double value = 0.0;
  CapacityFormula formula = CapacityFormula::EllipsoidNuMax;
  Vec witnesses;
  /// Product route only: the rescaling factor found by the independent
  /// Loewner bisection; value = 4*hbar*scaling_factor.
  double scaling_factor = 0.0;
};

/// All symplectic capacities agree on ellipsoids:
/// c({M z.z <= hbar}) = pi*hbar / nu_max(M).
CapacityReport capacity_ellipsoid(const PhaseEllipsoid& omega,
                                  const Tolerance& tol = {});

/// Capacity of the covariance ellipsoid, and the threshold test
/// c >= pi*hbar, which must agree with the nu_min >= hbar/2 verdict.
struct CapacityThreshold {
  double capacity = 0.0;
  bool quantum = false;
};
CapacityThreshold capacity_quantum_threshold(const CovState& state,
                                             const Tolerance& tol = {});

/// Cylindrical capacity of the product X x P of an ellipsoid pair with
/// AB <= I: c_max = 4*hbar*max_j(1/lambda_j), lambda_j = eig(A B). The value
/// is recomputed through an independent Loewner bisection for the rescaling
/// factor; disagreement between the two routes is a hard error.
CapacityReport cmax_product(const EllipsoidBody& x, const EllipsoidBody& p,
                            double hbar, const Tolerance& tol = {});

/// Symplectic isoperimetric inequality c(K) <= (n!)^{1/n} |K|^{1/n}:
/// a theorem for ellipsoids, evaluated as a conjectured bound for products.
struct IsoperimetricReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double volume = 0.0;
  bool holds = false;
};
IsoperimetricReport isoperimetric_check(const PhaseEllipsoid& omega,
                                        const Tolerance& tol = {});
IsoperimetricReport isoperimetric_check(const EllipsoidBody& x,
                                        const EllipsoidBody& p, double hbar,
                                        const Tolerance& tol = {});

}  // namespace qpd
