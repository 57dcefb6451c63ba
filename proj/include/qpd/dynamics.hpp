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

#include <vector>

#include "qpd/capacity.hpp"
#include "qpd/gaussian.hpp"

namespace qpd {

/// Quadratic Hamiltonian H(z) = Hess z.z / 2 on R^{2n}.
class QuadHamiltonian {
 public:
  explicit QuadHamiltonian(Matrix hessian, const Tolerance& tol = {});
  const Matrix& hessian() const { return hess_; }
  int dof() const { return hess_.rows() / 2; }

 private:
  Matrix hess_;
};

/// Piecewise-constant Hamiltonian schedule.
struct Segment {
  QuadHamiltonian hamiltonian;
  double duration;
};
struct Schedule {
  std::vector<Segment> segments;
};

/// Linear Hamiltonian flow S_t = exp(t J Hess) for dz/dt = J Hess z,
/// certified symplectic. Computed with the exact matrix exponential, not a
/// time stepper, so the conservation checks stay sharp.
SymplecticMatrix flow(const QuadHamiltonian& h, double t, const Tolerance& tol = {});

/// Sigma_t = S_t Sigma S_t^T. Preservation of the quantum condition is
/// asserted when the input satisfies it.
CovState evolve_cov(const CovState& state, const QuadHamiltonian& h, double t,
                    const Tolerance& tol = {});

/// Time series of the projection volumes of the evolved covariance ellipsoid
/// together with the dual-pair certificate at each grid point. Volumes carry
/// an internal cross-check against the determinant identity
/// det(M/M_PP) = det M / det M_PP. Grid points are independent and evaluated
/// in parallel.
struct VolumePoint {
  double t = 0.0;
  double vol_x = 0.0;
  double vol_p = 0.0;
  DualPairReport pair;
};
std::vector<VolumePoint> projection_volume_series(const CovState& state,
                                                  const QuadHamiltonian& h,
                                                  const Vec& t_grid,
                                                  const Tolerance& tol = {});

/// Ordered product of segment flows (later segments act on the left).
SymplecticMatrix flow_schedule(const Schedule& schedule, const Tolerance& tol = {});

}  // namespace qpd
