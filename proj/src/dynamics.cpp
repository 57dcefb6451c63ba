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

#include "qpd/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace qpd {

QuadHamiltonian::QuadHamiltonian(Matrix hessian, const Tolerance& tol)
    : hess_(require_symmetric(hessian, tol)) {
  if (hess_.rows() % 2 != 0 || hess_.rows() == 0) {
    fail(Errc::dimension_odd, "a quadratic Hamiltonian lives on R^{2n}");
  }
}

SymplecticMatrix flow(const QuadHamiltonian& h, double t, const Tolerance& tol) {
  if (!std::isfinite(t)) fail(Errc::invalid_argument, "flow time must be finite");
  const int n = h.dof();
  const Matrix generator = standard_J_matrix(n) * h.hessian();
  Matrix st = mat_exp(generator, t);
  // Certification failure here would indicate exponential accuracy loss; the
  // residual is surfaced by the certify call.
  return SymplecticMatrix::certify(std::move(st), tol);
}

CovState evolve_cov(const CovState& state, const QuadHamiltonian& h, double t,
                    const Tolerance& tol) {
  if (h.dof() != state.dof()) fail(Errc::dimension_mismatch, "Hamiltonian vs state");
  const Matrix s = flow(h, t, tol).matrix();
  CovState out(state.hbar(), symmetrize(s * state.sigma() * s.transposed()), tol);
  // Exact-boundary states (nu_min = hbar/2) drift by the roundoff of the
  // exponential and the congruence; preservation is asserted against a margin
  // that absorbs that, far below the conservation tolerances.
  if (state.quantum() && out.nu_min() < 0.5 * state.hbar() * (1.0 - 1e-9)) {
    std::ostringstream os;
    os << "quantum condition lost along the flow: nu_min " << out.nu_min();
    fail(Errc::verification_failed, os.str());
  }
  return out;
}

std::vector<VolumePoint> projection_volume_series(const CovState& state,
                                                  const QuadHamiltonian& h,
                                                  const Vec& t_grid,
                                                  const Tolerance& tol) {
  for (size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i - 1] < t_grid[i])) {
      fail(Errc::invalid_argument, "t_grid must be strictly ascending");
    }
  }
  for (double t : t_grid) {
    if (!std::isfinite(t)) fail(Errc::invalid_argument, "t_grid entries must be finite");
  }
  const int n = state.dof();
  std::vector<VolumePoint> series(t_grid.size());
  bool failed = false;
  std::string message;

#pragma omp parallel for schedule(static)
  for (long long idx = 0; idx < static_cast<long long>(t_grid.size()); ++idx) {
    try {
      const double t = t_grid[static_cast<size_t>(idx)];
      const CovState st = evolve_cov(state, h, t, tol);
      const PhaseEllipsoid omega = covariance_ellipsoid(st, tol);
      const auto [ox, op] = project(omega, tol);
      VolumePoint point;
      point.t = t;
      point.vol_x = ox.volume();
      point.vol_p = op.volume();
      // Determinant identity route for the same volumes.
      const double det_m = determinant(omega.shape());
      const double det_pp = determinant(omega.shape().block(n, n, n, n));
      const double det_xx = determinant(omega.shape().block(0, 0, n, n));
      const double unit = std::pow(3.141592653589793 * omega.hbar(), 0.5 * n) /
                          std::tgamma(0.5 * n + 1.0);
      const double vol_x2 = unit / std::sqrt(det_m / det_pp);
      const double vol_p2 = unit / std::sqrt(det_m / det_xx);
      if (std::abs(vol_x2 - point.vol_x) > 1e-8 * point.vol_x ||
          std::abs(vol_p2 - point.vol_p) > 1e-8 * point.vol_p) {
        throw Error(Errc::verification_failed, "projection volume routes disagree");
      }
      Tolerance pair_tol = tol;
      pair_tol.psd_slack = std::max(tol.psd_slack, 1e-9);
      point.pair = is_quantum_pair(ox, op, st.hbar(), pair_tol);
      series[static_cast<size_t>(idx)] = std::move(point);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        message = e.what();
      }
    }
  }
  if (failed) throw Error(Errc::verification_failed, message);
  return series;
}

SymplecticMatrix flow_schedule(const Schedule& schedule, const Tolerance& tol) {
  if (schedule.segments.empty()) fail(Errc::invalid_argument, "empty schedule");
  int n = schedule.segments.front().hamiltonian.dof();
  Matrix product = Matrix::identity(2 * n);
  for (const Segment& seg : schedule.segments) {
    if (seg.hamiltonian.dof() != n) fail(Errc::dimension_mismatch, "schedule segments");
    if (!(seg.duration >= 0.0) || !std::isfinite(seg.duration)) {
      fail(Errc::invalid_argument, "segment durations must be finite and nonnegative");
    }
    product = flow(seg.hamiltonian, seg.duration, tol).matrix() * product;
  }
  return SymplecticMatrix::certify(std::move(product), tol);
}

}  // namespace qpd
