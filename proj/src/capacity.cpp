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

#include "qpd/capacity.hpp"

#include <cmath>
#include <sstream>

namespace qpd {

namespace {
constexpr double kPi = 3.141592653589793;
}

const char* to_string(CapacityFormula f) {
  return f == CapacityFormula::EllipsoidNuMax ? "ellipsoid-nu-max" : "product-scaling";
}

CapacityReport capacity_ellipsoid(const PhaseEllipsoid& omega, const Tolerance& tol) {
  CapacityReport rep;
  rep.formula = CapacityFormula::EllipsoidNuMax;
  rep.witnesses = symplectic_eigenvalues(omega.shape(), tol);
  rep.value = kPi * omega.hbar() / rep.witnesses.back();
  return rep;
}

CapacityThreshold capacity_quantum_threshold(const CovState& state,
                                             const Tolerance& tol) {
  const CapacityReport rep = capacity_ellipsoid(covariance_ellipsoid(state, tol), tol);
  CapacityThreshold out;
  out.capacity = rep.value;
  const double bar = kPi * state.hbar();
  out.quantum = out.capacity >= bar * (1.0 - tol.psd_slack);
  return out;
}

CapacityReport cmax_product(const EllipsoidBody& x, const EllipsoidBody& p,
                            double hbar, const Tolerance& tol) {
  if (x.space() != Space::Position || p.space() != Space::Momentum) {
    fail(Errc::space_mismatch, "expected a (position, momentum) product");
  }
  if (x.dim() != p.dim()) fail(Errc::dimension_mismatch, "product factors differ in dimension");
  const Matrix a = x.with_level(hbar).shape();
  const Matrix b = p.with_level(hbar).shape();
  const Matrix ah = sym_sqrt(a, tol);
  const SymEig e = eigen_sym(symmetrize(ah * b * ah));

  CapacityReport rep;
  rep.formula = CapacityFormula::ProductScaling;
  rep.witnesses = e.values;  // eigenvalues of A*B, ascending
  const double lam_min = e.values.front();
  if (!(lam_min > 0.0)) fail(Errc::not_positive_definite, "A*B has a nonpositive eigenvalue");
  rep.value = 4.0 * hbar / lam_min;

  // Independent route: the largest t with t*A^{-1} <= B under the Loewner
  // order, located by bisection on the semidefiniteness test alone.
  const Matrix ainv = symmetrize(inverse(a));
  double hi = 1.0;
  while (loewner_leq(hi * ainv, b, tol) && hi < 1e12) hi *= 2.0;
  double lo = 0.0;
  if (hi >= 1e12) fail(Errc::verification_failed, "rescaling search diverged");
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (loewner_leq(mid * ainv, b, tol)) lo = mid; else hi = mid;
  }
  const double t_star = 0.5 * (lo + hi);
  rep.scaling_factor = 1.0 / t_star;
  const double value2 = 4.0 * hbar * rep.scaling_factor;
  if (std::abs(value2 - rep.value) > 1e-9 * rep.value) {
    std::ostringstream os;
    os << "eigenvalue route " << rep.value << " vs rescaling route " << value2;
    fail(Errc::verification_failed, os.str());
  }
  return rep;
}

IsoperimetricReport isoperimetric_check(const PhaseEllipsoid& omega,
                                        const Tolerance& tol) {
  const int n = omega.dof();
  IsoperimetricReport rep;
  rep.lhs = capacity_ellipsoid(omega, tol).value;
  rep.volume = EllipsoidBody(Space::Phase, omega.shape(), omega.hbar(), tol).volume();
  rep.rhs = std::pow(std::tgamma(n + 1.0), 1.0 / n) * std::pow(rep.volume, 1.0 / n);
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-9);
  return rep;
}

IsoperimetricReport isoperimetric_check(const EllipsoidBody& x,
                                        const EllipsoidBody& p, double hbar,
                                        const Tolerance& tol) {
  const int n = x.dim();
  IsoperimetricReport rep;
  rep.lhs = cmax_product(x, p, hbar, tol).value;
  rep.volume = x.volume() * p.volume();
  rep.rhs = std::pow(std::tgamma(n + 1.0), 1.0 / n) * std::pow(rep.volume, 1.0 / n);
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-9);
  return rep;
}

}  // namespace qpd
