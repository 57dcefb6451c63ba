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
#include <functional>
#include <optional>

#include "qpd/gaussian.hpp"
#include "qpd/polarity.hpp"

namespace qpd {

/// Membership view of a convex body for the Monte Carlo estimators: a
/// predicate plus an axis-aligned bounding box (and the exact volume when
/// one is available, for oracle comparisons).
struct BodyOracle {
  int dim = 0;
  std::function<bool(const Vec&)> contains;
  Vec bbox_half_widths;
  std::optional<double> exact_volume;
};

BodyOracle oracle_for(const Body& body);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long long hits = 0;
  long long samples = 0;
};

/// Hit-or-miss volume estimate over the bounding box. Deterministic per seed
/// regardless of thread count: sampling is split into fixed blocks with
/// per-block generators and integer hit counts. `mc_volume` runs the blocks
/// under OpenMP; `mc_volume_serial` is the reference implementation the
/// parallel kernel is tested against.
McEstimate mc_volume(const BodyOracle& body, std::uint64_t seed, long long samples);
McEstimate mc_volume_serial(const BodyOracle& body, std::uint64_t seed, long long samples);

/// upsilon = |X| |X^hbar| with the Kuperberg / conjectured / Blaschke-Santalo
/// bounds of its admissible range. Closed forms: every ellipsoid gives
/// (pi hbar)^n / Gamma(n/2+1)^2, every box gives (4 hbar)^n / n!; both are
/// verified against the product of the two body volumes.
struct MahlerReport {
  double upsilon = 0.0;
  double lower_kuperberg = 0.0;
  double lower_conjecture = 0.0;
  double upper_santalo = 0.0;
  bool within_bounds = false;
};
MahlerReport mahler_volume(const Body& body, double hbar, const Tolerance& tol = {});

/// Classification of the Gaussian-envelope constraint |psi| <= C e^{-Ax.x/2h},
/// |FT psi| <= C e^{-Bp.p/2h} by the spectrum of A*B: impossible above 1,
/// uniquely Gaussian at 1, an infinite-dimensional family below 1.
enum class HardyCase { NoFunction, UniqueGaussian, InfiniteFamily };
const char* to_string(HardyCase c);

struct HardyVerdict {
  Vec lambda;  // eigenvalues of A*B, descending
  HardyCase kind = HardyCase::NoFunction;
  double capacity = 0.0;  // capacity of {A x.x + B p.p <= hbar}
  std::optional<GaussianPure> unique_state;
  std::optional<std::string> family_note;
};
HardyVerdict hardy_classify(const Matrix& a, const Matrix& b, double hbar,
                            const Tolerance& tol = {});

/// eps with eps^2 = Gaussian marginal mass outside the body. Diagonal
/// covariance over a box integrates in closed form per axis; everything else
/// goes through randomized Halton quadrature (deterministic per seed) with a
/// block-wise standard error.
struct ConcentrationEstimate {
  double eps = 0.0;
  double mass_inside = 0.0;
  double mass_std_error = 0.0;  // zero for the closed-form path
};
ConcentrationEstimate concentration(const CovState& state, const Body& body,
                                    Space side, std::uint64_t seed,
                                    long long samples = 1 << 18);
ConcentrationEstimate concentration_serial(const CovState& state, const Body& body,
                                           Space side, std::uint64_t seed,
                                           long long samples = 1 << 18);

/// |X||P| >= (2 pi hbar)^n (1 - eps_x - eps_p)^2, plus the concentration-sum
/// band available when P is the polar dual of X.
struct ConcentrationReport {
  double eps_x = 0.0;
  double eps_p = 0.0;
  double ds_lhs = 0.0;
  double ds_rhs = 0.0;
  bool vacuous = false;  // eps_x + eps_p >= 1: the bound carries no content
  bool holds = false;
  double band_lower = 0.0;
  double band_upper = 0.0;
  bool band_applicable = false;
};
ConcentrationReport donoho_stark_check(double eps_x, double eps_p, const Body& x,
                                       const Body& p, double hbar,
                                       const Tolerance& tol = {});

double ds_band_lower(int n);
double ds_band_upper(int n);

}  // namespace qpd
