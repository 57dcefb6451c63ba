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

#include "qpd/bounds.hpp"

#include <cmath>
#include <sstream>

#include "qpd/capacity.hpp"
#include "qpd/rng.hpp"

namespace qpd {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr long long kBlock = 65536;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t block) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (block + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

long long count_hits_in_block(const BodyOracle& body, std::uint64_t seed,
                              std::uint64_t block, long long count) {
  Rng rng(mix_seed(seed, block));
  Vec point(static_cast<size_t>(body.dim));
  long long hits = 0;
  for (long long i = 0; i < count; ++i) {
    for (int d = 0; d < body.dim; ++d) {
      point[d] = rng.uniform(-body.bbox_half_widths[d], body.bbox_half_widths[d]);
    }
    if (body.contains(point)) ++hits;
  }
  return hits;
}

McEstimate finish_estimate(const BodyOracle& body, long long hits, long long samples) {
  double box_volume = 1.0;
  for (double w : body.bbox_half_widths) box_volume *= 2.0 * w;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  McEstimate est;
  est.hits = hits;
  est.samples = samples;
  est.estimate = box_volume * p;
  est.std_error = box_volume * std::sqrt(std::max(0.0, p * (1.0 - p)) / samples);
  return est;
}

void validate_mc_input(const BodyOracle& body, long long samples) {
  if (body.dim < 1 || static_cast<int>(body.bbox_half_widths.size()) != body.dim) {
    fail(Errc::invalid_argument, "oracle bounding box dimension");
  }
  for (double w : body.bbox_half_widths) {
    if (!(w > 0.0) || !std::isfinite(w)) fail(Errc::degenerate_box, "bounding box half-width");
  }
  if (samples < 10000) fail(Errc::invalid_argument, "at least 1e4 samples required");

  // Spot-check that the box actually contains the body: no point of an
  // inflated shell around the box may test as a member.
  Rng probe(0x5bd1e995u);
  Vec point(static_cast<size_t>(body.dim));
  for (int trial = 0; trial < 256; ++trial) {
    bool outside = false;
    for (int d = 0; d < body.dim; ++d) {
      const double w = body.bbox_half_widths[d];
      point[d] = probe.uniform(-1.5 * w, 1.5 * w);
      outside = outside || std::abs(point[d]) > w;
    }
    if (outside && body.contains(point)) {
      fail(Errc::degenerate_box, "bounding box does not contain the body");
    }
  }
}

// First eight primes: enough Halton bases for every body dimension used here.
constexpr int kHaltonBases[8] = {2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(int base, long long index) {
  double result = 0.0;
  double inv = 1.0 / base;
  double scale = inv;
  while (index > 0) {
    result += (index % base) * scale;
    index /= base;
    scale *= inv;
  }
  return result;
}

struct BlockMean {
  double mean = 0.0;
};

// One randomized-shift Halton block of the masked Gaussian integrand.
BlockMean concentration_block(const Matrix& cov_inv, double norm_const,
                              const Body& body, const BodyOracle& oracle,
                              std::uint64_t seed, int block, long long count) {
  const int d = oracle.dim;
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(block)));
  Vec shift(static_cast<size_t>(d));
  for (int k = 0; k < d; ++k) shift[k] = rng.uniform();
  double box_volume = 1.0;
  for (double w : oracle.bbox_half_widths) box_volume *= 2.0 * w;
  Vec point(static_cast<size_t>(d));
  double sum = 0.0;
  for (long long i = 0; i < count; ++i) {
    for (int k = 0; k < d; ++k) {
      double u = radical_inverse(kHaltonBases[k], i + 1) + shift[k];
      u -= std::floor(u);
      point[k] = (2.0 * u - 1.0) * oracle.bbox_half_widths[k];
    }
    if (!body_contains(body, point)) continue;
    sum += norm_const * std::exp(-0.5 * quad_form(cov_inv, point));
  }
  return {box_volume * sum / static_cast<double>(count)};
}

double erf_mass_inside_box(const Matrix& cov, const BoxBody& box) {
  double mass = 1.0;
  for (size_t i = 0; i < box.half_widths.size(); ++i) {
    const double s = std::sqrt(cov(static_cast<int>(i), static_cast<int>(i)));
    mass *= std::erf(box.half_widths[i] / (s * std::sqrt(2.0)));
  }
  return mass;
}

bool is_diagonal(const Matrix& m) {
  double off = 0.0, diag = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    diag = std::max(diag, std::abs(m(i, i)));
    for (int j = 0; j < m.cols(); ++j) {
      if (i != j) off = std::max(off, std::abs(m(i, j)));
    }
  }
  return off <= 1e-12 * std::max(diag, 1e-300);
}

ConcentrationEstimate concentration_impl(const CovState& state, const Body& body,
                                         Space side, std::uint64_t seed,
                                         long long samples, bool parallel) {
  if (side != Space::Position && side != Space::Momentum) {
    fail(Errc::space_mismatch, "concentration side is position or momentum");
  }
  if (body_space(body) != side) {
    fail(Errc::space_mismatch, "body lives in the wrong space for this side");
  }
  const int n = state.dof();
  if (body_dim(body) != n) fail(Errc::dimension_mismatch, "body vs state dimension");
  if (n > 8) fail(Errc::invalid_argument, "quadrature bases cover dimensions up to 8");
  const Matrix cov = side == Space::Position ? state.block_xx() : state.block_pp();

  ConcentrationEstimate est;
  if (std::holds_alternative<BoxBody>(body) && is_diagonal(cov)) {
    est.mass_inside = erf_mass_inside_box(cov, std::get<BoxBody>(body));
    est.mass_std_error = 0.0;
  } else {
    const BodyOracle oracle = oracle_for(body);
    const Matrix cov_inv = inverse(cov);
    const double norm_const =
        std::pow(2.0 * kPi, -0.5 * n) / std::sqrt(determinant(cov));
    const int blocks = 16;
    const long long per_block = std::max<long long>(1, samples / blocks);
    std::vector<BlockMean> means(blocks);
    if (parallel) {
#pragma omp parallel for schedule(static)
      for (int b = 0; b < blocks; ++b) {
        means[b] = concentration_block(cov_inv, norm_const, body, oracle, seed, b, per_block);
      }
    } else {
      for (int b = 0; b < blocks; ++b) {
        means[b] = concentration_block(cov_inv, norm_const, body, oracle, seed, b, per_block);
      }
    }
    double mean = 0.0;
    for (const auto& m : means) mean += m.mean;
    mean /= blocks;
    double var = 0.0;
    for (const auto& m : means) var += (m.mean - mean) * (m.mean - mean);
    var /= (blocks - 1);
    est.mass_inside = mean;
    est.mass_std_error = std::sqrt(var / blocks);
  }
  est.eps = std::sqrt(std::max(0.0, 1.0 - est.mass_inside));
  return est;
}

}  // namespace

BodyOracle oracle_for(const Body& body) {
  BodyOracle oracle;
  oracle.dim = body_dim(body);
  oracle.exact_volume = body_volume(body);
  oracle.contains = [body](const Vec& point) { return body_contains(body, point); };
  if (std::holds_alternative<EllipsoidBody>(body)) {
    const auto& e = std::get<EllipsoidBody>(body);
    const Matrix inv_shape = inverse(e.shape());
    oracle.bbox_half_widths.resize(static_cast<size_t>(oracle.dim));
    for (int i = 0; i < oracle.dim; ++i) {
      oracle.bbox_half_widths[i] = std::sqrt(e.level() * inv_shape(i, i));
    }
  } else if (std::holds_alternative<BoxBody>(body)) {
    oracle.bbox_half_widths = std::get<BoxBody>(body).half_widths;
  } else {
    const auto& cp = std::get<CrossPolytopeBody>(body);
    oracle.bbox_half_widths.resize(cp.weights.size());
    for (size_t i = 0; i < cp.weights.size(); ++i) {
      oracle.bbox_half_widths[i] = cp.level / cp.weights[i];
    }
  }
  return oracle;
}

McEstimate mc_volume(const BodyOracle& body, std::uint64_t seed, long long samples) {
  validate_mc_input(body, samples);
  const long long blocks = (samples + kBlock - 1) / kBlock;
  std::vector<long long> hits(static_cast<size_t>(blocks), 0);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < blocks; ++b) {
    const long long count = std::min(kBlock, samples - b * kBlock);
    hits[static_cast<size_t>(b)] =
        count_hits_in_block(body, seed, static_cast<std::uint64_t>(b), count);
  }
  long long total = 0;
  for (long long h : hits) total += h;
  return finish_estimate(body, total, samples);
}

McEstimate mc_volume_serial(const BodyOracle& body, std::uint64_t seed, long long samples) {
  validate_mc_input(body, samples);
  const long long blocks = (samples + kBlock - 1) / kBlock;
  long long total = 0;
  for (long long b = 0; b < blocks; ++b) {
    const long long count = std::min(kBlock, samples - b * kBlock);
    total += count_hits_in_block(body, seed, static_cast<std::uint64_t>(b), count);
  }
  return finish_estimate(body, total, samples);
}

MahlerReport mahler_volume(const Body& body, double hbar, const Tolerance& tol) {
  if (!(hbar > 0.0)) fail(Errc::invalid_argument, "hbar must be positive");
  const int n = body_dim(body);
  const Body dual = polar_dual(body, hbar, tol);
  MahlerReport rep;
  rep.upsilon = body_volume(body) * body_volume(dual);

  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  rep.lower_kuperberg = std::pow(kPi * hbar, n) / (std::pow(4.0, n) * factorial);
  rep.lower_conjecture = std::pow(4.0 * hbar, n) / factorial;
  const double gamma_half = std::tgamma(0.5 * n + 1.0);
  rep.upper_santalo = std::pow(kPi * hbar, n) / (gamma_half * gamma_half);
  if (!(rep.lower_kuperberg <= rep.lower_conjecture * (1.0 + 1e-12)) ||
      !(rep.lower_conjecture <= rep.upper_santalo * (1.0 + 1e-12))) {
    fail(Errc::verification_failed, "bound chain ordering violated");
  }

  // The closed forms are shape-independent; enforce that the computed product
  // agrees with the appropriate one.
  const double reference =
      std::holds_alternative<EllipsoidBody>(body) ? rep.upper_santalo : rep.lower_conjecture;
  if (std::abs(rep.upsilon - reference) > 1e-8 * reference) {
    std::ostringstream os;
    os << "volume product " << rep.upsilon << " deviates from the closed form " << reference;
    fail(Errc::verification_failed, os.str());
  }

  rep.within_bounds = rep.upsilon >= rep.lower_kuperberg * (1.0 - 1e-9) &&
                      rep.upsilon <= rep.upper_santalo * (1.0 + 1e-9);
  return rep;
}

const char* to_string(HardyCase c) {
  switch (c) {
    case HardyCase::NoFunction: return "no-function";
    case HardyCase::UniqueGaussian: return "unique-gaussian";
    case HardyCase::InfiniteFamily: return "infinite-family";
  }
  return "?";
}

HardyVerdict hardy_classify(const Matrix& a, const Matrix& b, double hbar,
                            const Tolerance& tol) {
  const Matrix sa = require_symmetric(a, tol);
  const Matrix sb = require_symmetric(b, tol);
  if (sa.rows() != sb.rows()) fail(Errc::dimension_mismatch, "envelope shapes");
  require_pd(sa, tol, "A");
  require_pd(sb, tol, "B");
  const int n = sa.rows();
  const Matrix ah = sym_sqrt(sa, tol);
  const SymEig e = eigen_sym(symmetrize(ah * sb * ah));

  HardyVerdict verdict;
  verdict.lambda.assign(e.values.rbegin(), e.values.rend());
  const double lam_max = verdict.lambda.front();
  bool all_one = true;
  for (double lam : verdict.lambda) {
    if (std::abs(lam - 1.0) > tol.rel_eq) all_one = false;
  }
  if (lam_max > 1.0 + tol.psd_slack * std::max(1.0, lam_max)) {
    verdict.kind = HardyCase::NoFunction;
  } else if (all_one) {
    verdict.kind = HardyCase::UniqueGaussian;
    verdict.unique_state = make_gaussian_pure(hbar, sa, Matrix::zero(n, n), tol);
  } else {
    verdict.kind = HardyCase::InfiniteFamily;
    verdict.family_note =
        "the admissible functions span an infinite-dimensional space "
        "(rescaled Hermite family)";
  }
  verdict.capacity = kPi * hbar / std::sqrt(lam_max);

  // Independent route: the capacity of the block-diagonal phase ellipsoid.
  Matrix mab(2 * n, 2 * n);
  mab.set_block(0, 0, sa);
  mab.set_block(n, n, sb);
  const double c2 = capacity_ellipsoid(PhaseEllipsoid(hbar, mab, tol), tol).value;
  if (std::abs(c2 - verdict.capacity) > 1e-9 * verdict.capacity) {
    fail(Errc::verification_failed, "capacity routes disagree");
  }
  return verdict;
}

ConcentrationEstimate concentration(const CovState& state, const Body& body,
                                    Space side, std::uint64_t seed, long long samples) {
  return concentration_impl(state, body, side, seed, samples, /*parallel=*/true);
}

ConcentrationEstimate concentration_serial(const CovState& state, const Body& body,
                                           Space side, std::uint64_t seed,
                                           long long samples) {
  return concentration_impl(state, body, side, seed, samples, /*parallel=*/false);
}

double ds_band_lower(int n) {
  return 1.0 - 1.0 / (std::pow(2.0, 0.5 * n) * std::tgamma(0.5 * n + 1.0));
}

double ds_band_upper(int n) {
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  return 1.0 - 2.0 / (std::pow(2.0 * kPi, 0.5 * n) * std::sqrt(factorial));
}

namespace {

bool bodies_match(const Body& a, const Body& b, double rel) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<EllipsoidBody>(a)) {
    const auto& ea = std::get<EllipsoidBody>(a);
    const auto& eb = std::get<EllipsoidBody>(b);
    return approx_equal(ea.with_level(1.0).shape(), eb.with_level(1.0).shape(), rel);
  }
  if (std::holds_alternative<BoxBody>(a)) {
    const auto& ba = std::get<BoxBody>(a);
    const auto& bb = std::get<BoxBody>(b);
    for (size_t i = 0; i < ba.half_widths.size(); ++i) {
      if (std::abs(ba.half_widths[i] - bb.half_widths[i]) > rel * ba.half_widths[i]) return false;
    }
    return true;
  }
  const auto& ca = std::get<CrossPolytopeBody>(a);
  const auto& cb = std::get<CrossPolytopeBody>(b);
  for (size_t i = 0; i < ca.weights.size(); ++i) {
    if (std::abs(ca.weights[i] / ca.level - cb.weights[i] / cb.level) >
        rel * ca.weights[i] / ca.level) {
      return false;
    }
  }
  return true;
}

}  // namespace

ConcentrationReport donoho_stark_check(double eps_x, double eps_p, const Body& x,
                                       const Body& p, double hbar, const Tolerance& tol) {
  if (!(eps_x >= 0.0) || eps_x > 1.0 || !(eps_p >= 0.0) || eps_p > 1.0) {
    fail(Errc::invalid_argument, "concentrations must lie in [0, 1]");
  }
  if (body_space(x) != Space::Position || body_space(p) != Space::Momentum) {
    fail(Errc::space_mismatch, "expected a (position, momentum) pair of bodies");
  }
  if (body_dim(x) != body_dim(p)) fail(Errc::dimension_mismatch, "body dimensions differ");
  const int n = body_dim(x);

  ConcentrationReport rep;
  rep.eps_x = eps_x;
  rep.eps_p = eps_p;
  rep.ds_lhs = body_volume(x) * body_volume(p);
  const double defect = 1.0 - eps_x - eps_p;
  rep.ds_rhs = std::pow(2.0 * kPi * hbar, n) * defect * defect;
  rep.vacuous = defect <= 0.0;
  rep.holds = rep.vacuous || rep.ds_lhs >= rep.ds_rhs * (1.0 - 1e-12);
  rep.band_lower = ds_band_lower(n);
  rep.band_upper = ds_band_upper(n);
  rep.band_applicable = bodies_match(polar_dual(x, hbar, tol), p, 1e-9);
  return rep;
}

}  // namespace qpd
