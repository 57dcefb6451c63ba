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

#include "qpd/polarity.hpp"

#include <cmath>
#include <sstream>

namespace qpd {

const char* to_string(Space s) {
  switch (s) {
    case Space::Position: return "position";
    case Space::Momentum: return "momentum";
    case Space::Phase: return "phase";
  }
  return "?";
}

Space dual_space(Space s) {
  if (s == Space::Position) return Space::Momentum;
  if (s == Space::Momentum) return Space::Position;
  fail(Errc::phase_space_body, "polar duality is defined between position and momentum spaces");
}

EllipsoidBody::EllipsoidBody(Space space, Matrix shape, double level,
                             const Tolerance& tol)
    : space_(space), shape_(require_symmetric(shape, tol)), level_(level) {
  if (!(level > 0.0)) fail(Errc::invalid_argument, "ellipsoid level must be positive");
  require_pd(shape_, tol, "ellipsoid shape");
}

EllipsoidBody EllipsoidBody::with_level(double new_level) const {
  if (!(new_level > 0.0)) fail(Errc::invalid_argument, "level must be positive");
  return EllipsoidBody(space_, (new_level / level_) * shape_, new_level);
}

double EllipsoidBody::volume() const {
  const int d = dim();
  return std::pow(3.141592653589793 * level_, 0.5 * d) /
         (std::tgamma(0.5 * d + 1.0) * std::sqrt(determinant(shape_)));
}

bool EllipsoidBody::contains(const Vec& point) const {
  return quad_form(shape_, point) <= level_;
}

double BoxBody::volume() const {
  double v = 1.0;
  for (double a : half_widths) v *= 2.0 * a;
  return v;
}

bool BoxBody::contains(const Vec& point) const {
  for (size_t i = 0; i < half_widths.size(); ++i) {
    if (std::abs(point[i]) > half_widths[i]) return false;
  }
  return true;
}

double CrossPolytopeBody::volume() const {
  // Union of 2^d orthants of the simplex with vertices (level/w_i) e_i.
  const int d = static_cast<int>(weights.size());
  double v = std::pow(2.0, d);
  for (int i = 1; i <= d; ++i) v /= i;
  for (double w : weights) v *= level / w;
  return v;
}

bool CrossPolytopeBody::contains(const Vec& point) const {
  double s = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) s += weights[i] * std::abs(point[i]);
  return s <= level;
}

int body_dim(const Body& b) {
  return std::visit(
      [](const auto& body) -> int {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, EllipsoidBody>) return body.dim();
        else if constexpr (std::is_same_v<T, BoxBody>) return static_cast<int>(body.half_widths.size());
        else return static_cast<int>(body.weights.size());
      },
      b);
}

Space body_space(const Body& b) {
  return std::visit(
      [](const auto& body) -> Space {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, EllipsoidBody>) return body.space();
        else return body.space;
      },
      b);
}

double body_volume(const Body& b) {
  return std::visit([](const auto& body) { return body.volume(); }, b);
}

bool body_contains(const Body& b, const Vec& point) {
  return std::visit([&](const auto& body) { return body.contains(point); }, b);
}

EllipsoidBody polar_dual(const EllipsoidBody& body, double hbar, const Tolerance& tol) {
  if (!(hbar > 0.0)) fail(Errc::invalid_argument, "hbar must be positive");
  const Space dual = dual_space(body.space());
  return EllipsoidBody(dual, symmetrize(inverse(body.shape())),
                       hbar * hbar / body.level(), tol);
}

Body polar_dual(const Body& body, double hbar, const Tolerance& tol) {
  if (!(hbar > 0.0)) fail(Errc::invalid_argument, "hbar must be positive");
  if (std::holds_alternative<EllipsoidBody>(body)) {
    return polar_dual(std::get<EllipsoidBody>(body), hbar, tol);
  }
  if (std::holds_alternative<BoxBody>(body)) {
    const BoxBody& box = std::get<BoxBody>(body);
    for (double a : box.half_widths) {
      if (!(a > 0.0)) fail(Errc::degenerate_box, "box half-widths must be positive");
    }
    return CrossPolytopeBody{dual_space(box.space), box.half_widths, hbar};
  }
  const CrossPolytopeBody& cp = std::get<CrossPolytopeBody>(body);
  Vec widths(cp.weights.size());
  for (size_t i = 0; i < cp.weights.size(); ++i) widths[i] = hbar * cp.weights[i] / cp.level;
  return BoxBody{dual_space(cp.space), std::move(widths)};
}

double support_function(const Body& body, Vec direction) {
  const double len = norm(direction);
  if (!(len > 0.0)) fail(Errc::invalid_argument, "support direction must be nonzero");
  for (double& x : direction) x /= len;
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, EllipsoidBody>) {
          const Matrix inv_shape = inverse(b.shape());
          return std::sqrt(b.level() * dot(direction, inv_shape * direction));
        } else if constexpr (std::is_same_v<T, BoxBody>) {
          double s = 0.0;
          for (size_t i = 0; i < b.half_widths.size(); ++i)
            s += b.half_widths[i] * std::abs(direction[i]);
          return s;
        } else {
          double best = 0.0;
          for (size_t i = 0; i < b.weights.size(); ++i)
            best = std::max(best, std::abs(direction[i]) / b.weights[i]);
          return b.level * best;
        }
      },
      body);
}

DualPairReport is_quantum_pair(const EllipsoidBody& x, const EllipsoidBody& p,
                               double hbar, const Tolerance& tol) {
  if (x.space() != Space::Position || p.space() != Space::Momentum) {
    fail(Errc::space_mismatch, "expected a (position, momentum) pair");
  }
  if (x.dim() != p.dim()) fail(Errc::dimension_mismatch, "pair dimensions differ");
  const Matrix a = x.with_level(hbar).shape();
  const Matrix b = p.with_level(hbar).shape();
  const Matrix ah = sym_sqrt(a, tol);
  const SymEig e = eigen_sym(symmetrize(ah * b * ah));

  DualPairReport rep;
  const int n = x.dim();
  rep.lambda.assign(e.values.rbegin(), e.values.rend());  // descending
  const double lam_max = rep.lambda.front();
  rep.is_pair = lam_max <= 1.0 + tol.psd_slack * std::max(1.0, lam_max);
  rep.is_saturated = rep.is_pair;
  for (double lam : rep.lambda) {
    if (std::abs(lam - 1.0) > tol.rel_eq) rep.is_saturated = false;
  }
  if (!rep.is_pair) {
    Vec top(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) top[i] = e.vectors(i, n - 1);
    Vec w = ah * top;
    const double len = norm(w);
    rep.witness = (1.0 / len) * w;
  }
  return rep;
}

FramedBody lagrangian_polar_dual(const FramedBody& body, double hbar,
                                 const Tolerance& tol) {
  if (body.model.space() == Space::Phase) {
    fail(Errc::phase_space_body, "the model body lives in a Lagrangian plane");
  }
  if (body.model.dim() != body.frame.dof()) {
    fail(Errc::dimension_mismatch, "frame and body dimensions differ");
  }
  return FramedBody{body.frame, polar_dual(body.model, hbar, tol)};
}

}  // namespace qpd
