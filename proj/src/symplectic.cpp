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

#include "qpd/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qpd/rng.hpp"

namespace qpd {

Matrix standard_J_matrix(int n) {
  if (n < 1) fail(Errc::invalid_argument, "n must be >= 1");
  Matrix j(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    j(i, n + i) = 1.0;
    j(n + i, i) = -1.0;
  }
  return j;
}

SymplecticMatrix SymplecticMatrix::certify(Matrix s, const Tolerance& tol) {
  if (!s.square() || s.rows() % 2 != 0 || s.rows() == 0) {
    fail(Errc::dimension_mismatch, "symplectic matrices have even dimension");
  }
  const int n = s.rows() / 2;
  const Matrix j = standard_J_matrix(n);
  const double res = frobenius_norm(s.transposed() * j * s - j);
  const double nrm2 = frobenius_norm(s);
  const double bound = tol.rel_eq * std::max(1.0, nrm2 * nrm2);
  if (!(res <= bound)) {
    std::ostringstream os;
    os << "||S^T J S - J|| = " << res << " exceeds " << bound;
    fail(Errc::verification_failed, os.str());
  }
  const double det = determinant(s);
  if (!(std::abs(det - 1.0) <= 1e-6)) {
    std::ostringstream os;
    os << "det(S) = " << det << " is not +1";
    fail(Errc::verification_failed, os.str());
  }
  return SymplecticMatrix(std::move(s), n, res);
}

SymplecticMatrix SymplecticMatrix::inverse(const Tolerance& tol) const {
  const Matrix j = standard_J_matrix(n_);
  return certify(-1.0 * (j * s_.transposed() * j), tol);
}

SymplecticMatrix SymplecticMatrix::transposed(const Tolerance& tol) const {
  return certify(s_.transposed(), tol);
}

SymplecticMatrix operator*(const SymplecticMatrix& a, const SymplecticMatrix& b) {
  if (a.dof() != b.dof()) fail(Errc::dimension_mismatch, "symplectic product");
  return SymplecticMatrix::certify(a.matrix() * b.matrix());
}

SymplecticMatrix standard_J(int n) {
  return SymplecticMatrix::certify(standard_J_matrix(n));
}

SymplecticMatrix generator_matrix(const Generator& g, int n, const Tolerance& tol) {
  if (std::holds_alternative<ShearGen>(g)) {
    const Matrix p = require_symmetric(std::get<ShearGen>(g).p, tol);
    if (p.rows() != n) fail(Errc::dimension_mismatch, "shear block size");
    Matrix s = Matrix::identity(2 * n);
    s.set_block(n, 0, p);
    return SymplecticMatrix::certify(std::move(s), tol);
  }
  if (std::holds_alternative<DilationGen>(g)) {
    const Matrix& l = std::get<DilationGen>(g).l;
    if (!l.square() || l.rows() != n) fail(Errc::dimension_mismatch, "dilation block size");
    const double det = determinant(l);
    if (std::abs(det) < 1e-12) {
      std::ostringstream os;
      os << "SingularL: det(L) = " << det;
      throw Error(Errc::singular_matrix, os.str());
    }
    Matrix s(2 * n, 2 * n);
    s.set_block(0, 0, inverse(l));
    s.set_block(n, n, l.transposed());
    return SymplecticMatrix::certify(std::move(s), tol);
  }
  return standard_J(n);
}

Vec symplectic_eigenvalues(const Matrix& spd, const Tolerance& tol) {
  if (!spd.square() || spd.rows() % 2 != 0) {
    fail(Errc::dimension_odd, "symplectic eigenvalues need even dimension");
  }
  const Matrix m = require_symmetric(spd, tol);
  require_pd(m, tol, "matrix");
  const int n = m.rows() / 2;
  const Matrix half = sym_sqrt(m, tol);
  const Matrix k = half * standard_J_matrix(n) * half;
  // -K^2 = K^T K is SPD with eigenvalues nu_j^2, each of multiplicity two.
  const SymEig e = eigen_sym(-1.0 * (k * k));
  Vec nu(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double a = std::sqrt(std::max(0.0, e.values[2 * j]));
    const double b = std::sqrt(std::max(0.0, e.values[2 * j + 1]));
    nu[j] = 0.5 * (a + b);
  }
  return nu;
}

namespace {

Vec column(const Matrix& m, int j) {
  Vec v(static_cast<size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) v[i] = m(i, j);
  return v;
}

void subtract_projections(Vec& v, const std::vector<Vec>& basis) {
  for (const Vec& b : basis) {
    const double c = dot(b, v);
    for (size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
  }
}

void fix_sign(Vec& v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  for (double x : v) {
    if (std::abs(x) > 1e-8 * scale) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

}  // namespace

WilliamsonDecomposition williamson(const Matrix& spd, const Tolerance& tol) {
  if (!spd.square() || spd.rows() % 2 != 0) {
    fail(Errc::dimension_odd, "williamson needs even dimension");
  }
  const Matrix sigma = require_symmetric(spd, tol);
  require_pd(sigma, tol, "covariance matrix");
  const int dim = sigma.rows();
  const int n = dim / 2;
  const Matrix j = standard_J_matrix(n);
  const Matrix half = sym_sqrt(sigma, tol);
  const Matrix k = half * j * half;  // skew-symmetric
  const SymEig e = eigen_sym(-1.0 * (k * k));

  // Pair the eigenvectors of -K^2 inside each (numerically) degenerate group:
  // K rotates each invariant plane, so w = -K u / nu completes u to a pair.
  std::vector<Vec> us, ws;
  Vec nus;
  std::vector<Vec> chosen;
  int i = 0;
  while (i < dim) {
    int g = i + 1;
    const double scale = std::max(e.values[i], 1e-300);
    while (g < dim && e.values[g] - e.values[i] <= 1e-6 * scale) ++g;
    if ((g - i) % 2 == 1 && g < dim) ++g;
    const int pairs = (g - i) / 2;
    std::vector<int> cols(static_cast<size_t>(g - i));
    for (int c = 0; c < g - i; ++c) cols[c] = i + c;
    for (int p = 0; p < pairs; ++p) {
      // Deterministic candidate choice: the group column with the largest
      // residual after projecting out the pairs already extracted.
      Vec best;
      double best_norm = -1.0;
      for (int c : cols) {
        Vec cand = column(e.vectors, c);
        subtract_projections(cand, chosen);
        const double len = norm(cand);
        if (len > best_norm + 1e-12) {
          best_norm = len;
          best = std::move(cand);
        }
      }
      if (best_norm < 1e-6) {
        fail(Errc::verification_failed, "williamson pairing lost rank");
      }
      Vec u = (1.0 / best_norm) * best;
      fix_sign(u);
      Vec ku = k * u;
      const double nu = norm(ku);
      if (nu < 1e-300) fail(Errc::verification_failed, "vanishing symplectic eigenvalue");
      Vec w = (-1.0 / nu) * ku;
      subtract_projections(w, chosen);
      const double wips = dot(w, u);
      for (size_t t = 0; t < w.size(); ++t) w[t] -= wips * u[t];
      const double wl = norm(w);
      if (wl < 1e-6) fail(Errc::verification_failed, "williamson pairing degenerate");
      w = (1.0 / wl) * w;
      chosen.push_back(u);
      chosen.push_back(w);
      us.push_back(std::move(u));
      ws.push_back(std::move(w));
      nus.push_back(nu);
    }
    i = g;
  }

  // Stable ascending order of the pairs.
  std::vector<int> order(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) order[t] = t;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return nus[a] < nus[b]; });

  Matrix o(dim, dim);
  Vec nu_sorted(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) {
    nu_sorted[t] = nus[order[t]];
    for (int r = 0; r < dim; ++r) {
      o(r, t) = us[order[t]][r];
      o(r, n + t) = ws[order[t]][r];
    }
  }

  Vec dhalf(static_cast<size_t>(dim));
  for (int t = 0; t < n; ++t) {
    dhalf[t] = std::sqrt(nu_sorted[t]);
    dhalf[n + t] = std::sqrt(nu_sorted[t]);
  }
  const Matrix s0 = Matrix::diag(dhalf) * o.transposed() * inverse(half);
  // s0 Sigma s0^T = D; convert to the Sigma = S^T D S convention.
  const Matrix s_mat = -1.0 * (j * s0 * j);
  SymplecticMatrix s = SymplecticMatrix::certify(s_mat, tol);

  Vec dfull(static_cast<size_t>(dim));
  for (int t = 0; t < n; ++t) {
    dfull[t] = nu_sorted[t];
    dfull[n + t] = nu_sorted[t];
  }
  const Matrix recon = s.matrix().transposed() * Matrix::diag(dfull) * s.matrix();
  if (!approx_equal(recon, sigma, std::max(tol.rel_eq, 1e-9))) {
    std::ostringstream os;
    os << "reconstruction residual " << frobenius_norm(recon - sigma) / frobenius_norm(sigma);
    fail(Errc::verification_failed, os.str());
  }
  return {std::move(s), std::move(nu_sorted)};
}

BalancedDiag balanced_diagonalize(const Matrix& a, const Matrix& b,
                                  const Tolerance& tol) {
  const Matrix sa = require_symmetric(a, tol);
  const Matrix sb = require_symmetric(b, tol);
  if (sa.rows() != sb.rows()) fail(Errc::dimension_mismatch, "balanced_diagonalize");
  require_pd(sa, tol, "A");
  require_pd(sb, tol, "B");
  const Matrix ah = sym_sqrt(sa, tol);
  const SymEig e = eigen_sym(symmetrize(ah * sb * ah));
  Vec lambda = e.values;  // eigenvalues of A*B, ascending, positive
  Vec quarter(lambda.size());
  for (size_t k = 0; k < lambda.size(); ++k) {
    if (lambda[k] <= 0.0) fail(Errc::not_positive_definite, "A*B has a nonpositive eigenvalue");
    quarter[k] = std::pow(lambda[k], 0.25);
  }
  const Matrix l = inverse(ah) * e.vectors * Matrix::diag(quarter);

  Vec sqrt_lambda(lambda.size());
  for (size_t k = 0; k < lambda.size(); ++k) sqrt_lambda[k] = std::sqrt(lambda[k]);
  const Matrix target = Matrix::diag(sqrt_lambda);
  const Matrix linv = inverse(l);
  const double r1 = frobenius_norm(l.transposed() * sa * l - target);
  const double r2 = frobenius_norm(linv * sb * linv.transposed() - target);
  const double scale = std::max(frobenius_norm(target), 1e-300);
  if (r1 > 1e-8 * scale || r2 > 1e-8 * scale) {
    std::ostringstream os;
    os << "balanced diagonalization residuals " << r1 / scale << ", " << r2 / scale;
    fail(Errc::verification_failed, os.str());
  }
  return {l, std::move(lambda)};
}

BlockSymplecticReport block_symplectic_check(const Matrix& m, const Tolerance& tol) {
  BlockSymplecticReport rep;
  if (!m.square() || m.rows() % 2 != 0) return rep;
  const int n = m.rows() / 2;
  const Matrix xx = m.block(0, 0, n, n);
  const Matrix xp = m.block(0, n, n, n);
  const Matrix px = m.block(n, 0, n, n);
  const Matrix pp = m.block(n, n, n, n);
  rep.res_identity =
      frobenius_norm(xx.transposed() * pp - px.transposed() * xp - Matrix::identity(n));
  const Matrix s1 = xx.transposed() * px;
  const Matrix s2 = xp.transposed() * pp;
  rep.res_sym_xx_px = frobenius_norm(s1 - s1.transposed());
  rep.res_sym_xp_pp = frobenius_norm(s2 - s2.transposed());
  const Matrix j = standard_J_matrix(n);
  rep.res_stjs = frobenius_norm(m.transposed() * j * m - j);
  const double nrm = frobenius_norm(m);
  const double bound = tol.rel_eq * std::max(1.0, nrm * nrm);
  rep.ok = rep.res_identity <= bound && rep.res_sym_xx_px <= bound &&
           rep.res_sym_xp_pp <= bound;
  return rep;
}

SymplecticMatrix random_symplectic(std::uint64_t seed, int n, double spread,
                                   const Tolerance& tol) {
  if (spread < 0.0) fail(Errc::invalid_argument, "spread must be >= 0");
  if (spread == 0.0) return SymplecticMatrix::certify(Matrix::identity(2 * n), tol);
  Rng rng(seed);
  Matrix s = Matrix::identity(2 * n);
  const int factors = rng.uniform_int(3, 8);
  for (int f = 0; f < factors; ++f) {
    const int kind = rng.uniform_int(0, 2);
    Generator g;
    if (kind == 0) {
      g = ShearGen{spread * rng.symmetric(n)};
    } else if (kind == 1) {
      Matrix l = Matrix::identity(n);
      for (int attempt = 0; attempt < 32; ++attempt) {
        l = Matrix::identity(n) + 0.5 * spread * rng.matrix(n, n);
        if (std::abs(determinant(l)) >= 0.2) break;
      }
      if (std::abs(determinant(l)) < 0.2) l = (1.0 + 0.5 * spread) * Matrix::identity(n);
      g = DilationGen{std::move(l)};
    } else {
      g = FourierGen{};
    }
    s = generator_matrix(g, n, tol).matrix() * s;
  }
  return SymplecticMatrix::certify(std::move(s), tol);
}

}  // namespace qpd
