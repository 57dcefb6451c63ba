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

#include "qpd/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>

namespace qpd {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::dimension_odd: return "DimensionOdd";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::not_positive_definite: return "NotPositiveDefinite";
    case Errc::negative_spectrum: return "NegativeSpectrum";
    case Errc::not_diagonalizable: return "NotDiagonalizable";
    case Errc::singular_matrix: return "SingularMatrix";
    case Errc::overflow: return "Overflow";
    case Errc::phase_space_body: return "PhaseSpaceBody";
    case Errc::space_mismatch: return "SpaceMismatch";
    case Errc::quantum_condition_violated: return "QuantumConditionViolated";
    case Errc::not_pure: return "NotPure";
    case Errc::residual_too_large: return "ResidualTooLarge";
    case Errc::sub_heisenberg: return "SubHeisenberg";
    case Errc::not_quantum_pair: return "NotQuantumPair";
    case Errc::unsupported_body: return "UnsupportedBody";
    case Errc::degenerate_box: return "DegenerateBox";
    case Errc::verification_failed: return "VerificationFailed";
  }
  return "UnknownError";
}

void Tolerance::validate() const {
  if (!(rel_eq > 0.0) || !(psd_slack > 0.0) || !(strict_pd_floor > 0.0)) {
    fail(Errc::invalid_argument, "tolerance fields must be strictly positive");
  }
}

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) fail(Errc::invalid_argument, "negative matrix dimension");
  data_.assign(static_cast<size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  data_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) {
      fail(Errc::invalid_argument, "ragged initializer for Matrix");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(int dim) {
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::zero(int rows, int cols) { return Matrix(rows, cols); }

Matrix Matrix::diag(const Vec& entries) {
  Matrix m(static_cast<int>(entries.size()), static_cast<int>(entries.size()));
  for (size_t i = 0; i < entries.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = entries[i];
  return m;
}

Matrix Matrix::from_blocks(const Matrix& a, const Matrix& b, const Matrix& c,
                           const Matrix& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() ||
      b.cols() != d.cols()) {
    fail(Errc::dimension_mismatch, "incompatible blocks");
  }
  Matrix m(a.rows() + c.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  m.set_block(a.rows(), 0, c);
  m.set_block(a.rows(), a.cols(), d);
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(int row0, int col0, int nrows, int ncols) const {
  if (row0 < 0 || col0 < 0 || row0 + nrows > rows_ || col0 + ncols > cols_) {
    fail(Errc::index_out_of_range, "block out of range");
  }
  Matrix b(nrows, ncols);
  for (int i = 0; i < nrows; ++i)
    for (int j = 0; j < ncols; ++j) b(i, j) = (*this)(row0 + i, col0 + j);
  return b;
}

void Matrix::set_block(int row0, int col0, const Matrix& b) {
  if (row0 + b.rows() > rows_ || col0 + b.cols() > cols_) {
    fail(Errc::index_out_of_range, "block out of range");
  }
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(row0 + i, col0 + j) = b(i, j);
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) fail(Errc::dimension_mismatch, "operator+");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) fail(Errc::dimension_mismatch, "operator-");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) fail(Errc::dimension_mismatch, "matrix product");
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vec operator*(const Matrix& a, const Vec& v) {
  if (a.cols() != static_cast<int>(v.size())) fail(Errc::dimension_mismatch, "matrix * vector");
  Vec out(static_cast<size_t>(a.rows()), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) fail(Errc::dimension_mismatch, "dot");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

double quad_form(const Matrix& m, const Vec& v) {
  if (m.cols() != static_cast<int>(v.size())) fail(Errc::dimension_mismatch, "quad_form");
  double q = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    double row = 0.0;
    for (int j = 0; j < m.cols(); ++j) row += m(i, j) * v[j];
    q += v[i] * row;
  }
  return q;
}

Vec operator*(double s, Vec v) {
  for (double& x : v) x *= s;
  return v;
}

Vec operator+(Vec a, const Vec& b) {
  if (a.size() != b.size()) fail(Errc::dimension_mismatch, "vector +");
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

Vec operator-(Vec a, const Vec& b) {
  if (a.size() != b.size()) fail(Errc::dimension_mismatch, "vector -");
  for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double x : m.data()) s += x * x;
  return std::sqrt(s);
}

double max_abs(const Matrix& m) {
  double s = 0.0;
  for (double x : m.data()) s = std::max(s, std::abs(x));
  return s;
}

Matrix symmetrize(const Matrix& m) {
  if (!m.square()) fail(Errc::dimension_mismatch, "symmetrize needs a square matrix");
  Matrix s(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

bool is_symmetric(const Matrix& m, const Tolerance& tol) {
  if (!m.square()) return false;
  double asym = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
  return asym <= tol.rel_eq * std::max(1e-300, max_abs(m));
}

Matrix require_symmetric(const Matrix& m, const Tolerance& tol) {
  if (!m.square()) fail(Errc::dimension_mismatch, "symmetric matrix expected");
  if (!is_symmetric(m, tol)) {
    std::ostringstream os;
    os << "asymmetry exceeds rel_eq * norm (rel_eq = " << tol.rel_eq << ")";
    fail(Errc::invalid_argument, os.str());
  }
  return symmetrize(m);
}

bool approx_equal(const Matrix& a, const Matrix& b, double rel) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double scale = std::max({frobenius_norm(a), frobenius_norm(b), 1e-300});
  return frobenius_norm(a - b) <= rel * scale;
}

LuFactors lu_factor(Matrix m) {
  if (!m.square()) fail(Errc::dimension_mismatch, "LU of non-square matrix");
  const int n = m.rows();
  LuFactors f;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), 0);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(m(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(m(i, k));
      if (v > best) { best = v; piv = i; }
    }
    if (best < 1e-300) {
      f.singular = true;
      f.lu = std::move(m);
      return f;
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    for (int i = k + 1; i < n; ++i) {
      m(i, k) /= m(k, k);
      const double lik = m(i, k);
      if (lik == 0.0) continue;
      for (int j = k + 1; j < n; ++j) m(i, j) -= lik * m(k, j);
    }
  }
  f.lu = std::move(m);
  return f;
}

Vec lu_solve(const LuFactors& f, Vec rhs) {
  if (f.singular) fail(Errc::singular_matrix, "solve with singular factorization");
  const int n = f.lu.rows();
  if (static_cast<int>(rhs.size()) != n) fail(Errc::dimension_mismatch, "lu_solve rhs");
  Vec x(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = rhs[f.perm[i]];
  for (int i = 1; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

double determinant(const Matrix& m) {
  LuFactors f = lu_factor(m);
  if (f.singular) return 0.0;
  double d = f.sign;
  for (int i = 0; i < m.rows(); ++i) d *= f.lu(i, i);
  return d;
}

Matrix inverse(const Matrix& m) {
  LuFactors f = lu_factor(m);
  if (f.singular) fail(Errc::singular_matrix, "inverse of singular matrix");
  const int n = m.rows();
  Matrix inv(n, n);
  Vec e(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    Vec col = lu_solve(f, e);
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    e[j] = 0.0;
  }
  return inv;
}

namespace {

double off_diag_sq(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return s;
}

// Deterministic sign convention: first entry whose magnitude clears a small
// relative threshold is made positive.
void fix_column_sign(Matrix& v, int col) {
  double scale = 0.0;
  for (int i = 0; i < v.rows(); ++i) scale = std::max(scale, std::abs(v(i, col)));
  if (scale == 0.0) return;
  for (int i = 0; i < v.rows(); ++i) {
    if (std::abs(v(i, col)) > 1e-8 * scale) {
      if (v(i, col) < 0.0) {
        for (int k = 0; k < v.rows(); ++k) v(k, col) = -v(k, col);
      }
      return;
    }
  }
}

}  // namespace

SymEig eigen_sym(const Matrix& symmetric) {
  Matrix a = symmetrize(symmetric);
  const int n = a.rows();
  Matrix v = Matrix::identity(n);
  if (n == 0) return {Vec{}, v};
  const double norm0 = frobenius_norm(a);
  const double stop = std::max(1e-300, 1e-28 * norm0 * norm0);
  for (int sweep = 0; sweep < 60 && off_diag_sq(a) > stop; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) < a(j, j); });
  SymEig out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    fix_column_sign(out.vectors, j);
  }
  return out;
}

double eigen_min(const Matrix& symmetric) {
  return eigen_sym(symmetric).values.front();
}

double spectral_norm_sym(const Matrix& symmetric) {
  const SymEig e = eigen_sym(symmetric);
  return std::max(std::abs(e.values.front()), std::abs(e.values.back()));
}

bool is_psd(const Matrix& symmetric, const Tolerance& tol, double* min_eig) {
  const SymEig e = eigen_sym(symmetric);
  const double scale = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
  if (min_eig) *min_eig = e.values.front();
  return e.values.front() >= -tol.psd_slack * std::max(scale, 1e-300);
}

bool is_pd(const Matrix& symmetric, const Tolerance& tol, double* min_eig) {
  const SymEig e = eigen_sym(symmetric);
  const double scale = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
  if (min_eig) *min_eig = e.values.front();
  return e.values.front() >= tol.strict_pd_floor * std::max(scale, 1e-300);
}

void require_pd(const Matrix& symmetric, const Tolerance& tol, const char* what) {
  double min_eig = 0.0;
  if (!is_pd(symmetric, tol, &min_eig)) {
    std::ostringstream os;
    os << what << " is not positive definite (min eigenvalue " << min_eig << ")";
    fail(Errc::not_positive_definite, os.str());
  }
}

Matrix schur_complement(const Matrix& m, Block block, const Tolerance& tol) {
  if (!m.square()) fail(Errc::dimension_mismatch, "schur_complement needs a square matrix");
  if (m.rows() % 2 != 0) fail(Errc::dimension_odd, "schur_complement needs even dimension");
  const int n = m.rows() / 2;
  const Matrix sym = require_symmetric(m, tol);
  const Matrix xx = sym.block(0, 0, n, n);
  const Matrix xp = sym.block(0, n, n, n);
  const Matrix px = sym.block(n, 0, n, n);
  const Matrix pp = sym.block(n, n, n, n);
  if (block == Block::Lower) {
    require_pd(pp, tol, "pivot block M_PP");
    return symmetrize(xx - xp * inverse(pp) * px);
  }
  require_pd(xx, tol, "pivot block M_XX");
  return symmetrize(pp - px * inverse(xx) * xp);
}

bool loewner_leq(const Matrix& a, const Matrix& b, const Tolerance& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(Errc::dimension_mismatch, "loewner_leq");
  }
  const SymEig e = eigen_sym(symmetrize(b - a));
  const double scale = std::max({spectral_norm_sym(symmetrize(a)),
                                 spectral_norm_sym(symmetrize(b)), 1e-300});
  return e.values.front() >= -tol.psd_slack * scale;
}

Matrix sym_sqrt(const Matrix& psd, const Tolerance& tol) {
  const Matrix s = require_symmetric(psd, tol);
  SymEig e = eigen_sym(s);
  const double scale = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
  Matrix root(s.rows(), s.rows());
  for (int k = 0; k < s.rows(); ++k) {
    double lam = e.values[k];
    if (lam < -tol.psd_slack * std::max(scale, 1e-300)) {
      std::ostringstream os;
      os << "eigenvalue " << lam << " below PSD slack";
      fail(Errc::negative_spectrum, os.str());
    }
    lam = std::max(lam, 0.0);
    const double r = std::sqrt(lam);
    for (int i = 0; i < s.rows(); ++i)
      for (int j = 0; j < s.rows(); ++j)
        root(i, j) += r * e.vectors(i, k) * e.vectors(j, k);
  }
  return symmetrize(root);
}

Matrix principal_sqrt(const Matrix& m, const Tolerance& tol) {
  if (!m.square()) fail(Errc::dimension_mismatch, "principal_sqrt");
  if (is_symmetric(m, tol)) return sym_sqrt(m, tol);

  // Denman-Beavers iteration; valid when the spectrum is real and positive,
  // which covers matrices similar to a symmetric PD matrix.
  const int n = m.rows();
  Matrix y = m;
  Matrix z = Matrix::identity(n);
  const double scale = std::max(frobenius_norm(m), 1e-300);
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    Matrix zinv, yinv;
    try {
      zinv = inverse(z);
      yinv = inverse(y);
    } catch (const Error&) {
      fail(Errc::negative_spectrum, "square-root iteration hit a singular iterate");
    }
    const Matrix yn = 0.5 * (y + zinv);
    const Matrix zn = 0.5 * (z + yinv);
    const double step = frobenius_norm(yn - y);
    y = yn;
    z = zn;
    if (step <= 1e-15 * std::max(frobenius_norm(y), 1.0)) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    fail(Errc::not_diagonalizable, "square-root iteration did not converge");
  }
  if (!approx_equal(y * y, m, std::max(tol.rel_eq, 1e-10))) {
    std::ostringstream os;
    os << "residual ||X*X - M|| = " << frobenius_norm(y * y - m) / scale;
    fail(Errc::not_diagonalizable, os.str());
  }
  return y;
}

Matrix mat_exp(const Matrix& m, double t) {
  if (!m.square()) fail(Errc::dimension_mismatch, "mat_exp");
  if (!std::isfinite(t)) fail(Errc::invalid_argument, "mat_exp with non-finite t");
  const int n = m.rows();
  if (t == 0.0) return Matrix::identity(n);
  Matrix a = t * m;
  const double nrm = frobenius_norm(a);
  if (!(nrm <= 1e3)) fail(Errc::overflow, "||t*M|| exceeds 1e3");
  int squarings = 0;
  while (frobenius_norm(a) > 0.5) {
    a *= 0.5;
    ++squarings;
  }
  Matrix sum = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = term * a;
    term *= 1.0 / k;
    sum += term;
    if (frobenius_norm(term) <= 1e-18 * std::max(1.0, frobenius_norm(sum))) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace qpd
