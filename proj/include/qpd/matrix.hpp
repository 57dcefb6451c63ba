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

#include <initializer_list>
#include <vector>

#include "qpd/error.hpp"

namespace qpd {

using Vec = std::vector<double>;

/// Numerical tolerances shared by every check in the library.
///
/// `psd_slack` and `strict_pd_floor` are relative: they are multiplied by the
/// spectral scale of the matrix under test before comparing eigenvalues.
struct Tolerance {
  double rel_eq = 1e-9;           // relative matrix equality
  double psd_slack = 1e-12;       // eigenvalue slack for "semidefinite"
  double strict_pd_floor = 1e-10; // minimum eigenvalue for "definite"

  void validate() const;
};

/// Dense real matrix, row-major. Dimensions in this library stay tiny
/// (at most 24x24), so everything is direct dense arithmetic.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int dim);
  static Matrix zero(int rows, int cols);
  static Matrix diag(const Vec& entries);
  static Matrix from_blocks(const Matrix& a, const Matrix& b, const Matrix& c,
                            const Matrix& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix transposed() const;
  Matrix block(int row0, int col0, int nrows, int ncols) const;
  void set_block(int row0, int col0, const Matrix& b);

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= -1.0; }

  const std::vector<double>& data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vec operator*(const Matrix& a, const Vec& v);

double dot(const Vec& a, const Vec& b);
double norm(const Vec& v);

/// m v . v without temporaries (hot path of the Monte Carlo estimators).
double quad_form(const Matrix& m, const Vec& v);
Vec operator*(double s, Vec v);
Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);

double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);

/// (M + M^T)/2.
Matrix symmetrize(const Matrix& m);
bool is_symmetric(const Matrix& m, const Tolerance& tol = {});

/// Symmetrizes `m`; asymmetry above rel_eq * norm is an error, below it is
/// silently repaired.
Matrix require_symmetric(const Matrix& m, const Tolerance& tol = {});

bool approx_equal(const Matrix& a, const Matrix& b, double rel);

// --- factorizations -------------------------------------------------------

struct LuFactors {
  Matrix lu;
  std::vector<int> perm;
  int sign = 1;
  bool singular = false;
};

LuFactors lu_factor(Matrix m);
Vec lu_solve(const LuFactors& f, Vec rhs);
double determinant(const Matrix& m);
Matrix inverse(const Matrix& m);

/// Symmetric eigendecomposition by cyclic Jacobi sweeps; deterministic for a
/// fixed input (fixed sweep order, no pivot randomization). Eigenvalues
/// ascending; `vectors` holds the matching eigenvectors as columns, each with
/// its first nonzero entry made positive.
struct SymEig {
  Vec values;
  Matrix vectors;
};
SymEig eigen_sym(const Matrix& symmetric);

double eigen_min(const Matrix& symmetric);
double spectral_norm_sym(const Matrix& symmetric);

/// Eigenvalue-based definiteness checks; failures report the offending
/// eigenvalue. The thresholds scale with the spectral norm.
bool is_psd(const Matrix& symmetric, const Tolerance& tol, double* min_eig = nullptr);
bool is_pd(const Matrix& symmetric, const Tolerance& tol, double* min_eig = nullptr);
void require_pd(const Matrix& symmetric, const Tolerance& tol, const char* what);

// --- the matcore operations ------------------------------------------------

enum class Block { Upper, Lower };

/// Schur complement of an even-dimensional symmetric matrix partitioned into
/// n x n quadrants: Lower inverts the bottom-right block and returns
/// M_XX - M_XP M_PP^{-1} M_PX; Upper inverts the top-left block.
Matrix schur_complement(const Matrix& m, Block block, const Tolerance& tol = {});

/// Loewner order test: A <= B iff min eig(B - A) >= -psd_slack * scale.
bool loewner_leq(const Matrix& a, const Matrix& b, const Tolerance& tol = {});

/// Principal square root of a symmetric PSD matrix (eigendecomposition).
Matrix sym_sqrt(const Matrix& psd, const Tolerance& tol = {});

/// Principal square root. Symmetric inputs go through sym_sqrt; non-symmetric
/// inputs must have a real nonnegative spectrum (the only case used downstream
/// is a similarity transform of a symmetric PSD matrix) and are handled by a
/// Denman-Beavers iteration whose result is verified against X*X = M.
Matrix principal_sqrt(const Matrix& m, const Tolerance& tol = {});

/// exp(t*M) by scaling and squaring; exp(0*M) is the identity exactly.
/// ||t*M|| > 1e3 is reported as overflow.
Matrix mat_exp(const Matrix& m, double t);

}  // namespace qpd
