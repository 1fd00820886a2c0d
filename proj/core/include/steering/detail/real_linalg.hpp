#pragma once

#include <cstddef>
#include <vector>

namespace steering {

/// Dense real matrix, row-major. Used by the interior-point core, which runs
/// entirely on real symmetric embeddings of Hermitian data.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  static RealMatrix identity(std::size_t dim);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  std::vector<double>& data() { return a_; }
  const std::vector<double>& data() const { return a_; }

  RealMatrix& operator+=(const RealMatrix& o);
  RealMatrix& operator-=(const RealMatrix& o);
  RealMatrix& operator*=(double s);

  double frobenius_norm() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

namespace detail {

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);
RealMatrix matmul_tn(const RealMatrix& a, const RealMatrix& b);  // a^T * b
RealMatrix matmul_nt(const RealMatrix& a, const RealMatrix& b);  // a * b^T

/// R^T A R for symmetric A.
RealMatrix congruence(const RealMatrix& a, const RealMatrix& r);

double inner(const RealMatrix& a, const RealMatrix& b);

void symmetrize(RealMatrix& a);

/// Lower Cholesky A = L L^T. Returns false when a pivot drops below
/// `pivot_tol` times the largest diagonal (not positive definite).
bool cholesky(const RealMatrix& a, RealMatrix& l, double pivot_tol = 1e-14);

/// Solve L X = B in place (L lower triangular).
void solve_lower_inplace(const RealMatrix& l, RealMatrix& b);
/// Solve L^T X = B in place.
void solve_lower_transposed_inplace(const RealMatrix& l, RealMatrix& b);
void solve_lower_inplace(const RealMatrix& l, std::vector<double>& b);
void solve_lower_transposed_inplace(const RealMatrix& l, std::vector<double>& b);

struct RealEig {
  std::vector<double> values;  // ascending
  RealMatrix vectors;          // columns
};

/// Cyclic Jacobi for real symmetric matrices.
RealEig sym_eig(const RealMatrix& a);

double sym_min_eig(const RealMatrix& a);

struct Svd {
  RealMatrix u;
  std::vector<double> sigma;
  RealMatrix v;
};

/// One-sided Jacobi SVD of a square nonsingular matrix: K = U diag(sigma) V^T.
/// Accurate for small singular values, which the NT scaling needs near
/// convergence.
Svd one_sided_svd(const RealMatrix& k);

}  // namespace detail
}  // namespace steering
