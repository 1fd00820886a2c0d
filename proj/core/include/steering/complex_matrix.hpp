#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace steering {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major. The workhorse carrier for every
/// operator in the library; dimensions here never exceed ~100.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  const std::vector<Complex>& entries() const { return a_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool is_finite() const;
  bool is_square() const { return rows_ == cols_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> a_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// Max-abs entrywise distance.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian square matrix. Construction symmetrizes (M+M^dagger)/2 when the
/// input deviates from Hermiticity by at most `repair_tol` (max-abs entrywise)
/// and rejects anything worse, so every instance is exactly Hermitian as stored.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(ComplexMatrix m, double repair_tol = 1e-12);

  static HermitianOperator zero(std::size_t dim);
  static HermitianOperator identity(std::size_t dim);
  /// Rank-1 projector scaled by `weight`: weight * |v><v|.
  static HermitianOperator outer(const std::vector<Complex>& v, double weight = 1.0);

  std::size_t dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.frobenius_norm(); }

  HermitianOperator& operator+=(const HermitianOperator& o);
  HermitianOperator& operator-=(const HermitianOperator& o);
  HermitianOperator& operator*=(double s);

 private:
  struct unchecked_tag {};
  HermitianOperator(ComplexMatrix m, unchecked_tag) : m_(std::move(m)) {}

  friend HermitianOperator herm_unchecked(ComplexMatrix m);

  ComplexMatrix m_;
};

/// Entrywise Hermitian-preserving ops (exact in floating point).
HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b);
HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b);
HermitianOperator operator*(double s, HermitianOperator a);

/// Wraps a matrix that is Hermitian by construction, skipping the repair check.
HermitianOperator herm_unchecked(ComplexMatrix m);

/// Real trace inner product tr(A B) of two Hermitian operators.
double real_inner(const HermitianOperator& a, const HermitianOperator& b);

}  // namespace steering
