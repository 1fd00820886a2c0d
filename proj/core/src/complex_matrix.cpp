#include "steering/complex_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace steering {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols, Complex(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (a_.size() != rows_ * cols_) {
    throw std::invalid_argument("ComplexMatrix: entry count does not match rows*cols");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch in +");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch in -");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& v : a_) v *= s;
  return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace of non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : a_) m = std::max(m, std::abs(v));
  return m;
}

bool ComplexMatrix::is_finite() const {
  for (const auto& v : a_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch in *");
  ComplexMatrix m(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex(0.0, 0.0)) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) m(r, c) += ark * b(k, c);
    }
  }
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix shape mismatch in max_abs_diff");
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
  return m;
}

HermitianOperator::HermitianOperator(ComplexMatrix m, double repair_tol) : m_(std::move(m)) {
  if (!m_.is_square()) throw std::invalid_argument("HermitianOperator: matrix must be square");
  if (!m_.is_finite()) throw std::invalid_argument("HermitianOperator: non-finite entries");
  double dev = 0.0;
  for (std::size_t r = 0; r < m_.rows(); ++r)
    for (std::size_t c = r; c < m_.cols(); ++c)
      dev = std::max(dev, std::abs(m_(r, c) - std::conj(m_(c, r))));
  if (dev > repair_tol) {
    throw std::invalid_argument("HermitianOperator: input deviates from Hermiticity by " +
                                std::to_string(dev));
  }
  for (std::size_t r = 0; r < m_.rows(); ++r) {
    m_(r, r) = Complex(m_(r, r).real(), 0.0);
    for (std::size_t c = r + 1; c < m_.cols(); ++c) {
      const Complex avg = 0.5 * (m_(r, c) + std::conj(m_(c, r)));
      m_(r, c) = avg;
      m_(c, r) = std::conj(avg);
    }
  }
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  return HermitianOperator(ComplexMatrix(dim, dim), unchecked_tag{});
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  return HermitianOperator(ComplexMatrix::identity(dim), unchecked_tag{});
}

HermitianOperator HermitianOperator::outer(const std::vector<Complex>& v, double weight) {
  ComplexMatrix m(v.size(), v.size());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = weight * v[r] * std::conj(v[c]);
  // force exactly real diagonal and conjugate symmetry
  return HermitianOperator(std::move(m), 1e-30);
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  m_ += o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& o) {
  m_ -= o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  m_ *= Complex(s, 0.0);
  return *this;
}

HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }

HermitianOperator herm_unchecked(ComplexMatrix m) {
  return HermitianOperator(std::move(m), HermitianOperator::unchecked_tag{});
}

double real_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch in real_inner");
  // tr(AB) = sum_ij A_ij * B_ji = sum_ij A_ij * conj(B_ij); real for Hermitian A, B.
  double s = 0.0;
  const auto& av = a.matrix().entries();
  const auto& bv = b.matrix().entries();
  for (std::size_t i = 0; i < av.size(); ++i)
    s += av[i].real() * bv[i].real() + av[i].imag() * bv[i].imag();
  return s;
}

}  // namespace steering
