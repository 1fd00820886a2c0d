#include "steering/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace steering {

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

}  // namespace

EigResult eig_hermitian(const HermitianOperator& h) {
  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  constexpr int kMaxSweeps = 100;
  const double threshold = 1e-14 * std::max(1.0, a.frobenius_norm());

  if (n > 1) {
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
      if (off_diagonal_norm(a) <= threshold) break;
      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          const Complex apq = a(p, q);
          const double g = std::abs(apq);
          if (g <= 1e-300) continue;
          const double alpha = a(p, p).real();
          const double beta = a(q, q).real();
          const Complex phase = apq / g;
          const double tau = (beta - alpha) / (2.0 * g);
          const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                        : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const Complex s = phase * (t * c);
          // A <- J^dagger A J with J = [[c, s], [-conj(s), c]] on rows/cols (p, q)
          for (std::size_t i = 0; i < n; ++i) {
            const Complex aip = a(i, p);
            const Complex aiq = a(i, q);
            a(i, p) = c * aip - std::conj(s) * aiq;
            a(i, q) = s * aip + c * aiq;
          }
          for (std::size_t j = 0; j < n; ++j) {
            const Complex apj = a(p, j);
            const Complex aqj = a(q, j);
            a(p, j) = c * apj - s * aqj;
            a(q, j) = std::conj(s) * apj + c * aqj;
          }
          for (std::size_t i = 0; i < n; ++i) {
            const Complex vip = v(i, p);
            const Complex viq = v(i, q);
            v(i, p) = c * vip - std::conj(s) * viq;
            v(i, q) = s * vip + c * viq;
          }
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          a(p, p) = Complex(a(p, p).real(), 0.0);
          a(q, q) = Complex(a(q, q).real(), 0.0);
        }
      }
    }
    if (sweep == kMaxSweeps && off_diagonal_norm(a) > threshold) {
      throw std::runtime_error("eig_hermitian: Jacobi sweeps did not converge, off-norm " +
                               std::to_string(off_diagonal_norm(a)));
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigResult res;
  res.eigenvalues.resize(n);
  res.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    res.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) res.eigenvectors(i, k) = v(i, order[k]);
  }
  return res;
}

double min_eigenvalue(const HermitianOperator& h) { return eig_hermitian(h).eigenvalues.front(); }

HermitianOperator partial_transpose(const HermitianOperator& m, std::size_t dimA,
                                    std::size_t dimB) {
  if (m.dim() != dimA * dimB) throw std::invalid_argument("partial_transpose: dimension mismatch");
  ComplexMatrix out(m.dim(), m.dim());
  for (std::size_t ia = 0; ia < dimA; ++ia)
    for (std::size_t ja = 0; ja < dimA; ++ja)
      for (std::size_t ib = 0; ib < dimB; ++ib)
        for (std::size_t jb = 0; jb < dimB; ++jb)
          out(ia * dimB + ib, ja * dimB + jb) = m(ja * dimB + ib, ia * dimB + jb);
  return herm_unchecked(std::move(out));
}

HermitianOperator partial_trace(const HermitianOperator& m, std::size_t dimA, std::size_t dimB,
                                Subsystem traced) {
  if (m.dim() != dimA * dimB) throw std::invalid_argument("partial_trace: dimension mismatch");
  if (traced == Subsystem::A) {
    ComplexMatrix out(dimB, dimB);
    for (std::size_t ib = 0; ib < dimB; ++ib)
      for (std::size_t jb = 0; jb < dimB; ++jb) {
        Complex s = 0.0;
        for (std::size_t ia = 0; ia < dimA; ++ia) s += m(ia * dimB + ib, ia * dimB + jb);
        out(ib, jb) = s;
      }
    return herm_unchecked(std::move(out));
  }
  ComplexMatrix out(dimA, dimA);
  for (std::size_t ia = 0; ia < dimA; ++ia)
    for (std::size_t ja = 0; ja < dimA; ++ja) {
      Complex s = 0.0;
      for (std::size_t ib = 0; ib < dimB; ++ib) s += m(ia * dimB + ib, ja * dimB + ib);
      out(ia, ja) = s;
    }
  return herm_unchecked(std::move(out));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ra = 0; ra < a.rows(); ++ra)
    for (std::size_t ca = 0; ca < a.cols(); ++ca) {
      const Complex f = a(ra, ca);
      if (f == Complex(0.0, 0.0)) continue;
      for (std::size_t rb = 0; rb < b.rows(); ++rb)
        for (std::size_t cb = 0; cb < b.cols(); ++cb)
          out(ra * b.rows() + rb, ca * b.cols() + cb) = f * b(rb, cb);
    }
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()), 1e-30);
}

}  // namespace steering
