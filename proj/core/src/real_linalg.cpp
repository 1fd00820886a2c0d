#include "steering/detail/real_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace steering {

RealMatrix RealMatrix::identity(std::size_t dim) {
  RealMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix& RealMatrix::operator+=(const RealMatrix& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

RealMatrix& RealMatrix::operator-=(const RealMatrix& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

RealMatrix& RealMatrix::operator*=(double s) {
  for (auto& v : a_) v *= s;
  return *this;
}

double RealMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double RealMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

namespace detail {

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix m(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double ark = a(r, k);
      if (ark == 0.0) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) m(r, c) += ark * b(k, c);
    }
  return m;
}

RealMatrix matmul_tn(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix m(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k)
    for (std::size_t r = 0; r < a.cols(); ++r) {
      const double akr = a(k, r);
      if (akr == 0.0) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) m(r, c) += akr * b(k, c);
    }
  return m;
}

RealMatrix matmul_nt(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix m(a.rows(), b.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < b.rows(); ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(r, k) * b(c, k);
      m(r, c) = s;
    }
  return m;
}

RealMatrix congruence(const RealMatrix& a, const RealMatrix& r) {
  return matmul_tn(r, matmul(a, r));
}

double inner(const RealMatrix& a, const RealMatrix& b) {
  double s = 0.0;
  const auto& av = a.data();
  const auto& bv = b.data();
  for (std::size_t i = 0; i < av.size(); ++i) s += av[i] * bv[i];
  return s;
}

void symmetrize(RealMatrix& a) {
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = r + 1; c < a.cols(); ++c) {
      const double avg = 0.5 * (a(r, c) + a(c, r));
      a(r, c) = avg;
      a(c, r) = avg;
    }
}

bool cholesky(const RealMatrix& a, RealMatrix& l, double pivot_tol) {
  const std::size_t n = a.rows();
  l = RealMatrix(n, n);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
  const double floor = pivot_tol * std::max(max_diag, 1e-300);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= floor) return false;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return true;
}

void solve_lower_inplace(const RealMatrix& l, RealMatrix& b) {
  const std::size_t n = l.rows();
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = b(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b(k, c);
      b(i, c) = s / l(i, i);
    }
  }
}

void solve_lower_transposed_inplace(const RealMatrix& l, RealMatrix& b) {
  const std::size_t n = l.rows();
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t ii = n; ii-- > 0;) {
      double s = b(ii, c);
      for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * b(k, c);
      b(ii, c) = s / l(ii, ii);
    }
  }
}

void solve_lower_inplace(const RealMatrix& l, std::vector<double>& b) {
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b[k];
    b[i] = s / l(i, i);
  }
}

void solve_lower_transposed_inplace(const RealMatrix& l, std::vector<double>& b) {
  const std::size_t n = l.rows();
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * b[k];
    b[ii] = s / l(ii, ii);
  }
}

RealEig sym_eig(const RealMatrix& input) {
  const std::size_t n = input.rows();
  RealMatrix a = input;
  RealMatrix v = RealMatrix::identity(n);

  constexpr int kMaxSweeps = 100;
  const double threshold = 1e-14 * std::max(1.0, a.frobenius_norm());

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r != c) s += a(r, c) * a(r, c);
    return std::sqrt(s);
  };

  if (n > 1) {
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
      if (off_norm() <= threshold) break;
      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          const double apq = a(p, q);
          if (std::abs(apq) <= 1e-300) continue;
          const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
          const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                        : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          for (std::size_t i = 0; i < n; ++i) {
            const double aip = a(i, p);
            const double aiq = a(i, q);
            a(i, p) = c * aip - s * aiq;
            a(i, q) = s * aip + c * aiq;
          }
          for (std::size_t j = 0; j < n; ++j) {
            const double apj = a(p, j);
            const double aqj = a(q, j);
            a(p, j) = c * apj - s * aqj;
            a(q, j) = s * apj + c * aqj;
          }
          for (std::size_t i = 0; i < n; ++i) {
            const double vip = v(i, p);
            const double viq = v(i, q);
            v(i, p) = c * vip - s * viq;
            v(i, q) = s * vip + c * viq;
          }
          a(p, q) = 0.0;
          a(q, p) = 0.0;
        }
      }
    }
    if (sweep == kMaxSweeps && off_norm() > threshold) {
      throw std::runtime_error("sym_eig: Jacobi sweeps did not converge");
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  RealEig res;
  res.values.resize(n);
  res.vectors = RealMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    res.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) res.vectors(i, k) = v(i, order[k]);
  }
  return res;
}

double sym_min_eig(const RealMatrix& a) { return sym_eig(a).values.front(); }

Svd one_sided_svd(const RealMatrix& input) {
  const std::size_t n = input.rows();
  RealMatrix k = input;
  RealMatrix v = RealMatrix::identity(n);

  constexpr int kMaxSweeps = 60;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          app += k(i, p) * k(i, p);
          aqq += k(i, q) * k(i, q);
          apq += k(i, p) * k(i, q);
        }
        if (std::abs(apq) <= 1e-15 * std::sqrt(app * aqq) || apq == 0.0) continue;
        converged = false;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0) ? 1.0 / (zeta + std::sqrt(1.0 + zeta * zeta))
                                       : -1.0 / (-zeta + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double kip = k(i, p);
          const double kiq = k(i, q);
          k(i, p) = c * kip - s * kiq;
          k(i, q) = s * kip + c * kiq;
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  if (!converged) throw std::runtime_error("one_sided_svd: Jacobi sweeps did not converge");

  Svd res;
  res.sigma.resize(n);
  res.u = RealMatrix(n, n);
  res.v = v;
  for (std::size_t j = 0; j < n; ++j) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += k(i, j) * k(i, j);
    norm = std::sqrt(norm);
    res.sigma[j] = norm;
    if (norm <= 0.0) throw std::runtime_error("one_sided_svd: singular input");
    for (std::size_t i = 0; i < n; ++i) res.u(i, j) = k(i, j) / norm;
  }
  return res;
}

}  // namespace detail
}  // namespace steering
