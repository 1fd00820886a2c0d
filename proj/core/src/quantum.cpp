#include "steering/quantum.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace steering {

DensityOperator::DensityOperator(HermitianOperator op, std::size_t dim, double tol)
    : op_(std::move(op)) {
  if (op_.dim() != dim) throw std::invalid_argument("DensityOperator: dimension mismatch");
  if (std::abs(op_.trace() - 1.0) > tol)
    throw std::invalid_argument("DensityOperator: trace deviates from 1 by " +
                                std::to_string(op_.trace() - 1.0));
  const double me = min_eigenvalue(op_);
  if (me < -tol)
    throw std::invalid_argument("DensityOperator: negative eigenvalue " + std::to_string(me));
}

DensityOperator::DensityOperator(HermitianOperator op, std::size_t dimA, std::size_t dimB,
                                 double tol)
    : DensityOperator(std::move(op), dimA * dimB, tol) {
  dimA_ = dimA;
  dimB_ = dimB;
}

MeasurementBasis::MeasurementBasis(int setting, std::vector<std::vector<Complex>> vectors,
                                   double tol)
    : setting_(setting), vectors_(std::move(vectors)) {
  if (vectors_.empty()) throw std::invalid_argument("MeasurementBasis: no vectors");
  const std::size_t d = vectors_.front().size();
  for (const auto& v : vectors_)
    if (v.size() != d) throw std::invalid_argument("MeasurementBasis: ragged vectors");
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    for (std::size_t j = i; j < vectors_.size(); ++j) {
      Complex ip = 0.0;
      for (std::size_t k = 0; k < d; ++k) ip += std::conj(vectors_[i][k]) * vectors_[j][k];
      const double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(ip - want) > tol)
        throw std::invalid_argument("MeasurementBasis: vectors not orthonormal");
    }
  }
  ComplexMatrix sum(d, d);
  for (const auto& v : vectors_)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) sum(r, c) += v[r] * std::conj(v[c]);
  if (max_abs_diff(sum, ComplexMatrix::identity(d)) > tol)
    throw std::invalid_argument("MeasurementBasis: completeness fails");
}

HermitianOperator MeasurementBasis::projector(std::size_t a) const {
  return HermitianOperator::outer(vector(a));
}

Assemblage::Assemblage(std::size_t m, std::size_t n, std::size_t d,
                       std::vector<HermitianOperator> members)
    : m_(m), n_(n), d_(d), members_(std::move(members)) {
  if (m_ == 0 || n_ < 2) throw std::invalid_argument("Assemblage: need m >= 1 settings, n >= 2 outcomes");
  if (members_.size() != m_ * n_) throw std::invalid_argument("Assemblage: wrong member count");
  for (const auto& mem : members_)
    if (mem.dim() != d_) throw std::invalid_argument("Assemblage: member dimension mismatch");
}

const HermitianOperator& Assemblage::member(std::size_t a, std::size_t x) const {
  if (a < 1 || a > n_ || x < 1 || x > m_) throw std::out_of_range("Assemblage: index out of range");
  return members_[(x - 1) * n_ + (a - 1)];
}

double Assemblage::probability(std::size_t a, std::size_t x) const { return member(a, x).trace(); }

HermitianOperator Assemblage::marginal(std::size_t x) const {
  HermitianOperator s = HermitianOperator::zero(d_);
  for (std::size_t a = 1; a <= n_; ++a) s += member(a, x);
  return s;
}

HermitianOperator Assemblage::bob_state() const {
  HermitianOperator s = HermitianOperator::zero(d_);
  for (std::size_t x = 1; x <= m_; ++x) s += marginal(x);
  return (1.0 / static_cast<double>(m_)) * s;
}

std::pair<MeasurementBasis, MeasurementBasis> mub_bases() {
  const double s3 = std::sqrt(3.0);
  const double s6 = std::sqrt(6.0);
  const double s2 = std::sqrt(2.0);
  std::vector<std::vector<Complex>> b1 = {
      {1.0 / s3, -1.0 / s6, -1.0 / s2},
      {1.0 / s3, -1.0 / s6, 1.0 / s2},
      {1.0 / s3, std::sqrt(2.0 / 3.0), 0.0},
  };
  // q = (-1)^{2/3}, principal branch exp(2*pi*i/3)
  const Complex q = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const Complex qc = std::conj(q);
  const Complex i(0.0, 1.0);
  std::vector<std::vector<Complex>> b2 = {
      {1.0, 0.0, 0.0},
      {0.0, q / s2, i * q / s2},
      {0.0, qc / s2, -i * qc / s2},
  };
  return {MeasurementBasis(1, std::move(b1)), MeasurementBasis(2, std::move(b2))};
}

Assemblage assemblage_from_state(const DensityOperator& rho_ab,
                                 const std::vector<MeasurementBasis>& bases) {
  if (!rho_ab.bipartite()) throw std::invalid_argument("assemblage_from_state: need bipartite state");
  const std::size_t da = rho_ab.dim_a();
  const std::size_t db = rho_ab.dim_b();
  std::vector<HermitianOperator> members;
  const std::size_t n = bases.front().outcomes();
  for (const auto& basis : bases) {
    if (basis.dim() != da)
      throw std::invalid_argument("assemblage_from_state: basis dimension mismatch");
    if (basis.outcomes() != n)
      throw std::invalid_argument("assemblage_from_state: outcome count mismatch");
    for (std::size_t a = 1; a <= n; ++a) {
      const HermitianOperator proj = kron(basis.projector(a), HermitianOperator::identity(db));
      const ComplexMatrix prod = proj.matrix() * rho_ab.op().matrix();
      // (P (x) 1) rho is not Hermitian, but its partial A-trace is.
      ComplexMatrix out(db, db);
      for (std::size_t ib = 0; ib < db; ++ib)
        for (std::size_t jb = 0; jb < db; ++jb) {
          Complex s = 0.0;
          for (std::size_t ia = 0; ia < da; ++ia) s += prod(ia * db + ib, ia * db + jb);
          out(ib, jb) = s;
        }
      members.push_back(HermitianOperator(std::move(out), 1e-10));
    }
  }
  return Assemblage(bases.size(), n, db, std::move(members));
}

DensityOperator random_pure_state(std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("random_pure_state: dim must be >= 2");
  std::mt19937_64 gen(seed);
  auto uniform = [&]() {
    // 53-bit mantissa uniform in (0, 1]
    return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
  };
  std::vector<Complex> v(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    v[k] = Complex(r * std::cos(2.0 * std::numbers::pi * u2),
                   r * std::sin(2.0 * std::numbers::pi * u2));
  }
  double norm = 0.0;
  for (const auto& c : v) norm += std::norm(c);
  norm = std::sqrt(norm);
  for (auto& c : v) c /= norm;
  return DensityOperator(HermitianOperator::outer(v), dim, 1e-12);
}

ValidationReport validate_assemblage(const Assemblage& e, double tol) {
  ValidationReport rep;
  auto fail = [&](std::string what, double mag) {
    rep.pass = false;
    rep.issues.push_back({std::move(what), mag});
  };
  for (std::size_t x = 1; x <= e.settings(); ++x) {
    for (std::size_t a = 1; a <= e.outcomes(); ++a) {
      const double me = min_eigenvalue(e.member(a, x));
      if (me < -tol)
        fail("member (" + std::to_string(a) + "|" + std::to_string(x) + ") not PSD", me);
    }
    const double ptot = std::abs(e.marginal(x).trace() - 1.0);
    if (ptot > tol)
      fail("probabilities for setting " + std::to_string(x) + " do not sum to 1", ptot);
  }
  const HermitianOperator ref = e.marginal(1);
  for (std::size_t x = 2; x <= e.settings(); ++x) {
    const double dev = max_abs_diff(e.marginal(x).matrix(), ref.matrix());
    if (dev > tol)
      fail("non-signalling fails between settings 1 and " + std::to_string(x), dev);
  }
  return rep;
}

}  // namespace steering
