#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "steering/complex_matrix.hpp"
#include "steering/linalg.hpp"

namespace steering {

/// Unit-trace PSD operator, optionally bipartite. Bipartite index convention
/// is A-major throughout: i = iA*dimB + iB.
class DensityOperator {
 public:
  DensityOperator(HermitianOperator op, std::size_t dim, double tol = 1e-9);
  DensityOperator(HermitianOperator op, std::size_t dimA, std::size_t dimB, double tol = 1e-9);

  const HermitianOperator& op() const { return op_; }
  std::size_t dim() const { return op_.dim(); }
  bool bipartite() const { return dimA_ != 0; }
  std::size_t dim_a() const { return dimA_; }
  std::size_t dim_b() const { return dimB_; }

 private:
  HermitianOperator op_;
  std::size_t dimA_ = 0;
  std::size_t dimB_ = 0;
};

/// One measurement setting: a full rank-1 projective basis of dimension d.
class MeasurementBasis {
 public:
  MeasurementBasis(int setting, std::vector<std::vector<Complex>> vectors, double tol = 1e-10);

  int setting() const { return setting_; }
  std::size_t outcomes() const { return vectors_.size(); }
  std::size_t dim() const { return vectors_.front().size(); }
  const std::vector<Complex>& vector(std::size_t a) const { return vectors_.at(a - 1); }  // 1-based
  HermitianOperator projector(std::size_t a) const;

 private:
  int setting_;
  std::vector<std::vector<Complex>> vectors_;
};

/// The ensemble of Bob's unnormalized conditional states {rho_{a|x}},
/// a = 1..n outcomes, x = 1..m settings.
class Assemblage {
 public:
  Assemblage(std::size_t m, std::size_t n, std::size_t d,
             std::vector<HermitianOperator> members);  // indexed (x-1)*n + (a-1)

  std::size_t settings() const { return m_; }
  std::size_t outcomes() const { return n_; }
  std::size_t dim() const { return d_; }

  const HermitianOperator& member(std::size_t a, std::size_t x) const;  // 1-based
  double probability(std::size_t a, std::size_t x) const;

  /// Sum_a rho_{a|x} for one setting.
  HermitianOperator marginal(std::size_t x) const;
  /// Average of the per-setting marginals (they coincide for non-signalling
  /// input).
  HermitianOperator bob_state() const;

 private:
  std::size_t m_, n_, d_;
  std::vector<HermitianOperator> members_;
};

struct ValidationIssue {
  std::string what;
  double magnitude = 0.0;
};

struct ValidationReport {
  bool pass = true;
  std::vector<ValidationIssue> issues;
};

/// The two mutually unbiased qutrit bases used by every construction here,
/// in the rotated form that keeps the final state simple. Setting 1 is real;
/// setting 2 uses q = exp(2*pi*i/3).
std::pair<MeasurementBasis, MeasurementBasis> mub_bases();

/// rho_{a|x} = Tr_A[(|v_{a|x}><v_{a|x}| (x) 1) rho_AB].
Assemblage assemblage_from_state(const DensityOperator& rho_ab,
                                 const std::vector<MeasurementBasis>& bases);

/// Haar-random rank-1 projector from a normalized complex Gaussian vector.
/// PRNG: mt19937_64 seeded directly with `seed`, Box-Muller on 53-bit
/// uniforms; identical seeds give identical operators.
DensityOperator random_pure_state(std::size_t dim, std::uint64_t seed);

/// Checks member positivity, non-signalling, and per-setting probability
/// normalization; each violation is reported with its magnitude.
ValidationReport validate_assemblage(const Assemblage& e, double tol);

}  // namespace steering
