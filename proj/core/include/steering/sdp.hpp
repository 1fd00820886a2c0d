#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "steering/complex_matrix.hpp"
#include "steering/detail/real_linalg.hpp"

namespace steering {

/// Semidefinite programs in standard equality form,
///
///   minimize    sum_b <C_b, X_b> + c^T y
///   subject to  sum_b <A_kb, X_b> + B_k y = r_k     (k = 1..K)
///               X_b >= 0 (Hermitian PSD), y free,
///
/// with <.,.> the real trace inner product. Solved by a primal-dual
/// Nesterov-Todd path-following method on the real symmetric embedding of the
/// Hermitian blocks; free scalars are carried directly in the KKT system.

struct SdpBlockSpec {
  std::string id;
  std::size_t dim = 0;
};

struct BlockCoeff {
  std::size_t block = 0;
  HermitianOperator op;
};

struct SdpConstraint {
  std::vector<BlockCoeff> coeffs;         // blocks not listed contribute zero
  std::vector<double> scalar_coeffs;      // aligned with SdpProblem::scalar_vars; may be empty
  double rhs = 0.0;
};

struct SdpObjective {
  std::vector<BlockCoeff> coeffs;
  std::vector<double> scalar_coeffs;
};

struct SdpProblem {
  std::vector<SdpBlockSpec> blocks;
  std::vector<std::string> scalar_vars;
  SdpObjective objective;
  std::vector<SdpConstraint> constraints;
};

struct SolverSettings {
  double gap_tolerance = 1e-8;
  double feas_tolerance = 1e-8;
  int max_iterations = 200;
  bool verbose = false;
};

enum class SolveStatus { optimal, infeasible, unbounded, max_iterations };

const char* to_string(SolveStatus s);

struct SdpSolution {
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<HermitianOperator> primal_blocks;
  std::vector<double> scalar_values;
  std::vector<double> dual_multipliers;  // one per constraint, in input order
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;  // max equality violation
  double dual_residual = 0.0;    // max dual slack / free-variable violation
  int iterations = 0;
  std::vector<double> primal_min_eigs;      // per block
  std::vector<double> dual_slack_min_eigs;  // per block, from C - A^T(lambda)
};

/// Solve the program. Throws std::invalid_argument for structurally broken
/// input (shape mismatches, inconsistent dependent constraints); numerical
/// breakdown yields status max_iterations with the best iterate and an honest
/// gap.
SdpSolution solve(const SdpProblem& p, const SolverSettings& settings = {});

/// Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix.
/// A homomorphism for +, * and scalar multiplication; the spectrum of H is
/// preserved with every eigenvalue doubled in multiplicity.
RealMatrix embed_hermitian(const HermitianOperator& h);

/// Dual slack operators C_b - sum_k lambda_k A_kb for a given multiplier
/// vector, in the problem's block order.
std::vector<HermitianOperator> dual_slacks(const SdpProblem& p, const std::vector<double>& lambda);

}  // namespace steering
