#pragma once

#include <vector>

#include "steering/complex_matrix.hpp"

namespace steering {

enum class Subsystem { A, B };

struct EigResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // orthonormal columns, aligned with eigenvalues
};

/// Hermitian eigendecomposition by cyclic Jacobi rotations. Deterministic;
/// throws std::runtime_error if the off-diagonal norm has not dropped below
/// threshold after the sweep cap (never returns silent garbage).
EigResult eig_hermitian(const HermitianOperator& h);

double min_eigenvalue(const HermitianOperator& h);

/// Partial transpose on subsystem A of an operator on A (dimA) x B (dimB),
/// bipartite index i = iA*dimB + iB. A pure entry permutation, hence an exact
/// involution.
HermitianOperator partial_transpose(const HermitianOperator& m, std::size_t dimA, std::size_t dimB);

HermitianOperator partial_trace(const HermitianOperator& m, std::size_t dimA, std::size_t dimB,
                                Subsystem traced);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

}  // namespace steering
