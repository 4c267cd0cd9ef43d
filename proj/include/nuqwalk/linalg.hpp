#pragma once

// Small dense linear algebra used by the reduced-operator paths: Hermitian
// eigenvalues by cyclic Jacobi. All matrices here are tiny (4x4 in the fast
// path, at most ~70x70 in the dense oracle), so an O(n^3)-per-sweep Jacobi is
// plenty and keeps the build dependency-free.

#include <vector>

#include "nuqwalk/mat2.hpp"

namespace nuqwalk {

// Eigenvalues of a real symmetric matrix (row-major, n x n), ascending.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

// Eigenvalues of a complex Hermitian matrix (row-major, n x n), ascending.
// Uses the real-symmetric embedding [[Re, -Im], [Im, Re]], whose spectrum is
// that of the Hermitian matrix doubled.
std::vector<double> hermitian_eigenvalues(const std::vector<cplx>& a, int n);

// max_ij |a_ij - conj(a_ji)|, a cheap Hermiticity residual.
double hermiticity_error(const std::vector<cplx>& a, int n);

} // namespace nuqwalk
