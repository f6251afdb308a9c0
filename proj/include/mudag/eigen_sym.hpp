#pragma once

#include <vector>

#include "mudag/matrix.hpp"

namespace mudag {

// All eigenvalues of a dense symmetric matrix, ascending. Householder
// tridiagonalization followed by implicit-shift QL; O(n^3), intended for the
// desk-scale spectral work here (n <= 1000). Only the lower triangle is read.
// Throws std::runtime_error if the QL iteration fails to converge.
std::vector<double> sym_eigenvalues(const Matrix& A);

}  // namespace mudag
