#pragma once

#include <vector>

namespace specmcd {

// Economy-size singular value decomposition, singular values descending.
// U is m x r and V is n x r, both column-major, with r = min(m, n).
struct SvdResult {
  int m = 0;
  int n = 0;
  int r = 0;
  std::vector<double> singular_values;
  std::vector<double> u;  // column-major, column j at u[j * m]
  std::vector<double> v;  // column-major, column j at v[j * n]
};

// One-sided Jacobi SVD of a dense row-major m x n matrix. Plane rotations
// orthogonalize column pairs until every pair is orthogonal to a relative
// tolerance of 1e-10; singular values are the converged column norms.
// Deterministic: fixed cyclic pivot order, no threading.
SvdResult jacobi_svd(const double* a, int m, int n);

}  // namespace specmcd
