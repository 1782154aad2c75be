#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "skipfree/chain.hpp"
#include "skipfree/errors.hpp"

namespace skipfree::linalg {

// In-place LU factorisation with partial pivoting. Returns the pivot sign
// (+1/-1), or 0 when a zero pivot column is met.
inline int lu_in_place(Matrix& a, std::vector<std::size_t>& perm) {
  const std::size_t n = static_cast<std::size_t>(a.rows());
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best == 0.0) return 0;
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      std::swap(perm[k], perm[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      a(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return sign;
}

inline double determinant(Matrix a) {
  std::vector<std::size_t> perm;
  const int sign = lu_in_place(a, perm);
  if (sign == 0) return 0.0;
  double det = sign;
  for (Eigen::Index i = 0; i < a.rows(); ++i) det *= a(i, i);
  return det;
}

inline Vector solve(Matrix a, const Vector& b) {
  std::vector<std::size_t> perm;
  if (lu_in_place(a, perm) == 0) throw SingularSystemError("linear system is singular");
  const std::size_t n = perm.size();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b(perm[i]);
    for (std::size_t j = 0; j < i; ++j) s -= a(i, j) * x(j);
    x(i) = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x(i);
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x(j);
    x(i) = s / a(i, i);
  }
  return x;
}

}  // namespace skipfree::linalg
