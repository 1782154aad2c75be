#pragma once

#include <cstddef>
#include <vector>

#include "skipfree/chain.hpp"
#include "skipfree/linalg.hpp"
#include "skipfree/polynomial.hpp"

namespace skipfree {

/*
 * Determinant recurrences for the leading principal blocks of a skip-free chain.
 *
 * Because the transient block is lower Hessenberg, expanding det(I - s P_n)
 * along its last row only involves the smaller leading blocks, giving
 *
 *   g_{n+1}(s) = (1 - r_n s) g_n(s)
 *                - sum_{k=1}^{n} q_{n,n-k} p_{n-k}...p_{n-1} s^{k+1} g_{n-k}(s)
 *
 * with g_0 = 1 and g_{n+1} = det(I - s P_n). The continuous analogue is
 *
 *   h_{n+1}(s) = (s + gamma_n) h_n(s)
 *                - sum_{k=1}^{n} beta_{n,n-k} alpha_{n-k}...alpha_{n-1} h_{n-k}(s)
 *
 * with h_{n+1} = det(s I - Q_n). Both run in O(d^3) coefficient operations by
 * carrying the upward-step product along the inner loop.
 */

/// [g_0, g_1, ..., g_d] with g_{n+1}(s) = det(I - s P_n). T = long double is
/// used to polish eigenvalues.
template <class T = double>
std::vector<BasicPolynomial<T>> discrete_charpoly_seq(const DiscreteChain& chain) {
  const std::size_t d = chain.d();
  std::vector<BasicPolynomial<T>> seq;
  seq.reserve(d + 1);
  seq.emplace_back(BasicPolynomial<T>{T(1)});
  for (std::size_t n = 0; n < d; ++n) {
    std::vector<T> out(n + 2, T(0));
    const auto& prev = seq[n].coeffs();
    const T r = chain.hold(n);
    for (std::size_t j = 0; j < prev.size(); ++j) {
      out[j] += prev[j];
      out[j + 1] -= r * prev[j];
    }
    T ups = 1;
    for (std::size_t k = 1; k <= n; ++k) {
      ups *= chain.up(n - k);
      const T q = chain.down(n, n - k);
      if (q == 0) continue;
      const T w = q * ups;
      const auto& lower = seq[n - k].coeffs();
      for (std::size_t j = 0; j < lower.size(); ++j) out[j + k + 1] -= w * lower[j];
    }
    seq.emplace_back(std::move(out));
  }
  return seq;
}

/// Coefficients of u -> g_d(1 + u), in extended precision, by the same
/// recurrence with s = 1 + u substituted before expanding. The constant term is
/// then det(I - P_{d-1}) to full relative accuracy, which is what roots near
/// s = 1 need; shifting the coefficients of g_d afterwards would cancel it away.
inline std::vector<long double> discrete_charpoly_shifted(const DiscreteChain& chain) {
  using L = long double;
  const std::size_t d = chain.d();
  // powers[j] = (1 + u)^j
  std::vector<std::vector<L>> powers{{1.0L}};
  for (std::size_t j = 1; j <= d + 1; ++j) {
    std::vector<L> next(j + 1, 0.0L);
    for (std::size_t k = 0; k < j; ++k) {
      next[k] += powers[j - 1][k];
      next[k + 1] += powers[j - 1][k];
    }
    powers.push_back(std::move(next));
  }
  std::vector<std::vector<L>> seq{{1.0L}};
  for (std::size_t n = 0; n < d; ++n) {
    std::vector<L> out(n + 2, 0.0L);
    const auto& prev = seq[n];
    const L r = chain.hold(n);
    const L stay_out = 1.0L - r;  // exact in extended precision
    for (std::size_t j = 0; j < prev.size(); ++j) {
      out[j] += stay_out * prev[j];
      out[j + 1] -= r * prev[j];
    }
    L ups = 1.0L;
    for (std::size_t k = 1; k <= n; ++k) {
      ups *= chain.up(n - k);
      const L q = chain.down(n, n - k);
      if (q == 0.0L) continue;
      const L w = q * ups;
      const auto& lower = seq[n - k];
      const auto& pw = powers[k + 1];
      for (std::size_t a = 0; a < pw.size(); ++a)
        for (std::size_t b = 0; b < lower.size(); ++b) out[a + b] -= w * pw[a] * lower[b];
    }
    seq.push_back(std::move(out));
  }
  return seq.back();
}

/// [h_0, h_1, ..., h_d] with h_{n+1}(s) = det(s I - Q_n); every h_n is monic of degree n.
inline std::vector<Polynomial> continuous_charpoly_seq(const ContinuousChain& chain) {
  const std::size_t d = chain.d();
  std::vector<Polynomial> seq;
  seq.reserve(d + 1);
  seq.emplace_back(Polynomial{1.0});
  for (std::size_t n = 0; n < d; ++n) {
    std::vector<double> out(n + 2, 0.0);
    const auto& prev = seq[n].coeffs();
    const double g = chain.gamma(n);
    for (std::size_t j = 0; j < prev.size(); ++j) {
      out[j] += g * prev[j];
      out[j + 1] += prev[j];
    }
    double ups = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
      ups *= chain.up(n - k);
      const double b = chain.down(n, n - k);
      if (b == 0.0) continue;
      const double w = b * ups;
      const auto& lower = seq[n - k].coeffs();
      for (std::size_t j = 0; j < lower.size(); ++j) out[j] -= w * lower[j];
    }
    seq.emplace_back(std::move(out));
  }
  return seq;
}

inline Polynomial charpoly(const DiscreteChain& chain) { return discrete_charpoly_seq(chain).back(); }
inline Polynomial charpoly(const ContinuousChain& chain) { return continuous_charpoly_seq(chain).back(); }

/// det(I - sM) (discrete) or det(sI - M) (continuous) by Gaussian elimination
/// with partial pivoting. Independent of the recurrences above.
inline double direct_determinant(const Matrix& m, double s, TimeKind kind) {
  const Matrix id = Matrix::Identity(m.rows(), m.cols());
  return linalg::determinant(kind == TimeKind::discrete ? Matrix(id - s * m) : Matrix(s * id - m));
}

}  // namespace skipfree
