#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "skipfree/errors.hpp"
#include "skipfree/polynomial.hpp"

namespace skipfree {

struct RootOptions {
  int max_iterations = 1000;
  // Accept a root z when |p(z)| <= residual_tol * sum_k |c_k| |z|^k.
  double residual_tol = 1e-9;
};

struct RootReport {
  std::vector<std::complex<double>> roots;
  int iterations = 0;
  bool companion_fallback = false;
  double max_residual = 0.0;  // worst relative residual over the returned roots
};

namespace detail {

using cplx = std::complex<double>;

inline double relative_residual(const Polynomial& p, cplx z) {
  const double scale = evaluation_scale(p, std::abs(z));
  return scale > 0.0 ? std::abs(p(z)) / scale : 0.0;
}

inline double worst_residual(const Polynomial& p, const std::vector<cplx>& roots) {
  double worst = 0.0;
  for (const auto& z : roots) worst = std::max(worst, relative_residual(p, z));
  return worst;
}

// p and p' together by Horner.
inline void horner2(const std::vector<double>& c, cplx z, cplx& p, cplx& dp) {
  p = c.back();
  dp = 0.0;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
}

// Aberth-Ehrlich simultaneous iteration, Gauss-Seidel updates. A root is frozen
// once its residual reaches the rounding level of Horner's scheme.
inline bool aberth(const Polynomial& p, const RootOptions& opt, std::vector<cplx>& z, int& iters) {
  const std::size_t n = p.degree();
  const auto& c = p.coeffs();
  const double lead = c.back();
  double maxc = 0.0;
  for (std::size_t k = 0; k < n; ++k) maxc = std::max(maxc, std::abs(c[k] / lead));
  const double radius = 1.0 + maxc;
  z.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z[k] = std::polar(radius, theta);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<bool> done(n, false);
  std::size_t remaining = n;
  for (iters = 0; iters < opt.max_iterations && remaining > 0; ++iters) {
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      cplx val, dval;
      horner2(c, z[k], val, dval);
      const double scale = evaluation_scale(p, std::abs(z[k]));
      if (std::abs(val) <= 4.0 * eps * scale * static_cast<double>(n)) {
        done[k] = true;
        --remaining;
        continue;
      }
      if (dval == 0.0) {
        z[k] += cplx(eps, eps) * (1.0 + std::abs(z[k]));
        continue;
      }
      const cplx ratio = val / dval;
      cplx repulsion = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      const cplx step = ratio / (1.0 - ratio * repulsion);
      z[k] -= step;
      if (std::abs(step) <= eps * std::abs(z[k])) {
        done[k] = true;
        --remaining;
      }
    }
  }
  for (const auto& x : z)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return worst_residual(p, z) <= opt.residual_tol;
}

inline std::vector<cplx> companion_roots(const Polynomial& p) {
  const std::size_t n = p.degree();
  const auto& c = p.coeffs();
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) return {};
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace detail

/*
 * All complex roots of a real polynomial, with multiplicity.
 *
 * Aberth-Ehrlich iteration started on a circle of radius 1 + max|c_k/c_n|;
 * if that misses the residual target within the iteration budget, the
 * eigenvalues of the companion matrix are tried instead.
 * Throws ConvergenceError when neither route meets the target.
 */
inline RootReport find_roots(const Polynomial& p, const RootOptions& opt = {}) {
  RootReport rep;
  const std::size_t n = p.degree();
  if (n == 0) return rep;
  if (n == 1) {
    rep.roots = {std::complex<double>(-p[0] / p[1], 0.0)};
    rep.max_residual = detail::worst_residual(p, rep.roots);
    return rep;
  }
  std::vector<std::complex<double>> z;
  if (detail::aberth(p, opt, z, rep.iterations)) {
    rep.roots = std::move(z);
    rep.max_residual = detail::worst_residual(p, rep.roots);
    return rep;
  }
  auto fallback = detail::companion_roots(p);
  if (!fallback.empty()) {
    const double res = detail::worst_residual(p, fallback);
    if (res <= opt.residual_tol) {
      rep.roots = std::move(fallback);
      rep.companion_fallback = true;
      rep.max_residual = res;
      return rep;
    }
  }
  throw ConvergenceError("root finding did not reach relative residual " + std::to_string(opt.residual_tol) +
                         " for a degree-" + std::to_string(n) + " polynomial");
}

}  // namespace skipfree
