#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <iterator>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "skipfree/chain.hpp"
#include "skipfree/charpoly.hpp"
#include "skipfree/errors.hpp"
#include "skipfree/roots.hpp"

namespace skipfree {

enum class Classification { RealNonnegative, RealMixedSign, Complex };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::RealNonnegative: return "RealNonnegative";
    case Classification::RealMixedSign: return "RealMixedSign";
    case Classification::Complex: return "Complex";
  }
  return "?";
}

inline constexpr double kDefaultRealTolerance = 1e-9;

/*
 * The d eigenvalues of the transient block: of P_{d-1} for a discrete chain
 * (the non-unit eigenvalues of P) and of -Q_{d-1} for a continuous one (the
 * non-zero eigenvalues of -Q). Listed slowest mode first: descending real part
 * for discrete chains, ascending for continuous ones. Repeated eigenvalues
 * appear with multiplicity.
 */
struct Spectrum {
  TimeKind kind = TimeKind::discrete;
  std::vector<std::complex<double>> values;
  Classification classification = Classification::RealNonnegative;
  double tolerance_used = kDefaultRealTolerance;
  // Discrete only: 1 - lambda_i, kept separately because rounding lambda_i to
  // double destroys the relative accuracy of 1 - lambda_i when lambda_i is near 1.
  std::vector<std::complex<double>> complements;

  std::complex<double> complement(std::size_t i) const {
    return i < complements.size() ? complements[i] : 1.0 - values[i];
  }

  double spectral_radius() const {
    double r = 0.0;
    for (const auto& v : values) r = std::max(r, std::abs(v));
    return r;
  }
};

inline bool is_real_within(std::complex<double> v, double tol) {
  return std::abs(v.imag()) <= tol * (1.0 + std::abs(v));
}

/// RealNonnegative / RealMixedSign when every value is real to within tol
/// (relative), Complex otherwise.
inline Classification classify(const std::vector<std::complex<double>>& values, double tol) {
  bool negative = false;
  for (const auto& v : values) {
    if (!is_real_within(v, tol)) return Classification::Complex;
    if (v.real() < -tol) negative = true;
  }
  return negative ? Classification::RealMixedSign : Classification::RealNonnegative;
}

namespace detail {

// Roots of a real polynomial come in conjugate pairs; average each pair so the
// pairing is exact rather than approximate.
inline void pair_conjugates(std::vector<std::complex<double>>& v, double tol) {
  std::vector<bool> used(v.size(), false);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (used[i] || is_real_within(v[i], tol) || v[i].imag() < 0.0) continue;
    std::size_t best = v.size();
    double best_dist = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j == i || used[j] || v[j].imag() >= 0.0) continue;
      const double dist = std::abs(v[j] - std::conj(v[i]));
      if (best == v.size() || dist < best_dist) {
        best = j;
        best_dist = dist;
      }
    }
    if (best == v.size()) continue;
    const auto mid = 0.5 * (v[i] + std::conj(v[best]));
    v[i] = mid;
    v[best] = std::conj(mid);
    used[i] = used[best] = true;
  }
}

inline Spectrum finish_spectrum(TimeKind kind, std::vector<std::complex<double>> values, double tol) {
  pair_conjugates(values, tol);
  Spectrum s;
  s.kind = kind;
  s.tolerance_used = tol;
  s.classification = classify(values, tol);
  for (auto& v : values)
    if (is_real_within(v, tol)) v = {v.real(), 0.0};
  std::sort(values.begin(), values.end(), [kind](const auto& a, const auto& b) {
    if (a.real() != b.real()) return kind == TimeKind::discrete ? a.real() > b.real() : a.real() < b.real();
    return a.imag() > b.imag();
  });
  s.values = std::move(values);
  return s;
}

}  // namespace detail

namespace detail {

// Newton steps in extended precision on a polynomial whose coefficients were
// also built in extended precision; keeps the iterate with the smallest residual.
using lcplx = std::complex<long double>;

inline lcplx polish_root(const std::vector<long double>& c, std::complex<double> start) {
  const auto eval = [&c](lcplx z, lcplx& dp) {
    lcplx p = c.back();
    dp = 0.0L;
    for (std::size_t k = c.size() - 1; k-- > 0;) {
      dp = dp * z + p;
      p = p * z + c[k];
    }
    return p;
  };
  lcplx z(start.real(), start.imag()), best = z, dp;
  long double best_res = std::abs(eval(z, dp));
  for (int it = 0; it < 8 && best_res > 0.0L; ++it) {
    const lcplx val = eval(z, dp);
    if (dp == lcplx(0.0L)) break;
    z -= val / dp;
    const long double res = std::abs(eval(z, dp));
    if (!(res < best_res)) break;
    best = z;
    best_res = res;
  }
  return best;
}

struct PreciseRoot {
  lcplx value;
  lcplx complement;  // 1 - value
};

// Pairs each finished eigenvalue with the nearest unused extended-precision root.
inline std::vector<std::complex<double>> complements_of(const std::vector<std::complex<double>>& values,
                                                        std::vector<PreciseRoot> roots) {
  std::vector<std::complex<double>> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    std::size_t best = roots.size();
    double best_dist = 0.0;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      const double dist = std::abs(std::complex<double>(static_cast<double>(roots[j].value.real()),
                                                        static_cast<double>(roots[j].value.imag())) - v);
      if (best == roots.size() || dist < best_dist) {
        best = j;
        best_dist = dist;
      }
    }
    if (best == roots.size()) {
      out.push_back(1.0 - v);
      continue;
    }
    out.emplace_back(static_cast<double>(roots[best].complement.real()), -v.imag());
    roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

}  // namespace detail

/// Eigenvalues of P_{d-1}: reciprocals of the roots of det(I - s P_{d-1}),
/// plus one zero per degree lost below d. Roots are polished against the
/// extended-precision polynomial so that 1 - lambda keeps its relative accuracy
/// for eigenvalues close to 1.
inline Spectrum eigenvalues_discrete(const DiscreteChain& chain, double tol = kDefaultRealTolerance,
                                     const RootOptions& opt = {}) {
  const Polynomial g = charpoly(chain);
  // x^m g(1/x) is monic because g(0) = 1, and its roots are the nonzero eigenvalues.
  std::vector<double> rev(g.coeffs().rbegin(), g.coeffs().rend());
  auto values = find_roots(Polynomial(std::move(rev)), opt).roots;
  std::vector<detail::PreciseRoot> precise;
  const auto gl = discrete_charpoly_seq<long double>(chain).back().coeffs();
  if (gl.size() == g.size()) {
    const std::vector<long double> rev_l(gl.rbegin(), gl.rend());
    std::vector<long double> shifted;
    for (auto& v : values) {
      detail::PreciseRoot pr;
      if (std::abs(1.0 - v) < 0.5) {
        // Root of g at s = 1 + u with u = (1 - lambda) / lambda.
        if (shifted.empty()) shifted = discrete_charpoly_shifted(chain);
        const auto u = detail::polish_root(shifted, (1.0 - v) / v);
        pr = {1.0L / (1.0L + u), u / (1.0L + u)};
      } else {
        const auto z = detail::polish_root(rev_l, v);
        pr = {z, 1.0L - z};
      }
      precise.push_back(pr);
      v = {static_cast<double>(pr.value.real()), static_cast<double>(pr.value.imag())};
    }
  } else {
    for (const auto& v : values) precise.push_back({{v.real(), v.imag()}, {1.0L - v.real(), -v.imag()}});
  }
  precise.resize(chain.d(), {{0.0L, 0.0L}, {1.0L, 0.0L}});
  values.resize(chain.d(), {0.0, 0.0});
  Spectrum s = detail::finish_spectrum(TimeKind::discrete, std::move(values), tol);
  s.complements = detail::complements_of(s.values, std::move(precise));
  for (const auto& v : s.values)
    if (std::abs(v) >= 1.0 + 1e-9)
      throw ConvergenceError("transient eigenvalue outside the unit disc: |lambda| = " + std::to_string(std::abs(v)));
  return s;
}

/// Eigenvalues of -Q_{d-1}, the negated roots of det(s I - Q_{d-1}).
/// Taken from Hessenberg QR on the generator block: the monomial coefficients
/// of the characteristic polynomial are far worse conditioned than the block.
/// The polynomial roots are the fallback when QR does not converge.
inline Spectrum eigenvalues_continuous(const ContinuousChain& chain, double tol = kDefaultRealTolerance,
                                       const RootOptions& opt = {}) {
  const Matrix a = -transient_block(chain, chain.d() - 1);
  Eigen::EigenSolver<Matrix> es(a, false);
  std::vector<std::complex<double>> values;
  if (es.info() == Eigen::Success) {
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) values.push_back(es.eigenvalues()(i));
  } else {
    values = find_roots(charpoly(chain), opt).roots;
    for (auto& v : values) v = -v;
  }
  Spectrum s = detail::finish_spectrum(TimeKind::continuous, std::move(values), tol);
  for (const auto& v : s.values)
    if (v.real() <= -1e-9)
      throw ConvergenceError("eigenvalue of -Q with negative real part: " + std::to_string(v.real()));
  return s;
}

inline Spectrum eigenvalues(const DiscreteChain& c, double tol = kDefaultRealTolerance) {
  return eigenvalues_discrete(c, tol);
}
inline Spectrum eigenvalues(const ContinuousChain& c, double tol = kDefaultRealTolerance) {
  return eigenvalues_continuous(c, tol);
}

}  // namespace skipfree
