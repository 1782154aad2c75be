#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "skipfree/chain.hpp"
#include "skipfree/charpoly.hpp"
#include "skipfree/errors.hpp"
#include "skipfree/oracle.hpp"
#include "skipfree/polynomial.hpp"
#include "skipfree/spectral.hpp"
#include "skipfree/table.hpp"

namespace skipfree {

/*
 * Law of the absorption time tau of state d started from 0.
 *
 * Discrete:   E[s^tau]    = leading * s^d / denom(s),
 *             leading = p_0...p_{d-1},  denom(s) = det(I - s P_{d-1}) = prod (1 - lambda_i s).
 * Continuous: E[e^{-s tau}] = leading / denom(s),
 *             leading = alpha_0...alpha_{d-1},  denom(s) = det(s I - Q_{d-1}) = prod (s + lambda_i).
 *
 * The rational form is what every evaluator uses; the spectrum is kept for
 * the product form, the phase representation and tail bounds.
 */
struct HittingLaw {
  TimeKind kind = TimeKind::discrete;
  std::size_t d = 0;
  double leading = 0.0;
  Polynomial denom;
  Spectrum spectrum;
  Chain source;  // needed by the uniformization fallback for densities
};

inline constexpr double kPoleThreshold = 1e-13;
inline constexpr double kDefaultPmfEps = 1e-12;
inline constexpr std::size_t kDefaultMaxPmfTerms = 10'000'000;
inline constexpr std::size_t kDefaultGridPoints = 200;
// Uniformization tolerance when it stands in for the closed-form density.
inline constexpr double kUniformizationTol = 1e-12;

inline HittingLaw build_law(const DiscreteChain& chain, double real_tol = kDefaultRealTolerance) {
  HittingLaw law{TimeKind::discrete, chain.d(), 1.0, charpoly(chain), eigenvalues_discrete(chain, real_tol), chain};
  for (double p : chain.up_probs()) law.leading *= p;
  // phi(1) = 1 forces leading = det(I - P_{d-1}).
  double norm = 0.0;
  for (double c : law.denom.coeffs()) norm += std::abs(c);
  if (law.denom[0] != 1.0 || std::abs(law.leading - law.denom(1.0)) > 1e-10 * std::max(1.0, norm))
    throw NumericalError("determinant polynomial inconsistent with upward-step product");
  return law;
}

inline HittingLaw build_law(const ContinuousChain& chain, double real_tol = kDefaultRealTolerance) {
  HittingLaw law{TimeKind::continuous, chain.d(), 1.0, charpoly(chain), eigenvalues_continuous(chain, real_tol), chain};
  for (double a : chain.up_rates()) law.leading *= a;
  // det(-Q_{d-1}) = product of upward rates.
  if (law.denom.degree() != chain.d() || law.denom.coeffs().back() != 1.0 ||
      std::abs(law.leading - law.denom(0.0)) > 1e-10 * law.leading)
    throw NumericalError("determinant polynomial inconsistent with upward-rate product");
  return law;
}

inline HittingLaw build_law(const Chain& chain, double real_tol = kDefaultRealTolerance) {
  return std::visit([&](const auto& c) { return build_law(c, real_tol); }, chain);
}

namespace detail {

inline void require_kind(const HittingLaw& law, TimeKind k, const char* op) {
  if (law.kind != k)
    throw RangeError(std::string(op) + " needs a " + to_string(k) + " law, got a " + to_string(law.kind) + " one");
}

inline std::complex<double> checked_denominator(const HittingLaw& law, std::complex<double> s) {
  const auto den = law.denom(s);
  if (std::abs(den) < kPoleThreshold) throw PoleError("transform evaluated at a pole of the hitting-time law");
  return den;
}

}  // namespace detail

/// E[s^tau] from the rational form.
inline std::complex<double> pgf(const HittingLaw& law, std::complex<double> s) {
  detail::require_kind(law, TimeKind::discrete, "pgf");
  const auto den = detail::checked_denominator(law, s);
  return law.leading * std::pow(s, static_cast<int>(law.d)) / den;
}

/// E[s^tau] as prod (1 - lambda_i) s / (1 - lambda_i s).
inline std::complex<double> pgf_product_form(const HittingLaw& law, std::complex<double> s) {
  detail::require_kind(law, TimeKind::discrete, "pgf_product_form");
  std::complex<double> acc = 1.0;
  for (std::size_t i = 0; i < law.spectrum.values.size(); ++i) {
    const auto l = law.spectrum.values[i];
    const auto c = law.spectrum.complement(i);
    acc *= c * s / (c + l * (1.0 - s));
  }
  return acc;
}

/// E[e^{-s tau}] from the rational form.
inline std::complex<double> laplace(const HittingLaw& law, std::complex<double> s) {
  detail::require_kind(law, TimeKind::continuous, "laplace");
  return law.leading / detail::checked_denominator(law, s);
}

/// E[e^{-s tau}] as prod lambda_i / (lambda_i + s).
inline std::complex<double> laplace_product_form(const HittingLaw& law, std::complex<double> s) {
  detail::require_kind(law, TimeKind::continuous, "laplace_product_form");
  std::complex<double> acc = 1.0;
  for (const auto& l : law.spectrum.values) acc *= l / (l + s);
  return acc;
}

/*
 * Point masses a_n = P(tau = n), n >= d, as power-series coefficients of the
 * rational pgf. Since denom(0) = 1:
 *
 *   a_d = leading,   a_n = -sum_{k=1}^{min(deg, n-d)} denom_k a_{n-k}.
 *
 * The masses sum to leading / denom(1), and denom(1) = p_0...p_{d-1} is a
 * small difference of O(1) coefficients, so the recurrence runs in extended
 * precision on coefficients rebuilt from the source chain.
 *
 * The table stops once the cumulative mass reaches 1 - eps and a geometric
 * envelope K rho^n (rho = spectral radius + 1e-6, K fitted to the last ten
 * terms) bounds the rest by eps. It also stops when the envelope is a millionth
 * of the mass still missing: that deficit is rounding, not tail, and shows up
 * in tail_bound, the larger of the envelope and 1 - cumulative.
 */
inline DistributionTable pmf_table(const HittingLaw& law, double eps = kDefaultPmfEps,
                                   std::size_t max_terms = kDefaultMaxPmfTerms) {
  detail::require_kind(law, TimeKind::discrete, "pmf_table");
  if (!(eps > 0.0 && eps < 1.0)) throw RangeError("pmf_table: eps must lie in (0, 1)");
  const double radius = law.spectrum.spectral_radius();
  if (!(radius < 1.0)) throw TailError("spectral radius >= 1; the tail cannot be bounded");
  const double rho = std::min(radius + 1e-6, 0.5 * (1.0 + radius));

  std::vector<long double> g(law.denom.coeffs().begin(), law.denom.coeffs().end());
  const auto* chain = std::get_if<DiscreteChain>(&law.source);
  if (chain && chain->d() == law.d) {
    auto extended = discrete_charpoly_seq<long double>(*chain).back().coeffs();
    if (extended.size() == g.size()) g = std::move(extended);
  }
  const std::size_t deg = g.size() - 1;
  constexpr std::size_t window = 10;

  DistributionTable t;
  t.kind = TimeKind::discrete;
  t.method = "series";
  std::vector<long double> a;
  double cum = 0.0, comp = 0.0;  // Neumaier-compensated running sum
  double envelope = 0.0;
  for (std::size_t idx = 0;; ++idx) {
    if (idx >= max_terms) throw TailError("pmf_table: no convergence within " + std::to_string(max_terms) + " terms");
    long double an_ext = 0.0L;
    if (idx == 0) {
      an_ext = law.leading;
    } else {
      const std::size_t kmax = std::min(deg, idx);
      for (std::size_t k = 1; k <= kmax; ++k) an_ext -= g[k] * a[idx - k];
    }
    a.push_back(an_ext);
    const double an = static_cast<double>(an_ext);
    t.mass_or_density.push_back(an);
    t.support.push_back(static_cast<double>(law.d + idx));
    const double s = cum + an;
    comp += std::abs(cum) >= std::abs(an) ? (cum - s) + an : (an - s) + cum;
    cum = s;
    t.cumulative.push_back(cum + comp);

    // sum_{m > n} K rho^m with K = max over the window of |a_j| / rho^j.
    envelope = 0.0;
    const std::size_t lo = idx + 1 > window ? idx + 1 - window : 0;
    for (std::size_t j = lo; j <= idx; ++j)
      envelope = std::max(envelope, std::abs(t.mass_or_density[j]) * std::pow(rho, static_cast<double>(idx + 1 - j)));
    envelope /= (1.0 - rho);
    const double missing = 1.0 - t.cumulative.back();
    if (envelope <= eps && (missing <= eps || envelope <= 1e-6 * missing)) break;
  }
  t.tail_bound = std::max({envelope, 1.0 - t.cumulative.back(), 0.0});
  return t;
}

enum class DensityMethod { automatic, partial_fractions, uniformization };

inline const char* to_string(DensityMethod m) {
  switch (m) {
    case DensityMethod::automatic: return "auto";
    case DensityMethod::partial_fractions: return "partial_fractions";
    case DensityMethod::uniformization: return "uniformization";
  }
  return "?";
}

inline constexpr double kDistinctGap = 1e-6;
// Partial-fraction weights beyond this magnitude lose too many digits to
// cancellation; automatic routing then prefers uniformization.
inline constexpr double kMaxPartialFractionWeight = 1e8;

/// Weights w_i = prod_{j != i} lambda_j / (lambda_j - lambda_i), or nullopt when
/// the spectrum is not real, positive and pairwise separated.
inline std::optional<std::vector<double>> hypoexponential_weights(const Spectrum& spec) {
  if (spec.kind != TimeKind::continuous || spec.classification != Classification::RealNonnegative) return std::nullopt;
  const std::size_t n = spec.values.size();
  std::vector<double> lam(n);
  for (std::size_t i = 0; i < n; ++i) {
    lam[i] = spec.values[i].real();
    if (!(lam[i] > 0.0)) return std::nullopt;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(lam[i] - lam[j]) <= kDistinctGap * std::max(lam[i], lam[j])) return std::nullopt;
  std::vector<double> w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) w[i] *= lam[j] / (lam[j] - lam[i]);
  return w;
}

inline bool partial_fractions_applicable(const Spectrum& spec) {
  const auto w = hypoexponential_weights(spec);
  if (!w) return false;
  for (double x : *w)
    if (std::abs(x) > kMaxPartialFractionWeight) return false;
  return true;
}

/// Default grid: `points` equally spaced times from 0 to `t_max`.
inline std::vector<double> make_grid(double t_max, std::size_t points = kDefaultGridPoints) {
  if (points == 0 || !(t_max >= 0.0)) throw RangeError("grid needs points >= 1 and t_max >= 0");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = points == 1 ? t_max : t_max * static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/*
 * Mean and variance from the factored denominator. Discrete: the logarithmic
 * derivative of prod (1 - lambda_i s) at s = 1 gives
 *   mean = d - g'(1)/g(1) = sum 1/(1 - lambda_i),
 *   var  = phi''(1) + phi'(1) - phi'(1)^2 = sum lambda_i / (1 - lambda_i)^2,
 * evaluated with the stored complements 1 - lambda_i; expanding g in monomials
 * and evaluating at s = 1 cancels most digits when p_0...p_{d-1} is small.
 * Continuous: mean = sum 1/lambda_i, var = sum 1/lambda_i^2 (real parts).
 */
inline Moments moments(const HittingLaw& law) {
  std::complex<double> mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < law.spectrum.values.size(); ++i) {
    const auto l = law.spectrum.values[i];
    if (law.kind == TimeKind::discrete) {
      const auto c = law.spectrum.complement(i);
      mean += 1.0 / c;
      var += l / (c * c);
    } else {
      mean += 1.0 / l;
      var += 1.0 / (l * l);
    }
  }
  return {mean.real(), var.real()};
}

/// Density and CDF of a continuous law on a sorted, nonnegative grid.
inline DistributionTable pdf_cdf_table(const HittingLaw& law, const std::vector<double>& grid,
                                       DensityMethod method = DensityMethod::automatic) {
  detail::require_kind(law, TimeKind::continuous, "pdf_cdf_table");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0)) throw RangeError("pdf_cdf_table: grid must be nonnegative");
    if (i > 0 && grid[i] < grid[i - 1]) throw RangeError("pdf_cdf_table: grid must be sorted");
  }
  if (method == DensityMethod::automatic)
    method = partial_fractions_applicable(law.spectrum) ? DensityMethod::partial_fractions : DensityMethod::uniformization;

  DistributionTable t;
  t.kind = TimeKind::continuous;
  t.method = to_string(method);
  t.support = grid;
  t.mass_or_density.reserve(grid.size());
  t.cumulative.reserve(grid.size());
  if (method == DensityMethod::partial_fractions) {
    const auto w = hypoexponential_weights(law.spectrum);
    if (!w) throw DegenerateSpectrumError("partial fractions need real, positive, pairwise distinct eigenvalues");
    for (double x : grid) {
      double f = 0.0, F = 0.0;
      for (std::size_t i = 0; i < w->size(); ++i) {
        const double lam = law.spectrum.values[i].real();
        f += (*w)[i] * lam * std::exp(-lam * x);
        F -= (*w)[i] * std::expm1(-lam * x);
      }
      t.mass_or_density.push_back(f);
      t.cumulative.push_back(F);
    }
  } else {
    const auto& chain = std::get<ContinuousChain>(law.source);
    for (double x : grid) {
      const auto u = oracle::uniformize(chain, x, kUniformizationTol);
      t.mass_or_density.push_back(u.density);
      t.cumulative.push_back(u.cdf);
    }
  }
  t.tail_bound = grid.empty() ? 1.0 : std::max(0.0, 1.0 - t.cumulative.back());
  return t;
}

inline DistributionTable pdf_cdf_table(const HittingLaw& law, DensityMethod method = DensityMethod::automatic) {
  return pdf_cdf_table(law, make_grid(5.0 * moments(law).mean), method);
}

/// Geometric success probabilities 1 - lambda_i (discrete) or exponential rates
/// lambda_i (continuous), when the spectrum is real and nonnegative.
struct PhaseRepresentation {
  Classification classification = Classification::RealNonnegative;
  std::optional<std::vector<double>> parameters;

  bool applicable() const noexcept { return parameters.has_value(); }
};

inline PhaseRepresentation phase_representation(const HittingLaw& law) {
  PhaseRepresentation rep{law.spectrum.classification, std::nullopt};
  if (rep.classification != Classification::RealNonnegative) return rep;
  std::vector<double> params;
  for (std::size_t i = 0; i < law.spectrum.values.size(); ++i) {
    const double lam = law.spectrum.values[i].real();
    if (law.kind == TimeKind::discrete) {
      const double success = law.spectrum.complement(i).real();
      if (!(success > 0.0)) return rep;
      params.push_back(success);
    } else {
      params.push_back(lam);
    }
  }
  rep.parameters = std::move(params);
  return rep;
}

}  // namespace skipfree
