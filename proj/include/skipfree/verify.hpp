#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "skipfree/chain.hpp"
#include "skipfree/hitting_law.hpp"
#include "skipfree/oracle.hpp"

namespace skipfree {

struct VerifyOptions {
  double eps = kDefaultPmfEps;
  double real_tol = kDefaultRealTolerance;
  std::size_t grid_points = 50;
  // Monte Carlo mean check runs only when paths > 0.
  std::size_t paths = 0;
  std::uint64_t seed = 1;
  std::size_t lanes = 0;
};

// Acceptance thresholds for the closed forms against their oracles.
inline constexpr double kPmfThreshold = 1e-9;
inline constexpr double kTransformThreshold = 1e-8;
inline constexpr double kProductThreshold = 1e-8;
inline constexpr double kMeanThreshold = 1e-8;
inline constexpr double kCdfThreshold = 1e-7;
inline constexpr double kCdfOracleTol = 1e-10;
inline constexpr double kMonteCarloSigmas = 4.0;

namespace detail {

inline oracle::ComparisonReport single(std::string name, double err, double threshold) {
  return oracle::make_report(std::move(name), {err}, threshold);
}

inline double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

template <class Samples>
oracle::ComparisonReport monte_carlo_mean(const Samples& xs, const Moments& m) {
  double sum = 0.0;
  for (auto x : xs) sum += static_cast<double>(x);
  const double n = static_cast<double>(xs.size());
  const double se = std::sqrt(m.variance / n);
  return single("monte_carlo_mean", std::abs(sum / n - m.mean), kMonteCarloSigmas * se);
}

}  // namespace detail

/// Every closed form for a discrete chain against its independent oracle.
inline std::vector<oracle::ComparisonReport> verify(const DiscreteChain& chain, const VerifyOptions& opt = {}) {
  std::vector<oracle::ComparisonReport> out;
  const HittingLaw law = build_law(chain, opt.real_tol);
  const DistributionTable table = pmf_table(law, opt.eps);
  const auto n_max = static_cast<std::size_t>(table.support.back());
  out.push_back(oracle::compare_pmf(table, oracle::pmf_by_matrix_power(chain, n_max), kPmfThreshold,
                                    "pmf_vs_matrix_power"));

  std::vector<double> errs;
  for (int k = 1; k <= 9; ++k) {
    const double s = 0.1 * k;
    errs.push_back(std::abs(pgf(law, s) - pgf_product_form(law, s)));
  }
  out.push_back(oracle::make_report("pgf_rational_vs_product", errs, kTransformThreshold));

  std::complex<double> prod = 1.0;
  for (std::size_t i = 0; i < law.spectrum.values.size(); ++i) prod *= law.spectrum.complement(i);
  out.push_back(detail::single("step_product_identity", std::abs(prod - law.leading) / law.leading, kProductThreshold));

  const Moments m = moments(law);
  out.push_back(detail::single("mean_vs_first_step", detail::relative(m.mean, oracle::expected_hitting_times(chain)[0]),
                               kMeanThreshold));

  const auto phase = phase_representation(law);
  if (phase.applicable())
    out.push_back(oracle::compare_pmf(table, oracle::geometric_sum_pmf(*phase.parameters, n_max), kPmfThreshold,
                                      "pmf_vs_geometric_convolution"));

  if (opt.paths > 0) {
    const auto xs = oracle::sample_hitting_times(chain, {opt.seed, opt.paths, 0, opt.lanes});
    out.push_back(detail::monte_carlo_mean(xs, m));
  }
  return out;
}

/// Every closed form for a continuous chain against its independent oracle.
inline std::vector<oracle::ComparisonReport> verify(const ContinuousChain& chain, const VerifyOptions& opt = {}) {
  std::vector<oracle::ComparisonReport> out;
  const HittingLaw law = build_law(chain, opt.real_tol);
  const Moments m = moments(law);

  const auto grid = make_grid(5.0 * m.mean, opt.grid_points);
  const DistributionTable table = pdf_cdf_table(law, grid);
  std::vector<double> errs;
  for (std::size_t i = 0; i < grid.size(); ++i)
    errs.push_back(std::abs(table.cumulative[i] - oracle::cdf_by_uniformization(chain, grid[i], kCdfOracleTol)));
  out.push_back(oracle::make_report("cdf_vs_uniformization[" + table.method + "]", errs, kCdfThreshold));

  errs.clear();
  for (int k = 1; k <= 9; ++k) {
    const double s = 0.1 * k;
    errs.push_back(std::abs(laplace(law, s) - laplace_product_form(law, s)));
  }
  out.push_back(oracle::make_report("laplace_rational_vs_product", errs, kTransformThreshold));

  std::complex<double> prod = 1.0;
  for (const auto& l : law.spectrum.values) prod *= l;
  out.push_back(detail::single("rate_product_identity", std::abs(prod - law.leading) / law.leading, kProductThreshold));

  out.push_back(detail::single("mean_vs_first_step", detail::relative(m.mean, oracle::expected_hitting_times(chain)[0]),
                               kMeanThreshold));

  if (opt.paths > 0) {
    const auto xs = oracle::sample_hitting_times(chain, {opt.seed, opt.paths, 0, opt.lanes});
    out.push_back(detail::monte_carlo_mean(xs, m));
  }
  return out;
}

inline std::vector<oracle::ComparisonReport> verify(const Chain& chain, const VerifyOptions& opt = {}) {
  return std::visit([&](const auto& c) { return verify(c, opt); }, chain);
}

inline bool all_passed(const std::vector<oracle::ComparisonReport>& reports) {
  for (const auto& r : reports)
    if (!r.passed) return false;
  return true;
}

}  // namespace skipfree
