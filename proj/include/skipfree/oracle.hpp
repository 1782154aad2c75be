#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "skipfree/chain.hpp"
#include "skipfree/errors.hpp"
#include "skipfree/linalg.hpp"
#include "skipfree/random.hpp"
#include "skipfree/table.hpp"

// Brute-force engines that never touch the determinant recurrences or the
// spectrum: transient-vector iteration, uniformization, first-step linear
// systems and path simulation.
namespace skipfree::oracle {

/// P(tau_{0,d} = n) for n = 1..n_max by propagating the transient row vector.
/// tail_bound is the transient mass left after n_max steps.
inline DistributionTable pmf_by_matrix_power(const DiscreteChain& chain, std::size_t n_max) {
  const std::size_t d = chain.d();
  if (n_max < d) throw RangeError("pmf_by_matrix_power: n_max must be >= d");
  std::vector<double> v(d, 0.0), next(d);
  v[0] = 1.0;
  DistributionTable t;
  t.kind = TimeKind::discrete;
  t.method = "matrix_power";
  t.support.reserve(n_max);
  double cum = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double mass = v[d - 1] * chain.up(d - 1);
    cum += mass;
    t.support.push_back(static_cast<double>(n));
    t.mass_or_density.push_back(mass);
    t.cumulative.push_back(cum);
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      if (v[i] == 0.0) continue;
      next[i] += v[i] * chain.hold(i);
      if (i + 1 < d) next[i + 1] += v[i] * chain.up(i);
      for (std::size_t j = 0; j < i; ++j) next[j] += v[i] * chain.down(i, j);
    }
    v.swap(next);
  }
  double left = 0.0;
  for (double x : v) left += x;
  t.tail_bound = left;
  return t;
}

/// P(G_1 + ... + G_m = n), n = 1..n_max, for independent G_i ~ Geometric(success_i)
/// on {1, 2, ...}. Each factor is convolved in with y_n = p x_{n-1} + (1 - p) y_{n-1},
/// the running form of sum_k p (1-p)^{k-1} x_{n-k}.
inline DistributionTable geometric_sum_pmf(const std::vector<double>& success, std::size_t n_max) {
  std::vector<double> x(n_max + 1, 0.0), y(n_max + 1);
  x[0] = 1.0;
  for (double p : success) {
    if (!(p > 0.0 && p <= 1.0)) throw RangeError("geometric_sum_pmf: success probability must lie in (0, 1]");
    y[0] = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) y[n] = p * x[n - 1] + (1.0 - p) * y[n - 1];
    x.swap(y);
  }
  DistributionTable t;
  t.kind = TimeKind::discrete;
  t.method = "geometric_convolution";
  double cum = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    cum += x[n];
    t.support.push_back(static_cast<double>(n));
    t.mass_or_density.push_back(x[n]);
    t.cumulative.push_back(cum);
  }
  t.tail_bound = std::max(0.0, 1.0 - cum);
  return t;
}

struct UniformizationValue {
  double cdf = 0.0;
  double density = 0.0;
};

/*
 * P(tau <= t) and the density of tau at t by uniformization:
 *
 *   e^{Q t} = sum_k Pois(L t; k) (I + Q / L)^k,   L = max_i gamma_i,
 *
 * truncated once the Poisson right tail drops below tol. Poisson weights start
 * at the mode and recur outwards so large L t neither underflows nor overflows.
 * Absolute error of the CDF is at most tol (plus rounding).
 */
inline UniformizationValue uniformize(const ContinuousChain& chain, double t, double tol) {
  if (!(t >= 0.0)) throw RangeError("uniformization: t must be >= 0");
  if (!(tol > 0.0)) throw RangeError("uniformization: tol must be > 0");
  const std::size_t d = chain.d();
  double rate = 0.0;
  for (std::size_t i = 0; i < d; ++i) rate = std::max(rate, chain.gamma(i));
  const double lt = rate * t;

  std::vector<double> w;
  if (lt == 0.0) {
    w = {1.0};
  } else {
    const auto mode = static_cast<std::size_t>(std::floor(lt));
    const double w_mode = std::exp(-lt + static_cast<double>(mode) * std::log(lt) - std::lgamma(static_cast<double>(mode) + 1.0));
    w.assign(mode + 1, 0.0);
    w[mode] = w_mode;
    for (std::size_t k = mode; k > 0; --k) w[k - 1] = w[k] * static_cast<double>(k) / lt;
    for (std::size_t k = mode;; ++k) {
      const double nxt = w[k] * lt / static_cast<double>(k + 1);
      // Tail past k is below nxt / (1 - lt/(k+2)) once k+2 > lt.
      const double ratio = lt / static_cast<double>(k + 2);
      if (ratio < 1.0 && nxt / (1.0 - ratio) <= 0.5 * tol) break;
      w.push_back(nxt);
    }
  }

  std::vector<double> v(d, 0.0), next(d);
  v[0] = 1.0;
  double survive = 0.0, at_top = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] != 0.0) {
      double s = 0.0;
      for (double x : v) s += x;
      survive += w[k] * s;
      at_top += w[k] * v[d - 1];
    }
    if (k + 1 == w.size()) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      if (v[i] == 0.0) continue;
      const double x = v[i] / rate;
      next[i] += v[i] - x * chain.gamma(i);
      if (i + 1 < d) next[i + 1] += x * chain.up(i);
      for (std::size_t j = 0; j < i; ++j) next[j] += x * chain.down(i, j);
    }
    v.swap(next);
  }
  return {std::clamp(1.0 - survive, 0.0, 1.0), chain.up(d - 1) * at_top};
}

inline double cdf_by_uniformization(const ContinuousChain& chain, double t, double tol) {
  return uniformize(chain, t, tol).cdf;
}

inline double density_by_uniformization(const ContinuousChain& chain, double t, double tol) {
  return uniformize(chain, t, tol).density;
}

/// Mean hitting times h_i of state d from each transient state i, from the
/// first-step system (I - P_{d-1}) h = 1 or (-Q_{d-1}) h = 1.
inline std::vector<double> expected_hitting_times(const DiscreteChain& chain) {
  const std::size_t d = chain.d();
  const Matrix a = Matrix::Identity(d, d) - transient_block(chain, d - 1);
  const Vector h = linalg::solve(a, Vector::Ones(d));
  return {h.data(), h.data() + h.size()};
}

inline std::vector<double> expected_hitting_times(const ContinuousChain& chain) {
  const std::size_t d = chain.d();
  const Vector h = linalg::solve(-transient_block(chain, d - 1), Vector::Ones(d));
  return {h.data(), h.data() + h.size()};
}

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::size_t paths = 1;
  std::size_t start_state = 0;
  std::size_t lanes = 0;  // worker threads; 0 picks hardware concurrency
};

inline constexpr std::uint64_t kMaxStepsPerPath = 1'000'000'000ULL;

namespace detail {

struct JumpTable {
  std::vector<double> cum;            // cumulative weights
  std::vector<std::size_t> dest;      // destination of each weight
};

template <class Fn>
void run_lanes(std::size_t paths, std::size_t lanes, Fn body) {
  if (lanes == 0) lanes = std::max(1u, std::thread::hardware_concurrency());
  lanes = std::min(lanes, paths);
  if (lanes <= 1) {
    body(std::size_t{0}, paths);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(lanes);
  const std::size_t block = (paths + lanes - 1) / lanes;
  for (std::size_t l = 0; l < lanes; ++l) {
    const std::size_t lo = l * block, hi = std::min(paths, lo + block);
    workers.emplace_back([&, l, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        errors[l] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::size_t pick(const JumpTable& row, double u) {
  const double x = u * row.cum.back();
  const auto it = std::upper_bound(row.cum.begin(), row.cum.end(), x);
  const auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - row.cum.begin(),
                                                                     static_cast<std::ptrdiff_t>(row.cum.size()) - 1));
  return row.dest[idx];
}

inline void check_config(std::size_t d, const SamplerConfig& cfg) {
  if (cfg.paths == 0) throw RangeError("sampler: paths must be >= 1");
  if (cfg.start_state >= d) throw RangeError("sampler: start_state must lie in 0..d-1");
}

}  // namespace detail

/*
 * Independent absorption times tau_{start,d} in steps. A run of holds at state i
 * is Geometric and drawn with a single uniform; the move that ends it is drawn
 * from the non-hold entries of row i. Deterministic for a given seed
 * regardless of the number of lanes.
 */
inline std::vector<std::uint64_t> sample_hitting_times(const DiscreteChain& chain, const SamplerConfig& cfg) {
  const std::size_t d = chain.d();
  detail::check_config(d, cfg);
  // Non-hold moves only; holding time at i is geometric and drawn in one go.
  std::vector<detail::JumpTable> moves(d);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = chain.up(i);
    moves[i].cum.push_back(acc);
    moves[i].dest.push_back(i + 1);
    for (std::size_t j = 0; j < i; ++j) {
      if (chain.down(i, j) == 0.0) continue;
      acc += chain.down(i, j);
      moves[i].cum.push_back(acc);
      moves[i].dest.push_back(j);
    }
  }
  std::vector<double> log_hold(d);
  for (std::size_t i = 0; i < d; ++i) log_hold[i] = chain.hold(i) > 0.0 ? std::log(chain.hold(i)) : 0.0;

  std::vector<std::uint64_t> out(cfg.paths);
  detail::run_lanes(cfg.paths, cfg.lanes, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      auto rng = SplitMix64::for_path(cfg.seed, k);
      std::size_t state = cfg.start_state;
      std::uint64_t steps = 0;
      while (state != d) {
        if (chain.hold(state) > 0.0) {
          // P(H >= h) = r^h, so H = floor(log U / log r) with U in (0, 1].
          const double u = 1.0 - rng.uniform();
          const double h = std::floor(std::log(u) / log_hold[state]);
          steps += h < 1e18 ? static_cast<std::uint64_t>(h) : kMaxStepsPerPath;
        }
        ++steps;
        if (steps > kMaxStepsPerPath)
          throw RunawayPathError("path " + std::to_string(k) + " exceeded " + std::to_string(kMaxStepsPerPath) + " steps");
        state = detail::pick(moves[state], rng.uniform());
      }
      out[k] = steps;
    }
  });
  return out;
}

/// Independent absorption times tau_{start,d}: Exponential(gamma_i) holding,
/// then a jump up with probability alpha_i/gamma_i or down to j with beta_{i,j}/gamma_i.
inline std::vector<double> sample_hitting_times(const ContinuousChain& chain, const SamplerConfig& cfg) {
  const std::size_t d = chain.d();
  detail::check_config(d, cfg);
  std::vector<detail::JumpTable> moves(d);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = chain.up(i);
    moves[i].cum.push_back(acc);
    moves[i].dest.push_back(i + 1);
    for (std::size_t j = 0; j < i; ++j) {
      if (chain.down(i, j) == 0.0) continue;
      acc += chain.down(i, j);
      moves[i].cum.push_back(acc);
      moves[i].dest.push_back(j);
    }
  }
  std::vector<double> out(cfg.paths);
  detail::run_lanes(cfg.paths, cfg.lanes, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      auto rng = SplitMix64::for_path(cfg.seed, k);
      std::size_t state = cfg.start_state;
      std::uint64_t jumps = 0;
      double time = 0.0;
      while (state != d) {
        if (++jumps > kMaxStepsPerPath)
          throw RunawayPathError("path " + std::to_string(k) + " exceeded " + std::to_string(kMaxStepsPerPath) + " jumps");
        time += rng.exponential(chain.gamma(state));
        state = detail::pick(moves[state], rng.uniform());
      }
      out[k] = time;
    }
  });
  return out;
}

struct ComparisonReport {
  std::string name;
  double max_abs_err = 0.0;
  double mean_err = 0.0;
  std::size_t n_points = 0;
  bool passed = false;
  double threshold = 0.0;
};

inline ComparisonReport make_report(std::string name, const std::vector<double>& abs_errors, double threshold) {
  ComparisonReport r;
  r.name = std::move(name);
  r.threshold = threshold;
  r.n_points = abs_errors.size();
  double sum = 0.0;
  bool nan = false;
  for (double e : abs_errors) {
    nan = nan || std::isnan(e);
    r.max_abs_err = std::max(r.max_abs_err, e);
    sum += e;
  }
  if (nan) r.max_abs_err = std::numeric_limits<double>::quiet_NaN();
  r.mean_err = abs_errors.empty() ? 0.0 : sum / static_cast<double>(abs_errors.size());
  r.passed = r.max_abs_err <= threshold;
  return r;
}

/// Pointwise |analytic - oracle| over the support values both tables share.
inline ComparisonReport compare_pmf(const DistributionTable& analytic, const DistributionTable& oracle_table,
                                    double threshold, std::string name = "pmf") {
  std::vector<double> errs;
  std::size_t i = 0, j = 0;
  while (i < analytic.size() && j < oracle_table.size()) {
    if (analytic.support[i] < oracle_table.support[j]) {
      ++i;
    } else if (oracle_table.support[j] < analytic.support[i]) {
      ++j;
    } else {
      errs.push_back(std::abs(analytic.mass_or_density[i] - oracle_table.mass_or_density[j]));
      ++i;
      ++j;
    }
  }
  if (errs.empty()) throw SupportMismatchError("compare_pmf: tables share no support points");
  return make_report(std::move(name), errs, threshold);
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
template <class T>
double ks_statistic(std::vector<T> a, std::vector<T> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double dmax = 0.0;
  while (i < a.size() && j < b.size()) {
    const T x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    dmax = std::max(dmax, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return dmax;
}

/// Asymptotic two-sample KS critical value at level alpha.
inline double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

}  // namespace skipfree::oracle
