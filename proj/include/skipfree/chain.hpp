#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "skipfree/errors.hpp"

namespace skipfree {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Rows of a transition matrix must sum to one within this absolute slack.
inline constexpr double kRowSumTolerance = 1e-12;

enum class TimeKind { discrete, continuous };

inline const char* to_string(TimeKind k) { return k == TimeKind::discrete ? "discrete" : "continuous"; }

/*
 * Discrete-time skip-free walk on {0, ..., d} with d absorbing.
 *
 * Row i (i < d) moves i -> i with probability hold(i), i -> i+1 with up(i)
 * and i -> j (j < i) with down(i)[j]. Only the lower triangle of downward
 * jumps is stored; no dense matrix exists until transient_block() asks for one.
 */
class DiscreteChain {
 public:
  DiscreteChain(std::vector<double> hold, std::vector<double> up,
                std::vector<std::vector<double>> down);

  std::size_t d() const noexcept { return up_.size(); }
  double hold(std::size_t i) const { return hold_.at(i); }
  double up(std::size_t i) const { return up_.at(i); }
  // q_{i,j} for j < i.
  double down(std::size_t i, std::size_t j) const { return down_.at(i).at(j); }

  const std::vector<double>& hold_probs() const noexcept { return hold_; }
  const std::vector<double>& up_probs() const noexcept { return up_; }
  const std::vector<std::vector<double>>& down_probs() const noexcept { return down_; }

  bool operator==(const DiscreteChain&) const = default;

 private:
  std::vector<double> hold_;
  std::vector<double> up_;
  std::vector<std::vector<double>> down_;
};

/*
 * Continuous-time skip-free chain on {0, ..., d} with d absorbing.
 *
 * State i jumps up at rate up(i) and down to j < i at rate down(i)[j]; the
 * total exit rate gamma(i) is derived, so each generator row sums to zero
 * by construction.
 */
class ContinuousChain {
 public:
  ContinuousChain(std::vector<double> up, std::vector<std::vector<double>> down);

  std::size_t d() const noexcept { return up_.size(); }
  double up(std::size_t i) const { return up_.at(i); }
  double down(std::size_t i, std::size_t j) const { return down_.at(i).at(j); }
  double gamma(std::size_t i) const { return gamma_.at(i); }

  const std::vector<double>& up_rates() const noexcept { return up_; }
  const std::vector<std::vector<double>>& down_rates() const noexcept { return down_; }
  const std::vector<double>& exit_rates() const noexcept { return gamma_; }

  bool operator==(const ContinuousChain&) const = default;

 private:
  std::vector<double> up_;
  std::vector<std::vector<double>> down_;
  std::vector<double> gamma_;
};

using Chain = std::variant<DiscreteChain, ContinuousChain>;

namespace detail {

inline void check_shape(std::size_t d, std::size_t other, const std::vector<std::vector<double>>& down,
                        const char* what) {
  if (d == 0) throw ValidationError(0, 0.0, "chain needs at least one transient state (d >= 1)");
  if (other != d) throw ValidationError(0, 0.0, std::string(what) + " length does not match d");
  if (down.size() != d) throw ValidationError(0, 0.0, "down-jump table must have d rows");
  for (std::size_t i = 0; i < d; ++i) {
    if (down[i].size() != i)
      throw ValidationError(i, 0.0, "down-jump row must have exactly " + std::to_string(i) + " entries");
  }
}

// Reverse breadth-first search from the absorbing state over positive edges.
template <class UpFn, class DownFn>
bool all_reach_top(std::size_t d, UpFn up, DownFn down) {
  std::vector<bool> reached(d + 1, false);
  reached[d] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < d; ++i) {
      if (reached[i]) continue;
      bool hit = up(i) > 0.0 && reached[i + 1];
      for (std::size_t j = 0; j < i && !hit; ++j) hit = down(i, j) > 0.0 && reached[j];
      if (hit) {
        reached[i] = true;
        changed = true;
      }
    }
  }
  for (bool r : reached)
    if (!r) return false;
  return true;
}

}  // namespace detail

/// True iff every transient state can reach the absorbing state.
inline bool reaches_absorption(const DiscreteChain& c) {
  return detail::all_reach_top(
      c.d(), [&](std::size_t i) { return c.up(i); },
      [&](std::size_t i, std::size_t j) { return c.down(i, j); });
}

inline bool reaches_absorption(const ContinuousChain& c) {
  return detail::all_reach_top(
      c.d(), [&](std::size_t i) { return c.up(i); },
      [&](std::size_t i, std::size_t j) { return c.down(i, j); });
}

inline bool reaches_absorption(const Chain& c) {
  return std::visit([](const auto& x) { return reaches_absorption(x); }, c);
}

inline DiscreteChain::DiscreteChain(std::vector<double> hold, std::vector<double> up,
                                    std::vector<std::vector<double>> down)
    : hold_(std::move(hold)), up_(std::move(up)), down_(std::move(down)) {
  const std::size_t d = up_.size();
  detail::check_shape(d, hold_.size(), down_, "hold");
  auto in_unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
  for (std::size_t i = 0; i < d; ++i) {
    if (!in_unit(hold_[i]) || !in_unit(up_[i]))
      throw ValidationError(i, 0.0, "probabilities must lie in [0, 1]");
    for (double q : down_[i])
      if (!in_unit(q)) throw ValidationError(i, 0.0, "probabilities must lie in [0, 1]");
    if (!(up_[i] > 0.0)) throw ValidationError(i, 0.0, "upward probability must be positive");
    double sum = hold_[i] + up_[i];
    for (double q : down_[i]) sum += q;
    const double residual = sum - 1.0;
    if (std::abs(residual) > kRowSumTolerance)
      throw ValidationError(i, residual, "row sums to " + std::to_string(sum) + " (residual " +
                                             std::to_string(residual) + ")");
  }
  if (!reaches_absorption(*this)) throw ValidationError(0, 0.0, "absorbing state is unreachable");
}

inline ContinuousChain::ContinuousChain(std::vector<double> up, std::vector<std::vector<double>> down)
    : up_(std::move(up)), down_(std::move(down)) {
  const std::size_t d = up_.size();
  detail::check_shape(d, d, down_, "up");
  gamma_.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!std::isfinite(up_[i]) || !(up_[i] > 0.0))
      throw ValidationError(i, 0.0, "upward rate must be positive and finite");
    double g = up_[i];
    for (double b : down_[i]) {
      if (!std::isfinite(b) || b < 0.0) throw ValidationError(i, 0.0, "down rates must be finite and >= 0");
      g += b;
    }
    gamma_[i] = g;
  }
  if (!reaches_absorption(*this)) throw ValidationError(0, 0.0, "absorbing state is unreachable");
}

/// Principal (n+1)x(n+1) submatrix of P over states 0..n. Lower Hessenberg.
inline Matrix transient_block(const DiscreteChain& c, std::size_t n) {
  if (n >= c.d()) throw RangeError("transient_block: n=" + std::to_string(n) + " outside 0.." + std::to_string(c.d() - 1));
  Matrix m = Matrix::Zero(n + 1, n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    m(i, i) = c.hold(i);
    if (i + 1 <= n) m(i, i + 1) = c.up(i);
    for (std::size_t j = 0; j < i; ++j) m(i, j) = c.down(i, j);
  }
  return m;
}

/// Principal (n+1)x(n+1) submatrix of the generator Q over states 0..n.
inline Matrix transient_block(const ContinuousChain& c, std::size_t n) {
  if (n >= c.d()) throw RangeError("transient_block: n=" + std::to_string(n) + " outside 0.." + std::to_string(c.d() - 1));
  Matrix m = Matrix::Zero(n + 1, n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    m(i, i) = -c.gamma(i);
    if (i + 1 <= n) m(i, i + 1) = c.up(i);
    for (std::size_t j = 0; j < i; ++j) m(i, j) = c.down(i, j);
  }
  return m;
}

// The chain restricted to {0, ..., m} with m made absorbing. Rows below m only
// ever touch states <= m, so hitting times of m are unchanged.
inline DiscreteChain truncate(const DiscreteChain& c, std::size_t m) {
  if (m == 0 || m > c.d()) throw RangeError("truncate: target outside 1..d");
  return DiscreteChain({c.hold_probs().begin(), c.hold_probs().begin() + m},
                       {c.up_probs().begin(), c.up_probs().begin() + m},
                       {c.down_probs().begin(), c.down_probs().begin() + m});
}

inline ContinuousChain truncate(const ContinuousChain& c, std::size_t m) {
  if (m == 0 || m > c.d()) throw RangeError("truncate: target outside 1..d");
  return ContinuousChain({c.up_rates().begin(), c.up_rates().begin() + m},
                         {c.down_rates().begin(), c.down_rates().begin() + m});
}

inline std::size_t absorbing_state(const Chain& c) {
  return std::visit([](const auto& x) { return x.d(); }, c);
}

}  // namespace skipfree
