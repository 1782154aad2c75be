#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

namespace skipfree {

/*
 * Dense polynomial with coefficients in ascending powers: coeffs[k] multiplies x^k.
 *
 * Only exact trailing zeros are trimmed, never small ones, so the zero polynomial
 * is stored as {0} and tiny high-order coefficients survive arithmetic intact.
 */
template <class T>
class BasicPolynomial {
 public:
  using value_type = T;

  BasicPolynomial() : coeffs_{T(0)} {}
  BasicPolynomial(std::initializer_list<T> c) : coeffs_(c) { trim(); }
  explicit BasicPolynomial(std::vector<T> c) : coeffs_(std::move(c)) { trim(); }

  static BasicPolynomial monomial(std::size_t power, T coeff = T(1)) {
    std::vector<T> c(power + 1, T(0));
    c[power] = coeff;
    return BasicPolynomial(std::move(c));
  }

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  const std::vector<T>& coeffs() const noexcept { return coeffs_; }
  // Coefficient of x^k; zero past the degree.
  T operator[](std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : T(0); }
  bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == T(0); }

  // Horner evaluation.
  template <class U>
  auto operator()(const U& x) const {
    using R = decltype(T() * U());
    R acc = R(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + R(*it);
    return acc;
  }

  BasicPolynomial& operator+=(const BasicPolynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }
  BasicPolynomial& operator-=(const BasicPolynomial& o) { return *this += -o; }
  BasicPolynomial& operator*=(const T& c) {
    for (auto& x : coeffs_) x *= c;
    trim();
    return *this;
  }

  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
  friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
  friend BasicPolynomial operator*(BasicPolynomial a, const T& c) { return a *= c; }
  friend BasicPolynomial operator*(const T& c, BasicPolynomial a) { return a *= c; }
  friend BasicPolynomial operator-(BasicPolynomial a) { return a *= T(-1); }

  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    std::vector<T> out(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return BasicPolynomial(std::move(out));
  }

  bool operator==(const BasicPolynomial&) const = default;

  friend std::ostream& operator<<(std::ostream& os, const BasicPolynomial& p) {
    os << '[';
    for (std::size_t k = 0; k < p.coeffs_.size(); ++k) os << (k ? ", " : "") << p.coeffs_[k];
    return os << ']';
  }

 private:
  void trim() {
    if (coeffs_.empty()) coeffs_.push_back(T(0));
    while (coeffs_.size() > 1 && coeffs_.back() == T(0)) coeffs_.pop_back();
  }

  std::vector<T> coeffs_;
};

using Polynomial = BasicPolynomial<double>;
using ComplexPolynomial = BasicPolynomial<std::complex<double>>;

template <class T>
BasicPolynomial<T> derivative(const BasicPolynomial<T>& p) {
  if (p.degree() == 0) return BasicPolynomial<T>();
  std::vector<T> out(p.degree());
  for (std::size_t k = 1; k < p.size(); ++k) out[k - 1] = p.coeffs()[k] * T(static_cast<double>(k));
  return BasicPolynomial<T>(std::move(out));
}

// Sum of |c_k| |x|^k: the scale against which a Horner residual at x is judged.
template <class T>
double evaluation_scale(const BasicPolynomial<T>& p, double abs_x) {
  double acc = 0.0;
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * abs_x + std::abs(*it);
  return acc;
}

// Expands prod_i (x - r_i) for the given roots.
inline ComplexPolynomial from_roots(const std::vector<std::complex<double>>& roots) {
  ComplexPolynomial out{std::complex<double>(1.0)};
  for (const auto& r : roots) out = out * ComplexPolynomial{-r, std::complex<double>(1.0)};
  return out;
}

}  // namespace skipfree
