// SPDX-License-Identifier: Apache-2.0
#pragma once

/** @file
 * Special functions and grid quadrature shared by the statistical formulas.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>

#include "gencep/error.hpp"

namespace gencep {

using cplx = std::complex<double>;

/// Exponent of the generalized logarithm, restricted to the open interval (0,1).
class Alpha {
 public:
  explicit Alpha(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0)) {
      throw DomainError("alpha must lie in (0,1), got " + std::to_string(value));
    }
  }

  /// alpha = 1 - 1/nu for a cascade of nu >= 2 identical subsystems.
  static Alpha from_nu(int nu) {
    if (nu < 2) throw DomainError("nu must be >= 2, got " + std::to_string(nu));
    return Alpha(1.0 - 1.0 / static_cast<double>(nu));
  }

  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

/// Gamma function on the positive half line.
inline double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn requires x > 0, got " + std::to_string(x));
  return std::tgamma(x);
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1.
inline double pochhammer(double a, unsigned n) {
  double r = 1.0;
  for (unsigned i = 0; i < n; ++i) r *= a + static_cast<double>(i);
  return r;
}

namespace detail {

// Sum_{j>=1} t_{N+j} for the diagonal series, with N = n and t_N = last_term.
// At z = 1 the terms behave like K n^{-s} (1 + d/n), d = a(1 + a), and the tail
// follows from Euler-Maclaurin.  For z < 1 the leading law n^{-s} z^n is
// integrated numerically as N t_N \int_0^{v0} v^{s-2} exp(-beta (1/v - 1)) dv.
inline double hyp2f1_diag_tail(double last_term, double n, double s, double z) {
  if (z == 1.0) {
    const double a = 0.5 * s - 1.0, d = a * (1.0 + a);
    const double k = last_term * std::pow(n, s) / (1.0 + d / n);
    const double integral = k * (std::pow(n, 1.0 - s) / (s - 1.0) + d * std::pow(n, -s) / s);
    return integral - 0.5 * last_term + s * last_term / (12.0 * n);
  }
  const double beta = -n * std::log(z);
  const double v0 = 1.0 / (1.0 + 0.5 / n);
  constexpr int intervals = 4000;
  const double h = v0 / intervals;
  auto f = [&](double v) { return v <= 0.0 ? 0.0 : std::pow(v, s - 2.0) * std::exp(-beta * (1.0 / v - 1.0)); };
  double acc = f(0.0) + f(v0);
  for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return n * last_term * acc * h / 3.0;
}

}  // namespace detail

/**
 * Diagonal hypergeometric series 2F1(-alpha, -alpha; 1; z) for z in [0,1].
 *
 * Terms are [(-alpha)_n / n!]^2 z^n.  For z < 1 summation stops once a term
 * falls below 1e-14 of the partial sum or after 1e6 terms, adding an
 * asymptotic tail in the latter case.  At z = 1 the terms decay like
 * n^{-2-2 alpha}, so 1e4 terms are summed and the tail is added in closed form.
 */
inline double hyp2f1_diag(Alpha alpha, double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("hyp2f1_diag requires z in [0,1], got " + std::to_string(z));
  const double a = alpha.value();
  constexpr unsigned max_terms = 1000000;
  constexpr unsigned unit_terms = 10000;
  double term = 1.0;
  double sum = 1.0, carry = 0.0;  // compensated summation
  if (z == 0.0) return sum;
  unsigned n = 0;
  for (; n < max_terms; ++n) {
    const double ratio = (static_cast<double>(n) - a) / (static_cast<double>(n) + 1.0);
    term *= ratio * ratio * z;
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    if (std::abs(term) < 1e-14 * std::abs(sum) && z < 1.0) return sum;
    if (z == 1.0 && n + 1 == unit_terms) return sum + detail::hyp2f1_diag_tail(term, n + 1.0, 2.0 + 2.0 * a, z);
  }
  return sum + detail::hyp2f1_diag_tail(term, static_cast<double>(n), 2.0 + 2.0 * a, z);
}

/// Normalized Riemann sum (1/|N|) sum_l f(theta_l) over a regular grid.
inline double quadrature_mean(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("quadrature_mean of an empty grid");
  double acc = 0.0;
  for (double v : samples) acc += v;
  return acc / static_cast<double>(samples.size());
}

inline cplx quadrature_mean(std::span<const cplx> samples) {
  if (samples.empty()) throw DomainError("quadrature_mean of an empty grid");
  cplx acc{0.0, 0.0};
  for (const cplx& v : samples) acc += v;
  return acc / static_cast<double>(samples.size());
}

}  // namespace gencep
