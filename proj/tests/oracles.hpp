// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent reference computations used as test oracles. Nothing here calls
// into the library's transforms, factorizers, or special functions.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// O(N^2) DFT by the defining sum.
inline std::vector<cplx> direct_dft(const std::vector<cplx>& x, int sign = -1) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t l = 0; l < n; ++l) {
    std::complex<long double> acc{};
    for (std::size_t t = 0; t < n; ++t) {
      const long double ang = sign * 2.0L * std::numbers::pi_v<long double> * static_cast<long double>((l * t) % n) /
                              static_cast<long double>(n);
      acc += std::complex<long double>(x[t].real(), x[t].imag()) * std::polar(1.0L, ang);
    }
    out[l] = cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
  }
  return out;
}

/// 2-d DFT by the double sum, row-major n1 x n2.
inline std::vector<cplx> direct_dft_2d(const std::vector<cplx>& x, std::size_t n1, std::size_t n2) {
  std::vector<cplx> out(n1 * n2);
  for (std::size_t l1 = 0; l1 < n1; ++l1)
    for (std::size_t l2 = 0; l2 < n2; ++l2) {
      cplx acc{};
      for (std::size_t t1 = 0; t1 < n1; ++t1)
        for (std::size_t t2 = 0; t2 < n2; ++t2) {
          const double ang = -2.0 * std::numbers::pi *
                             (static_cast<double>(l1 * t1) / static_cast<double>(n1) +
                              static_cast<double>(l2 * t2) / static_cast<double>(n2));
          acc += x[t1 * n2 + t2] * std::polar(1.0, ang);
        }
      out[l1 * n2 + l2] = acc;
    }
  return out;
}

/// Composite Simpson rule with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// 2F1(-a, -a; 1; z) by plain series summation in extended precision.
inline long double hyp2f1_series(long double a, long double z, std::size_t terms) {
  long double term = 1.0L, sum = 1.0L;
  for (std::size_t n = 0; n < terms; ++n) {
    const long double nn = static_cast<long double>(n);
    term *= (nn - a) * (nn - a) / ((nn + 1.0L) * (nn + 1.0L)) * z;
    sum += term;
  }
  return sum;
}

/// Coefficients p_0..p_n of |b(theta)|^2 = sum_k p_k e^{-ik theta}, p_{-k} = conj(p_k).
inline std::vector<cplx> autocorrelation(const std::vector<cplx>& b) {
  const std::size_t n = b.size() - 1;
  std::vector<cplx> p(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    for (std::size_t j = 0; j + k <= n; ++j) p[k] += b[j + k] * std::conj(b[j]);
  return p;
}

/// b(theta) = sum_j b_j e^{-ij theta}.
inline cplx eval_poly(const std::vector<cplx>& b, double theta) {
  cplx acc{};
  for (std::size_t j = 0; j < b.size(); ++j) acc += b[j] * std::polar(1.0, -static_cast<double>(j) * theta);
  return acc;
}

/// Impulse response by power-series long division of b(z^-1) / a(z^-1).
inline std::vector<double> long_division(const std::vector<double>& b, const std::vector<double>& a, std::size_t len) {
  std::vector<double> rem(len, 0.0), q(len, 0.0);
  for (std::size_t i = 0; i < b.size() && i < len; ++i) rem[i] = b[i];
  for (std::size_t t = 0; t < len; ++t) {
    q[t] = rem[t] / a[0];
    for (std::size_t j = 0; j < a.size() && t + j < len; ++j) rem[t + j] -= q[t] * a[j];
  }
  return q;
}

/// Random polynomial with all roots of modulus <= rmax, real or complex-conjugate paired.
inline std::vector<cplx> random_min_phase(std::mt19937_64& eng, std::size_t degree, double rmax, bool real) {
  std::uniform_real_distribution<double> mod(0.05, rmax), ang(0.0, std::numbers::pi), lead(0.5, 2.0);
  std::vector<cplx> roots;
  while (roots.size() < degree) {
    if (real && degree - roots.size() >= 2 && ang(eng) > 1.0) {
      const cplx r = std::polar(mod(eng), ang(eng));
      roots.push_back(r);
      roots.push_back(std::conj(r));
    } else {
      const double r = mod(eng) * (ang(eng) > std::numbers::pi / 2 ? -1.0 : 1.0);
      roots.push_back(cplx{r, real ? 0.0 : mod(eng) * 0.3});
      if (std::abs(roots.back()) >= rmax) roots.back() *= 0.9;
    }
  }
  std::vector<cplx> c{cplx{lead(eng), 0.0}};
  for (const auto& r : roots) {
    std::vector<cplx> next(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace oracle
