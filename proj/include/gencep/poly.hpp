// SPDX-License-Identifier: Apache-2.0
#pragma once

/** @file
 * Causal polynomials in z^{-1}: c(z) = c_0 + c_1 z^{-1} + ... + c_n z^{-n}.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "gencep/error.hpp"

namespace gencep::poly {

using cplx = std::complex<double>;

inline std::vector<cplx> convolve(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<cplx> out(a.size() + b.size() - 1, cplx{});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline std::vector<cplx> power(std::span<const cplx> a, int n) {
  std::vector<cplx> out{cplx{1.0, 0.0}};
  for (int i = 0; i < n; ++i) out = convolve(out, a);
  return out;
}

/// c evaluated at z = e^{i theta}, i.e. sum_k c_k e^{-i k theta}.
inline cplx eval_on_circle(std::span<const cplx> c, double theta) {
  cplx acc{};
  const cplx w = std::polar(1.0, -theta);
  cplx zk{1.0, 0.0};
  for (const auto& ck : c) {
    acc += ck * zk;
    zk *= w;
  }
  return acc;
}

/// Roots in z of c_0 z^n + c_1 z^{n-1} + ... + c_n (the zeros of c(z) off the origin
/// plus a root at 0 for every vanishing trailing coefficient).
inline std::vector<cplx> roots(std::span<const cplx> c) {
  std::size_t lead = 0;
  while (lead < c.size() && c[lead] == cplx{}) ++lead;
  if (lead == c.size()) throw DomainError("roots of the zero polynomial");
  const std::size_t n = c.size() - lead - 1;
  if (n == 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) companion(0, static_cast<Eigen::Index>(j)) = -c[lead + j + 1] / c[lead];
  for (std::size_t j = 1; j < n; ++j) companion(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j - 1)) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
  if (es.info() != Eigen::Success) throw NumericalError("companion eigenvalue solver failed");
  std::vector<cplx> r(n);
  for (std::size_t j = 0; j < n; ++j) r[j] = es.eigenvalues()(static_cast<Eigen::Index>(j));
  return r;
}

inline double max_root_modulus(std::span<const cplx> c) {
  double m = 0.0;
  for (const auto& r : roots(c)) m = std::max(m, std::abs(r));
  return m;
}

/// Monic expansion prod_j (1 - r_j z^{-1}).
inline std::vector<cplx> from_roots(std::span<const cplx> r) {
  std::vector<cplx> out{cplx{1.0, 0.0}};
  for (const auto& root : r) {
    const cplx factor[2] = {cplx{1.0, 0.0}, -root};
    out = convolve(out, factor);
  }
  return out;
}

inline bool is_real(std::span<const cplx> c, double tol = 0.0) {
  return std::all_of(c.begin(), c.end(), [tol](const cplx& v) { return std::abs(v.imag()) <= tol; });
}

inline std::vector<cplx> from_real(std::span<const double> c) { return {c.begin(), c.end()}; }

}  // namespace gencep::poly
