// SPDX-License-Identifier: Apache-2.0
#pragma once

/** @file
 * Spectral factorization P = |b|^2 of positive trigonometric polynomials:
 * the Bauer (banded Cholesky) method, a root-selection oracle, and the
 * separable two-variable case.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gencep/error.hpp"
#include "gencep/grid.hpp"
#include "gencep/poly.hpp"
#include "gencep/spectra.hpp"
#include "gencep/trigpoly.hpp"

namespace gencep {

struct SpectralFactor {
  Shape shape;               // {n + 1} or {n1 + 1, n2 + 1}
  std::vector<cplx> coeffs;  // b, row-major in 2-d, b(theta) = sum b_j e^{-i<j,theta>}
  bool min_phase = false;
  double residual = 0.0;          // max | |b|^2 - P | on the check grid
  double max_root_modulus = 0.0;  // over all axes in 2-d
  std::string method;

  cplx operator()(std::size_t i) const { return coeffs.at(i); }
  cplx operator()(std::size_t i, std::size_t j) const { return coeffs.at(i * shape.at(1) + j); }
};

namespace detail {

inline constexpr std::size_t positivity_nodes = 8192;

// Coefficients p_0 .. p_n of a 1-d polynomial (p_{-k} = conj(p_k)).
inline std::vector<cplx> one_sided(const TrigPoly& p) {
  if (p.dim() != 1) throw DomainError("expected a one-variable polynomial");
  const int n = p.lags.radii()[0];
  std::vector<cplx> out(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) out[static_cast<std::size_t>(k)] = p.at(Lag{k});
  out[0] = cplx{out[0].real(), 0.0};
  while (out.size() > 1 && out.back() == cplx{}) out.pop_back();
  return out;
}

inline double eval_one_sided(const std::vector<cplx>& p, double theta) {
  double v = p[0].real();
  for (std::size_t k = 1; k < p.size(); ++k) v += 2.0 * (p[k] * std::polar(1.0, -theta * static_cast<double>(k))).real();
  return v;
}

inline void require_positive(const std::vector<cplx>& p) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t l = 0; l < positivity_nodes; ++l) {
    const double v = eval_one_sided(p, 2.0 * std::numbers::pi * static_cast<double>(l) / positivity_nodes);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > 0.0) || !(lo > 1e-10 * hi))
    throw DomainError("polynomial is not strictly positive (min " + std::to_string(lo) + ", max " +
                      std::to_string(hi) + ")");
}

inline double factor_residual(const std::vector<cplx>& b, const std::vector<cplx>& p) {
  double r = 0.0;
  for (std::size_t l = 0; l < positivity_nodes; ++l) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(l) / positivity_nodes;
    r = std::max(r, std::abs(std::norm(poly::eval_on_circle(b, th)) - eval_one_sided(p, th)));
  }
  return r;
}

// Last row of the banded Cholesky factor of the M x M Toeplitz matrix T_ij = p_{i-j}.
inline std::vector<cplx> bauer_band(const std::vector<cplx>& p, std::size_t m, double* row_change) {
  const std::size_t n = p.size() - 1;
  std::vector<std::vector<cplx>> band(m, std::vector<cplx>(n + 1));  // band[i][j] = L_{i, i-j}
  auto L = [&](std::size_t i, std::size_t c) -> cplx { return i - c <= n ? band[i][i - c] : cplx{}; };
  double change = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = std::min(n, i); j >= 1; --j) {
      const std::size_t c = i - j;
      cplx acc = p[j];
      for (std::size_t mm = (i >= n ? i - n : 0); mm < c; ++mm) acc -= L(i, mm) * std::conj(L(c, mm));
      band[i][j] = acc / band[c][0].real();
    }
    double d = p[0].real();
    for (std::size_t j = 1; j <= std::min(n, i); ++j) d -= std::norm(band[i][j]);
    if (!(d > 0.0)) throw FactorizationError("Toeplitz matrix lost positive definiteness at row " + std::to_string(i), d);
    band[i][0] = std::sqrt(d);
    if (i > 0) {
      change = 0.0;
      for (std::size_t j = 0; j <= n; ++j) change = std::max(change, std::abs(band[i][j] - band[i - 1][j]));
    }
  }
  if (row_change) *row_change = change;
  return band[m - 1];
}

}  // namespace detail

/**
 * Bauer's method: the rows of the Cholesky factor of the growing Toeplitz
 * matrix of P converge to the minimum-phase factor.  Retries once with 4M rows.
 */
inline SpectralFactor bauer_factorize_1d(const TrigPoly& p, std::size_t block_size = 512, double tol = 1e-8) {
  auto one = detail::one_sided(p);
  detail::require_positive(one);
  SpectralFactor f;
  f.shape = {one.size()};
  f.method = "bauer";
  if (one.size() == 1) {
    f.coeffs = {cplx{std::sqrt(one[0].real()), 0.0}};
    f.min_phase = true;
    return f;
  }
  const std::size_t n = one.size() - 1;
  double scale = std::abs(one[0]);
  double residual = 0.0;
  for (std::size_t m : {std::max(block_size, n + 1), 4 * std::max(block_size, n + 1)}) {
    double change = 0.0;
    auto row = detail::bauer_band(one, m, &change);
    f.coeffs.assign(row.begin(), row.end());  // band[j] = L_{M-1, M-1-j} = b_j
    f.coeffs[0] = cplx{f.coeffs[0].real(), 0.0};
    residual = detail::factor_residual(f.coeffs, one);
    if (change < tol * std::max(1.0, scale) && residual <= tol * std::max(1.0, scale)) {
      f.residual = residual;
      f.max_root_modulus = poly::max_root_modulus(f.coeffs);
      f.min_phase = f.max_root_modulus <= 1.0 - 1e-9;
      return f;
    }
  }
  throw FactorizationError("Bauer factorization did not converge", residual);
}

/// Oracle: keep the roots of z^n P(z) inside the unit disk, then fix the scale from p_0.
inline SpectralFactor min_phase_roots_1d(const TrigPoly& p) {
  auto one = detail::one_sided(p);
  detail::require_positive(one);
  SpectralFactor f;
  f.shape = {one.size()};
  f.method = "roots";
  const std::size_t n = one.size() - 1;
  if (n == 0) {
    f.coeffs = {cplx{std::sqrt(one[0].real()), 0.0}};
    f.min_phase = true;
    return f;
  }
  // Coefficient of z^{2n-i} in z^n P(z) is p_{i-n}.
  std::vector<cplx> laurent(2 * n + 1);
  for (std::size_t i = 0; i <= 2 * n; ++i) {
    const long k = static_cast<long>(i) - static_cast<long>(n);
    laurent[i] = k >= 0 ? one[static_cast<std::size_t>(k)] : std::conj(one[static_cast<std::size_t>(-k)]);
  }
  auto r = poly::roots(laurent);
  std::sort(r.begin(), r.end(), [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
  for (const auto& z : r)
    if (std::abs(std::abs(z) - 1.0) < 1e-8) throw NumericalError("degenerate spectrum: root on the unit circle");
  std::vector<cplx> inside(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n));
  auto monic = poly::from_roots(inside);
  double energy = 0.0;
  for (const auto& c : monic) energy += std::norm(c);
  const double b0 = std::sqrt(one[0].real() / energy);
  f.coeffs.resize(monic.size());
  for (std::size_t j = 0; j < monic.size(); ++j) f.coeffs[j] = b0 * monic[j];
  f.residual = detail::factor_residual(f.coeffs, one);
  f.max_root_modulus = std::abs(inside.back());
  f.min_phase = f.max_root_modulus <= 1.0 - 1e-9;
  return f;
}

namespace detail {

inline Eigen::MatrixXcd coefficient_matrix(const TrigPoly& p) {
  if (p.dim() != 2) throw DomainError("expected a two-variable polynomial");
  Shape shape;
  auto dense = p.dense_coefficients(&shape);
  Eigen::MatrixXcd c(static_cast<Eigen::Index>(shape[0]), static_cast<Eigen::Index>(shape[1]));
  for (std::size_t i = 0; i < shape[0]; ++i)
    for (std::size_t j = 0; j < shape[1]; ++j)
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dense[i * shape[1] + j];
  return c;
}

inline double separability_ratio(const Eigen::MatrixXcd& c) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
  const auto& s = svd.singularValues();
  if (s.size() < 2 || s(0) == 0.0) return 0.0;
  return s(1) / s(0);
}

// Hermitian 1-d polynomial from a centered coefficient vector, symmetrized.
inline TrigPoly axis_poly(const Eigen::VectorXcd& v) {
  const int n = static_cast<int>(v.size() / 2);
  TrigPoly p = TrigPoly::zero(LagSet::box(1, n));
  for (std::size_t r = 0; r < p.lags.size(); ++r) {
    const int k = p.lags[r][0];
    p.coeffs[r] = 0.5 * (v(n + k) + std::conj(v(n - k)));
  }
  p.coeffs[0] = cplx{p.coeffs[0].real(), 0.0};
  return p;
}

}  // namespace detail

/**
 * P(theta1, theta2) = P1(theta1) P2(theta2) from the leading singular pair of
 * the coefficient matrix; each axis is factored with Bauer and b = b1 (x) b2.
 * With `project` a non-separable P is replaced by its rank-1 approximation and
 * the reported residual measures the discrepancy to the original P.
 */
inline SpectralFactor factorize_2d_separable(const TrigPoly& p, bool project = false, double tol = 1e-8) {
  const auto c = detail::coefficient_matrix(p);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(0) > 0.0)) throw DomainError("zero polynomial");
  const double ratio = s.size() > 1 ? s(1) / s(0) : 0.0;
  if (ratio > 1e-8 && !project) throw SeparabilityError(ratio);
  Eigen::VectorXcd u = svd.matrixU().col(0);
  Eigen::VectorXcd v = svd.matrixV().col(0);
  const cplx centre = u(u.size() / 2);
  if (std::abs(centre) == 0.0) throw NumericalError("separable split has a vanishing mean");
  const cplx phase = std::conj(centre) / std::abs(centre);
  u *= phase;
  v *= phase;
  const double root = std::sqrt(s(0));
  const auto p1 = detail::axis_poly(u * root);
  const auto p2 = detail::axis_poly(v.conjugate() * root);
  auto b1 = bauer_factorize_1d(p1, 512, tol);
  auto b2 = bauer_factorize_1d(p2, 512, tol);
  SpectralFactor f;
  f.method = "separable-bauer";
  f.shape = {b1.coeffs.size(), b2.coeffs.size()};
  f.coeffs.resize(b1.coeffs.size() * b2.coeffs.size());
  for (std::size_t i = 0; i < b1.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b2.coeffs.size(); ++j) f.coeffs[i * b2.coeffs.size() + j] = b1.coeffs[i] * b2.coeffs[j];
  f.max_root_modulus = std::max(b1.max_root_modulus, b2.max_root_modulus);
  f.min_phase = b1.min_phase && b2.min_phase;
  // Residual against the original (possibly non-separable) P on a 64 x 64 grid.
  const FrequencyGrid grid(Shape{64, 64});
  const auto pv = p.eval(grid);
  double res = 0.0;
  for (std::size_t l = 0; l < grid.size(); ++l) {
    const auto th = grid.node(l);
    const double mag = std::norm(poly::eval_on_circle(b1.coeffs, th[0]) * poly::eval_on_circle(b2.coeffs, th[1]));
    res = std::max(res, std::abs(mag - pv[l]));
  }
  f.residual = res;
  return f;
}

struct FactorabilityReport {
  double singular_value_ratio = 0.0;
  bool separable = false;
  std::optional<std::size_t> covariance_rank;  // numerical rank of the lag-box covariance matrix
  std::size_t covariance_block_size = 0;
  bool general_condition_evaluated = false;
  std::string note;
};

/**
 * Separability test plus the numerical rank of the doubly-Toeplitz covariance
 * matrix over the polynomial's lag box.  The rank is reported for inspection
 * only; the general low-rank factorability condition is not evaluated.
 */
inline FactorabilityReport factorability_check_2d(const TrigPoly& p, const CovarianceSet* cov = nullptr) {
  FactorabilityReport rep;
  rep.singular_value_ratio = detail::separability_ratio(detail::coefficient_matrix(p));
  rep.separable = rep.singular_value_ratio <= 1e-8;
  rep.note = "general (non-separable) factorability condition not evaluated";
  if (cov) {
    if (cov->lags.dim() != 2) throw DomainError("covariance data must be two-dimensional");
    const auto radii = cov->lags.radii();
    const std::size_t n1 = static_cast<std::size_t>(radii[0]) + 1, n2 = static_cast<std::size_t>(radii[1]) + 1;
    const auto m = static_cast<Eigen::Index>(n1 * n2);
    Eigen::MatrixXcd t(m, m);
    for (std::size_t a = 0; a < n1 * n2; ++a)
      for (std::size_t b = 0; b < n1 * n2; ++b) {
        const Lag k{static_cast<int>(a / n2) - static_cast<int>(b / n2), static_cast<int>(a % n2) - static_cast<int>(b % n2)};
        cplx v{};
        if (cov->lags.find(k)) v = cov->at(k);
        t(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
      }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t);
    const auto& s = svd.singularValues();
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > 1e-8 * s(0)) ++rank;
    rep.covariance_rank = rank;
    rep.covariance_block_size = n1 * n2;
  }
  return rep;
}

}  // namespace gencep
