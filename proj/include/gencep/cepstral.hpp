// SPDX-License-Identifier: Apache-2.0
#pragma once

/** @file
 * Generalized cepstral coefficients
 *
 *   m_k = (1/alpha) \int e^{i<k,theta>} Phi(theta)^alpha dmu          (k != 0)
 *   m_0 = (1/alpha) [\int Phi(theta)^alpha dmu - 1]
 *
 * and their periodogram-based estimator.  The raw estimator is biased by the
 * factor Gamma(alpha+1); the corrected form rescales by C = 1/Gamma(alpha+1)
 * and shifts the zero lag by (C - 1)/alpha.
 */

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "gencep/error.hpp"
#include "gencep/grid.hpp"
#include "gencep/numerics.hpp"
#include "gencep/spectra.hpp"

namespace gencep {

struct GenCepstralSet {
  Alpha alpha{0.5};
  LagSet lags;
  std::vector<cplx> coeffs;
  bool corrected = false;

  cplx at(const Lag& k) const {
    auto hit = lags.find(k);
    if (!hit) throw DomainError("lag " + lag_string(k) + " is not in the cepstral set");
    const cplx v = coeffs[hit->first];
    return hit->second ? std::conj(v) : v;
  }
  cplx operator[](std::size_t rep) const { return coeffs[rep]; }
  std::size_t size() const noexcept { return coeffs.size(); }

  void make_real() {
    for (auto& c : coeffs) c = cplx{c.real(), 0.0};
  }
};

/// s_alpha(x) = (x^alpha - 1)/alpha, with s_0 = log.
inline double gen_log(double x, double alpha) {
  if (!(x > 0.0)) throw DomainError("gen_log requires x > 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("gen_log requires alpha in [0,1]");
  if (alpha == 0.0) return std::log(x);
  return std::expm1(alpha * std::log(x)) / alpha;
}

/// C = 1 / Gamma(alpha + 1).
inline double correction_constant(Alpha alpha) { return 1.0 / gamma_fn(alpha.value() + 1.0); }

namespace detail {

// Shared by the true and estimated coefficients: (1/alpha) mean(e^{i<k,theta>} v)
// over the grid, minus 1/alpha at the zero lag.
inline std::vector<cplx> cepstral_sums(const FrequencyGrid& grid, const std::vector<double>& powered, Alpha alpha,
                                       const LagSet& lags) {
  std::vector<cplx> out(lags.size());
  const double a = alpha.value();
  const double inv = 1.0 / static_cast<double>(powered.size());
  for (std::size_t r = 0; r < lags.size(); ++r) {
    if (is_zero_lag(lags[r])) {
      double acc = 0.0;
      for (double v : powered) acc += v;
      out[r] = cplx{(acc * inv - 1.0) / a, 0.0};
      continue;
    }
    const auto e = grid.exponential(lags[r], +1);
    cplx acc{};
    for (std::size_t l = 0; l < powered.size(); ++l) acc += e[l] * powered[l];
    out[r] = acc * (inv / a);
  }
  return out;
}

inline Shape default_quadrature_shape(std::size_t dim) {
  if (dim == 1) return Shape{std::size_t{1} << 14};
  if (dim == 2) return Shape{512, 512};
  return Shape(dim, 64);
}

}  // namespace detail

using SpectrumFn = std::function<double(const std::vector<double>&)>;

/// Cepstral coefficients of an analytic spectrum by grid quadrature.
inline GenCepstralSet true_gen_cepstral(const SpectrumFn& phi, Alpha alpha, const LagSet& lags,
                                        std::optional<Shape> quad_shape = std::nullopt) {
  FrequencyGrid grid(quad_shape.value_or(detail::default_quadrature_shape(lags.dim())));
  if (grid.dim() != lags.dim()) throw DomainError("quadrature grid rank does not match the lag set");
  std::vector<double> powered(grid.size());
  for (std::size_t l = 0; l < powered.size(); ++l) {
    const double v = phi(grid.node(l));
    if (!(v > 0.0)) throw DomainError("spectrum is not positive at quadrature node " + std::to_string(l));
    powered[l] = std::pow(v, alpha.value());
  }
  return GenCepstralSet{alpha, lags, detail::cepstral_sums(grid, powered, alpha, lags), false};
}

/// Covariances of an analytic spectrum, c_k = \int e^{i<k,theta>} Phi dmu, by grid quadrature.
inline CovarianceSet true_covariances(const SpectrumFn& phi, const LagSet& lags,
                                      std::optional<Shape> quad_shape = std::nullopt) {
  FrequencyGrid grid(quad_shape.value_or(detail::default_quadrature_shape(lags.dim())));
  std::vector<double> v = grid.sample(phi);
  CovarianceSet out{lags, std::vector<cplx>(lags.size())};
  const double inv = 1.0 / static_cast<double>(v.size());
  for (std::size_t r = 0; r < lags.size(); ++r) {
    const auto e = grid.exponential(lags[r], +1);
    cplx acc{};
    for (std::size_t l = 0; l < v.size(); ++l) acc += e[l] * v[l];
    out.coeffs[r] = acc * inv;
  }
  out.coeffs[0] = cplx{out.coeffs[0].real(), 0.0};
  return out;
}

/**
 * Periodogram-based estimate on the periodogram's own grid (native N, or a
 * dense zero-padded K).  Zero periodogram nodes contribute 0^alpha = 0.
 */
inline GenCepstralSet estimate_gen_cepstral(const PeriodogramValues& pg, Alpha alpha, const LagSet& lags,
                                            bool corrected) {
  if (lags.dim() != pg.grid.dim()) throw DomainError("lag set dimension does not match the periodogram");
  std::vector<double> powered(pg.values.size());
  for (std::size_t l = 0; l < powered.size(); ++l) {
    const double v = pg.values[l];
    if (v < 0.0) throw DomainError("negative periodogram value at node " + std::to_string(l));
    powered[l] = v == 0.0 ? 0.0 : std::pow(v, alpha.value());
  }
  GenCepstralSet out{alpha, lags, detail::cepstral_sums(pg.grid, powered, alpha, lags), corrected};
  if (corrected) {
    const double c = correction_constant(alpha);
    for (std::size_t r = 0; r < lags.size(); ++r) {
      out.coeffs[r] *= c;
      if (is_zero_lag(lags[r])) out.coeffs[r] += (c - 1.0) / alpha.value();
    }
  }
  return out;
}

}  // namespace gencep
