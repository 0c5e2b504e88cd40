// SPDX-License-Identifier: Apache-2.0
#pragma once

/** @file
 * Periodogram, biased covariance estimates and lag-window smoothing.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gencep/error.hpp"
#include "gencep/fft.hpp"
#include "gencep/grid.hpp"
#include "gencep/numerics.hpp"
#include "gencep/signal.hpp"

namespace gencep {

/// Periodogram values |Y(theta_l)|^2 / |N| on a (possibly zero-padded) grid.
struct PeriodogramValues {
  FrequencyGrid grid;
  Shape sample_shape;
  std::vector<double> values;
  bool windowed = false;

  double mean() const { return quadrature_mean(values); }
};

/// Covariances c_k over a symmetric lag set, stored once per {k, -k} pair.
struct CovarianceSet {
  LagSet lags;
  std::vector<cplx> coeffs;

  cplx at(const Lag& k) const {
    auto hit = lags.find(k);
    if (!hit) throw DomainError("lag " + lag_string(k) + " is not in the covariance set");
    const cplx v = coeffs[hit->first];
    return hit->second ? std::conj(v) : v;
  }
  cplx operator[](std::size_t rep) const { return coeffs[rep]; }
  std::size_t size() const noexcept { return coeffs.size(); }

  /// Zero imaginary parts (real processes).
  void make_real() {
    for (auto& c : coeffs) c = cplx{c.real(), 0.0};
  }
};

inline PeriodogramValues periodogram(const SampleRecord& record, std::optional<Shape> dense = std::nullopt) {
  record.validate();
  Shape grid_shape = dense.value_or(record.shape);
  if (grid_shape.size() != record.dim()) throw DomainError("dense grid rank does not match the record");
  for (std::size_t j = 0; j < record.dim(); ++j)
    if (grid_shape[j] < record.shape[j])
      throw DomainError("dense grid size " + shape_string(grid_shape) + " is smaller than the sample shape " +
                        shape_string(record.shape));
  std::vector<cplx> y = grid_shape == record.shape ? record.data : fft::zero_pad(record.data, record.shape, grid_shape);
  auto spec = fft::transform(y, grid_shape, fft::Direction::forward);
  PeriodogramValues pg;
  pg.grid = FrequencyGrid(grid_shape);
  pg.sample_shape = record.shape;
  pg.values.resize(spec.size());
  const double inv = 1.0 / static_cast<double>(record.size());
  for (std::size_t l = 0; l < spec.size(); ++l) pg.values[l] = std::norm(spec[l]) * inv;
  return pg;
}

/// c_k = (1/|N|) sum_t y_{t+k} y_t^*, summed over the offsets that stay inside the box.
inline CovarianceSet biased_covariances(const SampleRecord& record, const LagSet& lags) {
  record.validate();
  if (lags.dim() != record.dim()) throw DomainError("lag set dimension does not match the record");
  CovarianceSet out{lags, std::vector<cplx>(lags.size())};
  const auto& shape = record.shape;
  const auto st = strides(shape);
  const double inv = 1.0 / static_cast<double>(record.size());
  for (std::size_t r = 0; r < lags.size(); ++r) {
    const Lag& k = lags[r];
    std::ptrdiff_t offset = 0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (static_cast<std::size_t>(std::abs(k[j])) >= shape[j])
        throw DomainError("lag " + lag_string(k) + " exceeds the sample extent " + shape_string(shape));
      offset += static_cast<std::ptrdiff_t>(k[j]) * static_cast<std::ptrdiff_t>(st[j]);
    }
    cplx acc{};
    if (record.dim() == 1) {
      const std::size_t n = shape[0];
      const std::size_t lag = static_cast<std::size_t>(k[0]);  // canonical => k >= 0
      for (std::size_t t = 0; t + lag < n; ++t) acc += record.data[t + lag] * std::conj(record.data[t]);
    } else {
      for (std::size_t flat = 0; flat < record.size(); ++flat) {
        auto t = unravel(flat, shape);
        bool inside = true;
        for (std::size_t j = 0; j < k.size() && inside; ++j) {
          const auto s = static_cast<std::ptrdiff_t>(t[j]) + k[j];
          inside = s >= 0 && s < static_cast<std::ptrdiff_t>(shape[j]);
        }
        if (inside) acc += record.data[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(flat) + offset)] *
                           std::conj(record.data[flat]);
      }
    }
    out.coeffs[r] = acc * inv;
  }
  out.coeffs[0] = cplx{out.coeffs[0].real(), 0.0};
  if (record.is_real) out.make_real();
  return out;
}

/**
 * c_k = (1/|K|) sum_l e^{i <k, theta_l>} Phi_l.  Exact (equal to the time
 * average) only when the periodogram grid satisfies K_j >= 2 N_j - 1.
 */
inline CovarianceSet covariances_from_periodogram(const PeriodogramValues& pg, const LagSet& lags) {
  const Shape& grid = pg.grid.shape();
  if (lags.dim() != grid.size()) throw DomainError("lag set dimension does not match the periodogram");
  for (std::size_t j = 0; j < grid.size(); ++j)
    if (grid[j] + 1 < 2 * pg.sample_shape[j])
      throw DomainError("exact covariance recovery needs K >= 2N - 1 on every axis; got K = " + shape_string(grid) +
                        " for N = " + shape_string(pg.sample_shape));
  std::vector<cplx> phi(pg.values.begin(), pg.values.end());
  auto c = idft_nd(phi, grid);
  CovarianceSet out{lags, std::vector<cplx>(lags.size())};
  for (std::size_t r = 0; r < lags.size(); ++r) {
    std::vector<std::size_t> idx(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (static_cast<std::size_t>(std::abs(lags[r][j])) >= pg.sample_shape[j])
        throw DomainError("lag " + lag_string(lags[r]) + " exceeds the sample extent");
      const auto kj = static_cast<std::ptrdiff_t>(lags[r][j]);
      const auto n = static_cast<std::ptrdiff_t>(grid[j]);
      idx[j] = static_cast<std::size_t>(((kj % n) + n) % n);
    }
    out.coeffs[r] = c[ravel(idx, grid)];
  }
  out.coeffs[0] = cplx{out.coeffs[0].real(), 0.0};
  return out;
}

enum class Window { rectangular, bartlett, parzen };

inline Window parse_window(const std::string& name) {
  if (name == "rectangular") return Window::rectangular;
  if (name == "bartlett") return Window::bartlett;
  if (name == "parzen") return Window::parzen;
  throw DomainError("unknown window '" + name + "'");
}

/// Lag window w(k) with truncation point m (ignored by the rectangular window).
inline double window_weight(Window w, long k, double m) {
  const double u = std::abs(static_cast<double>(k)) / m;
  switch (w) {
    case Window::rectangular:
      return 1.0;
    case Window::bartlett:
      return u < 1.0 ? 1.0 - u : 0.0;
    case Window::parzen:
      if (u <= 0.5) return 1.0 - 6.0 * u * u + 6.0 * u * u * u;
      if (u <= 1.0) return 2.0 * (1.0 - u) * (1.0 - u) * (1.0 - u);
      return 0.0;
  }
  return 0.0;
}

/// sum_{|k| < N} w(k) c_k e^{-i k theta} on the native size-N grid.
inline PeriodogramValues windowed_periodogram(const SampleRecord& record, Window window,
                                              std::optional<double> truncation = std::nullopt) {
  record.validate();
  if (record.dim() != 1) throw DomainError("windowed_periodogram is one-dimensional");
  const std::size_t n = record.size();
  const double m = truncation.value_or(std::max(1.0, static_cast<double>(n) / 5.0));
  if (!(m > 0.0)) throw DomainError("window truncation point must be positive");
  // All biased covariances at once from the zero-padded periodogram.
  auto dense = periodogram(record, Shape{2 * n - 1});
  std::vector<cplx> phi(dense.values.begin(), dense.values.end());
  auto c = idft(phi);
  const auto k2 = static_cast<long>(2 * n - 1);
  std::vector<cplx> folded(n, cplx{});
  for (long k = -static_cast<long>(n) + 1; k < static_cast<long>(n); ++k) {
    const cplx ck = c[static_cast<std::size_t>((k + k2) % k2)];
    const auto slot = static_cast<std::size_t>((k + static_cast<long>(n)) % static_cast<long>(n));
    folded[slot] += window_weight(window, k, m) * ck;
  }
  auto spec = fft::transform(folded, Shape{n}, fft::Direction::forward);
  PeriodogramValues pg;
  pg.grid = FrequencyGrid(Shape{n});
  pg.sample_shape = record.shape;
  pg.windowed = window != Window::rectangular;
  pg.values.resize(n);
  for (std::size_t l = 0; l < n; ++l) pg.values[l] = spec[l].real();
  return pg;
}

}  // namespace gencep
