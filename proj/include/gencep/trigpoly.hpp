// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "gencep/error.hpp"
#include "gencep/grid.hpp"

namespace gencep {

/**
 * Hermitian Laurent trigonometric polynomial
 *   P(theta) = sum_{k in Lambda} p_k e^{-i<k,theta>},  p_{-k} = p_k^*,
 * stored by canonical representative, so its values on the torus are real.
 */
struct TrigPoly {
  LagSet lags;
  std::vector<cplx> coeffs;

  static TrigPoly zero(const LagSet& lags) { return TrigPoly{lags, std::vector<cplx>(lags.size(), cplx{})}; }

  /// Constant polynomial with value v.
  static TrigPoly constant(const LagSet& lags, double v) {
    auto p = zero(lags);
    p.coeffs[0] = v;
    return p;
  }

  cplx at(const Lag& k) const {
    auto hit = lags.find(k);
    if (!hit) return cplx{};
    const cplx v = coeffs[hit->first];
    return hit->second ? std::conj(v) : v;
  }

  std::size_t dim() const noexcept { return lags.dim(); }

  double eval(const std::vector<double>& theta) const {
    double v = coeffs[0].real();
    for (std::size_t r = 1; r < lags.size(); ++r) {
      double phase = 0.0;
      for (std::size_t j = 0; j < theta.size(); ++j) phase += lags[r][j] * theta[j];
      v += 2.0 * (coeffs[r] * std::polar(1.0, -phase)).real();
    }
    return v;
  }

  /// Values at every grid node; imaginary residue is discarded by construction.
  std::vector<double> eval(const FrequencyGrid& grid) const {
    if (grid.dim() != dim()) throw DomainError("grid rank does not match the polynomial");
    std::vector<double> out(grid.size(), coeffs[0].real());
    for (std::size_t r = 1; r < lags.size(); ++r) {
      if (coeffs[r] == cplx{}) continue;
      const auto e = grid.exponential(lags[r], -1);
      for (std::size_t l = 0; l < out.size(); ++l) out[l] += 2.0 * (coeffs[r] * e[l]).real();
    }
    return out;
  }

  /// Dense (2 r_1 + 1) x ... coefficient array over the bounding lag box, row-major.
  std::vector<cplx> dense_coefficients(Shape* shape_out = nullptr) const {
    const auto radii = lags.radii();
    Shape shape(radii.size());
    for (std::size_t j = 0; j < radii.size(); ++j) shape[j] = static_cast<std::size_t>(2 * radii[j] + 1);
    std::vector<cplx> out(total_size(shape), cplx{});
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
      auto idx = unravel(flat, shape);
      Lag k(idx.size());
      for (std::size_t j = 0; j < idx.size(); ++j) k[j] = static_cast<int>(idx[j]) - radii[j];
      out[flat] = at(k);
    }
    if (shape_out) *shape_out = shape;
    return out;
  }
};

}  // namespace gencep
