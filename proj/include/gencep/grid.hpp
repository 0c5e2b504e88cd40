// SPDX-License-Identifier: Apache-2.0
#pragma once

/** @file
 * Multi-index shapes, symmetric lag sets and regular frequency grids on the
 * d-torus.  Arrays are stored row-major with the last axis fastest.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gencep/error.hpp"

namespace gencep {

using cplx = std::complex<double>;
using Shape = std::vector<std::size_t>;
using Lag = std::vector<int>;

inline std::size_t total_size(const Shape& shape) {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return shape.empty() ? 0 : n;
}

inline void validate_shape(const Shape& shape) {
  if (shape.empty()) throw DomainError("shape must have at least one axis");
  for (auto s : shape)
    if (s == 0) throw DomainError("shape extents must be >= 1");
}

inline std::string shape_string(const Shape& shape) {
  std::string s;
  for (std::size_t j = 0; j < shape.size(); ++j) s += (j ? "x" : "") + std::to_string(shape[j]);
  return s;
}

/// Row-major strides of a shape.
inline std::vector<std::size_t> strides(const Shape& shape) {
  std::vector<std::size_t> st(shape.size(), 1);
  for (std::size_t j = shape.size(); j-- > 1;) st[j - 1] = st[j] * shape[j];
  return st;
}

inline std::vector<std::size_t> unravel(std::size_t flat, const Shape& shape) {
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t j = shape.size(); j-- > 0;) {
    idx[j] = flat % shape[j];
    flat /= shape[j];
  }
  return idx;
}

inline std::size_t ravel(const std::vector<std::size_t>& idx, const Shape& shape) {
  std::size_t flat = 0;
  for (std::size_t j = 0; j < shape.size(); ++j) flat = flat * shape[j] + idx[j];
  return flat;
}

inline bool is_zero_lag(const Lag& k) {
  return std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
}

/// A lag is canonical when it is zero or its first nonzero component is positive.
inline bool is_canonical(const Lag& k) {
  for (int v : k) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return true;
}

inline Lag negate(Lag k) {
  for (auto& v : k) v = -v;
  return k;
}

inline std::string lag_string(const Lag& k) {
  std::string s = "(";
  for (std::size_t j = 0; j < k.size(); ++j) s += (j ? "," : "") + std::to_string(k[j]);
  return s + ")";
}

/**
 * Finite index set symmetric about the origin and containing zero.
 *
 * Only one representative per pair {k, -k} is stored (the canonical one), in
 * lexicographic order, so the zero lag is always representative 0.
 */
class LagSet {
 public:
  LagSet() = default;

  LagSet(std::size_t dim, std::vector<Lag> lags) : dim_(dim) {
    if (dim == 0) throw DomainError("lag set dimension must be >= 1");
    lags.push_back(Lag(dim, 0));
    for (auto& k : lags) {
      if (k.size() != dim) throw DomainError("lag " + lag_string(k) + " has wrong dimension");
      if (!is_canonical(k)) k = negate(k);
    }
    std::sort(lags.begin(), lags.end());
    lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
    reps_ = std::move(lags);
  }

  /// All lags with |k_j| <= radii[j].
  static LagSet box(const std::vector<int>& radii) {
    const std::size_t d = radii.size();
    std::vector<Lag> lags;
    Lag k(d);
    for (std::size_t j = 0; j < d; ++j) {
      if (radii[j] < 0) throw DomainError("lag box radius must be >= 0");
      k[j] = -radii[j];
    }
    while (true) {
      if (is_canonical(k)) lags.push_back(k);
      std::size_t j = d;
      while (j-- > 0) {
        if (++k[j] <= radii[j]) break;
        k[j] = -radii[j];
      }
      if (j == static_cast<std::size_t>(-1)) break;
    }
    return LagSet(d, std::move(lags));
  }

  static LagSet box(std::size_t dim, int radius) { return box(std::vector<int>(dim, radius)); }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return reps_.size(); }
  const std::vector<Lag>& representatives() const noexcept { return reps_; }
  const Lag& operator[](std::size_t i) const { return reps_[i]; }

  /// Every member of the symmetric set.
  std::vector<Lag> members() const {
    std::vector<Lag> out;
    for (const auto& k : reps_) {
      out.push_back(k);
      if (!is_zero_lag(k)) out.push_back(negate(k));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Representative index of k and whether k is the negated representative.
  std::optional<std::pair<std::size_t, bool>> find(const Lag& k) const {
    if (k.size() != dim_) return std::nullopt;
    const bool flipped = !is_canonical(k);
    const Lag key = flipped ? negate(k) : k;
    auto it = std::lower_bound(reps_.begin(), reps_.end(), key);
    if (it == reps_.end() || *it != key) return std::nullopt;
    return std::make_pair(static_cast<std::size_t>(it - reps_.begin()), flipped);
  }

  /// Largest |k_j| over the set, per axis.
  std::vector<int> radii() const {
    std::vector<int> r(dim_, 0);
    for (const auto& k : reps_)
      for (std::size_t j = 0; j < dim_; ++j) r[j] = std::max(r[j], std::abs(k[j]));
    return r;
  }

  bool operator==(const LagSet& o) const { return dim_ == o.dim_ && reps_ == o.reps_; }

 private:
  std::size_t dim_ = 0;
  std::vector<Lag> reps_;
};

/// Regular grid theta_l = (2 pi l_1/N_1, ..., 2 pi l_d/N_d) on the d-torus.
class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  explicit FrequencyGrid(Shape shape) : shape_(std::move(shape)) { validate_shape(shape_); }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t dim() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return total_size(shape_); }

  double axis_angle(std::size_t axis, std::size_t l) const {
    return 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(shape_[axis]);
  }

  std::vector<double> node(std::size_t flat) const {
    auto idx = unravel(flat, shape_);
    std::vector<double> theta(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) theta[j] = axis_angle(j, idx[j]);
    return theta;
  }

  /// exp(sign * i <k, theta_l>) at every node, in storage order.
  std::vector<cplx> exponential(const Lag& k, int sign = +1) const {
    if (k.size() != dim()) throw DomainError("lag dimension does not match grid");
    std::vector<std::vector<cplx>> axis(dim());
    for (std::size_t j = 0; j < dim(); ++j) {
      const auto n = static_cast<std::int64_t>(shape_[j]);
      axis[j].resize(shape_[j]);
      for (std::int64_t l = 0; l < n; ++l) {
        // Reduce k*l modulo N before forming the angle so large products stay exact.
        std::int64_t r = (static_cast<std::int64_t>(k[j]) * l) % n;
        if (r < 0) r += n;
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
        axis[j][l] = std::polar(1.0, sign * ang);
      }
    }
    std::vector<cplx> out(size());
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
      auto idx = unravel(flat, shape_);
      cplx v{1.0, 0.0};
      for (std::size_t j = 0; j < dim(); ++j) v *= axis[j][idx[j]];
      out[flat] = v;
    }
    return out;
  }

  /// Evaluate f(theta) at every node.
  template <class F>
  std::vector<double> sample(F&& f) const {
    std::vector<double> out(size());
    for (std::size_t flat = 0; flat < out.size(); ++flat) out[flat] = f(node(flat));
    return out;
  }

 private:
  Shape shape_;
};

}  // namespace gencep
