// SPDX-License-Identifier: Apache-2.0
#pragma once

/** @file
 * Sample records, DFTs in one and d dimensions, and seeded generators for
 * white, circulant-periodic and rationally filtered Gaussian processes.
 */

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gencep/error.hpp"
#include "gencep/fft.hpp"
#include "gencep/grid.hpp"
#include "gencep/poly.hpp"

namespace gencep {

/// Time series (d = 1) or random field sample on the box Z^d_N.
struct SampleRecord {
  Shape shape;
  std::vector<cplx> data;
  bool is_real = false;
  std::uint64_t seed = 0;
  std::string generator_tag;

  std::size_t dim() const noexcept { return shape.size(); }
  std::size_t size() const noexcept { return data.size(); }

  void validate() const {
    validate_shape(shape);
    if (total_size(shape) != data.size())
      throw DomainError("sample record holds " + std::to_string(data.size()) + " values for shape " +
                        shape_string(shape));
    if (is_real)
      for (const auto& v : data)
        if (v.imag() != 0.0) throw DomainError("real sample record has a nonzero imaginary part");
  }

  static SampleRecord from_real(std::vector<double> values, std::string tag = "user") {
    SampleRecord r;
    r.shape = {values.size()};
    r.data.assign(values.begin(), values.end());
    r.is_real = true;
    r.generator_tag = std::move(tag);
    return r;
  }

  static SampleRecord from_complex(Shape shape, std::vector<cplx> values, std::string tag = "user") {
    SampleRecord r;
    r.shape = std::move(shape);
    r.data = std::move(values);
    r.generator_tag = std::move(tag);
    r.validate();
    return r;
  }
};

// ---------------------------------------------------------------------------
// Transforms

/// Y_l = sum_t y_t e^{-i t 2 pi l / N}.
inline std::vector<cplx> dft(const SampleRecord& record) {
  if (record.dim() != 1) throw DomainError("dft expects a one-dimensional record");
  return fft::transform(record.data, record.shape, fft::Direction::forward);
}

/// y_t = (1/N) sum_l Y_l e^{i t 2 pi l / N}.
inline std::vector<cplx> idft(std::span<const cplx> spectral) {
  auto y = fft::transform(spectral, Shape{spectral.size()}, fft::Direction::backward);
  const double scale = 1.0 / static_cast<double>(spectral.size());
  for (auto& v : y) v *= scale;
  return y;
}

inline std::vector<cplx> dft_nd(const SampleRecord& record) {
  record.validate();
  return fft::transform(record.data, record.shape, fft::Direction::forward);
}

inline std::vector<cplx> idft_nd(std::span<const cplx> spectral, const Shape& shape) {
  auto y = fft::transform(spectral, shape, fft::Direction::backward);
  const double scale = 1.0 / static_cast<double>(total_size(shape));
  for (auto& v : y) v *= scale;
  return y;
}

// ---------------------------------------------------------------------------
// Random numbers

using Engine = std::mt19937_64;

/// Independent stream for (base seed, stream index), e.g. one per Monte Carlo trial.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

/// Standard normal pairs by Box-Muller on 53-bit uniforms, so streams are
/// identical across standard library implementations.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  Engine eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class NoiseKind { real, circular };

/// Zero-mean i.i.d. Gaussian samples; circular noise splits the variance evenly
/// between independent real and imaginary parts.
inline SampleRecord gen_white_noise(const Shape& shape, double variance, std::uint64_t seed,
                                    NoiseKind kind = NoiseKind::real) {
  validate_shape(shape);
  if (!(variance > 0.0)) throw DomainError("white noise variance must be positive");
  GaussianStream normal(seed);
  SampleRecord r;
  r.shape = shape;
  r.seed = seed;
  r.data.resize(total_size(shape));
  if (kind == NoiseKind::real) {
    const double sd = std::sqrt(variance);
    for (auto& v : r.data) v = cplx{sd * normal(), 0.0};
    r.is_real = true;
    r.generator_tag = "white-real";
  } else {
    const double sd = std::sqrt(variance / 2.0);
    for (auto& v : r.data) {
      const double re = normal();
      const double im = normal();
      v = cplx{sd * re, sd * im};
    }
    r.generator_tag = "white-circular";
  }
  return r;
}

/**
 * Draw an N-periodic Gaussian sequence with circulant covariance built from
 * c = (c_0, ..., c_{N-1}), via y = U^* Psi^{1/2} g with U = F / sqrt(N),
 * Psi = diag(F c) and g standard circular white noise.  The normalized
 * spectral components are then independent with variances (F c)_l.
 */
inline SampleRecord gen_periodic_gaussian(std::span<const cplx> c, std::uint64_t seed) {
  const std::size_t n = c.size();
  if (n == 0) throw DomainError("empty covariance sequence");
  auto lambda = fft::transform(c, Shape{n}, fft::Direction::forward);
  double scale = 1.0;
  for (const auto& l : lambda) scale = std::max(scale, std::abs(l));
  for (std::size_t l = 0; l < n; ++l) {
    if (std::abs(lambda[l].imag()) > 1e-10 * scale) throw DefinitenessError(l, lambda[l].real());
    if (!(lambda[l].real() > 0.0)) throw DefinitenessError(l, lambda[l].real());
  }
  auto g = gen_white_noise(Shape{n}, 1.0, seed, NoiseKind::circular);
  std::vector<cplx> weighted(n);
  for (std::size_t l = 0; l < n; ++l) weighted[l] = std::sqrt(lambda[l].real()) * g.data[l];
  // U^* v = F^* v / sqrt(N) = sqrt(N) * idft(v).
  auto y = fft::transform(weighted, Shape{n}, fft::Direction::backward);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : y) v *= s;
  SampleRecord r;
  r.shape = {n};
  r.data = std::move(y);
  r.seed = seed;
  r.generator_tag = "periodic-circulant";
  return r;
}

/// Eigenvalues (F c)_l of the circulant covariance matrix with first column c.
inline std::vector<double> circulant_eigenvalues(std::span<const cplx> c) {
  auto lambda = fft::transform(c, Shape{c.size()}, fft::Direction::forward);
  std::vector<double> out(lambda.size());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = lambda[l].real();
  return out;
}

// ---------------------------------------------------------------------------
// Rational filters

/// W(z) = b(z) / a(z), both polynomials in z^{-1}; a must be stable.
class RationalFilter {
 public:
  RationalFilter() : b_{cplx{1.0, 0.0}}, a_{cplx{1.0, 0.0}} {}

  RationalFilter(std::vector<cplx> b, std::vector<cplx> a) : b_(std::move(b)), a_(std::move(a)) {
    if (b_.empty()) throw DomainError("filter numerator is empty");
    if (a_.empty() || a_[0] == cplx{}) throw DomainError("filter denominator needs a_0 != 0");
    if (a_.size() > 1) {
      const double radius = poly::max_root_modulus(a_);
      if (!(radius < 1.0 - 1e-9))
        throw DomainError("unstable filter: denominator root modulus " + std::to_string(radius));
    }
  }

  static RationalFilter real(const std::vector<double>& b, const std::vector<double>& a) {
    return RationalFilter(poly::from_real(b), poly::from_real(a));
  }

  const std::vector<cplx>& numerator() const noexcept { return b_; }
  const std::vector<cplx>& denominator() const noexcept { return a_; }
  bool is_real() const { return poly::is_real(b_) && poly::is_real(a_); }

  /// Output of the difference equation with zero initial conditions.
  std::vector<cplx> run(std::span<const cplx> x) const {
    std::vector<cplx> y(x.size());
    const cplx a0 = a_[0];
    for (std::size_t t = 0; t < x.size(); ++t) {
      cplx acc{};
      for (std::size_t j = 0; j < b_.size() && j <= t; ++j) acc += b_[j] * x[t - j];
      for (std::size_t j = 1; j < a_.size() && j <= t; ++j) acc -= a_[j] * y[t - j];
      y[t] = acc / a0;
    }
    return y;
  }

  /// w_0 ... w_{T-1} of W(z) = sum_t w_t z^{-t}.
  std::vector<cplx> impulse_response(std::size_t length) const {
    std::vector<cplx> delta(length, cplx{});
    if (length) delta[0] = 1.0;
    return run(delta);
  }

  /// The nu-fold series connection as a single filter.
  RationalFilter power(int nu) const {
    if (nu < 1) throw DomainError("cascade order must be >= 1");
    return RationalFilter(poly::power(b_, nu), poly::power(a_, nu));
  }

 private:
  std::vector<cplx> b_;
  std::vector<cplx> a_;
};

/// Product filter W(z_1, ..., z_d) = prod_j W_j(z_j).
struct SeparableFilter {
  std::vector<RationalFilter> axes;
};

inline SampleRecord filter_apply(const RationalFilter& filter, const SampleRecord& input, std::size_t burn_in = 0) {
  input.validate();
  if (input.dim() != 1) throw DomainError("filter_apply expects a one-dimensional record; use the separable form");
  if (burn_in >= input.size()) throw DomainError("burn_in discards the whole record");
  auto y = filter.run(input.data);
  SampleRecord out = input;
  out.data.assign(y.begin() + static_cast<std::ptrdiff_t>(burn_in), y.end());
  out.shape = {out.data.size()};
  out.is_real = input.is_real && filter.is_real();
  if (out.is_real)
    for (auto& v : out.data) v = cplx{v.real(), 0.0};
  out.generator_tag = input.generator_tag + "+arma";
  return out;
}

inline SampleRecord cascade_apply(const RationalFilter& sub, int nu, const SampleRecord& input, std::size_t burn_in = 0) {
  if (nu < 1) throw DomainError("cascade order must be >= 1");
  SampleRecord out = input;
  for (int i = 0; i < nu; ++i) out = filter_apply(sub, out);
  if (burn_in) {
    if (burn_in >= out.size()) throw DomainError("burn_in discards the whole record");
    out.data.erase(out.data.begin(), out.data.begin() + static_cast<std::ptrdiff_t>(burn_in));
    out.shape = {out.data.size()};
  }
  out.generator_tag = input.generator_tag + "+cascade" + std::to_string(nu);
  return out;
}

/// Apply each axis filter along every line of that axis (zero initial conditions).
inline SampleRecord filter_apply(const SeparableFilter& filter, const SampleRecord& input) {
  input.validate();
  if (filter.axes.size() != input.dim()) throw DomainError("separable filter rank does not match the record");
  SampleRecord out = input;
  const auto st = strides(input.shape);
  bool real = input.is_real;
  for (std::size_t axis = 0; axis < input.dim(); ++axis) {
    const auto& f = filter.axes[axis];
    real = real && f.is_real();
    const std::size_t len = input.shape[axis];
    const std::size_t stride = st[axis];
    std::vector<cplx> line(len);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
      if ((flat / stride) % len != 0) continue;  // visit each line once, from its first element
      for (std::size_t i = 0; i < len; ++i) line[i] = out.data[flat + i * stride];
      auto y = f.run(line);
      for (std::size_t i = 0; i < len; ++i) out.data[flat + i * stride] = y[i];
    }
  }
  out.is_real = real;
  if (real)
    for (auto& v : out.data) v = cplx{v.real(), 0.0};
  out.generator_tag = input.generator_tag + "+separable";
  return out;
}

inline SampleRecord cascade_apply(const SeparableFilter& sub, int nu, const SampleRecord& input) {
  if (nu < 1) throw DomainError("cascade order must be >= 1");
  SampleRecord out = input;
  for (int i = 0; i < nu; ++i) out = filter_apply(sub, out);
  out.generator_tag = input.generator_tag + "+cascade" + std::to_string(nu);
  return out;
}

}  // namespace gencep
