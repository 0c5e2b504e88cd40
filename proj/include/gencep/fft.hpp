// SPDX-License-Identifier: Apache-2.0
#pragma once

/** @file
 * Thin thread-safe wrapper over FFTW for unnormalized complex transforms of
 * arbitrary rank.
 */

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "gencep/grid.hpp"

namespace gencep::fft {

enum class Direction { forward, backward };

namespace detail {

struct AlignedBuffer {
  explicit AlignedBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n ? n : 1)))) {
    if (!ptr) throw std::bad_alloc();
  }
  ~AlignedBuffer() { fftw_free(ptr); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  fftw_complex* ptr;
};

// FFTW's planner is not re-entrant; plans are cached and executed through the
// new-array interface, which is.  All buffers come from fftw_malloc so the
// alignment, and with it the selected codelets, never varies between calls.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const Shape& shape, Direction dir) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(shape, dir);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t n = total_size(shape);
    AlignedBuffer in(n), out(n);
    std::vector<int> dims(shape.begin(), shape.end());
    fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), in.ptr, out.ptr,
                                dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<Shape, Direction>, fftw_plan> plans_;
};

}  // namespace detail

/// Unnormalized multidimensional DFT with kernel exp(-/+ i <t, theta_l>).
inline std::vector<cplx> transform(std::span<const cplx> data, const Shape& shape, Direction dir) {
  validate_shape(shape);
  const std::size_t n = total_size(shape);
  if (data.size() != n) throw DomainError("transform input size does not match shape");
  fftw_plan plan = detail::PlanCache::instance().get(shape, dir);
  detail::AlignedBuffer in(n), out(n);
  std::memcpy(in.ptr, data.data(), n * sizeof(cplx));
  fftw_execute_dft(plan, in.ptr, out.ptr);
  std::vector<cplx> result(n);
  for (std::size_t i = 0; i < n; ++i) result[i] = cplx{out.ptr[i][0], out.ptr[i][1]};
  return result;
}

/// Zero-pad a row-major array of shape `from` into the corner of shape `to`.
inline std::vector<cplx> zero_pad(std::span<const cplx> data, const Shape& from, const Shape& to) {
  if (from.size() != to.size()) throw DomainError("zero_pad rank mismatch");
  for (std::size_t j = 0; j < from.size(); ++j)
    if (to[j] < from[j]) throw DomainError("zero_pad target smaller than source");
  std::vector<cplx> out(total_size(to), cplx{});
  for (std::size_t flat = 0; flat < data.size(); ++flat) out[ravel(unravel(flat, from), to)] = data[flat];
  return out;
}

}  // namespace gencep::fft
