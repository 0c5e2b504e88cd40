// SPDX-License-Identifier: Apache-2.0
#pragma once

/** @file
 * Cascade identification from output samples: moment estimation, the
 * regularized dual solve, and spectral factorization of P and Q into the
 * subsystem numerator b and denominator a.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gencep/cepstral.hpp"
#include "gencep/dualopt.hpp"
#include "gencep/error.hpp"
#include "gencep/factorization.hpp"
#include "gencep/grid.hpp"
#include "gencep/poly.hpp"
#include "gencep/signal.hpp"
#include "gencep/spectra.hpp"

namespace gencep {

enum class Provenance { specified, identified };

/// nu identical subsystems W = b / a in series; 2-d coefficients are row-major.
struct CascadeModel {
  int nu = 2;
  Shape b_shape;
  Shape a_shape;
  std::vector<cplx> b;
  std::vector<cplx> a;
  Provenance provenance = Provenance::specified;

  std::size_t dim() const noexcept { return b_shape.size(); }

  static CascadeModel one_d(int nu, std::vector<double> b, std::vector<double> a) {
    CascadeModel m;
    m.nu = nu;
    m.b_shape = {b.size()};
    m.a_shape = {a.size()};
    m.b = poly::from_real(b);
    m.a = poly::from_real(a);
    return m;
  }

  /// (|b|^2 / |a|^2)^nu at theta.
  double spectrum(const std::vector<double>& theta) const {
    const double r = std::norm(eval(b, b_shape, theta)) / std::norm(eval(a, a_shape, theta));
    return std::pow(r, nu);
  }

  static cplx eval(const std::vector<cplx>& c, const Shape& shape, const std::vector<double>& theta) {
    if (theta.size() != shape.size()) throw DomainError("frequency rank does not match the model");
    cplx acc{};
    for (std::size_t flat = 0; flat < c.size(); ++flat) {
      const auto idx = unravel(flat, shape);
      double phase = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j) phase += static_cast<double>(idx[j]) * theta[j];
      acc += c[flat] * std::polar(1.0, -phase);
    }
    return acc;
  }
};

/// The one-dimensional benchmark: a = [1, -0.5, 0.25], b = [0.8872, 0.1774, -0.4259], nu = 3.
inline CascadeModel benchmark_system_1d() { return CascadeModel::one_d(3, {0.8872, 0.1774, -0.4259}, {1.0, -0.5, 0.25}); }

/// The separable two-dimensional benchmark with nu = 2.
inline CascadeModel benchmark_system_2d() {
  CascadeModel m;
  m.nu = 2;
  m.a_shape = m.b_shape = {2, 2};
  m.a = {1.0, -0.7, -0.5, 0.35};
  m.b = {0.6696, -0.5357, -0.4018, 0.3214};
  return m;
}

/// Axis filters of the separable benchmark (row axis first).
inline SeparableFilter benchmark_filter_2d() {
  return SeparableFilter{{RationalFilter::real({0.6696, -0.4018}, {1.0, -0.5}),
                          RationalFilter::real({1.0, -0.8}, {1.0, -0.7})}};
}

/// Real white noise driven through the 1-d cascade; the first burn_in outputs are discarded.
inline SampleRecord simulate_cascade_1d(const CascadeModel& m, std::size_t n, std::uint64_t seed,
                                        std::size_t burn_in = 500) {
  if (m.dim() != 1) throw DomainError("model is not one-dimensional");
  auto u = gen_white_noise(Shape{n + burn_in}, 1.0, seed, NoiseKind::real);
  auto y = cascade_apply(RationalFilter(m.b, m.a), m.nu, u, burn_in);
  y.seed = seed;
  return y;
}

/// Real white field through the separable cascade, keeping the trailing n1 x n2 block.
inline SampleRecord simulate_cascade_2d(const SeparableFilter& sub, int nu, const Shape& n, std::uint64_t seed,
                                        std::size_t burn_in = 100) {
  if (n.size() != 2) throw DomainError("expected a two-dimensional shape");
  const Shape big{n[0] + burn_in, n[1] + burn_in};
  auto y = cascade_apply(sub, nu, gen_white_noise(big, 1.0, seed, NoiseKind::real));
  SampleRecord out;
  out.shape = n;
  out.is_real = y.is_real;
  out.seed = seed;
  out.generator_tag = y.generator_tag;
  out.data.resize(n[0] * n[1]);
  for (std::size_t i = 0; i < n[0]; ++i)
    for (std::size_t j = 0; j < n[1]; ++j) out.data[i * n[1] + j] = y.data[(i + burn_in) * big[1] + j + burn_in];
  return out;
}

// ---------------------------------------------------------------------------
// Input whitening

struct ArFit {
  std::vector<cplx> a;  // monic, a(z) u_t = e_t
  double sigma2 = 0.0;
};

/// Yule-Walker AR fit by Levinson-Durbin on biased covariances.
inline ArFit fit_ar(const SampleRecord& u, std::size_t order) {
  u.validate();
  if (u.dim() != 1) throw DomainError("AR fit is one-dimensional");
  if (order >= u.size()) throw DomainError("AR order must be below the record length");
  std::vector<int> lags(order + 1);
  for (std::size_t k = 0; k <= order; ++k) lags[k] = static_cast<int>(k);
  std::vector<Lag> ks;
  for (int k : lags) ks.push_back(Lag{k});
  const auto cov = biased_covariances(u, LagSet(1, ks));
  std::vector<cplx> r(order + 1);
  for (std::size_t k = 0; k <= order; ++k) r[k] = cov.at(Lag{static_cast<int>(k)});
  ArFit fit;
  fit.a = {cplx{1.0, 0.0}};
  double err = r[0].real();
  if (!(err > 0.0)) throw NumericalError("AR fit: zero-variance input");
  for (std::size_t m = 1; m <= order; ++m) {
    cplx acc = r[m];
    for (std::size_t j = 1; j < m; ++j) acc += fit.a[j] * r[m - j];
    const cplx kappa = -acc / err;
    if (!(std::abs(kappa) < 1.0))
      throw NumericalError("AR fit unstable at order " + std::to_string(m) + ": reflection coefficient " +
                           std::to_string(std::abs(kappa)) + ", covariance ratio |c_1|/c_0 = " +
                           std::to_string(std::abs(r[1]) / r[0].real()));
    std::vector<cplx> next(m + 1);
    next[0] = 1.0;
    for (std::size_t j = 1; j < m; ++j) next[j] = fit.a[j] + kappa * std::conj(fit.a[m - j]);
    next[m] = kappa;
    fit.a = std::move(next);
    err *= 1.0 - std::norm(kappa);
  }
  fit.sigma2 = err;
  return fit;
}

/// y filtered by the inverse of the AR shaping filter of u: a(z) y / sigma.
inline SampleRecord whiten_input(const SampleRecord& y, const SampleRecord& u, std::size_t ar_order) {
  if (y.size() == 0 || u.size() == 0) throw DomainError("empty record");
  if (y.dim() != 1 || u.dim() != 1) throw DomainError("whitening is one-dimensional");
  if (y.size() != u.size()) throw DomainError("input and output lengths differ");
  const auto fit = fit_ar(u, ar_order);
  std::vector<cplx> b(fit.a.size());
  const double s = 1.0 / std::sqrt(fit.sigma2);
  for (std::size_t j = 0; j < b.size(); ++j) b[j] = fit.a[j] * s;
  auto out = filter_apply(RationalFilter(b, {cplx{1.0, 0.0}}), y);
  out.is_real = y.is_real && u.is_real;
  if (out.is_real)
    for (auto& v : out.data) v = cplx{v.real(), 0.0};
  out.generator_tag = y.generator_tag + "+whitened";
  return out;
}

// ---------------------------------------------------------------------------
// Identification

struct IdentificationConfig {
  LagSet lags = LagSet::box(1, 2);
  double lambda = 1e-6;
  std::optional<Shape> grid;  // solver grid; N in 1-d, (30, 30) in 2-d when unset
  double tol = 1e-6;
  int max_iter = 200000;
  StepRule step_rule = StepRule::armijo;
  bool corrected = true;
  std::optional<bool> real_coefficients;  // defaults to the record's realness
  std::uint64_t seed = 0;

  void validate(int nu) const {
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    if (nu < 2) throw DomainError("nu must be >= 2");
  }
};

struct RunReport {
  std::vector<std::string> warnings;
  std::vector<std::string> errors;
  CovarianceSet covariances;
  GenCepstralSet cepstra;
  std::optional<DualSolution> solution;
  std::optional<MomentResiduals> residuals;
  std::optional<SpectralFactor> numerator_factor;
  std::optional<SpectralFactor> denominator_factor;
  Shape solver_grid;

  bool ok() const { return errors.empty() && solution && solution->converged && numerator_factor && denominator_factor; }
};

struct IdentificationResult {
  CascadeModel model;
  RunReport report;
};

inline Shape default_solver_grid(const SampleRecord& samples) {
  if (samples.dim() == 1) return samples.shape;
  if (samples.dim() == 2) return Shape{30, 30};
  return Shape(samples.dim(), 16);
}

/// Moment estimates used by the identification step.
inline MomentData estimate_moments(const SampleRecord& samples, int nu, const LagSet& lags, bool corrected,
                                   bool real) {
  MomentData data{biased_covariances(samples, lags),
                  estimate_gen_cepstral(periodogram(samples), Alpha::from_nu(nu), lags, corrected), nu};
  if (real) {
    data.cov.make_real();
    data.cep.make_real();
  }
  return data;
}

/**
 * Estimate (c, m), solve the dual for (P, Q), and factor P = |b|^2, Q = |a|^2.
 * Failures after moment estimation are recorded in the report; whatever was
 * computed before the failure is kept.
 */
inline IdentificationResult identify_cascade(const SampleRecord& samples, int nu, const IdentificationConfig& cfg) {
  samples.validate();
  cfg.validate(nu);
  if (cfg.lags.dim() != samples.dim()) throw DomainError("lag set rank does not match the samples");
  const bool real = cfg.real_coefficients.value_or(samples.is_real);
  IdentificationResult out;
  out.model.nu = nu;
  out.model.provenance = Provenance::identified;
  auto& rep = out.report;

  const MomentData data = estimate_moments(samples, nu, cfg.lags, cfg.corrected, real);
  rep.covariances = data.cov;
  rep.cepstra = data.cep;
  rep.warnings = data.validate();

  DualConfig dc;
  dc.lambda = cfg.lambda;
  dc.grid = cfg.grid.value_or(default_solver_grid(samples));
  dc.tol = cfg.tol;
  dc.max_iter = cfg.max_iter;
  dc.step_rule = cfg.step_rule;
  dc.real_coefficients = real;
  rep.solver_grid = dc.grid;
  try {
    rep.solution = solve_dual(data, dc);
    if (!rep.solution->converged) rep.errors.push_back("dual solver: " + rep.solution->status);
    rep.residuals = moment_residuals(*rep.solution, data, FrequencyGrid(dc.grid));
  } catch (const Error& e) {
    rep.errors.push_back(std::string("dual solver: ") + e.what());
    return out;
  }

  try {
    if (samples.dim() == 1) {
      rep.numerator_factor = bauer_factorize_1d(rep.solution->p);
      rep.denominator_factor = bauer_factorize_1d(rep.solution->q);
    } else if (samples.dim() == 2) {
      rep.numerator_factor = factorize_2d_separable(rep.solution->p, true);
      rep.denominator_factor = factorize_2d_separable(rep.solution->q, true);
    } else {
      throw DomainError("factorization is implemented for d <= 2");
    }
  } catch (const Error& e) {
    rep.errors.push_back(std::string("factorization: ") + e.what());
    return out;
  }
  out.model.b_shape = rep.numerator_factor->shape;
  out.model.b = rep.numerator_factor->coeffs;
  out.model.a_shape = rep.denominator_factor->shape;
  out.model.a = rep.denominator_factor->coeffs;
  if (real) {
    for (auto& v : out.model.b) v = cplx{v.real(), 0.0};
    for (auto& v : out.model.a) v = cplx{v.real(), 0.0};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Error metrics

namespace detail {

inline std::vector<cplx> canonical_sign(std::vector<cplx> c) {
  if (c.empty() || c[0] == cplx{}) return c;
  const cplx u = std::conj(c[0]) / std::abs(c[0]);
  for (auto& v : c) v *= u;
  return c;
}

}  // namespace detail

/// || [a_hat, b_hat] - [a, b] || (Euclidean / Frobenius) after making a_0 and b_0 real positive.
inline double parameter_error(const CascadeModel& model, const CascadeModel& truth) {
  if (model.nu != truth.nu) throw DomainError("cascade orders differ");
  if (model.a_shape != truth.a_shape || model.b_shape != truth.b_shape)
    throw DomainError("model shapes differ: a " + shape_string(model.a_shape) + " vs " + shape_string(truth.a_shape) +
                      ", b " + shape_string(model.b_shape) + " vs " + shape_string(truth.b_shape));
  double s = 0.0;
  const auto am = detail::canonical_sign(model.a), at = detail::canonical_sign(truth.a);
  const auto bm = detail::canonical_sign(model.b), bt = detail::canonical_sign(truth.b);
  for (std::size_t i = 0; i < am.size(); ++i) s += std::norm(am[i] - at[i]);
  for (std::size_t i = 0; i < bm.size(); ++i) s += std::norm(bm[i] - bt[i]);
  return std::sqrt(s);
}

struct SpectrumError {
  double max_abs;
  double relative;  // ||est - true||_F / ||true||_F
};

inline SpectrumError spectrum_error(const std::vector<double>& estimated, const SpectrumFn& truth,
                                    const FrequencyGrid& grid) {
  if (estimated.size() != grid.size()) throw DomainError("spectrum size does not match the grid");
  double mx = 0.0, num = 0.0, den = 0.0;
  for (std::size_t l = 0; l < grid.size(); ++l) {
    const double t = truth(grid.node(l));
    const double d = estimated[l] - t;
    mx = std::max(mx, std::abs(d));
    num += d * d;
    den += t * t;
  }
  return {mx, std::sqrt(num / den)};
}

inline std::vector<double> cascade_spectrum(const CascadeModel& m, const FrequencyGrid& grid) {
  return grid.sample([&](const std::vector<double>& th) { return m.spectrum(th); });
}

/// || [c_hat, m_hat] - [c, m] || over the canonical representatives of the lag set.
inline double moment_error(const CovarianceSet& c_hat, const GenCepstralSet& m_hat, const CovarianceSet& c,
                           const GenCepstralSet& m) {
  if (!(c_hat.lags == c.lags) || !(m_hat.lags == m.lags)) throw DomainError("moment lag sets differ");
  double s = 0.0;
  for (std::size_t r = 0; r < c.size(); ++r) s += std::norm(c_hat[r] - c[r]);
  for (std::size_t r = 0; r < m.size(); ++r) s += std::norm(m_hat[r] - m[r]);
  return std::sqrt(s);
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw DomainError("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace gencep
