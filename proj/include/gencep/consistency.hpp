// SPDX-License-Identifier: Apache-2.0
#pragma once

/** @file
 * Monte Carlo checks of the generalized cepstral estimator and the
 * finite-N correlation structure of filtered-noise spectral components.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gencep/cepstral.hpp"
#include "gencep/error.hpp"
#include "gencep/grid.hpp"
#include "gencep/numerics.hpp"
#include "gencep/parallel.hpp"
#include "gencep/poly.hpp"
#include "gencep/signal.hpp"
#include "gencep/spectra.hpp"

namespace gencep {

enum class ProcessKind { white, periodic_circulant, arma };

/// Data-generating process for a Monte Carlo study.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::white;
  double variance = 1.0;
  NoiseKind noise = NoiseKind::circular;
  /// Circulant first column for a given N (periodic_circulant only).
  std::function<std::vector<cplx>(std::size_t)> circulant;
  RationalFilter filter;
  std::size_t burn_in = 0;

  static ProcessSpec white(double variance = 1.0, NoiseKind noise = NoiseKind::circular) {
    ProcessSpec p;
    p.variance = variance;
    p.noise = noise;
    return p;
  }
  static ProcessSpec periodic(std::function<std::vector<cplx>(std::size_t)> c) {
    ProcessSpec p;
    p.kind = ProcessKind::periodic_circulant;
    p.circulant = std::move(c);
    return p;
  }
  static ProcessSpec arma(RationalFilter f, NoiseKind noise = NoiseKind::circular, std::size_t burn_in = 512) {
    ProcessSpec p;
    p.kind = ProcessKind::arma;
    p.filter = std::move(f);
    p.noise = noise;
    p.burn_in = burn_in;
    return p;
  }

  SampleRecord draw(std::size_t n, std::uint64_t seed) const {
    switch (kind) {
      case ProcessKind::white:
        return gen_white_noise(Shape{n}, variance, seed, noise);
      case ProcessKind::periodic_circulant: {
        auto c = circulant(n);
        if (c.size() != n) throw DomainError("circulant generator returned the wrong length");
        return gen_periodic_gaussian(c, seed);
      }
      case ProcessKind::arma: {
        auto u = gen_white_noise(Shape{n + burn_in}, variance, seed, noise);
        return filter_apply(filter, u, burn_in);
      }
    }
    throw DomainError("unknown process kind");
  }

  /// Exact per-node lambda_l = E|Y_l|^2 / N, when the spectral components are independent.
  std::optional<std::vector<double>> exact_component_variances(std::size_t n) const {
    if (kind == ProcessKind::white && noise == NoiseKind::circular) return std::vector<double>(n, variance);
    if (kind == ProcessKind::periodic_circulant) return circulant_eigenvalues(circulant(n));
    return std::nullopt;
  }

  std::string name() const {
    switch (kind) {
      case ProcessKind::white:
        return noise == NoiseKind::circular ? "white-circular" : "white-real";
      case ProcessKind::periodic_circulant:
        return "periodic-circulant";
      case ProcessKind::arma:
        return "arma";
    }
    return "?";
  }
};

struct MCConfig {
  ProcessSpec process;
  Alpha alpha{0.5};
  std::vector<std::size_t> sizes;
  std::size_t trials = 500;
  std::uint64_t seed = 0;
  bool corrected = true;
  unsigned threads = 0;

  void validate() const {
    if (trials < 2) throw DomainError("a Monte Carlo study needs at least 2 trials");
    if (sizes.empty()) throw DomainError("no sample sizes given");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (sizes[i] == 0) throw DomainError("sample sizes must be positive");
      if (i && sizes[i] <= sizes[i - 1]) throw DomainError("sample sizes must be strictly increasing");
    }
  }
};

struct MomentRow {
  std::size_t n;
  Lag k;
  cplx mean;
  double variance;  // E|m - E m|^2, unbiased over trials
  std::optional<cplx> theory_mean;
  std::optional<double> theory_variance;
};

struct MomentReport {
  std::vector<MomentRow> rows;

  const MomentRow& at(std::size_t n, const Lag& k) const {
    for (const auto& r : rows)
      if (r.n == n && r.k == k) return r;
    throw DomainError("no report row for N = " + std::to_string(n) + ", k = " + lag_string(k));
  }
};

/// Mean and variance of lambda^alpha * E^alpha for E ~ Exp(1).
struct PowerMoments {
  double mean;
  double variance;
};

inline PowerMoments theoretical_power_moments(double lambda, Alpha alpha) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  const double a = alpha.value();
  const double g1 = gamma_fn(a + 1.0);
  return {std::pow(lambda, a) * g1, std::pow(lambda, 2.0 * a) * (gamma_fn(2.0 * a + 1.0) - g1 * g1)};
}

namespace detail {

// Expected value and E|.|^2-variance of m_hat_k for independent components with variances lambda.
inline std::pair<cplx, double> cepstral_theory(const std::vector<double>& lambda, Alpha alpha, const Lag& k,
                                               bool corrected) {
  const double a = alpha.value();
  const std::size_t n = lambda.size();
  const FrequencyGrid grid(Shape{n});
  const auto e = grid.exponential(k, +1);
  const double g1 = gamma_fn(a + 1.0);
  const double c1 = gamma_fn(2.0 * a + 1.0) - g1 * g1;
  const double scale = corrected ? 1.0 / g1 : 1.0;
  cplx mean{};
  double var = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    const double la = std::pow(lambda[l], a);
    mean += e[l] * la * g1;
    var += la * la * c1;
  }
  mean *= scale / (a * static_cast<double>(n));
  if (is_zero_lag(k)) mean -= 1.0 / a;
  var *= scale * scale / (a * a * static_cast<double>(n) * static_cast<double>(n));
  return {mean, var};
}

}  // namespace detail

/**
 * Per sample size: draw `trials` independent records (seeded per (N, trial)),
 * estimate m_hat on Lambda, and reduce in trial order.
 */
inline MomentReport mc_estimator_study(const MCConfig& cfg, const LagSet& lags) {
  cfg.validate();
  if (lags.dim() != 1) throw DomainError("mc_estimator_study is one-dimensional");
  MomentReport report;
  for (std::size_t n : cfg.sizes) {
    const std::uint64_t size_seed = derive_seed(cfg.seed, n);
    auto estimates = parallel_map(
        cfg.trials,
        [&](std::size_t trial) {
          auto rec = cfg.process.draw(n, derive_seed(size_seed, trial));
          return estimate_gen_cepstral(periodogram(rec), cfg.alpha, lags, cfg.corrected).coeffs;
        },
        cfg.threads);
    const auto lambda = cfg.process.exact_component_variances(n);
    for (std::size_t r = 0; r < lags.size(); ++r) {
      cplx mean{};
      for (const auto& est : estimates) mean += est[r];
      mean /= static_cast<double>(cfg.trials);
      double var = 0.0;
      for (const auto& est : estimates) var += std::norm(est[r] - mean);
      var /= static_cast<double>(cfg.trials - 1);
      MomentRow row{n, lags[r], mean, var, std::nullopt, std::nullopt};
      if (lambda) {
        auto [tm, tv] = detail::cepstral_theory(*lambda, cfg.alpha, lags[r], cfg.corrected);
        row.theory_mean = tm;
        row.theory_variance = tv;
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

/// E[Phi1^alpha Phi2^alpha] for jointly circular Gaussian components with variances
/// lambda1, lambda2 and cross-covariance r.
inline double cross_power_moment(double lambda1, double lambda2, cplx r, Alpha alpha) {
  if (!(lambda1 > 0.0 && lambda2 > 0.0)) throw DomainError("component variances must be positive");
  const double prod = lambda1 * lambda2;
  double rho2 = std::norm(r) / prod;
  if (rho2 > 1.0 + 1e-12) throw DomainError("|r|^2 exceeds lambda1 * lambda2");
  rho2 = std::min(rho2, 1.0);
  const double a = alpha.value();
  const double g1 = gamma_fn(a + 1.0);
  return std::pow(prod, a) * g1 * g1 * hyp2f1_diag(alpha, rho2);
}

/// Impulse response truncated where |w_t| stays below 1e-12 max|w|.
inline std::vector<cplx> truncated_impulse_response(const RationalFilter& filter) {
  const std::size_t order = std::max(filter.numerator().size(), filter.denominator().size());
  const std::size_t window = order + 8;
  for (std::size_t len = 64;; len *= 2) {
    auto w = filter.impulse_response(len);
    double peak = 0.0;
    for (const auto& v : w) peak = std::max(peak, std::abs(v));
    std::size_t last = 0;
    for (std::size_t t = 0; t < w.size(); ++t)
      if (std::abs(w[t]) >= 1e-12 * peak) last = t;
    if (last + window < len || len >= (std::size_t{1} << 24)) {
      w.resize(last + 1);
      return w;
    }
  }
}

/// How the shaping filter's input starts: at rest at t = 0, or white noise from the infinite past.
enum class Initialization { at_rest, stationary };

namespace detail {

// A_l(s) = sum_{t=max(s,0)}^{N-1} e^{-i theta_l t} w_{t-s} for s = -(T-1) .. N-1, stored at s + T - 1.
// Entries with s < 0 stay zero for a filter started at rest.
inline std::vector<cplx> component_weights(const std::vector<cplx>& w, std::size_t n, std::size_t l,
                                           Initialization init) {
  const std::size_t tlen = w.size();
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(n);
  std::vector<cplx> prefix(tlen + 1, cplx{});
  for (std::size_t j = 0; j < tlen; ++j)
    prefix[j + 1] = prefix[j] + std::polar(1.0, -theta * static_cast<double>(j % n)) * w[j];
  std::vector<cplx> out(n + tlen - 1);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    const long s = static_cast<long>(idx) - static_cast<long>(tlen) + 1;
    if (s < 0 && init == Initialization::at_rest) continue;
    const std::size_t lo = s < 0 ? static_cast<std::size_t>(-s) : 0;
    const std::size_t hi = std::min<std::size_t>(tlen, static_cast<std::size_t>(static_cast<long>(n) - s));
    if (hi <= lo) continue;
    const long reduced = ((s % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n);
    out[idx] = std::polar(1.0, -theta * static_cast<double>(reduced)) * (prefix[hi] - prefix[lo]);
  }
  return out;
}

inline cplx weights_inner(const std::vector<cplx>& a1, const std::vector<cplx>& a2, std::size_t n) {
  cplx acc{};
  for (std::size_t i = 0; i < a1.size(); ++i) acc += a1[i] * std::conj(a2[i]);
  return acc / static_cast<double>(n);
}

}  // namespace detail

/// E[Ybar_{l1} Ybar_{l2}^*] for y = w * u with u unit-variance white noise.
inline cplx spectral_component_covariance(const RationalFilter& filter, std::size_t n, std::size_t l1, std::size_t l2,
                                          Initialization init = Initialization::at_rest) {
  if (l1 >= n || l2 >= n) throw DomainError("frequency index out of range");
  const auto w = truncated_impulse_response(filter);
  const auto a1 = detail::component_weights(w, n, l1, init);
  if (l1 == l2) return cplx{detail::weights_inner(a1, a1, n).real(), 0.0};
  return detail::weights_inner(a1, detail::component_weights(w, n, l2, init), n);
}

/// sum_{l2} |rho_{l1 l2}|^2, the squared correlation of component l1 with every component.
inline double correlation_sum(const RationalFilter& filter, std::size_t n, std::size_t l1,
                              Initialization init = Initialization::at_rest) {
  if (l1 >= n) throw DomainError("frequency index out of range");
  const auto w = truncated_impulse_response(filter);
  const auto a1 = detail::component_weights(w, n, l1, init);
  const double v1 = detail::weights_inner(a1, a1, n).real();
  double sum = 0.0;
  for (std::size_t l2 = 0; l2 < n; ++l2) {
    if (l2 == l1) {
      sum += 1.0;
      continue;
    }
    const auto a2 = detail::component_weights(w, n, l2, init);
    const double v2 = detail::weights_inner(a2, a2, n).real();
    sum += std::norm(detail::weights_inner(a1, a2, n)) / (v1 * v2);
  }
  return sum;
}

/// (C1 / (alpha^2 N^2)) (sum_l lambda_l^alpha)^2 with C1 = Gamma(2 alpha + 1) - Gamma(alpha + 1)^2.
inline double variance_bound(const std::vector<double>& lambdas, Alpha alpha, std::size_t n) {
  if (lambdas.size() != n) throw DomainError("variance_bound needs one lambda per frequency node");
  const double a = alpha.value();
  double s = 0.0;
  for (double l : lambdas) {
    if (!(l > 0.0)) throw DomainError("lambda values must be positive");
    s += std::pow(l, a);
  }
  const double g1 = gamma_fn(a + 1.0);
  const double c1 = gamma_fn(2.0 * a + 1.0) - g1 * g1;
  const double nn = static_cast<double>(n);
  return c1 / (a * a * nn * nn) * s * s;
}

struct CorrelationSumRow {
  std::size_t n;
  std::size_t l1;
  double sum;
};

/// Correlation sums at l1 = N/4, N/2, 3N/4 for each N.
inline std::vector<CorrelationSumRow> correlation_sum_table(const RationalFilter& filter, const std::vector<std::size_t>& sizes,
                                       Initialization init = Initialization::at_rest) {
  std::vector<CorrelationSumRow> rows;
  for (std::size_t n : sizes) {
    if (n < 4) throw DomainError("sizes must be >= 4");
    for (std::size_t l1 : {n / 4, n / 2, 3 * n / 4}) rows.push_back({n, l1, correlation_sum(filter, n, l1, init)});
  }
  return rows;
}

struct MildCorrelationRow {
  std::size_t n;
  double gamma;     // max_l E|Ybar_l|^2
  double max_sum;   // max over probed l1 of correlation_sum
  double ratio;     // max_sum / N
};

struct MildCorrelationReport {
  std::vector<MildCorrelationRow> rows;
  double spectrum_sup = 0.0;  // sup |W|^2, the bound on every gamma_N
  bool consistent = false;
};

/**
 * Flags consistency with the mild-correlation assumption when every gamma_N
 * stays below sup|W|^2 and sum/N strictly decreases across the sizes.
 */
inline MildCorrelationReport mild_correlation_report(const RationalFilter& filter, const std::vector<std::size_t>& sizes,
                                            Initialization init = Initialization::at_rest) {
  if (sizes.empty()) throw DomainError("no sizes given");
  MildCorrelationReport rep;
  const std::size_t dense = 8192;
  for (std::size_t l = 0; l < dense; ++l) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(dense);
    const double mag = std::norm(poly::eval_on_circle(filter.numerator(), th) /
                                 poly::eval_on_circle(filter.denominator(), th));
    rep.spectrum_sup = std::max(rep.spectrum_sup, mag);
  }
  const auto w = truncated_impulse_response(filter);
  bool ok = true;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::size_t n = sizes[i];
    if (n < 4) throw DomainError("sizes must be >= 4");
    std::vector<std::vector<cplx>> weights(n);
    std::vector<double> var(n);
    for (std::size_t l = 0; l < n; ++l) {
      weights[l] = detail::component_weights(w, n, l, init);
      var[l] = detail::weights_inner(weights[l], weights[l], n).real();
    }
    double max_sum = 0.0;
    for (std::size_t l1 : {n / 4, n / 2, 3 * n / 4}) {
      double s = 0.0;
      for (std::size_t l2 = 0; l2 < n; ++l2)
        s += l2 == l1 ? 1.0 : std::norm(detail::weights_inner(weights[l1], weights[l2], n)) / (var[l1] * var[l2]);
      max_sum = std::max(max_sum, s);
    }
    const double gamma = *std::max_element(var.begin(), var.end());
    rep.rows.push_back({n, gamma, max_sum, max_sum / static_cast<double>(n)});
    ok = ok && gamma <= rep.spectrum_sup * (1.0 + 1e-9);
    if (i > 0) ok = ok && rep.rows[i].ratio < rep.rows[i - 1].ratio;
  }
  rep.consistent = ok;
  return rep;
}

}  // namespace gencep
