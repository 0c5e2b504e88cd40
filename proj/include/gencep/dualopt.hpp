// SPDX-License-Identifier: Apache-2.0
#pragma once

/** @file
 * Regularized dual of the covariance / generalized-cepstral matching problem
 *
 *   J(p, q) = 1/(nu-1) \int P^nu / Q^(nu-1) dmu + <q, c> - <p, m>
 *             + lambda/(nu-1) \int P^(1-nu) dmu,
 *
 * with P = 1 + sum_{k in Lambda_0} p_k e^{-i<k,theta>} and
 * Q = sum_{k in Lambda} q_k e^{-i<k,theta>}, discretized on a regular grid.
 * The minimizer yields the spectrum (P/Q)^nu, which matches the covariances
 * and, up to the regularization, the cepstral coefficients.
 *
 * Free parameters are the real and imaginary parts of the canonical
 * representatives of each {k, -k} pair (q_0 real, p_0 fixed at 1).
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gencep/cepstral.hpp"
#include "gencep/error.hpp"
#include "gencep/grid.hpp"
#include "gencep/spectra.hpp"
#include "gencep/trigpoly.hpp"

namespace gencep {

/// Covariances over Lambda and cepstra over Lambda_0 (the zero lag is ignored).
struct MomentData {
  CovarianceSet cov;
  GenCepstralSet cep;
  int nu = 2;

  std::size_t dim() const noexcept { return cov.lags.dim(); }

  /// Throws on inconsistent data; returns advisory warnings.
  std::vector<std::string> validate() const {
    if (nu < 2) throw DomainError("nu must be >= 2");
    if (!(cov.lags == cep.lags)) throw DomainError("covariance and cepstral lag sets differ");
    if (cov.coeffs.size() != cov.lags.size() || cep.coeffs.size() != cep.lags.size())
      throw DomainError("moment arrays do not match their lag sets");
    const double expected = 1.0 - 1.0 / nu;
    if (std::abs(cep.alpha.value() - expected) > 1e-12)
      throw DomainError("cepstral alpha " + std::to_string(cep.alpha.value()) + " does not equal 1 - 1/nu");
    std::vector<std::string> warnings;
    if (2.0 * nu < static_cast<double>(dim()) + 2.0)
      warnings.push_back("nu < d/2 + 1: the regularized dual may have no strictly positive solution");
    return warnings;
  }
};

enum class StepRule { armijo, barzilai_borwein };

struct DualConfig {
  double lambda = 1e-6;
  Shape grid;
  double tol = 1e-6;
  int max_iter = 200000;
  StepRule step_rule = StepRule::armijo;
  double initial_step = 1.0;
  double backtrack = 0.5;
  double sufficient_decrease = 1e-4;
  bool real_coefficients = false;
  bool record_trace = true;
};

struct TraceRow {
  int iteration;
  double objective;
  double grad_norm;
  double step;
};

struct DualSolution {
  TrigPoly p;
  TrigPoly q;
  int iterations = 0;
  double grad_norm = 0.0;
  double objective = 0.0;
  Shape grid;
  double lambda = 0.0;
  int nu = 2;
  bool converged = false;
  std::string status;
  std::vector<TraceRow> trace;
};

/// Gradient packed per representative as (dJ/dRe, dJ/dIm).
struct CoefficientGradient {
  std::vector<cplx> p;
  std::vector<cplx> q;

  double norm() const {
    double s = 0.0;
    for (const auto& v : p) s += std::norm(v);
    for (const auto& v : q) s += std::norm(v);
    return std::sqrt(s);
  }
};

/// Discretized objective with its basis tables precomputed for one grid.
class DualProblem {
 public:
  DualProblem(const MomentData& data, double lambda, const Shape& grid, bool real_coefficients = false)
      : lags_(data.cov.lags), grid_(grid), nu_(data.nu), lambda_(lambda), real_(real_coefficients) {
    data.validate();
    if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
    if (grid_.dim() != lags_.dim()) throw DomainError("dual grid rank does not match the lag set");
    const auto m = static_cast<Eigen::Index>(grid_.size());
    const std::size_t per = real_ ? 1 : 2;
    const auto nz = static_cast<Eigen::Index>((lags_.size() - 1) * per);
    basis_.resize(m, nz);
    lin_c_.resize(nz + 1);
    lin_m_.resize(nz);
    lin_c_(0) = data.cov[0].real();
    for (std::size_t r = 1; r < lags_.size(); ++r) {
      const auto e = grid_.exponential(lags_[r], -1);
      const auto col = static_cast<Eigen::Index>((r - 1) * per);
      for (Eigen::Index l = 0; l < m; ++l) {
        // e^{-i phi} = cos phi - i sin phi; dP/dRe p = 2 cos phi, dP/dIm p = 2 sin phi.
        basis_(l, col) = 2.0 * e[static_cast<std::size_t>(l)].real();
        if (!real_) basis_(l, col + 1) = -2.0 * e[static_cast<std::size_t>(l)].imag();
      }
      lin_c_(col + 1) = 2.0 * data.cov[r].real();
      lin_m_(col) = 2.0 * data.cep[r].real();
      if (!real_) {
        lin_c_(col + 2) = 2.0 * data.cov[r].imag();
        lin_m_(col + 1) = 2.0 * data.cep[r].imag();
      }
    }
  }

  std::size_t num_p() const noexcept { return static_cast<std::size_t>(basis_.cols()); }
  std::size_t num_params() const noexcept { return 2 * num_p() + 1; }
  const FrequencyGrid& grid() const noexcept { return grid_; }
  const LagSet& lags() const noexcept { return lags_; }
  bool real_coefficients() const noexcept { return real_; }

  Eigen::VectorXd pack(const TrigPoly& p, const TrigPoly& q) const {
    const std::size_t per = real_ ? 1 : 2;
    Eigen::VectorXd x(static_cast<Eigen::Index>(num_params()));
    const auto np = static_cast<Eigen::Index>(num_p());
    x(np) = q.coeffs[0].real();
    for (std::size_t r = 1; r < lags_.size(); ++r) {
      const auto col = static_cast<Eigen::Index>((r - 1) * per);
      x(col) = p.coeffs[r].real();
      x(np + 1 + col) = q.coeffs[r].real();
      if (!real_) {
        x(col + 1) = p.coeffs[r].imag();
        x(np + 2 + col) = q.coeffs[r].imag();
      }
    }
    return x;
  }

  std::pair<TrigPoly, TrigPoly> unpack(const Eigen::VectorXd& x) const {
    const std::size_t per = real_ ? 1 : 2;
    const auto np = static_cast<Eigen::Index>(num_p());
    TrigPoly p = TrigPoly::constant(lags_, 1.0);
    TrigPoly q = TrigPoly::constant(lags_, x(np));
    for (std::size_t r = 1; r < lags_.size(); ++r) {
      const auto col = static_cast<Eigen::Index>((r - 1) * per);
      p.coeffs[r] = cplx{x(col), real_ ? 0.0 : x(col + 1)};
      q.coeffs[r] = cplx{x(np + 1 + col), real_ ? 0.0 : x(np + 2 + col)};
    }
    return {p, q};
  }

  /// P and Q at the grid nodes.
  std::pair<Eigen::ArrayXd, Eigen::ArrayXd> polynomials(const Eigen::VectorXd& x) const {
    const auto np = static_cast<Eigen::Index>(num_p());
    Eigen::ArrayXd pv = (basis_ * x.head(np)).array() + 1.0;
    Eigen::ArrayXd qv = (basis_ * x.tail(np)).array() + x(np);
    return {pv, qv};
  }

  /// Index of the first node where P or Q is not strictly positive.
  bool feasible(const Eigen::VectorXd& x) const {
    auto [pv, qv] = polynomials(x);
    return pv.minCoeff() > 0.0 && qv.minCoeff() > 0.0;
  }

  /// Objective value, optionally with its gradient; throws on infeasible points.
  double evaluate(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr) const {
    auto [pv, qv] = polynomials(x);
    check_positive("P", pv);
    check_positive("Q", qv);
    const auto np = static_cast<Eigen::Index>(num_p());
    const double m = static_cast<double>(pv.size());
    const double nu1 = static_cast<double>(nu_ - 1);
    Eigen::ArrayXd ratio = pv / qv;
    Eigen::ArrayXd ratio_pow = ipow(ratio, nu_ - 1);  // (P/Q)^(nu-1) = Phi^alpha
    Eigen::ArrayXd phi = ratio_pow * ratio;           // (P/Q)^nu
    Eigen::ArrayXd p_pow = ipow(pv, nu_ - 1);         // P^(nu-1)
    const double main = (pv * ratio_pow).sum() / m / nu1;
    const double reg = lambda_ / nu1 * (p_pow.inverse()).sum() / m;
    const double linear = x.tail(np + 1).dot(lin_c_) - x.head(np).dot(lin_m_);
    if (grad) {
      grad->resize(x.size());
      Eigen::ArrayXd wp = (static_cast<double>(nu_) / nu1) * ratio_pow - lambda_ / (p_pow * pv);
      grad->head(np) = basis_.transpose() * wp.matrix() / m - lin_m_;
      (*grad)(np) = -phi.sum() / m + lin_c_(0);
      grad->tail(np) = -(basis_.transpose() * phi.matrix()) / m + lin_c_.tail(np);
    }
    return main + reg + linear;
  }

  CoefficientGradient coefficient_gradient(const Eigen::VectorXd& g) const {
    const std::size_t per = real_ ? 1 : 2;
    const auto np = static_cast<Eigen::Index>(num_p());
    CoefficientGradient out{std::vector<cplx>(lags_.size()), std::vector<cplx>(lags_.size())};
    out.q[0] = cplx{g(np), 0.0};
    for (std::size_t r = 1; r < lags_.size(); ++r) {
      const auto col = static_cast<Eigen::Index>((r - 1) * per);
      out.p[r] = cplx{g(col), real_ ? 0.0 : g(col + 1)};
      out.q[r] = cplx{g(np + 1 + col), real_ ? 0.0 : g(np + 2 + col)};
    }
    return out;
  }

  static Eigen::ArrayXd ipow(const Eigen::ArrayXd& v, int n) {
    Eigen::ArrayXd out = Eigen::ArrayXd::Ones(v.size());
    for (int i = 0; i < n; ++i) out *= v;
    return out;
  }

 private:
  static void check_positive(const char* which, const Eigen::ArrayXd& v) {
    Eigen::Index at = 0;
    const double mn = v.minCoeff(&at);
    if (!(mn > 0.0)) throw InfeasiblePointError(which, static_cast<std::size_t>(at), mn);
  }

  LagSet lags_;
  FrequencyGrid grid_;
  int nu_;
  double lambda_;
  bool real_;
  Eigen::MatrixXd basis_;
  Eigen::VectorXd lin_c_;
  Eigen::VectorXd lin_m_;
};

/// J_{nu,lambda}(p, q) on the given grid.
inline double dual_objective(const TrigPoly& p, const TrigPoly& q, const MomentData& data, double lambda,
                             const FrequencyGrid& grid) {
  DualProblem prob(data, lambda, grid.shape());
  return prob.evaluate(prob.pack(p, q));
}

inline CoefficientGradient dual_gradient(const TrigPoly& p, const TrigPoly& q, const MomentData& data, double lambda,
                                         const FrequencyGrid& grid) {
  DualProblem prob(data, lambda, grid.shape());
  Eigen::VectorXd g;
  prob.evaluate(prob.pack(p, q), &g);
  return prob.coefficient_gradient(g);
}

/**
 * Gradient descent from P = Q = 1 with backtracking: each trial step is halved
 * until the iterate keeps P, Q > 0 on the grid and satisfies the Armijo
 * condition, so accepted objectives decrease monotonically.
 */
inline DualSolution solve_dual(const MomentData& data, const DualConfig& cfg) {
  if (data.nu < 2) throw DomainError("nu must be >= 2");
  if (!(cfg.lambda > 0.0)) throw DomainError("solve_dual requires lambda > 0");
  Shape grid = cfg.grid.empty() ? Shape(data.dim(), 64) : cfg.grid;
  DualProblem prob(data, cfg.lambda, grid, cfg.real_coefficients);

  DualSolution sol;
  sol.grid = grid;
  sol.lambda = cfg.lambda;
  sol.nu = data.nu;

  Eigen::VectorXd x = prob.pack(TrigPoly::constant(data.cov.lags, 1.0), TrigPoly::constant(data.cov.lags, 1.0));
  Eigen::VectorXd g, g_new, x_prev, g_prev;
  double f = prob.evaluate(x, &g);
  double last_step = 0.0;
  int it = 0;
  sol.status = "max_iter reached";
  for (;; ++it) {
    const double gn = g.norm();
    if (cfg.record_trace) sol.trace.push_back({it, f, gn, last_step});
    if (gn <= cfg.tol) {
      sol.converged = true;
      sol.status = "converged";
      break;
    }
    if (it >= cfg.max_iter) break;
    double t = cfg.initial_step;
    if (cfg.step_rule == StepRule::barzilai_borwein && it > 0) {
      const Eigen::VectorXd s = x - x_prev;
      const Eigen::VectorXd y = g - g_prev;
      const double sy = s.dot(y);
      if (sy > 0.0) t = std::clamp(s.squaredNorm() / sy, 1e-12, 1e12);
    }
    bool accepted = false;
    while (t > 1e-20) {
      Eigen::VectorXd xn = x - t * g;
      if (prob.feasible(xn)) {
        const double fn = prob.evaluate(xn, &g_new);
        if (fn <= f - cfg.sufficient_decrease * t * gn * gn) {
          x_prev = x;
          g_prev = g;
          x = std::move(xn);
          f = fn;
          g = g_new;
          accepted = true;
          break;
        }
      }
      t *= cfg.backtrack;
    }
    last_step = t;
    if (!accepted) {
      sol.status = "line search stalled";
      break;
    }
  }
  auto [p, q] = prob.unpack(x);
  sol.p = std::move(p);
  sol.q = std::move(q);
  sol.iterations = it;
  sol.grad_norm = g.norm();
  sol.objective = f;
  return sol;
}

/// (P/Q)^nu at the grid nodes.
inline std::vector<double> optimal_spectrum(const DualSolution& sol, const FrequencyGrid& grid) {
  auto pv = sol.p.eval(grid);
  auto qv = sol.q.eval(grid);
  std::vector<double> out(pv.size());
  for (std::size_t l = 0; l < out.size(); ++l) {
    if (!(pv[l] > 0.0 && qv[l] > 0.0)) throw InfeasiblePointError(pv[l] > 0.0 ? "Q" : "P", l, std::min(pv[l], qv[l]));
    out[l] = std::pow(pv[l] / qv[l], sol.nu);
  }
  return out;
}

struct MomentResiduals {
  double covariance;
  double cepstral;
};

/// Euclidean deviation (over canonical representatives) of the grid moments of
/// (P/Q)^nu from the data.
inline MomentResiduals moment_residuals(const DualSolution& sol, const MomentData& data, const FrequencyGrid& grid) {
  const auto phi = optimal_spectrum(sol, grid);
  const double alpha = data.cep.alpha.value();
  std::vector<double> phi_alpha(phi.size());
  for (std::size_t l = 0; l < phi.size(); ++l) phi_alpha[l] = std::pow(phi[l], alpha);
  const double inv = 1.0 / static_cast<double>(phi.size());
  double cov = 0.0, cep = 0.0;
  const auto& lags = data.cov.lags;
  for (std::size_t r = 0; r < lags.size(); ++r) {
    const auto e = grid.exponential(lags[r], +1);
    cplx mc{}, mm{};
    for (std::size_t l = 0; l < phi.size(); ++l) {
      mc += e[l] * phi[l];
      mm += e[l] * phi_alpha[l];
    }
    cov += std::norm(data.cov[r] - mc * inv);
    if (r > 0) cep += std::norm(data.cep[r] - mm * (inv / alpha));
  }
  return {std::sqrt(cov), std::sqrt(cep)};
}

}  // namespace gencep
