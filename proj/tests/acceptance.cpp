// SPDX-License-Identifier: Apache-2.0
// Acceptance gate: one PASS/FAIL line per criterion.
//   acceptance               run every criterion
//   acceptance --criterion N run criterion N only
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "gencep/gencep.hpp"
#include "oracles.hpp"

using namespace gencep;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome correction_constants() {
  const double c53 = 1.0 / gamma_fn(5.0 / 3.0);
  const double c32 = correction_constant(Alpha(0.5));
  const bool ok = std::abs(c53 - 1.1077) <= 1e-4 && std::abs(c32 - 1.1284) <= 1e-4 &&
                  std::abs(correction_constant(Alpha::from_nu(3)) - c53) <= 1e-15;
  return {ok, fmt("1/Gamma(5/3) = %.6f, 2/sqrt(pi) = %.6f", c53, c32)};
}

Outcome exponential_law() {
  // |Z|^2 for a unit circular Gaussian Z is Exp(1).
  const std::size_t n = 1000000;
  GaussianStream g(20240601);
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = g(), im = g();
    const double v = std::sqrt(0.5 * (re * re + im * im));
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  const double var = (s2 - n * mean * mean) / (n - 1);
  const double mu = std::sqrt(std::numbers::pi) / 2.0, sigma2 = 1.0 - std::numbers::pi / 4.0;
  const double se_mean = std::sqrt(sigma2 / n);
  // Var of the sample variance: (mu4 - sigma^4) / n with mu4 = E(X - mu)^4 for X = sqrt(E).
  const double m3 = gamma_fn(2.5), m4 = 2.0;
  const double mu4 = m4 - 4.0 * mu * m3 + 6.0 * mu * mu * 1.0 - 3.0 * std::pow(mu, 4);
  const double se_var = std::sqrt((mu4 - sigma2 * sigma2) / n);
  const double zm = (mean - mu) / se_mean, zv = (var - sigma2) / se_var;
  return {std::abs(zm) <= 3.0 && std::abs(zv) <= 3.0,
          fmt("mean %.6f (z = %+.2f), variance %.6f (z = %+.2f)", mean, zm, var, zv)};
}

Outcome gauss_identity() {
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double a = 0.1 * i;
    const double lhs = hyp2f1_diag(Alpha(a), 1.0);
    const double rhs = gamma_fn(2.0 * a + 1.0) / std::pow(gamma_fn(a + 1.0), 2);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {worst <= 1e-10, fmt("max |2F1 - Gamma ratio| = %.3e", worst)};
}

Outcome consistency_white() {
  MCConfig cfg;
  cfg.process = ProcessSpec::white(1.0, NoiseKind::circular);
  cfg.alpha = Alpha(0.5);
  cfg.sizes = {512, 4096};
  cfg.trials = 500;
  cfg.seed = 4;
  const auto rep = mc_estimator_study(cfg, LagSet::box(1, 1));
  const auto& small = rep.at(512, Lag{1});
  const auto& large = rep.at(4096, Lag{1});
  const double ratio = large.variance / small.variance;
  const double bias = std::abs(large.mean);
  return {bias <= 0.01 && ratio <= 0.25,
          fmt("|mean m1| at 4096 = %.2e, var ratio 4096/512 = %.4f (theory 0.125)", bias, ratio)};
}

Outcome uncorrected_bias() {
  // AR(1) with pole 0.5, alpha = 1/2: the uncorrected mean of m1 sits at Gamma(3/2) times the truth.
  const Alpha alpha(0.5);
  const auto filter = RationalFilter::real({1.0}, {1.0, -0.5});
  auto phi = [](const std::vector<double>& th) { return 1.0 / std::norm(1.0 - 0.5 * std::polar(1.0, -th[0])); };
  const auto lags = LagSet::box(1, 1);
  const double truth = true_gen_cepstral(phi, alpha, lags).at({1}).real();
  MCConfig cfg;
  cfg.process = ProcessSpec::arma(filter, NoiseKind::circular);
  cfg.alpha = alpha;
  cfg.sizes = {4096};
  cfg.trials = 300;
  cfg.seed = 5;
  cfg.corrected = false;
  const double unc = mc_estimator_study(cfg, lags).at(4096, Lag{1}).mean.real();
  cfg.corrected = true;
  const double cor = mc_estimator_study(cfg, lags).at(4096, Lag{1}).mean.real();
  const double g = gamma_fn(1.5);
  const double r_truth = unc / truth, r_pair = unc / cor;
  const bool ok = std::abs(r_truth / g - 1.0) <= 0.03 && std::abs(r_pair / g - 1.0) <= 0.03;
  return {ok, fmt("uncorrected/true = %.4f, uncorrected/corrected = %.4f, Gamma(3/2) = %.4f", r_truth, r_pair, g)};
}

Outcome exact_recovery() {
  double worst = 0.0;
  const auto lags = LagSet::box(1, 31);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto rec = gen_white_noise({32}, 1.0, seed, NoiseKind::circular);
    const auto direct = biased_covariances(rec, lags);
    const auto via_pg = covariances_from_periodogram(periodogram(rec, Shape{63}), lags);
    for (std::size_t r = 0; r < lags.size(); ++r) worst = std::max(worst, std::abs(direct[r] - via_pg[r]));
  }
  return {worst <= 1e-9, fmt("max |diff| = %.3e over 5 records", worst)};
}

Outcome correlation_sums() {
  const auto filter = RationalFilter::real({1.0, -1.0, 0.8}, {1.0, -1.6, 0.81});
  const std::vector<std::size_t> sizes{64, 128, 256, 512};
  std::vector<double> sums;
  for (std::size_t n : sizes) sums.push_back(correlation_sum(filter, n, 3 * n / 4));
  bool decreasing = true;
  for (std::size_t i = 1; i < sums.size(); ++i)
    decreasing = decreasing && sums[i] / static_cast<double>(sizes[i]) < sums[i - 1] / static_cast<double>(sizes[i - 1]);
  const double ratio = sums.back() / sums.front();
  return {ratio <= 1.5 && decreasing, fmt("sums %.4f %.4f %.4f %.4f, last/first = %.4f", sums[0], sums[1], sums[2],
                                          sums[3], ratio)};
}

double worst_fd_error(const DualProblem& prob, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto np = static_cast<Eigen::Index>(prob.num_p());
  const double budget = 0.8 / static_cast<double>(2 * np + 1);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(prob.num_params()));
    for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = budget * u(eng);
    x(np) = 1.0 + 0.5 * std::abs(u(eng));
    Eigen::VectorXd g;
    prob.evaluate(x, &g);
    Eigen::VectorXd fd(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      Eigen::VectorXd xp = x, xm = x;
      xp(j) += 1e-6;
      xm(j) -= 1e-6;
      fd(j) = (prob.evaluate(xp) - prob.evaluate(xm)) / 2e-6;
    }
    worst = std::max(worst, (g - fd).norm() / std::max(1.0, g.norm()));
  }
  return worst;
}

Outcome gradient_check() {
  const auto m1 = benchmark_system_1d();
  auto phi1 = [&](const std::vector<double>& th) { return m1.spectrum(th); };
  const auto l1 = LagSet::box(1, 2);
  MomentData d1{true_covariances(phi1, l1), true_gen_cepstral(phi1, Alpha::from_nu(3), l1), 3};
  const double e1 = worst_fd_error(DualProblem(d1, 1e-2, Shape{64}), 8);

  const auto m2 = benchmark_system_2d();
  auto phi2 = [&](const std::vector<double>& th) { return m2.spectrum(th); };
  const auto l2 = LagSet::box(2, 1);
  MomentData d2{true_covariances(phi2, l2, Shape{64, 64}), true_gen_cepstral(phi2, Alpha::from_nu(2), l2, Shape{64, 64}),
                2};
  const double e2 = worst_fd_error(DualProblem(d2, 1e-2, Shape{20, 20}), 9);
  return {e1 <= 1e-5 && e2 <= 1e-5, fmt("worst relative error: 1-d %.2e, 2-d %.2e", e1, e2)};
}

Outcome white_fixed_point() {
  const auto lags = LagSet::box(1, 2);
  MomentData d{CovarianceSet{lags, std::vector<cplx>(lags.size())},
               GenCepstralSet{Alpha::from_nu(3), lags, std::vector<cplx>(lags.size()), true}, 3};
  d.cov.coeffs[0] = 1.0;
  DualConfig cfg;
  cfg.lambda = 1e-6;
  cfg.grid = {64};
  cfg.tol = 1e-6;
  const auto sol = solve_dual(d, cfg);
  double other = 0.0;
  for (std::size_t r = 1; r < lags.size(); ++r) other = std::max({other, std::abs(sol.p.coeffs[r]), std::abs(sol.q.coeffs[r])});
  const double dq0 = std::abs(sol.q.coeffs[0] - 1.0);
  return {sol.converged && dq0 <= 1e-3 && other <= 1e-3 && sol.grad_norm <= 1e-6,
          fmt("converged %d, |q0 - 1| = %.2e, max other = %.2e, grad = %.2e", sol.converged, dq0, other, sol.grad_norm)};
}

Outcome identify_1d() {
  const auto truth = benchmark_system_1d();
  auto phi = [&](const std::vector<double>& th) { return truth.spectrum(th); };
  std::vector<double> perr, serr;
  int failures = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto rec = simulate_cascade_1d(truth, 10000, seed);
    IdentificationConfig cfg;
    cfg.lambda = 1e-6;
    cfg.step_rule = StepRule::barzilai_borwein;
    const auto res = identify_cascade(rec, 3, cfg);
    if (!res.report.ok()) {
      ++failures;
      perr.push_back(1e9);
      serr.push_back(1e9);
      continue;
    }
    const FrequencyGrid grid(Shape{10000});
    perr.push_back(parameter_error(res.model, truth));
    serr.push_back(spectrum_error(optimal_spectrum(*res.report.solution, grid), phi, grid).relative);
  }
  const double mp = median(perr), ms = median(serr);
  return {failures == 0 && mp <= 0.05 && ms <= 0.05,
          fmt("median parameter error %.4f (gate 0.05), median spectrum error %.4f (gate 0.05), failures %d", mp, ms,
              failures)};
}

Outcome identify_2d() {
  const auto truth = benchmark_system_2d();
  auto phi = [&](const std::vector<double>& th) { return truth.spectrum(th); };
  std::vector<double> perr, serr;
  int failures = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto rec = simulate_cascade_2d(benchmark_filter_2d(), 2, {100, 100}, seed);
    IdentificationConfig cfg;
    cfg.lags = LagSet::box(2, 1);
    cfg.lambda = 1e-6;
    cfg.grid = Shape{30, 30};
    const auto res = identify_cascade(rec, 2, cfg);
    if (!res.report.ok()) {
      ++failures;
      perr.push_back(1e9);
      serr.push_back(1e9);
      continue;
    }
    const FrequencyGrid grid(Shape{100, 100});
    perr.push_back(parameter_error(res.model, truth));
    serr.push_back(spectrum_error(optimal_spectrum(*res.report.solution, grid), phi, grid).relative);
  }
  const double mp = median(perr), ms = median(serr);
  return {failures == 0 && mp <= 0.3 && ms <= 0.10,
          fmt("median parameter error %.4f (gate 0.3), median spectrum error %.4f (gate 0.10), failures %d", mp, ms,
              failures)};
}

Outcome factorization_round_trip() {
  std::mt19937_64 eng(31415);
  double worst_res = 0.0, worst_agree = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto b = oracle::random_min_phase(eng, 1 + static_cast<std::size_t>(trial % 6), 0.95, trial % 2 == 0);
    const auto one = oracle::autocorrelation(b);
    auto p = TrigPoly::zero(LagSet::box(1, static_cast<int>(one.size()) - 1));
    for (std::size_t k = 0; k < one.size(); ++k) p.coeffs[k] = one[k];
    const auto fb = bauer_factorize_1d(p);
    const auto fr = min_phase_roots_1d(p);
    for (std::size_t l = 0; l < 4096; ++l) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(l) / 4096.0;
      worst_res = std::max(worst_res, std::abs(std::norm(oracle::eval_poly(fb.coeffs, th)) - p.eval(std::vector<double>{th})));
    }
    for (std::size_t i = 0; i < std::max(fb.coeffs.size(), fr.coeffs.size()); ++i) {
      const cplx x = i < fb.coeffs.size() ? fb.coeffs[i] : cplx{}, y = i < fr.coeffs.size() ? fr.coeffs[i] : cplx{};
      worst_agree = std::max(worst_agree, std::abs(x - y));
    }
  }
  // 2-d: |b1(theta1) b2(theta2)|^2 for the benchmark numerator factors.
  const std::vector<cplx> b1{0.6696, -0.4018}, b2{1.0, -0.8};
  const auto p1 = oracle::autocorrelation(b1), p2 = oracle::autocorrelation(b2);
  auto p = TrigPoly::zero(LagSet::box(2, 1));
  auto side = [](const std::vector<cplx>& q, int k) { return k >= 0 ? q[static_cast<std::size_t>(k)] : std::conj(q[static_cast<std::size_t>(-k)]); };
  for (std::size_t r = 0; r < p.lags.size(); ++r) p.coeffs[r] = side(p1, p.lags[r][0]) * side(p2, p.lags[r][1]);
  const auto f = factorize_2d_separable(p);
  double rt = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) rt += std::norm(f(i, j) - b1[i] * b2[j]);
  rt = std::sqrt(rt);
  return {worst_res <= 1e-7 && worst_agree <= 1e-6 && rt <= 1e-8,
          fmt("1-d residual %.2e, Bauer vs roots %.2e, 2-d round trip %.2e", worst_res, worst_agree, rt)};
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>>& criteria() {
  static const std::map<int, std::pair<const char*, std::function<Outcome()>>> table{
      {1, {"correction constants", correction_constants}},
      {2, {"exponential-law moments", exponential_law}},
      {3, {"Gauss identity", gauss_identity}},
      {4, {"estimator consistency, white noise", consistency_white}},
      {5, {"uncorrected bias factor", uncorrected_bias}},
      {6, {"exact covariance recovery", exact_recovery}},
      {7, {"correlation sums", correlation_sums}},
      {8, {"dual gradient vs finite differences", gradient_check}},
      {9, {"dual fixed point", white_fixed_point}},
      {10, {"1-d identification", identify_1d}},
      {11, {"2-d identification", identify_2d}},
      {12, {"factorization round trip", factorization_round_trip}},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      which.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (which.empty())
    for (const auto& [id, _] : criteria()) which.push_back(id);
  int failed = 0;
  for (int id : which) {
    auto it = criteria().find(id);
    if (it == criteria().end()) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << it->second.first << "): " << o.detail
              << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
