// SPDX-License-Identifier: Apache-2.0
#pragma once

/** @file
 * File formats: sample records (CSV and a little-endian binary layout),
 * CSV tables for moments, spectra and reports, JSON for solutions, factors
 * and models.  Requires nlohmann/json (json.hpp on the include path).
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gencep/cepstral.hpp"
#include "gencep/consistency.hpp"
#include "gencep/dualopt.hpp"
#include "gencep/error.hpp"
#include "gencep/factorization.hpp"
#include "gencep/pipeline.hpp"
#include "gencep/signal.hpp"
#include "gencep/spectra.hpp"

namespace gencep::io {

using json = nlohmann::json;

class FormatError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (trim(s.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw FormatError("line " + std::to_string(line) + ": not a number: '" + s + "'");
}

inline void set_precision(std::ostream& os) { os << std::setprecision(17); }

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw FormatError("truncated binary record");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

inline std::string lag_header(std::size_t dim) {
  std::string h;
  for (std::size_t j = 0; j < dim; ++j) h += "k" + std::to_string(j + 1) + ",";
  return h;
}

inline void put_lag(std::ostream& os, const Lag& k) {
  for (int v : k) os << v << ',';
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sample records

/// Columns t1..td, re, im (row-major index order).
inline void write_record_csv(std::ostream& os, const SampleRecord& r) {
  r.validate();
  detail::set_precision(os);
  for (std::size_t j = 0; j < r.dim(); ++j) os << 't' << j + 1 << ',';
  os << "re,im\n";
  for (std::size_t flat = 0; flat < r.size(); ++flat) {
    for (auto i : unravel(flat, r.shape)) os << i << ',';
    os << r.data[flat].real() << ',' << r.data[flat].imag() << '\n';
  }
}

inline SampleRecord read_record_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("empty record file");
  const auto header = detail::split(detail::trim(line));
  if (header.size() < 3 || header[header.size() - 2] != "re" || header.back() != "im")
    throw FormatError("record header must be t1,...,td,re,im");
  const std::size_t d = header.size() - 2;
  std::vector<std::vector<std::size_t>> idx;
  std::vector<cplx> vals;
  Shape shape(d, 0);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto cells = detail::split(line);
    if (cells.size() != d + 2) throw FormatError("line " + std::to_string(lineno) + ": wrong column count");
    std::vector<std::size_t> t(d);
    for (std::size_t j = 0; j < d; ++j) {
      const double v = detail::to_double(cells[j], lineno);
      if (v < 0 || v != std::floor(v)) throw FormatError("line " + std::to_string(lineno) + ": bad index");
      t[j] = static_cast<std::size_t>(v);
      shape[j] = std::max(shape[j], t[j] + 1);
    }
    idx.push_back(std::move(t));
    vals.emplace_back(detail::to_double(cells[d], lineno), detail::to_double(cells[d + 1], lineno));
  }
  SampleRecord r;
  r.shape = shape;
  if (total_size(shape) != vals.size()) throw FormatError("record file does not cover a full box of indices");
  r.data.assign(vals.size(), cplx{});
  std::vector<bool> seen(vals.size(), false);
  bool real = true;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const auto flat = ravel(idx[i], shape);
    if (seen[flat]) throw FormatError("duplicate sample index");
    seen[flat] = true;
    r.data[flat] = vals[i];
    real = real && vals[i].imag() == 0.0;
  }
  r.is_real = real;
  r.generator_tag = "csv";
  return r;
}

/**
 * Binary layout (little-endian): "GCSR", u32 version = 1, u32 d, u8 is_real,
 * 7 bytes padding, u64 seed, u64 N[d], then N_1 ... N_d pairs of f64 (re, im).
 */
inline void write_record_binary(std::ostream& os, const SampleRecord& r) {
  r.validate();
  os.write("GCSR", 4);
  detail::put_le<std::uint32_t>(os, 1);
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(r.dim()));
  detail::put_le<std::uint8_t>(os, r.is_real ? 1 : 0);
  for (int i = 0; i < 7; ++i) detail::put_le<std::uint8_t>(os, 0);
  detail::put_le<std::uint64_t>(os, r.seed);
  for (auto n : r.shape) detail::put_le<std::uint64_t>(os, n);
  for (const auto& v : r.data) {
    detail::put_le<double>(os, v.real());
    detail::put_le<double>(os, v.imag());
  }
}

inline SampleRecord read_record_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "GCSR") throw FormatError("not a GCSR record");
  if (detail::get_le<std::uint32_t>(is) != 1) throw FormatError("unsupported GCSR version");
  const auto d = detail::get_le<std::uint32_t>(is);
  if (d == 0 || d > 16) throw FormatError("implausible record rank");
  SampleRecord r;
  r.is_real = detail::get_le<std::uint8_t>(is) != 0;
  for (int i = 0; i < 7; ++i) detail::get_le<std::uint8_t>(is);
  r.seed = detail::get_le<std::uint64_t>(is);
  r.shape.resize(d);
  for (auto& n : r.shape) n = detail::get_le<std::uint64_t>(is);
  validate_shape(r.shape);
  r.data.resize(total_size(r.shape));
  for (auto& v : r.data) {
    const double re = detail::get_le<double>(is);
    const double im = detail::get_le<double>(is);
    v = cplx{re, im};
  }
  r.generator_tag = "binary";
  return r;
}

inline void save_record(const std::string& path, const SampleRecord& r) {
  const bool binary = path.size() > 4 && path.substr(path.size() - 4) == ".bin";
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw FormatError("cannot write " + path);
  binary ? write_record_binary(os, r) : write_record_csv(os, r);
}

inline SampleRecord load_record(const std::string& path) {
  const bool binary = path.size() > 4 && path.substr(path.size() - 4) == ".bin";
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) throw FormatError("cannot read " + path);
  return binary ? read_record_binary(is) : read_record_csv(is);
}

// ---------------------------------------------------------------------------
// Moments

/// Columns k1..kd, c_re, c_im, m_re, m_im, corrected, alpha; one row per representative.
inline void write_moments_csv(std::ostream& os, const CovarianceSet& c, const GenCepstralSet& m) {
  if (!(c.lags == m.lags)) throw DomainError("covariance and cepstral lag sets differ");
  detail::set_precision(os);
  os << detail::lag_header(c.lags.dim()) << "c_re,c_im,m_re,m_im,corrected,alpha\n";
  for (std::size_t r = 0; r < c.size(); ++r) {
    detail::put_lag(os, c.lags[r]);
    os << c[r].real() << ',' << c[r].imag() << ',' << m[r].real() << ',' << m[r].imag() << ','
       << (m.corrected ? 1 : 0) << ',' << m.alpha.value() << '\n';
  }
}

struct MomentFile {
  CovarianceSet cov;
  GenCepstralSet cep;
};

inline MomentFile read_moments_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("empty moments file");
  const auto header = detail::split(detail::trim(line));
  if (header.size() < 7 || header[header.size() - 6] != "c_re") throw FormatError("unexpected moments header");
  const std::size_t d = header.size() - 6;
  std::vector<Lag> lags;
  std::vector<cplx> cs, ms;
  double alpha = -1.0;
  bool corrected = false;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto cells = detail::split(line);
    if (cells.size() != d + 6) throw FormatError("line " + std::to_string(lineno) + ": wrong column count");
    Lag k(d);
    for (std::size_t j = 0; j < d; ++j) k[j] = static_cast<int>(detail::to_double(cells[j], lineno));
    lags.push_back(k);
    cs.emplace_back(detail::to_double(cells[d], lineno), detail::to_double(cells[d + 1], lineno));
    ms.emplace_back(detail::to_double(cells[d + 2], lineno), detail::to_double(cells[d + 3], lineno));
    corrected = detail::to_double(cells[d + 4], lineno) != 0.0;
    alpha = detail::to_double(cells[d + 5], lineno);
  }
  if (lags.empty()) throw FormatError("moments file has no rows");
  LagSet set(d, lags);
  MomentFile out{CovarianceSet{set, std::vector<cplx>(set.size())},
                 GenCepstralSet{Alpha(alpha), set, std::vector<cplx>(set.size()), corrected}};
  for (std::size_t i = 0; i < lags.size(); ++i) {
    auto hit = set.find(lags[i]);
    out.cov.coeffs[hit->first] = hit->second ? std::conj(cs[i]) : cs[i];
    out.cep.coeffs[hit->first] = hit->second ? std::conj(ms[i]) : ms[i];
  }
  return out;
}

/// Columns node, theta1..thetad, value.
inline void write_periodogram_csv(std::ostream& os, const PeriodogramValues& pg) {
  detail::set_precision(os);
  os << "node,";
  for (std::size_t j = 0; j < pg.grid.dim(); ++j) os << "theta" << j + 1 << ',';
  os << "value\n";
  for (std::size_t l = 0; l < pg.values.size(); ++l) {
    os << l << ',';
    for (double th : pg.grid.node(l)) os << th << ',';
    os << pg.values[l] << '\n';
  }
}

inline void write_cepstra_csv(std::ostream& os, const GenCepstralSet& m) {
  detail::set_precision(os);
  os << detail::lag_header(m.lags.dim()) << "m_re,m_im,corrected,alpha\n";
  for (std::size_t r = 0; r < m.size(); ++r) {
    detail::put_lag(os, m.lags[r]);
    os << m[r].real() << ',' << m[r].imag() << ',' << (m.corrected ? 1 : 0) << ',' << m.alpha.value() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Monte Carlo and diagnostics tables

inline void write_report_csv(std::ostream& os, const MomentReport& rep) {
  detail::set_precision(os);
  os << "N,k,empirical_mean_re,empirical_mean_im,empirical_var,theory_mean_re,theory_mean_im,theory_var\n";
  for (const auto& row : rep.rows) {
    os << row.n << ',' << lag_string(row.k) << ',' << row.mean.real() << ',' << row.mean.imag() << ','
       << row.variance << ',';
    if (row.theory_mean)
      os << row.theory_mean->real() << ',' << row.theory_mean->imag() << ',' << *row.theory_variance;
    else
      os << ",,";
    os << '\n';
  }
}

inline void write_correlation_sums_csv(std::ostream& os, const std::vector<CorrelationSumRow>& rows) {
  detail::set_precision(os);
  os << "N,l1,sum\n";
  for (const auto& r : rows) os << r.n << ',' << r.l1 << ',' << r.sum << '\n';
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
  detail::set_precision(os);
  os << "iteration,objective,grad_norm,step\n";
  for (const auto& t : trace) os << t.iteration << ',' << t.objective << ',' << t.grad_norm << ',' << t.step << '\n';
}

// ---------------------------------------------------------------------------
// JSON

inline json complex_array(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& c : v) a.push_back({c.real(), c.imag()});
  return a;
}

inline std::vector<cplx> complex_array(const json& a) {
  std::vector<cplx> out;
  for (const auto& e : a) {
    if (e.is_number()) out.emplace_back(e.get<double>(), 0.0);
    else if (e.is_array() && e.size() == 2) out.emplace_back(e[0].get<double>(), e[1].get<double>());
    else throw FormatError("coefficient must be a number or a [re, im] pair");
  }
  return out;
}

inline json poly_json(const TrigPoly& p) {
  json reps = json::array();
  for (std::size_t r = 0; r < p.lags.size(); ++r)
    reps.push_back({{"k", p.lags[r]}, {"re", p.coeffs[r].real()}, {"im", p.coeffs[r].imag()}});
  return reps;
}

inline TrigPoly poly_from_json(const json& reps, std::size_t dim) {
  std::vector<Lag> lags;
  for (const auto& e : reps) lags.push_back(e.at("k").get<Lag>());
  TrigPoly p = TrigPoly::zero(LagSet(dim, lags));
  for (const auto& e : reps) {
    auto hit = p.lags.find(e.at("k").get<Lag>());
    const cplx v{e.at("re").get<double>(), e.at("im").get<double>()};
    p.coeffs[hit->first] = hit->second ? std::conj(v) : v;
  }
  return p;
}

inline json solution_json(const DualSolution& s) {
  return {{"nu", s.nu},
          {"lambda", s.lambda},
          {"grid", s.grid},
          {"iterations", s.iterations},
          {"grad_norm", s.grad_norm},
          {"objective", s.objective},
          {"converged", s.converged},
          {"status", s.status},
          {"p", poly_json(s.p)},
          {"q", poly_json(s.q)}};
}

inline DualSolution solution_from_json(const json& j) {
  DualSolution s;
  s.nu = j.at("nu").get<int>();
  s.lambda = j.at("lambda").get<double>();
  s.grid = j.at("grid").get<Shape>();
  s.iterations = j.value("iterations", 0);
  s.grad_norm = j.value("grad_norm", 0.0);
  s.objective = j.value("objective", 0.0);
  s.converged = j.value("converged", false);
  s.status = j.value("status", std::string{});
  s.p = poly_from_json(j.at("p"), s.grid.size());
  s.q = poly_from_json(j.at("q"), s.grid.size());
  return s;
}

inline json factor_json(const SpectralFactor& f) {
  return {{"shape", f.shape},
          {"coeffs", complex_array(f.coeffs)},
          {"min_phase", f.min_phase},
          {"residual", f.residual},
          {"max_root_modulus", f.max_root_modulus},
          {"method", f.method}};
}

inline json model_json(const CascadeModel& m) {
  return {{"nu", m.nu},
          {"b_shape", m.b_shape},
          {"a_shape", m.a_shape},
          {"b", complex_array(m.b)},
          {"a", complex_array(m.a)},
          {"provenance", m.provenance == Provenance::identified ? "identified" : "specified"}};
}

inline CascadeModel model_from_json(const json& j) {
  CascadeModel m;
  m.nu = j.at("nu").get<int>();
  m.b = complex_array(j.at("b"));
  m.a = complex_array(j.at("a"));
  m.b_shape = j.contains("b_shape") ? j.at("b_shape").get<Shape>() : Shape{m.b.size()};
  m.a_shape = j.contains("a_shape") ? j.at("a_shape").get<Shape>() : Shape{m.a.size()};
  if (total_size(m.b_shape) != m.b.size() || total_size(m.a_shape) != m.a.size())
    throw FormatError("model coefficient count does not match its shape");
  m.provenance = j.value("provenance", std::string{"specified"}) == "identified" ? Provenance::identified
                                                                                   : Provenance::specified;
  return m;
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot write " + path);
  os << j.dump(2) << '\n';
}

inline json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot read " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace gencep::io
