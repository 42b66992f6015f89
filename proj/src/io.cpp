#include "bievolve/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace bievolve::io {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json pair_of(linops::Complex z) {
  return ordered_json::array({z.real(), z.imag()});
}

linops::Complex pair_from(const ordered_json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::runtime_error(std::string(what) + ": each entry must be a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json parse(const std::string& text, const char* what) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw std::runtime_error(std::string(what) + ": malformed JSON");
  }
  return j;
}

int read_dim(const ordered_json& j, const char* what) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer()) {
    throw std::runtime_error(std::string(what) + ": missing integer \"dim\"");
  }
  int dim = j["dim"].get<int>();
  if (dim < 1 || dim > linops::kMaxDim) {
    throw std::runtime_error(std::string(what) + ": \"dim\" out of range");
  }
  return dim;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  if (ec != std::errc()) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf, ptr);
}

std::string matrix_to_json(const linops::ComplexMatrix& m) {
  ordered_json j;
  j["dim"] = m.dim();
  ordered_json entries = ordered_json::array();
  for (int r = 0; r < m.dim(); ++r) {
    for (int c = 0; c < m.dim(); ++c) {
      entries.push_back(pair_of(m(r, c)));
    }
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

std::string vector_to_json(const linops::StateVector& v) {
  ordered_json j;
  j["dim"] = v.dim();
  ordered_json amps = ordered_json::array();
  for (int i = 0; i < v.dim(); ++i) {
    amps.push_back(pair_of(v[i]));
  }
  j["amplitudes"] = std::move(amps);
  return j.dump(2) + "\n";
}

linops::ComplexMatrix matrix_from_json(const std::string& text) {
  ordered_json j = parse(text, "matrix");
  int dim = read_dim(j, "matrix");
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw std::runtime_error("matrix: missing \"entries\" array");
  }
  const auto& entries = j["entries"];
  if (static_cast<int>(entries.size()) != dim * dim) {
    throw std::runtime_error("matrix: \"entries\" must hold dim*dim pairs (row-major)");
  }
  linops::ComplexMatrix m(dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      m(r, c) = pair_from(entries[static_cast<std::size_t>(r) * dim + c], "matrix");
    }
  }
  if (!m.is_finite()) {
    throw std::runtime_error("matrix: entries must be finite");
  }
  return m;
}

linops::StateVector vector_from_json(const std::string& text) {
  ordered_json j = parse(text, "vector");
  int dim = read_dim(j, "vector");
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) {
    throw std::runtime_error("vector: missing \"amplitudes\" array");
  }
  const auto& amps = j["amplitudes"];
  if (static_cast<int>(amps.size()) != dim) {
    throw std::runtime_error("vector: \"amplitudes\" must hold dim pairs");
  }
  linops::StateVector v(dim);
  for (int i = 0; i < dim; ++i) {
    v[i] = pair_from(amps[i], "vector");
  }
  if (!v.is_finite()) {
    throw std::runtime_error("vector: amplitudes must be finite");
  }
  return v;
}

linops::ComplexMatrix read_matrix(const std::string& path) {
  return matrix_from_json(read_file(path));
}

linops::StateVector read_vector(const std::string& path) {
  return vector_from_json(read_file(path));
}

std::string profile_to_csv(const interference::InterferenceProfile& profile,
                           const std::optional<std::vector<double>>& density) {
  if (density && density->size() != profile.samples.size()) {
    throw std::invalid_argument("profile_to_csv: density column length mismatch");
  }
  std::string out = "x,re,im,log_abs,norm_abs,quad_approx";
  if (density) {
    out += ",density";
  }
  out += '\n';
  for (std::size_t i = 0; i < profile.samples.size(); ++i) {
    const auto& s = profile.samples[i];
    out += format_double(s.x);
    out += ',';
    out += format_double(s.value.real());
    out += ',';
    out += format_double(s.value.imag());
    out += ',';
    out += format_double(s.log_abs);
    out += ',';
    out += format_double(s.norm_abs);
    out += ',';
    out += format_double(s.quad);
    if (density) {
      out += ',';
      out += format_double((*density)[i]);
    }
    out += '\n';
  }
  return out;
}

std::string pathsum_to_csv(const pathsum::PathSumResult& result) {
  std::string out = "n,norm,log_norm,binomial_log\n";
  for (std::size_t n = 0; n < result.norms.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += format_double(result.norms[n]);
    out += ',';
    out += format_double(std::log(result.norms[n]));
    out += ',';
    out += format_double(interference::log_binomial(result.n_steps, static_cast<std::int64_t>(n)));
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace bievolve::io
