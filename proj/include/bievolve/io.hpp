#pragma once

// File formats shared by the CLI and the tests.
//
//   matrix JSON   {"dim": d, "entries":    [[re, im], ...]}  row-major, d*d pairs
//   vector JSON   {"dim": d, "amplitudes": [[re, im], ...]}  d pairs
//   profile CSV   x,re,im,log_abs,norm_abs,quad_approx[,density]
//   path-sum CSV  n,norm,log_norm,binomial_log
//
// CSV floating-point fields are written in scientific notation with 17
// significant digits; JSON numbers use the shortest representation that parses
// back to the same double.  Both use '.' as the decimal separator and LF line
// endings, independent of locale.

#include <optional>
#include <string>
#include <vector>

#include "bievolve/interference.hpp"
#include "bievolve/linops.hpp"
#include "bievolve/pathsum.hpp"

namespace bievolve::io {

std::string format_double(double v);  // scientific, 17 significant digits

std::string matrix_to_json(const linops::ComplexMatrix& m);
std::string vector_to_json(const linops::StateVector& v);
linops::ComplexMatrix matrix_from_json(const std::string& text);
linops::StateVector vector_from_json(const std::string& text);

linops::ComplexMatrix read_matrix(const std::string& path);
linops::StateVector read_vector(const std::string& path);

// density: optional eigenvalue-density overlay column; must match the sample
// count when present.
std::string profile_to_csv(const interference::InterferenceProfile& profile,
                           const std::optional<std::vector<double>>& density = std::nullopt);

std::string pathsum_to_csv(const pathsum::PathSumResult& result);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace bievolve::io
