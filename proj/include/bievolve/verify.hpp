#pragma once

// Randomized self-check suites behind `bievolve verify`.
//
// Every suite is a pure function of its seed: random draws come from a fixed
// bit-level construction on top of std::mt19937_64, so reports are
// byte-identical across runs and platforms.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bievolve/linops.hpp"
#include "bievolve/pathsum.hpp"

namespace bievolve::verify {

struct PropertyResult {
  std::string name;
  int samples = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;
  bool all_pass() const;
};

// Uniform doubles built from raw generator words as (w >> 11) * 2^-53; avoids
// std::uniform_real_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double unit();                              // [0, 1)
  double uniform(double lo, double hi);       // [lo, hi)
  int uniform_int(int lo, int hi);            // [lo, hi] inclusive
  linops::Complex complex_in_disc(double radius);
  linops::ComplexMatrix hermitian(int dim, double scale);
  linops::StateVector state(int dim);         // normalized

 private:
  std::mt19937_64 gen_;
};

// Brute-force ordering oracle: sums all C(m+n, n) products with m backward
// and n forward factors. Cost grows as C(m+n, n); keep m + n small.
linops::ComplexMatrix enumerate_orderings(const pathsum::BiHamiltonian& bh, int m, int n);

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"interference", "pathsum", "kaon", "spectral"};
  return names;
}

SuiteReport run_suite(const std::string& suite, std::uint64_t seed);

// suite == "all" runs every suite; otherwise the named one.
std::vector<SuiteReport> run(const std::string& suite, std::uint64_t seed);

std::string report_json(const std::vector<SuiteReport>& reports);
std::string report_text(const std::vector<SuiteReport>& reports);

}  // namespace bievolve::verify
