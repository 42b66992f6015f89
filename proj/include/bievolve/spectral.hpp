#pragma once

// Spectral statistics of the commutator operator over an M-particle ensemble.
// The eigenvalue degeneracy is binomial, rho(lambda = k*|lambda1|) = C(M, M/2+k),
// giving a near-Gaussian density with standard deviation
//   lambda_SD = 0.5 * sqrt(M) * |lambda1|.
// Particle numbers of order 1e80 put every quantity far outside double range,
// so all ensemble values are carried in base-10 log space (LogScaled).

#include <cstdint>

namespace bievolve::spectral {

// A positive real carried as log10(value). mantissa() is in [1, 10).
struct LogScaled {
  double log10_value;

  static LogScaled from_value(double v);
  static LogScaled from_log10(double l) { return {l}; }
  double mantissa() const;
  int exp10() const;
  double value() const;  // may overflow to inf; fine for ordinary magnitudes
};

struct EnsembleModel {
  double f = 1.0;                  // participating fraction, in (0, 1]
  double total_particles = 1e80;   // baseline particle count
  double lambda1 = 1e17;           // single-particle commutator eigenvalue, s^-2
  double tau = 5e-44;              // step duration, s

  // M = f * total_particles (carried in log space downstream).
  double particles() const { return f * total_particles; }
};

void validate(const EnsembleModel& model);

// ln rho for the degeneracy k at even M: ln C(M, M/2 + k). |k| <= M/2.
double degeneracy_density(std::int64_t m_particles, std::int64_t k);

// Normalized Gaussian approximation sqrt(2/(pi M)) exp(-2 k^2 / M) of
// 2^-M * rho(k).
double gaussian_density_approx(std::int64_t m_particles, std::int64_t k);

// lambda_SD = 0.5 * sqrt(M) * |lambda1| for M = f * total_particles.
LogScaled lambda_sd(const EnsembleModel& model);

enum class Regime { Broad, Narrow, Intermediate };
const char* regime_name(Regime r);

struct RegimeConfig {
  double broad_factor = 100.0;   // W/lambda_SD at least this -> Broad
  double narrow_factor = 0.01;   // W/lambda_SD at most this -> Narrow
  double sd_multiplier = 1.0;    // spread convention: compare against sd_multiplier * lambda_SD
};

struct RegimeReport {
  LogScaled width;        // W of the interference peak, s^-2
  LogScaled lambda_sd;    // ensemble spectral spread, s^-2
  LogScaled ratio;        // W / (sd_multiplier * lambda_SD)
  Regime classification;
  LogScaled t23_seconds;  // evolution time where W crosses lambda_SD^(2/3) scale
  LogScaled t13_seconds;  // evolution time where the n=1 width crosses lambda_SD
  EnsembleModel model;
  double n_steps;         // N (integer-valued; double because N can reach ~1e43)
  double n_forward;       // n
  RegimeConfig config;
};

// Width of the I_{N-n,n} peak in eigenvalue units: W = sqrt(24 / (tau^4 n (N-n) (N+1))).
LogScaled interference_width(double tau, double n_steps, double n_forward);

// Classify the interference regime for an N-step evolution with n forward steps.
RegimeReport regime_classify(const EnsembleModel& model, double n_steps, double n_forward,
                             const RegimeConfig& config = {});

// Regime-boundary times: t23 = 1 / (tau^(1/3) lambda_SD^(2/3)),
// t13 = sqrt(24) / (tau lambda_SD). Evolution time t = N*tau.
LogScaled t23_boundary(const EnsembleModel& model);
LogScaled t13_boundary(const EnsembleModel& model);

}  // namespace bievolve::spectral
