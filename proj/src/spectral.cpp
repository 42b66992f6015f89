#include "bievolve/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace bievolve::spectral {

namespace {

double log10_checked(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  return std::log10(v);
}

}  // namespace

LogScaled LogScaled::from_value(double v) { return {log10_checked(v, "value")}; }

double LogScaled::mantissa() const {
  double frac = log10_value - std::floor(log10_value);
  double m = std::pow(10.0, frac);
  if (m >= 10.0) m = 1.0;  // guard the round-up edge at integer log10
  return m;
}

int LogScaled::exp10() const {
  const double fl = std::floor(log10_value);
  // keep mantissa/exp10 consistent at the round-up edge
  if (std::pow(10.0, log10_value - fl) >= 10.0) return static_cast<int>(fl) + 1;
  return static_cast<int>(fl);
}

double LogScaled::value() const { return std::pow(10.0, log10_value); }

void validate(const EnsembleModel& model) {
  if (!(model.f > 0.0) || model.f > 1.0 || !std::isfinite(model.f))
    throw std::invalid_argument("f must be in (0, 1]");
  log10_checked(model.total_particles, "total_particles");
  log10_checked(model.lambda1, "lambda1");
  log10_checked(model.tau, "tau");
}

double degeneracy_density(std::int64_t m_particles, std::int64_t k) {
  if (m_particles <= 0 || m_particles % 2 != 0)
    throw std::invalid_argument("particle count must be positive and even");
  const std::int64_t half = m_particles / 2;
  if (k < -half || k > half) throw std::invalid_argument("degeneracy index out of range");
  const double m = static_cast<double>(m_particles);
  return std::lgamma(m + 1.0) - std::lgamma(static_cast<double>(half - k) + 1.0) -
         std::lgamma(static_cast<double>(half + k) + 1.0);
}

double gaussian_density_approx(std::int64_t m_particles, std::int64_t k) {
  if (m_particles <= 0) throw std::invalid_argument("particle count must be positive");
  const double m = static_cast<double>(m_particles);
  const double kk = static_cast<double>(k);
  return std::sqrt(2.0 / (M_PI * m)) * std::exp(-2.0 * kk * kk / m);
}

LogScaled lambda_sd(const EnsembleModel& model) {
  validate(model);
  const double log10_m = std::log10(model.f) + std::log10(model.total_particles);
  return LogScaled::from_log10(std::log10(0.5) + 0.5 * log10_m + std::log10(model.lambda1));
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Broad: return "Broad";
    case Regime::Narrow: return "Narrow";
    case Regime::Intermediate: return "Intermediate";
  }
  return "Intermediate";
}

LogScaled interference_width(double tau, double n_steps, double n_forward) {
  log10_checked(tau, "tau");
  if (!(n_steps >= 1.0) || !std::isfinite(n_steps))
    throw std::invalid_argument("N must be >= 1");
  if (!(n_forward >= 1.0) || !(n_forward < n_steps))
    throw std::invalid_argument("n must satisfy 1 <= n < N");
  const double log10_w = 0.5 * (std::log10(24.0) - 4.0 * std::log10(tau) -
                                std::log10(n_forward) - std::log10(n_steps - n_forward) -
                                std::log10(n_steps + 1.0));
  return LogScaled::from_log10(log10_w);
}

RegimeReport regime_classify(const EnsembleModel& model, double n_steps, double n_forward,
                             const RegimeConfig& config) {
  validate(model);
  if (!(config.broad_factor > 0.0) || !(config.narrow_factor > 0.0) ||
      config.narrow_factor >= config.broad_factor)
    throw std::invalid_argument("regime factors must satisfy 0 < narrow < broad");
  if (!(config.sd_multiplier > 0.0))
    throw std::invalid_argument("sd_multiplier must be positive");

  RegimeReport rep;
  rep.width = interference_width(model.tau, n_steps, n_forward);
  rep.lambda_sd = lambda_sd(model);
  rep.ratio = LogScaled::from_log10(rep.width.log10_value - rep.lambda_sd.log10_value -
                                    std::log10(config.sd_multiplier));
  if (rep.ratio.log10_value >= std::log10(config.broad_factor))
    rep.classification = Regime::Broad;
  else if (rep.ratio.log10_value <= std::log10(config.narrow_factor))
    rep.classification = Regime::Narrow;
  else
    rep.classification = Regime::Intermediate;
  rep.t23_seconds = t23_boundary(model);
  rep.t13_seconds = t13_boundary(model);
  rep.model = model;
  rep.n_steps = n_steps;
  rep.n_forward = n_forward;
  rep.config = config;
  return rep;
}

LogScaled t23_boundary(const EnsembleModel& model) {
  validate(model);
  const double sd = lambda_sd(model).log10_value;
  return LogScaled::from_log10(-std::log10(model.tau) / 3.0 - 2.0 / 3.0 * sd);
}

LogScaled t13_boundary(const EnsembleModel& model) {
  validate(model);
  const double sd = lambda_sd(model).log10_value;
  return LogScaled::from_log10(0.5 * std::log10(24.0) - std::log10(model.tau) - sd);
}

}  // namespace bievolve::spectral
