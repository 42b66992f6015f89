#include "bievolve/kaon.hpp"

#include <cmath>
#include <stdexcept>

namespace bievolve::kaon {

namespace {

constexpr Complex kI(0.0, 1.0);

void check_2x2(const linops::ComplexMatrix& m) {
  if (m.dim() != 2) throw std::invalid_argument("kaon operations need 2x2 matrices");
}

}  // namespace

void validate(const KaonParams& params) {
  const double vals[] = {params.delta_m, params.delta_gamma, params.eps_abs,
                         params.eps_arg, params.theta, params.m_sum, params.gamma_sum};
  for (double v : vals)
    if (!std::isfinite(v)) throw std::invalid_argument("kaon parameters must be finite");
  if (params.eps_abs < 0.0) throw std::invalid_argument("eps_abs must be non-negative");
}

bool expansion_valid(const KaonParams& params) { return params.eps_abs <= 0.1; }

linops::ComplexMatrix cp_operator(double theta) {
  const Complex p = std::exp(kI * theta);
  return linops::ComplexMatrix(2, {0.0, p, p, 0.0});
}

linops::ComplexMatrix lee_wolfenstein_m(const KaonParams& params) {
  validate(params);
  const double root2eps = std::sqrt(2.0) * params.eps_abs;
  const double m1_minus_m2 = -params.delta_m;
  // M12 = -i/4 dGamma sqrt(2)|eps| + 1/2 (m1-m2)(1 + i sqrt(2)|eps|)
  const Complex m12 = -kI * 0.25 * params.delta_gamma * root2eps +
                      0.5 * m1_minus_m2 * (1.0 + kI * root2eps);
  const Complex m11(0.5 * params.m_sum, 0.0);
  return linops::ComplexMatrix(2, {m11, m12, std::conj(m12), m11});
}

linops::ComplexMatrix lee_wolfenstein_gamma(const KaonParams& params) {
  validate(params);
  const double root2eps = std::sqrt(2.0) * params.eps_abs;
  const double m1_minus_m2 = -params.delta_m;
  // Gamma12 = 1/4 dGamma (1 + i sqrt(2)|eps|) + i/2 (m1-m2) sqrt(2)|eps|
  const Complex g12 = 0.25 * params.delta_gamma * (1.0 + kI * root2eps) +
                      kI * 0.5 * m1_minus_m2 * root2eps;
  const Complex g11(0.25 * params.gamma_sum, 0.0);
  return linops::ComplexMatrix(2, {g11, g12, std::conj(g12), g11});
}

linops::ComplexMatrix hb_from_hf(const linops::ComplexMatrix& hf, double theta) {
  check_2x2(hf);
  (void)theta;  // (CP)^{-1} hf (CP) = X hf X for any phase: theta cancels
  return linops::ComplexMatrix(2, {hf(1, 1), hf(1, 0), hf(0, 1), hf(0, 0)});
}

KaonCommutatorResult commutator_2x2(const linops::ComplexMatrix& hf) {
  check_2x2(hf);
  KaonCommutatorResult out;
  out.a_value = hf(0, 1) * hf(0, 1) - hf(1, 0) * hf(1, 0);
  out.b_value = (hf(0, 0) - hf(1, 1)) * (hf(1, 0) + hf(0, 1));
  const Complex root = std::sqrt(out.a_value * out.a_value - out.b_value * out.b_value);
  out.eigenvalues = {root, -root};
  out.lambda1 = std::abs(root);  // |i * root| for the Hermitianized commutator
  return out;
}

Complex eigenvalue_closed_form(const KaonParams& params) {
  validate(params);
  return kI * std::sqrt(2.0) * params.eps_abs *
         (0.5 * params.delta_gamma * params.delta_m + params.delta_m * params.delta_m);
}

Complex epsilon_phase(double eps_abs, double eps_arg) {
  if (!(eps_abs >= 0.0) || eps_abs >= 1.0)
    throw std::invalid_argument("epsilon_phase needs 0 <= |eps| < 1");
  const Complex eps = eps_abs * std::exp(kI * eps_arg);
  return (1.0 - eps) / (1.0 + eps);
}

Complex epsilon_phase_first_order(double eps_abs, double eps_arg) {
  const Complex eps = eps_abs * std::exp(kI * eps_arg);
  return 1.0 - 2.0 * eps;
}

}  // namespace bievolve::kaon
