#pragma once

// Neutral-kaon estimate of the commutator eigenvalue lambda^(1).
//
// The Lee-Wolfenstein mass matrix M (first order in the CP-violation
// parameter epsilon) supplies the forward Hamiltonian H_F; the backward one is
// H_B = (CP)^{-1} H_F (CP), which swaps diagonal and off-diagonal entries. The
// commutator then has the form [[A, B], [-B, -A]] with
//   A = M12^2 - M21^2,   B = (M11 - M22)(M21 + M12),
// eigenvalues +-sqrt(A^2 - B^2). With the empirical kaon numbers,
//   A = i sqrt(2) |eps| (1/2 dGamma dm + dm^2) ~ i * 2.0e17 s^-2.
// Every energy is in s^-1 (hbar = 1).

#include <array>
#include <complex>

#include "bievolve/linops.hpp"

namespace bievolve::kaon {

using Complex = std::complex<double>;

struct KaonParams {
  double delta_m = 0.56e10;      // m2 - m1, s^-1
  double delta_gamma = 1.1e10;   // gamma1 - gamma2, s^-1
  double eps_abs = 2.3e-3;       // |epsilon|
  double eps_arg = 0.7853981633974483;  // arg(epsilon), 45 degrees
  double theta = 0.0;            // CP-operator phase; drops out of physics
  double m_sum = 0.0;            // m1 + m2; only differences enter A
  double gamma_sum = 0.0;        // gamma1 + gamma2
};

void validate(const KaonParams& params);
// First-order-in-epsilon constructions degrade above |eps| ~ 0.1.
bool expansion_valid(const KaonParams& params);

struct KaonCommutatorResult {
  Complex a_value;                       // A, s^-2
  Complex b_value;                       // B, s^-2
  std::array<Complex, 2> eigenvalues;    // +-sqrt(A^2 - B^2) of [H_F, H_B]
  double lambda1;                        // |eigenvalue of i [H_F, H_B]|
};

// e^{i theta} [[0,1],[1,0]]; unitary.
linops::ComplexMatrix cp_operator(double theta);

// The mass matrix M to first order in eps_abs, exactly as in the
// phenomenological model (with m1 - m2 = -delta_m). Hermitian.
linops::ComplexMatrix lee_wolfenstein_m(const KaonParams& params);

// The decay matrix Gamma to the same order. Built for completeness; the
// commutator estimate uses only M.
linops::ComplexMatrix lee_wolfenstein_gamma(const KaonParams& params);

// (CP)^{-1} hf (CP): swaps diagonal entries and swaps off-diagonals.
// Independent of theta. Requires dim 2.
linops::ComplexMatrix hb_from_hf(const linops::ComplexMatrix& hf, double theta = 0.0);

// Closed-form commutator of hf with its CPT conjugate.
KaonCommutatorResult commutator_2x2(const linops::ComplexMatrix& hf);

// A = i sqrt(2) eps_abs (1/2 delta_gamma delta_m + delta_m^2).
Complex eigenvalue_closed_form(const KaonParams& params);

// e^{i phi} = (1 - eps) / (1 + eps), exact. Requires |eps| < 1.
Complex epsilon_phase(double eps_abs, double eps_arg);
// First-order expansion 1 - 2 eps; at arg = 45 deg this is 1 - sqrt(2)|eps|(1+i).
Complex epsilon_phase_first_order(double eps_abs, double eps_arg);

}  // namespace bievolve::kaon
