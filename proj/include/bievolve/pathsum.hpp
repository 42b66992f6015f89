#pragma once

// Path-sum engine for symmetric (bidirectional) time evolution:
//
//   one step      [U_F(tau) + U_B(tau)],  U_F = exp(-i tau H_F), U_B = exp(+i tau H_B)
//   N steps       [U_F + U_B]^N = sum_{n=0}^{N} S_{N-n,n}
//   S recursion   S_{m,n} = sum_{k=0}^{m} S_{m-k,n-1} U_F(tau) U_B(k tau),  S_{m,0} = U_B(m tau)
//   spectral form S_{m,n} ~= U_B(m tau) U_F(n tau) sum_j I_{m,n}(tau^2 lambda_j) P_j
//
// where (lambda_j, P_j) eigendecompose i[H_F, H_B] and the spectral form drops
// an O(tau^3) factor. All operations are pure; the S_{m,n} memo table is
// confined to each evaluation, so results are deterministic and thread-safe.

#include <utility>
#include <vector>

#include "bievolve/linops.hpp"

namespace bievolve::pathsum {

using linops::Complex;
using linops::ComplexMatrix;
using linops::StateVector;

inline constexpr int kRecursionCap = 64;  // maximum m+n (and N for per-path output)

class BiHamiltonian {
 public:
  // hf, hb Hermitian within 1e-12 and of equal dimension; tau > 0.
  BiHamiltonian(ComplexMatrix hf, ComplexMatrix hb, double tau);

  const ComplexMatrix& hf() const { return hf_; }
  const ComplexMatrix& hb() const { return hb_; }
  double tau() const { return tau_; }
  int dim() const { return hf_.dim(); }

  double commutator_norm() const { return commutator_norm_; }  // ||[hf, hb]||_F
  bool t_invariant() const;  // commutator_norm <= 1e-12 ||hf|| ||hb||

  ComplexMatrix uf(double t) const;  // exp(-i t H_F)
  ComplexMatrix ub(double t) const;  // exp(+i t H_B)

 private:
  ComplexMatrix hf_, hb_;
  double tau_;
  double commutator_norm_;
};

struct PathSumResult {
  int n_steps = 0;
  // S_{N-n,n} |psi0> for n = 0..N; empty when N exceeds kRecursionCap.
  std::vector<StateVector> per_n;
  std::vector<double> norms;
  StateVector total;  // [U_F + e^{i theta} U_B]^N |psi0>
};

// [U_F(tau) + e^{i theta} U_B(tau)] psi. The branch phase theta has no effect
// on any per-path norm; it is exposed so that claim is testable.
StateVector symmetric_step(const BiHamiltonian& bh, const StateVector& psi, double theta = 0.0);

// N symmetric steps. total is computed by repeated application; per_n via the
// memoized S recursion when N <= kRecursionCap (otherwise left empty).
PathSumResult symmetric_evolve(const BiHamiltonian& bh, const StateVector& psi0, int n_steps,
                               double theta = 0.0);

// Exact S_{m,n} (memoized recursion, O(m^2 n) products). Requires m+n <= cap.
ComplexMatrix s_mn_exact(const BiHamiltonian& bh, int m, int n);

// Zassenhaus-reordered spectral form of S_{m,n}; differs from s_mn_exact by
// O(tau^3). Requires m+n <= cap.
ComplexMatrix s_mn_spectral(const BiHamiltonian& bh, int m, int n);

// (U_F(t) psi0, U_B(t) psi0): the two branches of the bievolution state.
// Whether the pruned path-sum actually reduces to this pair is the caller's
// business via check_nonzero_condition. t >= 0.
std::pair<StateVector, StateVector> bievolution_state(const BiHamiltonian& bh,
                                                      const StateVector& psi0, double t);

// d/dt of [U_F(t) + U_B(t)] psi0 = -i H_F U_F(t) psi0 + i H_B U_B(t) psi0.
StateVector bievolution_derivative(const BiHamiltonian& bh, const StateVector& psi0, double t);

// ||Pi(0) psi0|| / ||psi0|| for the kernel projector Pi(0) of i[H_F, H_B].
// 0 means the zero-eigenvalue condition is satisfied and bievolution applies.
double check_nonzero_condition(const BiHamiltonian& bh, const StateVector& psi0);

// Split psi0 = psi_perp + psi_par by the kernel projector of i[H_F,H_B] and
// evolve each part per the general-origin form: the perpendicular part
// bievolves, the parallel part keeps its binomially weighted path sum.
std::pair<StateVector, StateVector> general_origin_evolve(const BiHamiltonian& bh,
                                                          const StateVector& psi0, int n_steps);

struct AttractorResult {
  StateVector state;             // normalized cos^N(H tau) psi0
  double dominant_energy = 0.0;  // eigenvalue whose |cos(E tau)|^N survives longest
  double dominant_abs_cos = 0.0;
  double zero_energy_overlap = 0.0;   // ||Pi(0) psi0|| / ||psi0||
  bool converged_to_zero_energy = false;
  bool spectral_condition_ok = false;  // |E_n| tau < pi/2 on all occupied eigenspaces
};

// Normalized cos^N(H tau) psi0 with the 2^N growth absorbed; amplitudes are
// tracked in the log domain so N in the hundreds is routine. If psi0 has no
// E=0 component the state drifts to the dominant-|cos| eigenspace instead,
// and the result flags it.
AttractorResult attractor_evolve(const ComplexMatrix& h, const StateVector& psi0, double tau,
                                 int n_steps);

// 2^{-N} [U_F(t/N) + U_B(t/N)]^N psi0 -> exp(-i (H_F - H_B) t / 2) psi0 with
// O(1/N) error.
StateVector half_difference_limit(const BiHamiltonian& bh, double t_tot, int n_steps,
                                  const StateVector& psi0);

}  // namespace bievolve::pathsum
