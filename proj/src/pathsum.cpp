#include "bievolve/pathsum.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bievolve/interference.hpp"

namespace bievolve::pathsum {

namespace {

constexpr Complex kI(0.0, 1.0);

void check_cap(int m, int n) {
  if (m < 0 || n < 0) throw std::invalid_argument("path counts must be non-negative");
  if (m + n > kRecursionCap)
    throw std::domain_error("m+n exceeds the S recursion cap of " +
                            std::to_string(kRecursionCap));
}

// All S_{m,n} with m+n <= order, built once per evaluation (no shared state).
class SmnTable {
 public:
  SmnTable(const BiHamiltonian& bh, int order) : order_(order), table_(index(order, order) + 1) {
    const int d = bh.dim();
    std::vector<ComplexMatrix> ub_pow(static_cast<size_t>(order) + 1);
    std::vector<ComplexMatrix> step(static_cast<size_t>(order) + 1);  // U_F(tau) U_B(k tau)
    const ComplexMatrix uf1 = bh.uf(bh.tau());
    for (int k = 0; k <= order; ++k) {
      ub_pow[static_cast<size_t>(k)] = k == 0 ? ComplexMatrix::identity(d) : bh.ub(k * bh.tau());
      step[static_cast<size_t>(k)] = uf1 * ub_pow[static_cast<size_t>(k)];
    }
    for (int m = 0; m <= order; ++m) at(m, 0) = ub_pow[static_cast<size_t>(m)];
    for (int n = 1; n <= order; ++n) {
      for (int m = 0; m + n <= order; ++m) {
        ComplexMatrix s(d);
        for (int k = 0; k <= m; ++k) s += at(m - k, n - 1) * step[static_cast<size_t>(k)];
        at(m, n) = std::move(s);
      }
    }
  }

  const ComplexMatrix& get(int m, int n) const { return table_[index(m, n)]; }

 private:
  // triangular layout over m+n <= order_
  size_t index(int m, int n) const {
    const int diag = m + n;
    return static_cast<size_t>(diag) * (diag + 1) / 2 + static_cast<size_t>(n);
  }
  ComplexMatrix& at(int m, int n) { return table_[index(m, n)]; }

  int order_;
  std::vector<ComplexMatrix> table_;
};

}  // namespace

BiHamiltonian::BiHamiltonian(ComplexMatrix hf, ComplexMatrix hb, double tau)
    : hf_(std::move(hf)), hb_(std::move(hb)), tau_(tau) {
  if (hf_.dim() != hb_.dim())
    throw std::invalid_argument("forward and backward Hamiltonians must share a dimension");
  if (!hf_.is_finite() || !hb_.is_finite())
    throw std::invalid_argument("Hamiltonians must be finite");
  const double tol_f = 1e-12 * std::max(1.0, hf_.max_abs());
  const double tol_b = 1e-12 * std::max(1.0, hb_.max_abs());
  if (hf_.hermiticity_defect() > tol_f || hb_.hermiticity_defect() > tol_b)
    throw std::invalid_argument("Hamiltonians must be Hermitian");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
  commutator_norm_ = linops::commutator(hf_, hb_).frobenius_norm();
}

bool BiHamiltonian::t_invariant() const {
  return commutator_norm_ <= 1e-12 * hf_.frobenius_norm() * hb_.frobenius_norm();
}

ComplexMatrix BiHamiltonian::uf(double t) const { return linops::mat_exp(hf_, -kI * t); }
ComplexMatrix BiHamiltonian::ub(double t) const { return linops::mat_exp(hb_, kI * t); }

StateVector symmetric_step(const BiHamiltonian& bh, const StateVector& psi, double theta) {
  const Complex branch_phase = std::exp(kI * theta);
  return bh.uf(bh.tau()) * psi + branch_phase * (bh.ub(bh.tau()) * psi);
}

PathSumResult symmetric_evolve(const BiHamiltonian& bh, const StateVector& psi0, int n_steps,
                               double theta) {
  if (n_steps < 0) throw std::invalid_argument("step count must be non-negative");
  if (psi0.dim() != bh.dim()) throw std::invalid_argument("state dimension mismatch");

  PathSumResult res;
  res.n_steps = n_steps;

  const ComplexMatrix uf1 = bh.uf(bh.tau());
  const ComplexMatrix ub1 = bh.ub(bh.tau());
  const Complex branch_phase = std::exp(kI * theta);
  StateVector psi = psi0;
  for (int i = 0; i < n_steps; ++i) psi = uf1 * psi + branch_phase * (ub1 * psi);
  res.total = psi;

  if (n_steps <= kRecursionCap) {
    const SmnTable table(bh, n_steps);
    res.per_n.reserve(static_cast<size_t>(n_steps) + 1);
    res.norms.reserve(static_cast<size_t>(n_steps) + 1);
    for (int n = 0; n <= n_steps; ++n) {
      // each of the N-n backward factors carries the branch phase
      const Complex phase = std::exp(kI * (theta * (n_steps - n)));
      StateVector v = phase * (table.get(n_steps - n, n) * psi0);
      res.norms.push_back(v.norm());
      res.per_n.push_back(std::move(v));
    }
  }
  return res;
}

ComplexMatrix s_mn_exact(const BiHamiltonian& bh, int m, int n) {
  check_cap(m, n);
  return SmnTable(bh, m + n).get(m, n);
}

ComplexMatrix s_mn_spectral(const BiHamiltonian& bh, int m, int n) {
  check_cap(m, n);
  const ComplexMatrix herm_comm = kI * linops::commutator(bh.hf(), bh.hb());
  const linops::SpectralDecomposition dec = linops::hermitian_eigendecomposition(herm_comm);

  ComplexMatrix weighted(bh.dim());
  for (size_t j = 0; j < dec.eigenvalues.size(); ++j) {
    const double x = interference::x_from_tau_lambda(bh.tau(), dec.eigenvalues[j]);
    const Complex w = interference::eval_closed_form(m, n, x);
    weighted += w * dec.projectors[j];
  }
  return bh.ub(m * bh.tau()) * bh.uf(n * bh.tau()) * weighted;
}

std::pair<StateVector, StateVector> bievolution_state(const BiHamiltonian& bh,
                                                      const StateVector& psi0, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be >= 0");
  if (psi0.dim() != bh.dim()) throw std::invalid_argument("state dimension mismatch");
  return {bh.uf(t) * psi0, bh.ub(t) * psi0};
}

StateVector bievolution_derivative(const BiHamiltonian& bh, const StateVector& psi0, double t) {
  auto [fwd, bwd] = bievolution_state(bh, psi0, t);
  return (-kI) * (bh.hf() * fwd) + kI * (bh.hb() * bwd);
}

double check_nonzero_condition(const BiHamiltonian& bh, const StateVector& psi0) {
  if (psi0.dim() != bh.dim()) throw std::invalid_argument("state dimension mismatch");
  const double norm0 = psi0.norm();
  if (norm0 == 0.0) throw std::invalid_argument("psi0 must be nonzero");
  const ComplexMatrix herm_comm = kI * linops::commutator(bh.hf(), bh.hb());
  const ComplexMatrix kernel =
      linops::kernel_projector(linops::hermitian_eigendecomposition(herm_comm));
  return (kernel * psi0).norm() / norm0;
}

std::pair<StateVector, StateVector> general_origin_evolve(const BiHamiltonian& bh,
                                                          const StateVector& psi0, int n_steps) {
  if (n_steps < 0 || n_steps > kRecursionCap)
    throw std::domain_error("step count outside [0, cap] for the parallel branch");
  if (psi0.dim() != bh.dim()) throw std::invalid_argument("state dimension mismatch");

  const ComplexMatrix herm_comm = kI * linops::commutator(bh.hf(), bh.hb());
  const ComplexMatrix kernel =
      linops::kernel_projector(linops::hermitian_eigendecomposition(herm_comm));
  const StateVector par = kernel * psi0;
  const StateVector perp = psi0 - par;

  const double t_tot = n_steps * bh.tau();
  StateVector perp_part = bh.uf(t_tot) * perp + bh.ub(t_tot) * perp;

  StateVector par_part(bh.dim());
  double binom = 1.0;  // C(N, n) by the multiplicative recurrence
  for (int n = 0; n <= n_steps; ++n) {
    par_part = par_part + Complex(binom, 0.0) * (bh.ub((n_steps - n) * bh.tau()) *
                                                 (bh.uf(n * bh.tau()) * par));
    binom = binom * (n_steps - n) / (n + 1);
  }
  return {perp_part, par_part};
}

AttractorResult attractor_evolve(const ComplexMatrix& h, const StateVector& psi0, double tau,
                                 int n_steps) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
  if (n_steps < 0) throw std::invalid_argument("step count must be non-negative");
  if (psi0.dim() != h.dim()) throw std::invalid_argument("state dimension mismatch");
  const double norm0 = psi0.norm();
  if (norm0 == 0.0) throw std::invalid_argument("psi0 must be nonzero");

  const linops::SpectralDecomposition dec = linops::hermitian_eigendecomposition(h);
  const size_t bands = dec.eigenvalues.size();

  std::vector<StateVector> comp(bands);
  std::vector<double> weight(bands), log_amp(bands), sign(bands);
  const double occupancy_tol = 1e-14 * norm0;
  const double zero_tol = 1e-9 * dec.max_abs_eigenvalue();

  AttractorResult out;
  out.zero_energy_overlap = (linops::kernel_projector(dec) * psi0).norm() / norm0;
  out.spectral_condition_ok = true;

  int dominant = -1;
  for (size_t j = 0; j < bands; ++j) {
    comp[j] = dec.projectors[j] * psi0;
    weight[j] = comp[j].norm();
    const double c = std::cos(dec.eigenvalues[j] * tau);
    log_amp[j] = std::abs(c) == 0.0 ? -std::numeric_limits<double>::infinity()
                                    : n_steps * std::log(std::abs(c));
    sign[j] = (c < 0.0 && n_steps % 2 == 1) ? -1.0 : 1.0;
    if (weight[j] <= occupancy_tol) continue;
    if (std::abs(dec.eigenvalues[j]) * tau >= M_PI / 2) out.spectral_condition_ok = false;
    if (dominant < 0 || log_amp[j] > log_amp[static_cast<size_t>(dominant)])
      dominant = static_cast<int>(j);
  }
  if (dominant < 0 || log_amp[static_cast<size_t>(dominant)] ==
                          -std::numeric_limits<double>::infinity())
    throw std::domain_error("cos^N(H tau) annihilates psi0");

  StateVector acc(h.dim());
  for (size_t j = 0; j < bands; ++j) {
    if (weight[j] <= occupancy_tol) continue;
    const double rel = std::exp(log_amp[j] - log_amp[static_cast<size_t>(dominant)]);
    if (rel == 0.0) continue;
    acc = acc + Complex(sign[j] * rel, 0.0) * comp[j];
  }
  out.state = acc.normalized();
  out.dominant_energy = dec.eigenvalues[static_cast<size_t>(dominant)];
  out.dominant_abs_cos = std::abs(std::cos(out.dominant_energy * tau));
  out.converged_to_zero_energy = std::abs(out.dominant_energy) <= zero_tol;
  return out;
}

StateVector half_difference_limit(const BiHamiltonian& bh, double t_tot, int n_steps,
                                  const StateVector& psi0) {
  if (n_steps < 1) throw std::invalid_argument("need at least one step");
  if (!(t_tot > 0.0) || !std::isfinite(t_tot))
    throw std::invalid_argument("total time must be positive");
  if (psi0.dim() != bh.dim()) throw std::invalid_argument("state dimension mismatch");

  const double tau = t_tot / n_steps;
  const ComplexMatrix uf1 = linops::mat_exp(bh.hf(), -kI * tau);
  const ComplexMatrix ub1 = linops::mat_exp(bh.hb(), kI * tau);
  StateVector psi = psi0;
  for (int i = 0; i < n_steps; ++i) psi = Complex(0.5, 0.0) * (uf1 * psi + ub1 * psi);
  return psi;
}

}  // namespace bievolve::pathsum
