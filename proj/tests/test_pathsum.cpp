#include <doctest.h>

#include <cmath>
#include <complex>

#include "bievolve/interference.hpp"
#include "bievolve/linops.hpp"
#include "bievolve/pathsum.hpp"
#include "bievolve/verify.hpp"

using namespace bievolve;
using linops::Complex;
using linops::ComplexMatrix;
using linops::StateVector;

namespace {

const Complex kI(0.0, 1.0);

ComplexMatrix pauli_x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
ComplexMatrix pauli_y() { return ComplexMatrix(2, {0.0, -kI, kI, 0.0}); }

ComplexMatrix herm3_a() {
  return ComplexMatrix(3, {1.0, Complex(0.3, 0.2), Complex(-0.1, 0.4),
                           Complex(0.3, -0.2), -0.5, Complex(0.2, -0.1),
                           Complex(-0.1, -0.4), Complex(0.2, 0.1), 0.7});
}

ComplexMatrix herm3_b() {
  return ComplexMatrix(3, {-0.4, Complex(0.1, -0.3), Complex(0.5, 0.1),
                           Complex(0.1, 0.3), 0.9, Complex(-0.2, 0.2),
                           Complex(0.5, -0.1), Complex(-0.2, -0.2), 0.2});
}

// 4-dim block pair: the first 2x2 block does not commute, the second does, so
// i[H_F,H_B] has a two-dimensional kernel spanned by the second block.
ComplexMatrix block_hf() {
  ComplexMatrix m(4);
  m(0, 1) = 1.0; m(1, 0) = 1.0;          // sx
  m(2, 3) = 1.0; m(3, 2) = 1.0;          // sx again
  return m;
}

ComplexMatrix block_hb() {
  ComplexMatrix m(4);
  m(0, 1) = -kI; m(1, 0) = kI;           // sy
  m(2, 3) = 1.0; m(3, 2) = 1.0;          // sx: commutes with the hf block
  return m;
}

double mat_dist(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).frobenius_norm(); }

double vec_rel(const StateVector& got, const StateVector& want) {
  return (got - want).norm() / (want.norm() + 1e-300);
}

}  // namespace

TEST_SUITE("pathsum") {

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(pathsum::BiHamiltonian(pauli_x(), herm3_a(), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(pathsum::BiHamiltonian(pauli_x(), pauli_y(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pathsum::BiHamiltonian(pauli_x(), pauli_y(), -0.5), std::invalid_argument);
  ComplexMatrix skew(2, {0.0, 1.0, 2.0, 0.0});
  CHECK_THROWS_AS(pathsum::BiHamiltonian(skew, pauli_y(), 0.1), std::invalid_argument);

  const pathsum::BiHamiltonian same(pauli_x(), pauli_x(), 0.1);
  CHECK(same.t_invariant());
  const pathsum::BiHamiltonian diff(pauli_x(), pauli_y(), 0.1);
  CHECK(!diff.t_invariant());
  CHECK(diff.commutator_norm() == doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));
}

TEST_CASE("propagators against the Pauli closed form") {
  const pathsum::BiHamiltonian bh(pauli_x(), pauli_y(), 0.25);
  const double t = 0.9;
  // exp(+i t sy) = cos(t) 1 + i sin(t) sy
  ComplexMatrix want = ComplexMatrix::identity(2);
  want *= Complex(std::cos(t), 0.0);
  ComplexMatrix s = pauli_y();
  s *= kI * std::sin(t);
  want += s;
  CHECK(mat_dist(bh.ub(t), want) < 1e-14);
  CHECK(mat_dist(bh.uf(t) * bh.uf(t).adjoint(), ComplexMatrix::identity(2)) < 1e-14);
  CHECK(mat_dist(bh.uf(0.0), ComplexMatrix::identity(2)) == 0.0);
}

TEST_CASE("one symmetric step") {
  const pathsum::BiHamiltonian bh(herm3_a(), herm3_b(), 0.31);
  const StateVector psi{Complex(0.2, 0.1), Complex(-0.4, 0.0), Complex(0.0, 0.88)};
  const double theta = 0.83;
  const StateVector got = pathsum::symmetric_step(bh, psi, theta);
  const StateVector want =
      bh.uf(0.31) * psi + std::exp(kI * theta) * (bh.ub(0.31) * psi);
  CHECK(vec_rel(got, want) < 1e-14);
}

TEST_CASE("path operators at the table boundary") {
  const pathsum::BiHamiltonian bh(herm3_a(), herm3_b(), 0.42);
  // S_{m,0} is pure backward, S_{0,n} pure forward
  CHECK(mat_dist(pathsum::s_mn_exact(bh, 3, 0), bh.ub(3 * 0.42)) < 1e-12);
  CHECK(mat_dist(pathsum::s_mn_exact(bh, 0, 4), bh.uf(4 * 0.42)) < 1e-12);
  CHECK(mat_dist(pathsum::s_mn_exact(bh, 0, 0), ComplexMatrix::identity(3)) < 1e-15);
}

TEST_CASE("recursion step written out by hand") {
  const pathsum::BiHamiltonian bh(herm3_a(), herm3_b(), 0.42);
  const ComplexMatrix uf1 = bh.uf(0.42);
  ComplexMatrix want(3);
  for (int k = 0; k <= 2; ++k) {
    const ComplexMatrix ubk = k == 0 ? ComplexMatrix::identity(3) : bh.ub(k * 0.42);
    want += pathsum::s_mn_exact(bh, 2 - k, 1) * (uf1 * ubk);
  }
  CHECK(mat_dist(pathsum::s_mn_exact(bh, 2, 2), want) < 1e-12 * want.frobenius_norm());
}

TEST_CASE("path operators match brute-force ordering enumeration") {
  const pathsum::BiHamiltonian bh(herm3_a(), herm3_b(), 0.37);
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {2, 2}, {3, 2}, {4, 4}}) {
    const ComplexMatrix want = verify::enumerate_orderings(bh, m, n);
    const double err = mat_dist(pathsum::s_mn_exact(bh, m, n), want) / want.frobenius_norm();
    CHECK(err < 1e-11);
  }
}

TEST_CASE("recursion cap") {
  const pathsum::BiHamiltonian bh(pauli_x(), pauli_y(), 0.1);
  CHECK_NOTHROW(pathsum::s_mn_exact(bh, 32, 32));
  CHECK_THROWS_AS(pathsum::s_mn_exact(bh, 33, 32), std::domain_error);
  CHECK_THROWS_AS(pathsum::s_mn_exact(bh, -1, 2), std::invalid_argument);
}

TEST_CASE("per-path states sum to the evolved state") {
  const StateVector psi{Complex(0.2, 0.1), Complex(-0.4, 0.0), Complex(0.0, 0.88)};
  for (double theta : {0.0, 0.83}) {
    const pathsum::BiHamiltonian bh(herm3_a(), herm3_b(), 0.3);
    const pathsum::PathSumResult res = pathsum::symmetric_evolve(bh, psi, 10, theta);
    REQUIRE(res.per_n.size() == 11);
    StateVector sum(3);
    for (const auto& v : res.per_n) sum = sum + v;
    CHECK(vec_rel(sum, res.total) < 1e-12);
  }
}

TEST_CASE("branch phase leaves per-path norms alone") {
  const StateVector psi{Complex(0.6, 0.0), Complex(0.0, 0.8)};
  const pathsum::BiHamiltonian bh(pauli_x(), pauli_y(), 0.4);
  const auto plain = pathsum::symmetric_evolve(bh, psi, 8, 0.0);
  const auto rotated = pathsum::symmetric_evolve(bh, psi, 8, 1.2);
  REQUIRE(plain.norms.size() == rotated.norms.size());
  for (size_t i = 0; i < plain.norms.size(); ++i)
    CHECK(rotated.norms[i] == doctest::Approx(plain.norms[i]).epsilon(1e-13));
}

TEST_CASE("zero steps") {
  const pathsum::BiHamiltonian bh(pauli_x(), pauli_y(), 0.4);
  const StateVector psi{Complex(0.6, 0.0), Complex(0.0, 0.8)};
  const auto res = pathsum::symmetric_evolve(bh, psi, 0);
  REQUIRE(res.per_n.size() == 1);
  CHECK(res.norms[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(vec_rel(res.total, psi) == 0.0);
  CHECK_THROWS_AS(pathsum::symmetric_evolve(bh, psi, -1), std::invalid_argument);
}

TEST_CASE("beyond the cap only the total survives") {
  const pathsum::BiHamiltonian bh(pauli_x(), pauli_y(), 0.05);
  const StateVector psi{1.0, 0.0};
  const auto res = pathsum::symmetric_evolve(bh, psi, 70);
  CHECK(res.per_n.empty());
  CHECK(res.norms.empty());
  CHECK(res.total.is_finite());
  CHECK(res.total.norm() > 1.0);  // ||U_F+U_B|| reaches 2 per step
}

TEST_CASE("destructive interference at the centre of the path sum") {
  // 40 steps of sx/sy at tau = 1/2; the central path weight collapses while
  // the two single-direction end paths keep the full amplitude.
  const pathsum::BiHamiltonian bh(pauli_x(), pauli_y(), 0.5);
  const StateVector e0{1.0, 0.0};
  const auto res = pathsum::symmetric_evolve(bh, e0, 40);
  REQUIRE(res.norms.size() == 41);

  const double scale = std::exp(interference::log_binomial(40, 20));
  CHECK(res.norms[20] / scale ==
        doctest::Approx(8.05417698834617335e-02).epsilon(1e-9));
  CHECK(std::abs(res.norms[0] - 1.0) < 1e-12);
  CHECK(std::abs(res.norms[40] - 1.0) < 1e-12);

  // the fixture maps to itself under direction exchange: the norm profile is
  // symmetric in n
  for (int n = 0; n <= 40; ++n)
    CHECK(std::abs(res.norms[n] - res.norms[40 - n]) < 1e-12 * res.norms[n]);
}

TEST_CASE("reordered spectral route reproduces the interference weight") {
  const pathsum::BiHamiltonian bh(pauli_x(), pauli_y(), 0.5);
  const StateVector e0{1.0, 0.0};
  // e0 is an eigenvector of i[sx,sy] = -2 sz with eigenvalue -2, so the
  // spectral route weights it by exactly I_{20,20}(tau^2 * -2).
  const StateVector v = pathsum::s_mn_spectral(bh, 20, 20) * e0;
  const double lnc = interference::log_binomial(40, 20);
  const double got = v.norm() / std::exp(lnc);
  const double want = std::exp(interference::eval_closed_form_log(20, 20, -0.5).log_abs - lnc);
  CHECK(std::abs(got / want - 1.0) < 1e-9);
  CHECK(std::abs(got / 2.16832999572208726e-14 - 1.0) < 1e-9);
}

TEST_CASE("equal Hamiltonians give the binomially weighted phase") {
  // with H_F = H_B = H every ordering contributes e^{i(m-n) tau H}
  const ComplexMatrix h = herm3_a();
  const double tau = 0.23;
  const pathsum::BiHamiltonian bh(h, h, tau);
  const int n_steps = 9;
  for (int n = 0; n <= n_steps; ++n) {
    const int m = n_steps - n;
    const double binom = std::exp(interference::log_binomial(n_steps, n));
    ComplexMatrix want = linops::mat_exp_hermitian(h, kI * ((m - n) * tau));
    want *= Complex(binom, 0.0);
    const double err = mat_dist(pathsum::s_mn_exact(bh, m, n), want) / want.frobenius_norm();
    CHECK(err < 1e-10);
  }
}

TEST_CASE("zero-eigenvalue condition") {
  const StateVector e0_2{1.0, 0.0};
  const pathsum::BiHamiltonian rot(pauli_x(), pauli_y(), 0.5);
  CHECK(pathsum::check_nonzero_condition(rot, e0_2) == 0.0);

  const pathsum::BiHamiltonian flat(pauli_x(), pauli_x(), 0.5);
  CHECK(pathsum::check_nonzero_condition(flat, e0_2) == doctest::Approx(1.0).epsilon(1e-14));

  const pathsum::BiHamiltonian blocks(block_hf(), block_hb(), 0.5);
  const StateVector split{Complex(M_SQRT1_2), 0.0, Complex(M_SQRT1_2), 0.0};
  CHECK(pathsum::check_nonzero_condition(blocks, split) ==
        doctest::Approx(M_SQRT1_2).epsilon(1e-12));

  const StateVector zero(2);
  CHECK_THROWS_AS(pathsum::check_nonzero_condition(rot, zero), std::invalid_argument);
}

TEST_CASE("bievolution pair and derivative") {
  const pathsum::BiHamiltonian bh(herm3_a(), herm3_b(), 0.3);
  const StateVector psi =
      StateVector{Complex(0.2, 0.1), Complex(-0.4, 0.0), Complex(0.0, 0.88)}.normalized();

  auto [fwd, bwd] = pathsum::bievolution_state(bh, psi, 1.7);
  CHECK(fwd.norm() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(bwd.norm() == doctest::Approx(1.0).epsilon(1e-13));

  auto [f0, b0] = pathsum::bievolution_state(bh, psi, 0.0);
  CHECK(vec_rel(f0, psi) == 0.0);
  CHECK(vec_rel(b0, psi) == 0.0);
  CHECK_THROWS_AS(pathsum::bievolution_state(bh, psi, -0.1), std::invalid_argument);

  const StateVector want =
      (-kI) * (bh.hf() * fwd) + kI * (bh.hb() * bwd);
  CHECK(vec_rel(pathsum::bievolution_derivative(bh, psi, 1.7), want) < 1e-14);
}

TEST_CASE("general origin split") {
  const pathsum::BiHamiltonian blocks(block_hf(), block_hb(), 0.3);
  const StateVector psi0{Complex(0.5, 0.1), Complex(0.2, 0.0), Complex(0.6, 0.0),
                         Complex(0.0, -0.3)};
  const int n_steps = 6;
  auto [perp_part, par_part] = pathsum::general_origin_evolve(blocks, psi0, n_steps);

  // rebuild both branches from the projector split by hand
  const ComplexMatrix herm_comm = kI * linops::commutator(blocks.hf(), blocks.hb());
  const ComplexMatrix kernel =
      linops::kernel_projector(linops::hermitian_eigendecomposition(herm_comm));
  const StateVector par = kernel * psi0;
  const StateVector perp = psi0 - par;

  const double t_tot = n_steps * 0.3;
  const StateVector want_perp = blocks.uf(t_tot) * perp + blocks.ub(t_tot) * perp;
  CHECK(vec_rel(perp_part, want_perp) < 1e-12);

  StateVector want_par(4);
  for (int n = 0; n <= n_steps; ++n) {
    const double binom = std::exp(interference::log_binomial(n_steps, n));
    want_par = want_par + Complex(binom, 0.0) *
                              (blocks.ub((n_steps - n) * 0.3) * (blocks.uf(n * 0.3) * par));
  }
  CHECK(vec_rel(par_part, want_par) < 1e-12);

  // the blocks never mix: the two output branches stay orthogonal
  CHECK(std::abs(inner(perp_part, par_part)) < 1e-12 * perp_part.norm() * par_part.norm());

  // full-rank commutator: nothing survives in the parallel branch
  const pathsum::BiHamiltonian rot(pauli_x(), pauli_y(), 0.5);
  auto [two_path, none] = pathsum::general_origin_evolve(rot, StateVector{1.0, 0.0}, 4);
  CHECK(none.norm() < 1e-14);
  CHECK(two_path.norm() > 0.0);

  CHECK_THROWS_AS(pathsum::general_origin_evolve(rot, StateVector{1.0, 0.0}, 65),
                  std::domain_error);
}

TEST_CASE("attractor convergence onto the constraint surface") {
  ComplexMatrix h(2);
  h(1, 1) = M_PI / 3.0;  // diag(0, pi/3), tau = 1
  const StateVector plus{Complex(M_SQRT1_2), Complex(M_SQRT1_2)};

  const auto four = pathsum::attractor_evolve(h, plus, 1.0, 4);
  // the energetic component has shrunk by cos^4(pi/3) = 1/16
  CHECK(std::abs(four.state[1]) / std::abs(four.state[0]) ==
        doctest::Approx(0.0625).epsilon(1e-12));

  const auto deep = pathsum::attractor_evolve(h, plus, 1.0, 200);
  CHECK((h * deep.state).norm() < 1e-10);
  CHECK(deep.converged_to_zero_energy);
  CHECK(deep.spectral_condition_ok);
  CHECK(deep.dominant_energy == doctest::Approx(0.0));
  CHECK(deep.dominant_abs_cos == doctest::Approx(1.0));
  CHECK(deep.zero_energy_overlap == doctest::Approx(M_SQRT1_2).epsilon(1e-13));
  CHECK(deep.state.norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("attractor without a zero-energy component drifts and says so") {
  ComplexMatrix h(2);
  h(0, 0) = 0.4;
  h(1, 1) = 1.1;
  const StateVector mix{Complex(0.8), Complex(0.6)};
  const auto res = pathsum::attractor_evolve(h, mix, 1.0, 120);
  CHECK(!res.converged_to_zero_energy);
  CHECK(res.dominant_energy == doctest::Approx(0.4));  // larger |cos|
  CHECK(res.zero_energy_overlap == doctest::Approx(0.0));
  CHECK(std::abs(res.state[0]) == doctest::Approx(1.0).epsilon(1e-12));

  // an occupied eigenspace at |E| tau >= pi/2 breaks the band condition
  ComplexMatrix wide(2);
  wide(1, 1) = 1.7;
  const auto flagged = pathsum::attractor_evolve(wide, mix, 1.0, 10);
  CHECK(!flagged.spectral_condition_ok);

  CHECK_THROWS_AS(pathsum::attractor_evolve(h, StateVector(2), 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(pathsum::attractor_evolve(h, mix, -1.0, 5), std::invalid_argument);
}

TEST_CASE("half-difference limit") {
  const pathsum::BiHamiltonian bh(pauli_x(), pauli_y(), 1.0);
  const StateVector psi{Complex(0.6, 0.2), Complex(-0.5, 0.59160797830996161)};

  // single step: (uf + ub)/2 written out
  const pathsum::BiHamiltonian unit(pauli_x(), pauli_y(), 1.0);
  const StateVector one = pathsum::half_difference_limit(unit, 1.0, 1, psi);
  const StateVector want = Complex(0.5, 0.0) * (unit.uf(1.0) * psi + unit.ub(1.0) * psi);
  CHECK(vec_rel(one, want) < 1e-14);

  // error against exp(-i (H_F - H_B) t / 2) decays like 1/N
  const ComplexMatrix target =
      linops::mat_exp_hermitian(pauli_x() - pauli_y(), -kI * 0.5);
  const StateVector ref = target * psi;
  const double e64 = (pathsum::half_difference_limit(bh, 1.0, 64, psi) - ref).norm();
  const double e128 = (pathsum::half_difference_limit(bh, 1.0, 128, psi) - ref).norm();
  CHECK(e64 / e128 == doctest::Approx(2.0).epsilon(0.15));
  CHECK(e128 < e64);

  CHECK_THROWS_AS(pathsum::half_difference_limit(bh, 1.0, 0, psi), std::invalid_argument);
  CHECK_THROWS_AS(pathsum::half_difference_limit(bh, -1.0, 4, psi), std::invalid_argument);
}

}  // TEST_SUITE
