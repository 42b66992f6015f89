#include <doctest.h>

#include <cmath>
#include <complex>

#include "bievolve/kaon.hpp"
#include "bievolve/linops.hpp"

using namespace bievolve;
using kaon::Complex;
using kaon::KaonParams;
using linops::ComplexMatrix;

namespace {
const Complex kI(0.0, 1.0);
}

TEST_SUITE("kaon") {

TEST_CASE("parameter validation") {
  KaonParams p;
  CHECK_NOTHROW(kaon::validate(p));
  CHECK(kaon::expansion_valid(p));
  p.eps_abs = 0.2;
  CHECK(!kaon::expansion_valid(p));
  p.eps_abs = -0.1;
  CHECK_THROWS_AS(kaon::validate(p), std::invalid_argument);
  p = KaonParams{};
  p.delta_m = std::nan("");
  CHECK_THROWS_AS(kaon::validate(p), std::invalid_argument);
}

TEST_CASE("mass matrix structure") {
  KaonParams p;
  const ComplexMatrix m = kaon::lee_wolfenstein_m(p);
  CHECK(m.hermiticity_defect() == 0.0);
  // equal diagonal (only the mass difference enters off-diagonally)
  CHECK(m(0, 0) == m(1, 1));
  CHECK(m(0, 0) == Complex(0.5 * p.m_sum));
  // Re M12 = (m1 - m2)/2, Im M12 = -sqrt(2)|eps| (dGamma/4 + dm/2)
  const double r2e = std::sqrt(2.0) * p.eps_abs;
  CHECK(m(0, 1).real() == doctest::Approx(-0.5 * p.delta_m).epsilon(1e-15));
  CHECK(m(0, 1).imag() ==
        doctest::Approx(-r2e * (0.25 * p.delta_gamma + 0.5 * p.delta_m)).epsilon(1e-14));

  const ComplexMatrix g = kaon::lee_wolfenstein_gamma(p);
  CHECK(g.hermiticity_defect() == 0.0);
  CHECK(g(0, 0) == Complex(0.25 * p.gamma_sum));
}

TEST_CASE("CP conjugation of the Hamiltonian") {
  const ComplexMatrix hf(2, {Complex(1, 0), Complex(2, 3), Complex(2, -3), Complex(-4, 0)});
  const ComplexMatrix hb = kaon::hb_from_hf(hf);
  CHECK(hb(0, 0) == hf(1, 1));
  CHECK(hb(1, 1) == hf(0, 0));
  CHECK(hb(0, 1) == hf(1, 0));
  CHECK(hb(1, 0) == hf(0, 1));
  // involution, and the CP phase cancels
  CHECK((kaon::hb_from_hf(hb) - hf).frobenius_norm() == 0.0);
  CHECK((kaon::hb_from_hf(hf, 1.1) - hb).frobenius_norm() == 0.0);

  // conjugating by the explicit CP operator agrees
  const ComplexMatrix cp = kaon::cp_operator(0.3);
  CHECK((cp * cp.adjoint() - ComplexMatrix::identity(2)).frobenius_norm() < 1e-15);
  const ComplexMatrix conj = cp.adjoint() * hf * cp;
  CHECK((conj - hb).frobenius_norm() < 1e-14);

  ComplexMatrix three(3);
  CHECK_THROWS_AS(kaon::hb_from_hf(three), std::invalid_argument);
}

TEST_CASE("closed-form commutator against direct multiplication") {
  // generic (not even Hermitian) 2x2: the [[A,B],[-B,-A]] shape is algebraic
  const ComplexMatrix hf(2, {Complex(1, 2), Complex(3, -1), Complex(0, 0.5), Complex(-2, 0)});
  const ComplexMatrix direct = linops::commutator(hf, kaon::hb_from_hf(hf));
  const kaon::KaonCommutatorResult res = kaon::commutator_2x2(hf);

  CHECK(std::abs(direct(0, 0) - res.a_value) < 1e-13 * std::abs(res.a_value));
  CHECK(std::abs(direct(0, 1) - res.b_value) < 1e-13 * std::abs(res.b_value));
  CHECK(std::abs(direct(1, 0) + res.b_value) < 1e-13 * std::abs(res.b_value));
  CHECK(std::abs(direct(1, 1) + res.a_value) < 1e-13 * std::abs(res.a_value));

  // eigenvalues solve lambda^2 = A^2 - B^2 (traceless, det = B^2 - A^2)
  const Complex want = res.a_value * res.a_value - res.b_value * res.b_value;
  for (const Complex ev : res.eigenvalues)
    CHECK(std::abs(ev * ev - want) < 1e-12 * std::abs(want));
  CHECK(res.eigenvalues[0] == -res.eigenvalues[1]);
}

TEST_CASE("empirical commutator eigenvalue") {
  KaonParams p;
  const kaon::KaonCommutatorResult res = kaon::commutator_2x2(kaon::lee_wolfenstein_m(p));

  // equal diagonal makes B vanish; A is purely imaginary
  CHECK(std::abs(res.b_value) == 0.0);
  CHECK(std::abs(res.a_value.real()) < 1e-3 * std::abs(res.a_value.imag()));

  // the estimate lands at ~2e17 s^-2
  CHECK(res.lambda1 > 1.5e17);
  CHECK(res.lambda1 < 2.5e17);
  CHECK(std::abs(res.lambda1 / 2.02187284585356640e17 - 1.0) < 1e-12);

  // first-order closed form agrees to O(|eps|)
  const double closed = std::abs(kaon::eigenvalue_closed_form(p));
  CHECK(std::abs(closed / 2.02187284585356672e17 - 1.0) < 1e-12);
  CHECK(std::abs(res.lambda1 / closed - 1.0) < 10.0 * p.eps_abs);

  // lambda1 scales linearly in |eps| at first order
  KaonParams doubled = p;
  doubled.eps_abs = 2.0 * p.eps_abs;
  const double twice = kaon::commutator_2x2(kaon::lee_wolfenstein_m(doubled)).lambda1;
  CHECK(std::abs(twice / (2.0 * res.lambda1) - 1.0) < 1e-10);
}

TEST_CASE("epsilon phase factor") {
  const double eps_abs = 2.3e-3, eps_arg = 0.7853981633974483;
  const Complex exact = kaon::epsilon_phase(eps_abs, eps_arg);
  const Complex first = kaon::epsilon_phase_first_order(eps_abs, eps_arg);
  CHECK(std::abs(exact - first) < 2.5 * eps_abs * eps_abs);
  // at 45 degrees: 1 - sqrt(2)|eps|(1 + i) to first order
  const double r2e = std::sqrt(2.0) * eps_abs;
  CHECK(first.real() == doctest::Approx(1.0 - r2e).epsilon(1e-14));
  CHECK(first.imag() == doctest::Approx(-r2e).epsilon(1e-14));
  CHECK_THROWS_AS(kaon::epsilon_phase(1.0, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
